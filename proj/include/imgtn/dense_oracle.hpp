#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "imgtn/family.hpp"
#include "imgtn/unfolding.hpp"

namespace imgtn {

/// Full 2^|A| x 2^|complement| matrix of f, built by querying membership for every
/// assignment (never by walking the member list). Row index is the binary number of
/// x_A with the lowest flat index as most significant bit. Pinned pixels of the
/// bipartition take the constraint's values. Requires |A| <= 12 and |complement| <= 12.
Eigen::MatrixXd dense_unfolding_oracle(const ImageFamily& family, const Bipartition& bipartition,
                                       const std::optional<FixedRowConstraint>& constraint = std::nullopt);

/// Rank of the oracle matrix via full-pivoting LU. Zero rows and columns are stripped
/// while the matrix is assembled, so only |A| + |complement| <= 24 is required.
std::size_t dense_oracle_rank(const ImageFamily& family, const Bipartition& bipartition,
                              const std::optional<FixedRowConstraint>& constraint = std::nullopt);

} // namespace imgtn
