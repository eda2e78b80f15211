#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "imgtn/unfolding.hpp"

namespace imgtn {

using IntegerMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Rank over the rationals by fraction-free sparse elimination. Runs on 64-bit
/// integers and restarts on arbitrary-precision integers if an intermediate overflows,
/// so the result never depends on a tolerance.
std::size_t exact_rank(const IntegerMatrix& matrix);

/// Rank of the 0/1 biadjacency. Duplicate rows and columns are collapsed first.
std::size_t exact_rank(const Unfolding& unfolding);

} // namespace imgtn
