#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "imgtn/family.hpp"
#include "imgtn/image.hpp"

namespace imgtn {

/// Row i of every image pinned to the configuration y.
struct FixedRowConstraint {
    int row = 1;
    Config y;
};

/// Split of the grid into row side A (`left`), column side (`right`) and pinned pixels.
/// All lists hold ascending 1-based flat indices.
struct Bipartition {
    int n = 0;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<int> fixed;

    /// A against its complement.
    static Bipartition from_region(const Region& region);
    /// Rows 1..i-1 against rows i+1..n, with row i pinned.
    static Bipartition around_row(int n, int i);

    Bipartition transposed() const { return {n, right, left, fixed}; }

    /// Throws structural_error unless left, right and fixed partition {1..n^2}.
    void validate() const;
};

/// Sparse biadjacency of the indicator restricted to the distinct configurations that
/// occur among (constraint-consistent) members. Configurations on each side are sorted
/// ascending, i.e. in the order of the binary-number index of the full matrix.
struct Unfolding {
    std::vector<Config> left_configs;
    std::vector<Config> right_configs;
    /// (row, column) positions of the 1-entries, sorted.
    std::vector<std::pair<int, int>> entries;

    Eigen::Index rows() const { return static_cast<Eigen::Index>(left_configs.size()); }
    Eigen::Index cols() const { return static_cast<Eigen::Index>(right_configs.size()); }
    std::size_t nonzeros() const { return entries.size(); }

    Eigen::MatrixXd dense() const;
    Unfolding transposed() const;
};

Unfolding unfold(const ImageFamily& family, const Bipartition& bipartition,
                 const std::optional<FixedRowConstraint>& constraint = std::nullopt);

/// Shorthands for the unfoldings that recur throughout.
Unfolding unfold_region(const ImageFamily& family, const Region& region);
Unfolding unfold_fixed_row(const ImageFamily& family, int i, const Config& y);

} // namespace imgtn
