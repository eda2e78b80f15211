#pragma once

#include <array>
#include <compare>
#include <optional>
#include <vector>

#include "imgtn/image.hpp"

namespace imgtn {

/// Node (i, j, k) of the complete binary tree: layer i counted from the leaves (1) to
/// the root (2 log2 n + 1), spatial indices j (rows) and k (columns), all 1-based.
struct TreeIndex {
    int layer = 1;
    int j = 1;
    int k = 1;

    friend auto operator<=>(const TreeIndex&, const TreeIndex&) = default;
};

/// Pixel rectangle covered by a node's leaf descendants.
struct Support {
    int top = 1;
    int left = 1;
    int height = 1;
    int width = 1;

    Region region(int n) const { return Region::rectangle(n, top, left, height, width); }
    int size() const { return height * width; }
    int perimeter() const { return 2 * (height + width); }

    friend bool operator==(const Support&, const Support&) = default;
};

bool is_power_of_two(int n);
int next_power_of_two(int n);

/// Layout of the ConvAC tree on an n x n image, n a power of two. Children of (i,j,k) are
/// (i-1, 2j-1, k), (i-1, 2j, k) for even i and (i-1, j, 2k-1), (i-1, j, 2k) for odd i >= 3;
/// the first listed child feeds the pooling as u, the second as v.
class TreeStructure {
public:
    explicit TreeStructure(int n);

    int side() const noexcept { return n_; }
    int layers() const noexcept { return layers_; }
    TreeIndex root() const { return {layers_, 1, 1}; }

    int rows_in_layer(int i) const;
    int cols_in_layer(int i) const;
    std::size_t layer_size(int i) const;
    /// Nodes of layer i in (j, k) lexicographic order.
    std::vector<TreeIndex> layer(int i) const;
    /// Position of a node within layer(i).
    std::size_t position(const TreeIndex& t) const;

    std::array<TreeIndex, 2> children(const TreeIndex& t) const;
    std::optional<TreeIndex> parent(const TreeIndex& t) const;
    std::optional<TreeIndex> sibling(const TreeIndex& t) const;
    /// True when t is the u-input of its parent. The root counts as a first child.
    bool is_first_child(const TreeIndex& t) const;

    /// Closed-form support rectangle.
    Support support(const TreeIndex& t) const;
    /// Flat pixel indices of the support, ascending.
    std::vector<int> support_pixels(const TreeIndex& t) const;

    /// Re-derives every support as the union of its children's supports and checks:
    /// same-layer supports are disjoint and tile the grid, parent = union of children,
    /// odd layers are squares, even layers are 2:1 rectangles, layer i has n^2/2^(i-1)
    /// nodes. Throws structural_error on the first violation.
    void verify() const;

private:
    void check(const TreeIndex& t) const;

    int n_;
    int layers_;
};

} // namespace imgtn
