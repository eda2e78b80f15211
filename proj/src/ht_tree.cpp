#include "imgtn/ht_tree.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "imgtn/error.hpp"

namespace imgtn {

bool is_power_of_two(int n) { return n > 0 && std::has_single_bit(static_cast<unsigned>(n)); }

int next_power_of_two(int n) {
    if (n <= 1) return 1;
    return static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)));
}

TreeStructure::TreeStructure(int n) : n_(n) {
    if (n < 2 || !is_power_of_two(n))
        throw precondition_error("tree needs n to be a power of two >= 2 (got " + std::to_string(n) +
                                 "); pad the image first");
    layers_ = 2 * std::countr_zero(static_cast<unsigned>(n)) + 1;
}

int TreeStructure::rows_in_layer(int i) const { return n_ >> (i / 2); }
int TreeStructure::cols_in_layer(int i) const { return n_ >> ((i - 1) / 2); }

std::size_t TreeStructure::layer_size(int i) const {
    return static_cast<std::size_t>(rows_in_layer(i)) * static_cast<std::size_t>(cols_in_layer(i));
}

std::vector<TreeIndex> TreeStructure::layer(int i) const {
    if (i < 1 || i > layers_) throw precondition_error("layer out of range");
    std::vector<TreeIndex> out;
    out.reserve(layer_size(i));
    for (int j = 1; j <= rows_in_layer(i); ++j)
        for (int k = 1; k <= cols_in_layer(i); ++k) out.push_back({i, j, k});
    return out;
}

std::size_t TreeStructure::position(const TreeIndex& t) const {
    return static_cast<std::size_t>(t.j - 1) * static_cast<std::size_t>(cols_in_layer(t.layer)) +
           static_cast<std::size_t>(t.k - 1);
}

void TreeStructure::check(const TreeIndex& t) const {
    if (t.layer < 1 || t.layer > layers_ || t.j < 1 || t.j > rows_in_layer(t.layer) || t.k < 1 ||
        t.k > cols_in_layer(t.layer))
        throw precondition_error("node (" + std::to_string(t.layer) + "," + std::to_string(t.j) + "," +
                                 std::to_string(t.k) + ") is not in the tree");
}

std::array<TreeIndex, 2> TreeStructure::children(const TreeIndex& t) const {
    check(t);
    if (t.layer == 1) throw precondition_error("leaves have no children");
    if (t.layer % 2 == 0) return {TreeIndex{t.layer - 1, 2 * t.j - 1, t.k}, TreeIndex{t.layer - 1, 2 * t.j, t.k}};
    return {TreeIndex{t.layer - 1, t.j, 2 * t.k - 1}, TreeIndex{t.layer - 1, t.j, 2 * t.k}};
}

std::optional<TreeIndex> TreeStructure::parent(const TreeIndex& t) const {
    check(t);
    if (t.layer == layers_) return std::nullopt;
    const int up = t.layer + 1;
    if (up % 2 == 0) return TreeIndex{up, (t.j + 1) / 2, t.k};
    return TreeIndex{up, t.j, (t.k + 1) / 2};
}

bool TreeStructure::is_first_child(const TreeIndex& t) const {
    check(t);
    if (t.layer == layers_) return true;
    return (t.layer + 1) % 2 == 0 ? t.j % 2 == 1 : t.k % 2 == 1;
}

std::optional<TreeIndex> TreeStructure::sibling(const TreeIndex& t) const {
    const auto p = parent(t);
    if (!p) return std::nullopt;
    const auto kids = children(*p);
    return kids[0] == t ? kids[1] : kids[0];
}

Support TreeStructure::support(const TreeIndex& t) const {
    check(t);
    const int h = 1 << (t.layer / 2), w = 1 << ((t.layer - 1) / 2);
    return {(t.j - 1) * h + 1, (t.k - 1) * w + 1, h, w};
}

std::vector<int> TreeStructure::support_pixels(const TreeIndex& t) const {
    const auto s = support(t);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(s.size()));
    for (int r = s.top; r < s.top + s.height; ++r)
        for (int c = s.left; c < s.left + s.width; ++c) out.push_back(flat_index(n_, r, c));
    return out;
}

void TreeStructure::verify() const {
    auto fail = [](const TreeIndex& t, const std::string& what) {
        throw structural_error("node (" + std::to_string(t.layer) + "," + std::to_string(t.j) + "," +
                               std::to_string(t.k) + "): " + what);
    };
    // Supports re-derived bottom-up from descendants only.
    std::vector<std::vector<std::vector<int>>> derived(static_cast<std::size_t>(layers_) + 1);
    for (int i = 1; i <= layers_; ++i) {
        const auto nodes = layer(i);
        if (nodes.size() * (std::size_t{1} << (i - 1)) != static_cast<std::size_t>(n_) * n_)
            throw structural_error("layer " + std::to_string(i) + " has the wrong node count");
        auto& current = derived[static_cast<std::size_t>(i)];
        current.resize(nodes.size());
        std::vector<int> owner(static_cast<std::size_t>(n_) * n_ + 1, 0);
        for (const auto& t : nodes) {
            auto& pixels = current[position(t)];
            if (i == 1) {
                pixels = {flat_index(n_, t.j, t.k)};
            } else {
                for (const auto& c : children(t)) {
                    if (parent(c) != t) fail(c, "parent/child maps disagree");
                    const auto& sub = derived[static_cast<std::size_t>(i - 1)][position(c)];
                    pixels.insert(pixels.end(), sub.begin(), sub.end());
                }
                std::sort(pixels.begin(), pixels.end());
            }
            if (pixels != support_pixels(t)) fail(t, "support is not the union of its descendants");
            for (int p : pixels)
                if (owner[static_cast<std::size_t>(p)]++) fail(t, "overlaps another support in its layer");
            const auto s = support(t);
            if (i % 2 == 1 && s.height != s.width) fail(t, "odd-layer support is not square");
            if (i % 2 == 0 && s.height != 2 * s.width) fail(t, "even-layer support is not 2:1");
        }
        for (std::size_t p = 1; p < owner.size(); ++p)
            if (owner[p] != 1)
                throw structural_error("layer " + std::to_string(i) + " does not tile the grid");
    }
    if (derived[static_cast<std::size_t>(layers_)].size() != 1) throw structural_error("root is not unique");
}

} // namespace imgtn
