#include "imgtn/unfolding.hpp"

#include <algorithm>
#include <map>

#include "imgtn/error.hpp"

namespace imgtn {

Bipartition Bipartition::from_region(const Region& region) {
    return {region.side(), region.pixels(), region.complement(), {}};
}

Bipartition Bipartition::around_row(int n, int i) {
    if (i < 1 || i > n) throw precondition_error("row index out of range");
    Bipartition b{n, {}, {}, {}};
    for (int k = 1; k <= n * n; ++k) {
        const int r = row_col(n, k).first;
        (r < i ? b.left : r > i ? b.right : b.fixed).push_back(k);
    }
    return b;
}

void Bipartition::validate() const {
    std::vector<int> seen(static_cast<std::size_t>(n) * n + 1, 0);
    for (const auto* list : {&left, &right, &fixed}) {
        if (!std::is_sorted(list->begin(), list->end()))
            throw structural_error("pixel lists must be ascending");
        for (int k : *list) {
            if (k < 1 || k > n * n)
                throw structural_error("pixel " + std::to_string(k) + " outside the grid");
            if (seen[static_cast<std::size_t>(k)]++)
                throw structural_error("pixel " + std::to_string(k) + " appears on two sides");
        }
    }
    for (int k = 1; k <= n * n; ++k)
        if (!seen[static_cast<std::size_t>(k)])
            throw structural_error("pixel " + std::to_string(k) + " is not assigned to any side");
}

Eigen::MatrixXd Unfolding::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows(), cols());
    for (auto [p, q] : entries) m(p, q) = 1.0;
    return m;
}

Unfolding Unfolding::transposed() const {
    Unfolding t{right_configs, left_configs, {}};
    t.entries.reserve(entries.size());
    for (auto [p, q] : entries) t.entries.emplace_back(q, p);
    std::sort(t.entries.begin(), t.entries.end());
    return t;
}

Unfolding unfold(const ImageFamily& family, const Bipartition& bipartition,
                 const std::optional<FixedRowConstraint>& constraint) {
    if (bipartition.n != family.side())
        throw precondition_error("bipartition side does not match the family");
    bipartition.validate();

    std::vector<int> pinned;
    Config pinned_values;
    if (constraint) {
        const int n = bipartition.n;
        if (constraint->row < 1 || constraint->row > n)
            throw precondition_error("constraint row out of range");
        if (constraint->y.size() != static_cast<std::size_t>(n))
            throw precondition_error("constraint row configuration must have n bits");
        for (int c = 1; c <= n; ++c) pinned.push_back(flat_index(n, constraint->row, c));
        pinned_values = constraint->y;
    }
    if (pinned != bipartition.fixed)
        throw structural_error("pinned pixels must be exactly the constraint row");

    std::vector<std::pair<Config, Config>> halves;
    for (const auto& x : family.members()) {
        if (!pinned.empty() && x.gather(pinned) != pinned_values) continue;
        halves.emplace_back(x.gather(bipartition.left), x.gather(bipartition.right));
    }

    Unfolding u;
    std::map<Config, int> left_index, right_index;
    for (const auto& [a, b] : halves) {
        left_index.emplace(a, 0);
        right_index.emplace(b, 0);
    }
    for (auto& [cfg, id] : left_index) {
        id = static_cast<int>(u.left_configs.size());
        u.left_configs.push_back(cfg);
    }
    for (auto& [cfg, id] : right_index) {
        id = static_cast<int>(u.right_configs.size());
        u.right_configs.push_back(cfg);
    }
    u.entries.reserve(halves.size());
    for (const auto& [a, b] : halves) u.entries.emplace_back(left_index[a], right_index[b]);
    std::sort(u.entries.begin(), u.entries.end());
    return u;
}

Unfolding unfold_region(const ImageFamily& family, const Region& region) {
    return unfold(family, Bipartition::from_region(region));
}

Unfolding unfold_fixed_row(const ImageFamily& family, int i, const Config& y) {
    return unfold(family, Bipartition::around_row(family.side(), i), FixedRowConstraint{i, y});
}

} // namespace imgtn
