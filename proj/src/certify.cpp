#include "imgtn/certify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "imgtn/error.hpp"
#include "imgtn/exact_rank.hpp"
#include "imgtn/parallel.hpp"

namespace imgtn {

std::vector<Config> row_configurations(const ImageFamily& family, int i) {
    std::set<Config> seen;
    for (const auto& x : family.members()) seen.insert(x.row(i));
    return {seen.begin(), seen.end()};
}

std::size_t fixed_row_rank(const ImageFamily& family, int i, const Config& y) {
    return exact_rank(unfold_fixed_row(family, i, y));
}

std::size_t row_prefix_rank(const ImageFamily& family, int i) {
    return region_rank(family, Region::row_prefix(family.side(), i));
}

std::size_t region_rank(const ImageFamily& family, const Region& region) {
    return exact_rank(unfold_region(family, region));
}

AssumptionReport certify_assumption1(const ImageFamily& family) {
    AssumptionReport report;
    for (int i = 1; i <= family.side(); ++i) {
        const auto count = row_configurations(family, i).size();
        report.config_counts.push_back(count);
        report.max_config_count = std::max(report.max_config_count, count);
    }
    return report;
}

AssumptionReport certify_assumption2(const ImageFamily& family, int jobs) {
    AssumptionReport report;
    for (int i = 1; i <= family.side(); ++i)
        for (auto& y : row_configurations(family, i)) report.ranks.push_back({i, std::move(y), 0});
    const auto ranks = parallel_map(report.ranks.size(), jobs, [&](std::size_t t) {
        return fixed_row_rank(family, report.ranks[t].row, report.ranks[t].y);
    });
    for (std::size_t t = 0; t < ranks.size(); ++t) {
        report.ranks[t].rank = ranks[t];
        report.max_rank = std::max(report.max_rank, ranks[t]);
    }
    return report;
}

AssumptionReport certify_assumptions(const ImageFamily& family, int jobs) {
    auto report = certify_assumption2(family, jobs);
    auto counts = certify_assumption1(family);
    report.config_counts = std::move(counts.config_counts);
    report.max_config_count = counts.max_config_count;
    return report;
}

std::vector<Lemma1Row> verify_lemma1(const ImageFamily& family, int jobs) {
    const int n = family.side();
    const auto fixed = certify_assumption2(family, jobs);
    std::vector<Lemma1Row> rows;
    for (int i = 1; i <= n - 1; ++i) rows.push_back({i, 0, 0, true});
    const auto ranks = parallel_map(rows.size(), jobs,
                                    [&](std::size_t t) { return row_prefix_rank(family, rows[t].row); });
    for (std::size_t t = 0; t < rows.size(); ++t) {
        rows[t].rank = ranks[t];
        for (const auto& entry : fixed.ranks)
            if (entry.row == rows[t].row) rows[t].bound += entry.rank;
        rows[t].holds = rows[t].rank <= rows[t].bound;
    }
    return rows;
}

RegionProfile region_rank_profile(const ImageFamily& family, std::span<const Region> regions,
                                  int jobs) {
    for (const auto& r : regions)
        if (r.side() != family.side()) throw precondition_error("region side does not match family");
    RegionProfile profile;
    const auto ranks =
        parallel_map(regions.size(), jobs, [&](std::size_t t) { return region_rank(family, regions[t]); });
    std::vector<double> boundary, size, log_rank;
    for (std::size_t t = 0; t < regions.size(); ++t) {
        profile.entries.push_back(
            {regions[t].to_string(), regions[t].size(), regions[t].boundary_length(), ranks[t]});
        if (ranks[t] > 0) {
            boundary.push_back(regions[t].boundary_length());
            size.push_back(regions[t].size());
            log_rank.push_back(std::log2(static_cast<double>(ranks[t])));
        }
    }
    auto try_fit = [&](const std::vector<double>& x) -> std::optional<LinearFit> {
        if (std::set<double>(x.begin(), x.end()).size() < 2) return std::nullopt;
        return fit_line(x, log_rank);
    };
    profile.log_rank_vs_boundary = try_fit(boundary);
    profile.log_rank_vs_size = try_fit(size);
    return profile;
}

BaselineResult random_baseline_profile(int n, std::uint64_t m, std::uint64_t seed, const Region& cut) {
    if (m < 1) throw precondition_error("baseline needs m >= 1");
    if (cut.side() != n) throw precondition_error("cut side does not match n");
    const auto family = gen_random_family(n, m, seed);
    auto pow2_capped = [m](int bits) { return bits >= 63 ? m : std::min<std::uint64_t>(m, std::uint64_t{1} << bits); };
    const auto cap = std::min(pow2_capped(cut.size()), pow2_capped(n * n - cut.size()));
    return {region_rank(family, cut), static_cast<std::size_t>(cap)};
}

FeatureDecomposition feature_decomposition(const ImageFamily& family, const Region& region, double tol) {
    FeatureDecomposition out;
    out.unfolding = unfold_region(family, region);
    out.factors = factorize<double>(out.unfolding, tol);
    constexpr double zero = 1e-9;
    for (std::size_t t = 0; t < out.factors.rank; ++t) {
        const auto col = static_cast<Eigen::Index>(t);
        const auto left = out.factors.left.col(col);
        const auto right = out.factors.right.col(col);
        out.left_support.push_back(static_cast<std::size_t>((left.array().abs() > zero).count()));
        out.right_support.push_back(static_cast<std::size_t>((right.array().abs() > zero).count()));
        const double scale = left.cwiseAbs().maxCoeff();
        bool binary = true;
        for (Eigen::Index r = 0; r < left.size(); ++r) {
            const double v = left(r) / scale;
            binary = binary && (std::abs(v) <= zero || std::abs(v - 1.0) <= 1e-6);
        }
        out.left_is_01.push_back(binary);
    }
    return out;
}

Quantity parse_quantity(const std::string& name) {
    for (auto q : {Quantity::member_count, Quantity::max_row_configs, Quantity::max_fixed_row_rank,
                   Quantity::max_row_prefix_rank, Quantity::middle_cut_rank, Quantity::max_prefix_rank})
        if (quantity_name(q) == name) return q;
    throw precondition_error("unknown quantity '" + name + "'");
}

std::string quantity_name(Quantity q) {
    switch (q) {
    case Quantity::member_count:
        return "members";
    case Quantity::max_row_configs:
        return "row_configs";
    case Quantity::max_fixed_row_rank:
        return "fixed_row_rank";
    case Quantity::max_row_prefix_rank:
        return "row_prefix_rank";
    case Quantity::middle_cut_rank:
        return "middle_cut_rank";
    case Quantity::max_prefix_rank:
        return "prefix_rank";
    }
    return {};
}

double measure(const ImageFamily& family, Quantity q, int jobs) {
    const int n = family.side();
    switch (q) {
    case Quantity::member_count:
        return static_cast<double>(family.size());
    case Quantity::max_row_configs:
        return static_cast<double>(certify_assumption1(family).max_config_count);
    case Quantity::max_fixed_row_rank:
        return static_cast<double>(certify_assumption2(family, jobs).max_rank);
    case Quantity::max_row_prefix_rank: {
        if (n < 2) return 0.0;
        const auto ranks = parallel_map(static_cast<std::size_t>(n - 1), jobs, [&](std::size_t t) {
            return row_prefix_rank(family, static_cast<int>(t) + 1);
        });
        return static_cast<double>(*std::max_element(ranks.begin(), ranks.end()));
    }
    case Quantity::middle_cut_rank:
        if (n < 2) return 0.0;
        return static_cast<double>(row_prefix_rank(family, n / 2));
    case Quantity::max_prefix_rank: {
        if (n * n < 2) return 0.0;
        const auto ranks = parallel_map(static_cast<std::size_t>(n * n - 1), jobs, [&](std::size_t t) {
            return region_rank(family, Region::pixel_prefix(n, static_cast<int>(t) + 1));
        });
        return static_cast<double>(*std::max_element(ranks.begin(), ranks.end()));
    }
    }
    return 0.0;
}

ScalingReport scaling_experiment(const GeneratorSpec& spec, std::span<const int> ns, Quantity q, int jobs) {
    if (ns.size() < 2) throw precondition_error("a scaling experiment needs at least 2 values of n");
    if (!std::is_sorted(ns.begin(), ns.end()))
        throw precondition_error("n list must be ascending");
    std::vector<ScalingPoint> series;
    for (int n : ns) series.push_back({static_cast<double>(n), measure(generate(spec, n), q, jobs)});
    return make_scaling_report(quantity_name(q), std::move(series));
}

} // namespace imgtn
