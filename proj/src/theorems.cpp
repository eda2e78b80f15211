#include "imgtn/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "imgtn/parallel.hpp"

namespace imgtn {

std::size_t block_partition_bound(const ImageFamily& family, int k, int jobs) {
    const int n = family.side();
    if (k < 1 || k > n * n - 1) throw precondition_error("block bound needs 1 <= k <= n^2-1");
    const int i = row_col(n, k).first;
    const auto ys = row_configurations(family, i);
    const auto ranks = parallel_map(ys.size(), jobs, [&](std::size_t t) { return fixed_row_rank(family, i, ys[t]); });
    std::size_t total = 0;
    for (auto r : ranks) total += r;
    return total;
}

Theorem2Report verify_theorem2(const GeneratorSpec& spec, std::span<const int> ns, int jobs) {
    Theorem2Report report;
    std::vector<ScalingPoint> series;
    for (int n : ns) {
        const auto family = generate(spec, n);
        const auto tt = tt_from_family<double>(family);
        const auto dims = tt.bond_dims();
        const int d = n * n;
        const auto exact = parallel_map(static_cast<std::size_t>(d - 1), jobs, [&](std::size_t t) {
            return region_rank(family, Region::pixel_prefix(n, static_cast<int>(t) + 1));
        });
        // The bound depends only on the row of k.
        std::vector<std::size_t> row_bound(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 1; i <= n; ++i) row_bound[static_cast<std::size_t>(i)] = block_partition_bound(family, (i - 1) * n + 1, jobs);
        for (int k = 1; k < d; ++k)
            report.bonds.push_back({n, k, dims[static_cast<std::size_t>(k)], exact[static_cast<std::size_t>(k - 1)],
                                    row_bound[static_cast<std::size_t>(row_col(n, k).first)]});
        series.push_back({static_cast<double>(n), static_cast<double>(tt.max_bond())});
    }
    report.max_bond = make_scaling_report("max_tt_bond", std::move(series));
    return report;
}

namespace {

ImageFamily padded_to_power_of_two(const ImageFamily& input) {
    const int n = next_power_of_two(std::max(2, input.side()));
    return n == input.side() ? input : pad_family(input, n);
}

std::vector<std::size_t> exact_ranks_by_layer(const ImageFamily& family, int jobs) {
    const int n = family.side();
    const TreeStructure tree(n);
    std::vector<std::size_t> out;
    for (int i = 1; i < tree.layers(); ++i) {
        const auto nodes = tree.layer(i);
        const auto exact = parallel_map(nodes.size(), jobs, [&](std::size_t t) {
            return region_rank(family, tree.support(nodes[t]).region(n));
        });
        out.push_back(*std::max_element(exact.begin(), exact.end()));
    }
    out.push_back(family.empty() ? 0 : 1);
    return out;
}

} // namespace

std::vector<std::size_t> layer_exact_ranks(const ImageFamily& input, int jobs) {
    return exact_ranks_by_layer(padded_to_power_of_two(input), jobs);
}

std::vector<LayerRow> layer_table(const ImageFamily& input, int jobs) {
    const auto family = padded_to_power_of_two(input);
    const int n = family.side();
    const auto build = ht_build<double>(family);
    const auto& tree = build.network.tree();
    const auto exact = exact_ranks_by_layer(family, jobs);
    std::vector<LayerRow> rows;
    for (int i = 1; i <= tree.layers(); ++i) {
        const auto& ranks = build.node_ranks[static_cast<std::size_t>(i - 1)];
        rows.push_back({n, i, build.network.channels(i), *std::min_element(ranks.begin(), ranks.end()),
                        *std::max_element(ranks.begin(), ranks.end()), exact[static_cast<std::size_t>(i - 1)],
                        tree.support(tree.layer(i).front()).perimeter()});
    }
    return rows;
}

Theorem1Report verify_theorem1(const GeneratorSpec& spec, std::span<const int> ns, int jobs) {
    Theorem1Report report;
    for (int n : ns) {
        if (!is_power_of_two(n)) throw precondition_error("layer scaling needs powers of two");
        const auto rows = layer_table(generate(spec, n), jobs);
        std::vector<double> layer, log_channels;
        for (const auto& r : rows) {
            layer.push_back(r.layer);
            log_channels.push_back(std::log2(static_cast<double>(r.channels)));
        }
        Theorem1Report::Fit fit{n, fit_line(layer, log_channels), -1e300};
        for (std::size_t t = 0; t < layer.size(); ++t)
            fit.offset = std::max(fit.offset, log_channels[t] - fit.fit.slope * layer[t]);
        report.fits.push_back(fit);
        report.layers.insert(report.layers.end(), rows.begin(), rows.end());
    }
    return report;
}

std::vector<BinaryImage> random_images(int n, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<BinaryImage> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        BinaryImage x(n);
        std::uint64_t word = 0;
        for (int k = 1; k <= n * n; ++k) {
            if ((k - 1) % 64 == 0) word = engine();
            x.set_pixel(k, word & 1u);
            word >>= 1;
        }
        out.push_back(std::move(x));
    }
    return out;
}

CrossCheck tt_ht_cross_check(const ImageFamily& family, std::size_t random_probes, std::uint64_t seed) {
    const int n = family.side();
    const int padded = next_power_of_two(std::max(2, n));
    const auto tt = tt_from_family<double>(family);
    const auto ht = ht_from_family<double>(padded == n ? family : pad_family(family, padded));

    CrossCheck out;
    out.padded_side = padded;
    // A NaN deviation must survive the maximum.
    auto worse = [](double current, double d) { return std::isnan(current) || d > current || std::isnan(d) ? d : current; };
    auto probe = [&](const BinaryImage& x) {
        const double f = family(x);
        const double a = tt_eval(tt, x);
        const double b = ht_eval(ht, padded == n ? x : pad_image(x, padded));
        out.max_tt_ht = worse(out.max_tt_ht, std::abs(a - b));
        out.max_tt_f = worse(out.max_tt_f, std::abs(a - f));
        out.max_ht_f = worse(out.max_ht_f, std::abs(b - f));
        ++out.probes;
    };
    for (const auto& x : family.members()) probe(x);
    for (const auto& x : random_images(n, random_probes, seed)) probe(x);
    return out;
}

} // namespace imgtn
