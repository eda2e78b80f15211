#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <Eigen/SVD>

#include "imgtn/certify.hpp"
#include "imgtn/exact_rank.hpp"
#include "oracles.hpp"

using namespace imgtn;

namespace {

int black_runs(const Config& y) {
    int runs = 0;
    for (std::size_t c = 0; c < y.size(); ++c) runs += y[c] && (c == 0 || !y[c - 1]);
    return runs;
}

std::vector<ImageFamily> all_small_families() {
    std::vector<ImageFamily> out;
    for (int n = 3; n <= 8; ++n) {
        out.push_back(gen_rectangle_outlines(n, 3));
        out.push_back(gen_vertical_bars(n, 2));
        out.push_back(gen_random_family(n, 30, static_cast<std::uint64_t>(n)));
        if (n >= 5) out.push_back(gen_stacked_outlines(n, 3));
    }
    return out;
}

} // namespace

TEST(RowConfigCounts, TopRowCountMatchesEnumeration) {
    const auto family = gen_rectangle_outlines(4, 3);
    std::set<Config> tops;
    for (std::uint64_t code = 0; code < (1u << 16); ++code) {
        const auto x = oracle::image_from_code(4, code);
        if (oracle::is_rectangle_outline(x, 3)) tops.insert(x.row(1));
    }
    const auto report = certify_assumption1(family);
    ASSERT_EQ(report.config_counts.size(), 4u);
    EXPECT_EQ(report.config_counts[0], tops.size());
    EXPECT_EQ(report.max_config_count, *std::max_element(report.config_counts.begin(), report.config_counts.end()));
}

TEST(RowConfigCounts, EmptyFamilyHasZeroCounts) {
    const auto report = certify_assumptions(ImageFamily(5));
    EXPECT_EQ(report.config_counts, std::vector<std::size_t>(5, 0));
    EXPECT_EQ(report.max_config_count, 0u);
    EXPECT_TRUE(report.ranks.empty());
    EXPECT_EQ(report.max_rank, 0u);
}

TEST(FixedRowRanks, RectangleFixedRowRanksAreAtMostTwo) {
    for (int n = 4; n <= 8; ++n) {
        const auto report = certify_assumption2(gen_rectangle_outlines(n, 3), 2);
        EXPECT_LE(report.max_rank, 2u) << "n=" << n;
        for (const auto& r : report.ranks) EXPECT_LE(r.rank, report.max_rank);
    }
}

TEST(FixedRowRanks, StackedOutlinesHaveRankTwoRowsWithTwoRuns) {
    const auto report = certify_assumption2(gen_stacked_outlines(7, 3));
    bool found = false;
    for (const auto& r : report.ranks) found = found || (r.rank == 2 && black_runs(r.y) == 2);
    EXPECT_TRUE(found);
}

TEST(FixedRowRanks, AbsentConfigurationHasRankZero) {
    const auto family = gen_rectangle_outlines(6, 3);
    EXPECT_EQ(fixed_row_rank(family, 3, config_from_string("101101")), 0u);
}

TEST(FixedRowRanks, ParallelismDoesNotChangeTheReport) {
    const auto family = gen_stacked_outlines(8, 3);
    const auto a = certify_assumption2(family, 1);
    const auto b = certify_assumption2(family, 4);
    ASSERT_EQ(a.ranks.size(), b.ranks.size());
    for (std::size_t t = 0; t < a.ranks.size(); ++t) {
        EXPECT_EQ(a.ranks[t].y, b.ranks[t].y);
        EXPECT_EQ(a.ranks[t].rank, b.ranks[t].rank);
    }
}

TEST(RowCutBound, HoldsOnEveryGeneratedFamily) {
    for (const auto& family : all_small_families())
        for (const auto& row : verify_lemma1(family, 2)) {
            EXPECT_TRUE(row.holds) << family.meta().name << " n=" << family.side() << " i=" << row.row;
            EXPECT_LE(row.rank, row.bound);
        }
}

TEST(RowCutBound, SingleMember) {
    ImageFamily family(4);
    family.insert(BinaryImage::from_string(4, "0110100110010110"));
    for (const auto& row : verify_lemma1(family)) {
        EXPECT_EQ(row.rank, 1u);
        EXPECT_EQ(row.bound, 1u);
    }
}

TEST(RowCutBound, RectangleSideFourRowTwoAgainstOracle) {
    const auto family = gen_rectangle_outlines(4, 3);
    const auto rows = verify_lemma1(family);
    const auto& row = rows[1];
    ASSERT_EQ(row.row, 2);
    EXPECT_EQ(row.rank, oracle::region_rank(family, [](int k) { return k <= 8; }));
    // Right side: pin row 2 to each occurring y and rank rows 1 against rows 3..4.
    std::size_t bound = 0;
    std::set<Config> ys;
    for (const auto& x : family.members()) ys.insert(x.row(2));
    for (const auto& y : ys) {
        ImageFamily pinned(4);
        for (const auto& x : family.members())
            if (x.row(2) == y) pinned.insert(x);
        bound += oracle::region_rank(pinned, [](int k) { return k <= 8; });
    }
    EXPECT_EQ(row.bound, bound);
}

TEST(RegionProfile, WholeImageAndSinglePixel) {
    const auto family = gen_rectangle_outlines(6, 3);
    const Region regions[] = {Region::rectangle(6, 1, 1, 6, 6), Region::rectangle(6, 3, 4, 1, 1)};
    const auto profile = region_rank_profile(family, regions);
    ASSERT_EQ(profile.entries.size(), 2u);
    EXPECT_EQ(profile.entries[0].rank, 1u);
    EXPECT_LE(profile.entries[1].rank, 2u);
    EXPECT_EQ(profile.entries[1].size, 1);
    EXPECT_EQ(profile.entries[1].boundary, 4);
    EXPECT_EQ(region_rank(ImageFamily(6), regions[0]), 0u);
}

TEST(RegionProfile, TopLeftQuadrantAgainstDenseRank) {
    const auto family = gen_rectangle_outlines(8, 3);
    const auto region = Region::rectangle(8, 1, 1, 4, 4);
    const auto dense = unfold_region(family, region).dense();
    EXPECT_EQ(region_rank(family, region), oracle::svd_rank(dense));
}

TEST(RegionProfile, FitsAgainstBoundaryAndSize) {
    const auto family = gen_rectangle_outlines(8, 3);
    std::vector<Region> regions;
    for (int s = 1; s <= 6; ++s) regions.push_back(Region::rectangle(8, 2, 2, s, s));
    const auto profile = region_rank_profile(family, regions, 2);
    ASSERT_TRUE(profile.log_rank_vs_boundary.has_value());
    ASSERT_TRUE(profile.log_rank_vs_size.has_value());
    EXPECT_EQ(profile.log_rank_vs_boundary->points, 6u);
    for (std::size_t t = 0; t < regions.size(); ++t) {
        EXPECT_EQ(profile.entries[t].boundary, regions[t].boundary_length());
        EXPECT_EQ(profile.entries[t].rank, region_rank(family, regions[t]));
    }
}

TEST(RegionProfile, RowCutRankIsBoundedByConfigsTimesFixedRowRank) {
    const auto family = gen_rectangle_outlines(8, 3);
    const auto report = certify_assumptions(family);
    for (int i = 1; i < 8; ++i)
        EXPECT_LE(row_prefix_rank(family, i), report.config_counts[static_cast<std::size_t>(i - 1)] * report.max_rank);
}

TEST(RandomBaseline, SingleMemberHasRankOne) {
    EXPECT_EQ(random_baseline_profile(4, 1, 3, Region::row_prefix(4, 2)).rank, 1u);
}

TEST(RandomBaseline, MiddleCutUsuallySaturates) {
    const auto cut = Region::row_prefix(4, 2);
    const auto structured = region_rank(gen_rectangle_outlines(4, 3), cut);
    int saturated = 0, larger = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto b = random_baseline_profile(4, 9, seed, cut);
        EXPECT_EQ(b.cap, 9u);
        saturated += b.rank == 9;
        larger += b.rank > structured;
    }
    // Both halves of all 9 members are distinct in most draws (birthday bound over 256 halves).
    EXPECT_GE(saturated, 50);
    EXPECT_GE(larger, 99);
}

TEST(RandomBaseline, RandomBeatsStructuredOverSeeds) {
    for (int n : {4, 6}) {
        const auto family = gen_rectangle_outlines(n, 3);
        const auto cut = Region::row_prefix(n, n / 2);
        const auto structured = region_rank(family, cut);
        int wins = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed)
            wins += random_baseline_profile(n, family.size(), seed, cut).rank >= structured;
        EXPECT_GE(wins, 99) << "n=" << n;
    }
}

TEST(Features, FactorCountEqualsExactRank) {
    const auto family = gen_rectangle_outlines(4, 3);
    const auto region = Region::row_prefix(4, 2);
    const auto f = feature_decomposition(family, region);
    EXPECT_EQ(f.factors.rank, exact_rank(f.unfolding));
    EXPECT_EQ(f.left_support.size(), f.factors.rank);
    EXPECT_EQ(f.left_is_01.size(), f.factors.rank);
}

TEST(Features, EmptyFamilyHasNoFeatures) {
    const auto f = feature_decomposition(ImageFamily(4), Region::row_prefix(4, 2));
    EXPECT_EQ(f.factors.rank, 0u);
    EXPECT_TRUE(f.left_support.empty());
}

TEST(Scaling, MemberCountFollowsTheClosedForm) {
    const int ns[] = {4, 8, 16};
    const auto report = scaling_experiment(GeneratorSpec::parse("rect"), ns, Quantity::member_count);
    std::vector<double> x, y;
    for (int n : ns) {
        double count = 0;
        for (int h = 3; h <= n; ++h)
            for (int w = 3; w <= n; ++w) count += (n - h + 1) * (n - w + 1);
        x.push_back(std::log2(n));
        y.push_back(std::log2(count));
    }
    const auto fit = fit_line(x, y);
    ASSERT_EQ(report.series.size(), 3u);
    EXPECT_NEAR(report.fit.slope, fit.slope, 1e-12);
    // The count is Theta(n^4); lower-order terms still lift the slope at n <= 16.
    EXPECT_GT(report.fit.slope, 4.0);
    EXPECT_LT(report.fit.slope, 5.5);
}

TEST(Scaling, RowConfigurationSeriesMatchesDirectScan) {
    const int ns[] = {4, 8};
    const auto report = scaling_experiment(GeneratorSpec::parse("rect"), ns, Quantity::max_row_configs);
    for (std::size_t t = 0; t < 2; ++t) {
        const auto family = gen_rectangle_outlines(ns[t], 3);
        std::size_t best = 0;
        for (int i = 1; i <= ns[t]; ++i) {
            std::set<Config> rows;
            for (const auto& x : family.members()) rows.insert(x.row(i));
            best = std::max(best, rows.size());
        }
        EXPECT_EQ(report.series[t].value, static_cast<double>(best));
    }
}

TEST(Scaling, ConstantSeriesHasZeroSlope) {
    const auto report = make_scaling_report("constant", {{4, 3}, {8, 3}, {16, 3}});
    EXPECT_NEAR(report.fit.slope, 0.0, 1e-12);
    EXPECT_NEAR(report.fit.intercept, std::log2(3.0), 1e-12);
}

TEST(Scaling, NeedsTwoAscendingPoints) {
    const int one[] = {8};
    const int unsorted[] = {8, 4};
    EXPECT_THROW(scaling_experiment(GeneratorSpec::parse("rect"), one, Quantity::member_count), precondition_error);
    EXPECT_THROW(scaling_experiment(GeneratorSpec::parse("rect"), unsorted, Quantity::member_count), precondition_error);
    EXPECT_THROW(make_scaling_report("q", {{4, 0}, {8, 5}}), precondition_error);
}

TEST(Scaling, QuantityNamesRoundTrip) {
    for (const char* name : {"members", "row_configs", "fixed_row_rank", "row_prefix_rank", "middle_cut_rank", "prefix_rank"})
        EXPECT_EQ(quantity_name(parse_quantity(name)), name);
    EXPECT_THROW(parse_quantity("volume"), precondition_error);
}
