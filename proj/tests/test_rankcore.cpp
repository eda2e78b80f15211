#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "imgtn/dense_oracle.hpp"
#include "imgtn/exact_rank.hpp"
#include "imgtn/factorize.hpp"
#include "imgtn/generators.hpp"
#include "imgtn/unfolding.hpp"
#include "oracles.hpp"

using namespace imgtn;

namespace {

/// Rank of F_{i,y} from the truth table: rows 1..i-1 against rows i+1..n, row i = y.
std::size_t oracle_fixed_row_rank(const ImageFamily& family, int i, const Config& y) {
    const int n = family.side();
    const int above = (i - 1) * n, below = (n - i) * n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index{1} << above, Eigen::Index{1} << below);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * n)); ++code) {
        const auto x = oracle::image_from_code(n, code);
        if (x.row(i) != y || !family(x)) continue;
        Eigen::Index r = 0, c = 0;
        for (int k = 1; k <= above; ++k) r = 2 * r + x.pixel(k);
        for (int k = i * n + 1; k <= n * n; ++k) c = 2 * c + x.pixel(k);
        m(r, c) = 1.0;
    }
    return oracle::svd_rank(m);
}

std::vector<ImageFamily> side_three_families() {
    std::vector<ImageFamily> out{gen_rectangle_outlines(3, 3), gen_vertical_bars(3, 2), ImageFamily(3)};
    for (std::uint64_t m : {1u, 5u, 20u, 100u, 300u}) out.push_back(gen_random_family(3, m, m + 3));
    ImageFamily single(3);
    single.insert(BinaryImage::from_string(3, "010111010"));
    out.push_back(single);
    return out;
}

} // namespace

TEST(Unfold, EmptyLeftSideGivesOneRow) {
    const auto family = gen_rectangle_outlines(4, 3);
    const auto u = unfold_fixed_row(family, 1, config_from_string("0000"));
    EXPECT_EQ(u.rows(), 1);
    EXPECT_GT(u.cols(), 0);
    EXPECT_EQ(u.nonzeros(), static_cast<std::size_t>(u.cols()));
    EXPECT_EQ(exact_rank(u), 1u);
}

TEST(Unfold, AbsentRowConfigurationIsTheZeroMatrix) {
    const auto family = gen_rectangle_outlines(4, 3);
    const auto u = unfold_fixed_row(family, 2, config_from_string("1101"));
    EXPECT_EQ(u.nonzeros(), 0u);
    EXPECT_EQ(exact_rank(u), 0u);
}

TEST(Unfold, OneEntryPerMember) {
    const auto family = gen_rectangle_outlines(4, 3);
    const auto u = unfold_region(family, Region::row_prefix(4, 2));
    EXPECT_EQ(u.nonzeros(), 9u);
    const auto dense = u.dense();
    EXPECT_EQ(dense.sum(), 9.0);
    EXPECT_TRUE(std::is_sorted(u.left_configs.begin(), u.left_configs.end()));
    EXPECT_TRUE(std::is_sorted(u.right_configs.begin(), u.right_configs.end()));
}

TEST(Unfold, OverlappingPixelSetsAreStructuralErrors) {
    const auto family = gen_rectangle_outlines(4, 3);
    Bipartition bad{4, {1, 2, 3}, {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16}, {}};
    EXPECT_THROW(unfold(family, bad), structural_error);
    Bipartition missing{4, {1, 2}, {4, 5}, {}};
    EXPECT_THROW(unfold(family, missing), structural_error);
}

TEST(ExactRank, SmallMatrices) {
    EXPECT_EQ(exact_rank(IntegerMatrix::Zero(3, 4)), 0u);
    IntegerMatrix one = IntegerMatrix::Zero(3, 3);
    one(1, 2) = 1;
    EXPECT_EQ(exact_rank(one), 1u);
    IntegerMatrix m(3, 3);
    m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    EXPECT_EQ(exact_rank(m), 2u);
    EXPECT_EQ(exact_rank(IntegerMatrix(IntegerMatrix::Identity(5, 5))), 5u);
    EXPECT_EQ(exact_rank(IntegerMatrix(0, 0)), 0u);
}

TEST(ExactRank, ProductsOfLargeIntegersFallBackWithoutError) {
    // Entries near 1e12 overflow 64-bit fraction-free elimination almost immediately.
    std::mt19937_64 engine(3);
    std::uniform_int_distribution<std::int64_t> dist(-1000000, 1000000);
    for (int r : {1, 3, 5}) {
        IntegerMatrix a(8, r), b(r, 9);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = dist(engine);
        for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = dist(engine);
        const IntegerMatrix p = a * b;
        EXPECT_EQ(exact_rank(p), static_cast<std::size_t>(r));
    }
}

TEST(ExactRank, NearlyDependentRowsAreStillIndependent) {
    // A floating-point rank test would call these rows equal; rational rank is 2.
    IntegerMatrix m(2, 2);
    m << 1000000000000LL, 1000000000001LL, 1000000000001LL, 1000000000002LL;
    EXPECT_EQ(exact_rank(m), 2u);
}

TEST(ExactRank, CaseThreeRowHasRankOne) {
    // Row 2 = 1001: two isolated black pixels, the side walls of a 4-wide rectangle.
    const auto family = gen_rectangle_outlines(4, 3);
    const auto y = config_from_string("1001");
    EXPECT_EQ(exact_rank(unfold_fixed_row(family, 2, y)), 1u);
    EXPECT_EQ(oracle_fixed_row_rank(family, 2, y), 1u);
}

TEST(ExactRank, FixedRowRanksMatchDenseOracleAtSideFour) {
    for (const auto& family : {gen_rectangle_outlines(4, 3), gen_vertical_bars(4, 2), gen_random_family(4, 40, 2)})
        for (int i = 1; i <= 4; ++i) {
            std::set<Config> ys;
            for (const auto& x : family.members()) ys.insert(x.row(i));
            for (const auto& y : ys) {
                const auto sparse = exact_rank(unfold_fixed_row(family, i, y));
                EXPECT_EQ(sparse, oracle_fixed_row_rank(family, i, y));
                EXPECT_EQ(sparse, dense_oracle_rank(family, Bipartition::around_row(4, i), FixedRowConstraint{i, y}));
            }
        }
}

TEST(ExactRank, TransposeAndPermutationInvariance) {
    const auto family = gen_rectangle_outlines(6, 3);
    ImageFamily shuffled(6);
    std::vector<BinaryImage> members(family.members().begin(), family.members().end());
    std::shuffle(members.begin(), members.end(), std::mt19937_64(9));
    for (auto& x : members) shuffled.insert(x);
    for (int i = 1; i < 6; ++i) {
        const auto u = unfold_region(family, Region::row_prefix(6, i));
        EXPECT_EQ(exact_rank(u), exact_rank(u.transposed()));
        EXPECT_EQ(exact_rank(u), exact_rank(unfold_region(shuffled, Region::row_prefix(6, i))));
    }
}

TEST(OracleEquivalence, SideThreeAllCuts) {
    for (const auto& family : side_three_families()) {
        std::vector<Region> cuts;
        for (int k = 1; k <= 8; ++k) cuts.push_back(Region::pixel_prefix(3, k));
        for (int i = 1; i <= 2; ++i) cuts.push_back(Region::row_prefix(3, i));
        cuts.push_back(Region::rectangle(3, 2, 2, 2, 2));
        for (const auto& cut : cuts) {
            const auto sparse = exact_rank(unfold_region(family, cut));
            const auto bip = Bipartition::from_region(cut);
            EXPECT_EQ(sparse, dense_oracle_rank(family, bip)) << cut.to_string();
            EXPECT_EQ(sparse, oracle::svd_rank(dense_unfolding_oracle(family, bip))) << cut.to_string();
            EXPECT_EQ(sparse, oracle::region_rank(family, [&](int k) { return cut.contains(k); })) << cut.to_string();
        }
    }
}

TEST(OracleEquivalence, RowPrefixCutsAtSideFour) {
    for (const auto& family : {gen_rectangle_outlines(4, 3), gen_vertical_bars(4, 2), gen_random_family(4, 60, 1)})
        for (int i = 1; i <= 3; ++i) {
            const auto cut = Region::row_prefix(4, i);
            EXPECT_EQ(exact_rank(unfold_region(family, cut)), dense_oracle_rank(family, Bipartition::from_region(cut)));
        }
}

TEST(DenseOracle, EmptyAndSingleMember) {
    const ImageFamily empty(3);
    const auto bip = Bipartition::from_region(Region::pixel_prefix(3, 4));
    EXPECT_EQ(dense_unfolding_oracle(empty, bip).cwiseAbs().sum(), 0.0);
    ImageFamily single(3);
    single.insert(BinaryImage::from_string(3, "100010001"));
    for (int k = 1; k <= 8; ++k)
        EXPECT_EQ(dense_oracle_rank(single, Bipartition::from_region(Region::pixel_prefix(3, k))), 1u);
}

TEST(DenseOracle, SizeGuard) {
    const auto family = gen_rectangle_outlines(5, 3);
    EXPECT_THROW(dense_unfolding_oracle(family, Bipartition::from_region(Region::row_prefix(5, 2))), precondition_error);
}

TEST(Factorize, ZeroUnfoldingIsEmpty) {
    const auto family = gen_rectangle_outlines(4, 3);
    const auto f = factorize(unfold_fixed_row(family, 2, config_from_string("1101")));
    EXPECT_EQ(f.rank, 0u);
    EXPECT_EQ(f.left.cols(), 0);
}

TEST(Factorize, CaseThreeFactorIsSupportedOnTheUpperParts) {
    const auto family = gen_rectangle_outlines(4, 3);
    const auto y = config_from_string("1001");
    const auto u = unfold_fixed_row(family, 2, y);
    const auto f = factorize(u);
    ASSERT_EQ(f.rank, 1u);
    // Upper parts (row 1) of members whose row 2 is y, found by a direct scan.
    std::set<Config> upper;
    for (const auto& x : family.members())
        if (x.row(2) == y) upper.insert(x.row(1));
    std::set<Config> support;
    for (Eigen::Index r = 0; r < f.left.rows(); ++r)
        if (std::abs(f.left(r, 0)) > 1e-9) support.insert(u.left_configs[static_cast<std::size_t>(r)]);
    EXPECT_EQ(support, upper);
}

TEST(Factorize, RankMatchesExactRankAndReconstructs) {
    std::vector<ImageFamily> families{gen_rectangle_outlines(6, 3), gen_stacked_outlines(6, 3), gen_random_family(5, 50, 4)};
    for (const auto& family : families) {
        const int n = family.side();
        for (int k = 1; k < n * n; k += 3) {
            const auto u = unfold_region(family, Region::pixel_prefix(n, k));
            const auto f = factorize(u);
            EXPECT_EQ(f.rank, exact_rank(u));
            EXPECT_LE((f.reconstruct() - u.dense()).cwiseAbs().maxCoeff(), 1e-9);
            for (Eigen::Index t = 0; t + 1 < f.singular_values.size(); ++t)
                EXPECT_GE(f.singular_values(t), f.singular_values(t + 1) - 1e-12);
        }
    }
}

TEST(Factorize, ToleranceOutsideTheUnitIntervalIsRejected) {
    const auto u = unfold_region(gen_rectangle_outlines(4, 3), Region::row_prefix(4, 2));
    EXPECT_THROW(factorize(u, 0.0), precondition_error);
    EXPECT_THROW(factorize(u, 1.0), precondition_error);
}

TEST(Factorize, OutputIsReproducible) {
    const auto u = unfold_region(gen_rectangle_outlines(6, 3), Region::row_prefix(6, 3));
    const auto a = factorize(u);
    const auto b = factorize(u);
    EXPECT_EQ(a.left, b.left);
    EXPECT_EQ(a.right, b.right);
}
