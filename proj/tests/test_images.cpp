#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "imgtn/certify.hpp"
#include "imgtn/error.hpp"
#include "imgtn/family.hpp"
#include "imgtn/generators.hpp"
#include "oracles.hpp"

using namespace imgtn;

TEST(Image, FlatIndexAndRowColAreInverse) {
    for (int n : {1, 3, 8})
        for (int r = 1; r <= n; ++r)
            for (int c = 1; c <= n; ++c) {
                const int k = flat_index(n, r, c);
                EXPECT_EQ(k, (r - 1) * n + c);
                EXPECT_EQ(row_col(n, k), std::make_pair(r, c));
            }
}

TEST(Image, StringRoundTripAndRows) {
    const auto x = BinaryImage::from_string(3, "110001011");
    EXPECT_EQ(x.to_string(), "110001011");
    EXPECT_TRUE(x.at(1, 1));
    EXPECT_FALSE(x.at(2, 1));
    EXPECT_TRUE(x.at(2, 3));
    EXPECT_EQ(config_to_string(x.row(3)), "011");
    const std::vector<int> pixels{9, 1, 5};
    EXPECT_EQ(config_to_string(x.gather(pixels)), "110");
    EXPECT_THROW(BinaryImage::from_string(3, "11000101"), precondition_error);
    EXPECT_THROW(BinaryImage::from_string(2, "1x01"), precondition_error);
}

TEST(Region, SizesAndBoundaries) {
    const auto rect = Region::rectangle(8, 2, 3, 4, 2);
    EXPECT_EQ(rect.size(), 8);
    EXPECT_EQ(rect.boundary_length(), 2 * (4 + 2));
    EXPECT_EQ(rect.pixels().front(), flat_index(8, 2, 3));
    EXPECT_EQ(rect.complement().size(), 64u - 8u);

    const auto rows = Region::row_prefix(5, 2);
    EXPECT_EQ(rows.size(), 10);
    const auto prefix = Region::pixel_prefix(4, 6);
    EXPECT_EQ(prefix.pixels(), (std::vector<int>{1, 2, 3, 4, 5, 6}));

    EXPECT_THROW(Region::row_prefix(4, 4), precondition_error);
    EXPECT_THROW(Region::pixel_prefix(4, 16), precondition_error);
    EXPECT_THROW(Region::rectangle(4, 3, 3, 3, 1), precondition_error);
}

TEST(Region, ParseRoundTrip) {
    for (const char* text : {"row:3", "pixel:7", "rect:1,2,3,4"}) {
        const auto r = Region::parse(8, text);
        EXPECT_EQ(r.to_string(), text);
    }
    EXPECT_THROW(Region::parse(8, "disk:3"), precondition_error);
    EXPECT_THROW(Region::parse(8, "rect:1,2,3"), precondition_error);
}

TEST(Rectangles, NineAtSideFourMatchesBruteForce) {
    const auto family = gen_rectangle_outlines(4, 3);
    EXPECT_EQ(family.size(), 9u);
    EXPECT_EQ(oracle::count_images(4, [](const BinaryImage& x) { return oracle::is_rectangle_outline(x, 3); }), 9u);
    for (const auto& x : family.members()) EXPECT_TRUE(oracle::is_rectangle_outline(x, 3));
}

TEST(Rectangles, OneAtSideThree) {
    const auto family = gen_rectangle_outlines(3, 3);
    ASSERT_EQ(family.size(), 1u);
    EXPECT_EQ(family.members()[0].to_string(), "111101111");
}

TEST(Rectangles, ClosedFormCountAtSideEight) {
    std::size_t expected = 0;
    for (int h = 3; h <= 8; ++h)
        for (int w = 3; w <= 8; ++w) expected += static_cast<std::size_t>((9 - h) * (9 - w));
    const auto family = gen_rectangle_outlines(8, 3);
    EXPECT_EQ(family.size(), expected);
    for (const auto& x : family.members()) EXPECT_TRUE(oracle::is_rectangle_outline(x, 3));
}

TEST(Rectangles, EnumerationOrderIsTopLeftHeightWidth) {
    const auto family = gen_rectangle_outlines(4, 3);
    // First: top=1, left=1, h=3, w=3. Second: top=1, left=1, h=3, w=4.
    EXPECT_EQ(family.members()[0].to_string(), "1110101011100000");
    EXPECT_EQ(family.members()[1].to_string(), "1111100111110000");
}

TEST(Rectangles, RowsFollowTheThreeCases) {
    // Every row is all white, one black run, or two isolated black pixels.
    const auto family = gen_rectangle_outlines(8, 3);
    for (const auto& x : family.members())
        for (int i = 1; i <= 8; ++i) {
            const auto row = x.row(i);
            std::vector<std::pair<int, int>> runs;
            for (int c = 0; c < 8; ++c)
                if (row[static_cast<std::size_t>(c)]) {
                    if (!runs.empty() && runs.back().second == c - 1) runs.back().second = c;
                    else runs.push_back({c, c});
                }
            const bool ok = runs.size() <= 1 ||
                            (runs.size() == 2 && runs[0].first == runs[0].second && runs[1].first == runs[1].second);
            EXPECT_TRUE(ok) << x.to_string() << " row " << i;
        }
}

TEST(Rectangles, TooSmallGridIsAnError) {
    EXPECT_THROW(gen_rectangle_outlines(2, 3), precondition_error);
    EXPECT_THROW(gen_rectangle_outlines(5, 2), precondition_error);
}

TEST(Bars, Counts) {
    EXPECT_EQ(gen_vertical_bars(2, 2).size(), 2u);
    EXPECT_EQ(gen_vertical_bars(4, 2).size(), 24u);
    EXPECT_EQ(oracle::count_images(4, [](const BinaryImage& x) { return oracle::is_vertical_bar(x, 2); }), 24u);
    const auto bars = gen_vertical_bars(4, 2);
    for (const auto& x : bars.members()) EXPECT_TRUE(oracle::is_vertical_bar(x, 2));
    EXPECT_THROW(gen_vertical_bars(4, 5), precondition_error);
}

TEST(Bars, RowConfigurationCountIsAtMostNPlusOne) {
    for (int n : {4, 6, 8}) {
        const auto report = certify_assumption1(gen_vertical_bars(n, 2));
        for (auto c : report.config_counts) EXPECT_LE(c, static_cast<std::size_t>(n + 1));
    }
}

TEST(Stacked, NineAtSideFive) {
    const auto family = gen_stacked_outlines(5, 3);
    EXPECT_EQ(family.size(), 9u);
    for (const auto& x : family.members()) {
        // Rows 1, 3 and 5 carry the three horizontal edges, rows 2 and 4 the side walls.
        for (int i : {2, 4}) {
            const auto row = x.row(i);
            EXPECT_EQ(std::count(row.begin(), row.end(), 1), 2);
        }
    }
    EXPECT_THROW(gen_stacked_outlines(4, 3), precondition_error);
}

TEST(Stacked, DeterministicAtSideEight) {
    const auto a = gen_stacked_outlines(8, 3);
    const auto b = gen_stacked_outlines(8, 3);
    EXPECT_EQ(a, b);
    EXPECT_GT(a.size(), 9u);
}

TEST(Random, ExhaustiveWhenMEqualsCube) {
    const auto family = gen_random_family(2, 16, 5);
    EXPECT_EQ(family.size(), 16u);
    EXPECT_EQ(oracle::count_images(2, [&](const BinaryImage& x) { return family.contains(x); }), 16u);
}

TEST(Random, SeedDeterminism) {
    const auto a = gen_random_family(4, 9, 7);
    const auto b = gen_random_family(4, 9, 7);
    const auto c = gen_random_family(4, 9, 8);
    EXPECT_EQ(a, b);
    EXPECT_FALSE(same_members(a, c));
    EXPECT_EQ(a.size(), 9u);
    EXPECT_EQ(a.meta().seed, std::optional<std::uint64_t>(7));
}

TEST(Random, TooManyMembersIsAnError) { EXPECT_THROW(gen_random_family(2, 17, 1), precondition_error); }

TEST(Family, MembershipAgreesWithLinearScan) {
    const auto family = gen_rectangle_outlines(4, 3);
    std::mt19937_64 engine(11);
    std::vector<BinaryImage> probes(family.members().begin(), family.members().end());
    for (int t = 0; t < 10000; ++t) probes.push_back(oracle::image_from_code(4, engine() & 0xffff));
    for (const auto& x : probes) {
        const bool scan = std::find(family.members().begin(), family.members().end(), x) != family.members().end();
        EXPECT_EQ(family.contains(x), scan);
        EXPECT_EQ(family(x), scan ? 1 : 0);
    }
}

TEST(Family, DuplicatesAreRejected) {
    ImageFamily family(2);
    EXPECT_TRUE(family.insert(BinaryImage::from_string(2, "1001")));
    EXPECT_FALSE(family.insert(BinaryImage::from_string(2, "1001")));
    EXPECT_EQ(family.size(), 1u);
    EXPECT_THROW(family.insert(BinaryImage(3)), precondition_error);
}

TEST(FamilyFile, ByteExactRoundTrip) {
    for (const auto& family : {gen_rectangle_outlines(4, 3), gen_random_family(4, 9, 7), ImageFamily(3)}) {
        std::ostringstream first;
        write_family(first, family);
        std::istringstream in(first.str());
        const auto loaded = read_family(in);
        EXPECT_EQ(loaded, family);
        std::ostringstream second;
        write_family(second, loaded);
        EXPECT_EQ(first.str(), second.str());
    }
}

TEST(FamilyFile, HeaderAndComments) {
    std::istringstream in("# comment\nn=2 name=custom seed=none\n# another\n1001\n");
    const auto family = read_family(in);
    EXPECT_EQ(family.side(), 2);
    EXPECT_EQ(family.size(), 1u);
    EXPECT_FALSE(family.meta().seed.has_value());
}

TEST(FamilyFile, EmptyMemberSectionIsValid) {
    std::istringstream in("n=4 name=custom seed=none\n");
    const auto family = read_family(in);
    EXPECT_TRUE(family.empty());
    EXPECT_EQ(family.side(), 4);
}

namespace {

std::size_t error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        read_family(in);
    } catch (const parse_error& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST(FamilyFile, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("n=4 name=custom seed=none\n1110101011100000\n111010101110000\n"), 3u);
    EXPECT_EQ(error_line("n=2 name=custom seed=none\n10x1\n"), 2u);
    EXPECT_EQ(error_line("n=2 name=custom seed=none\n1001\n1001\n"), 3u);
    EXPECT_EQ(error_line("name=custom seed=none\n"), 1u);
    EXPECT_EQ(error_line("n=2 name=custom seed=abc\n"), 1u);
    EXPECT_EQ(error_line(""), 1u);
}

TEST(FamilyFile, PaddingKeepsMembership) {
    const auto family = gen_rectangle_outlines(5, 3);
    const auto padded = pad_family(family, 8);
    EXPECT_EQ(padded.size(), family.size());
    for (const auto& x : family.members()) {
        BinaryImage y(8);
        for (int r = 1; r <= 5; ++r)
            for (int c = 1; c <= 5; ++c) y.set(r, c, x.at(r, c));
        EXPECT_TRUE(padded.contains(y));
    }
}
