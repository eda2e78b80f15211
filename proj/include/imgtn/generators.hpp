#pragma once

#include <cstdint>
#include <string>

#include "imgtn/family.hpp"

namespace imgtn {

/// Every 1-pixel-wide axis-aligned rectangle border with height, width >= min_side,
/// at every position. Enumerated in (top, left, height, width) lexicographic order.
ImageFamily gen_rectangle_outlines(int n, int min_side = 3);

/// Every single-column vertical segment of length >= min_len,
/// enumerated in (top, column, length) order.
ImageFamily gen_vertical_bars(int n, int min_len = 2);

/// "8"-like shapes: two square outlines (sides >= min_side, possibly different) stacked
/// vertically so that the bottom edge row of the upper square is the top edge row of the
/// lower one. Horizontal positions are independent but the two shared-row edges must
/// overlap in at least one column. Order: (top, upper side, upper left, lower side, lower left).
ImageFamily gen_stacked_outlines(int n, int min_side = 3);

/// m distinct images drawn uniformly from {0,1}^(n^2) with a seeded mt19937_64.
ImageFamily gen_random_family(int n, std::uint64_t m, std::uint64_t seed);

/// A named generator with its single integer parameter. For `random` the
/// parameter is the member count m.
struct GeneratorSpec {
    std::string kind = "rect"; ///< rect | bars | stacked | random
    int param = 0;             ///< min_side / min_len / m; 0 picks the default
    std::uint64_t seed = 0;

    static GeneratorSpec parse(const std::string& kind, int param = 0, std::uint64_t seed = 0);
    int effective_param() const;
};

ImageFamily generate(const GeneratorSpec& spec, int n);

} // namespace imgtn
