#include "imgtn/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "imgtn/error.hpp"

namespace imgtn {

namespace {

void draw_outline(BinaryImage& x, int top, int left, int height, int width) {
    const int bottom = top + height - 1, right = left + width - 1;
    for (int c = left; c <= right; ++c) {
        x.set(top, c, true);
        x.set(bottom, c, true);
    }
    for (int r = top; r <= bottom; ++r) {
        x.set(r, left, true);
        x.set(r, right, true);
    }
}

} // namespace

ImageFamily gen_rectangle_outlines(int n, int min_side) {
    if (min_side < 3) throw precondition_error("min_side must be at least 3");
    if (n < min_side)
        throw precondition_error("empty family: n=" + std::to_string(n) + " < min_side=" +
                                 std::to_string(min_side));
    ImageFamily family(n, FamilyMeta{"rect:min_side=" + std::to_string(min_side), std::nullopt});
    for (int top = 1; top <= n; ++top)
        for (int left = 1; left <= n; ++left)
            for (int h = min_side; top + h - 1 <= n; ++h)
                for (int w = min_side; left + w - 1 <= n; ++w) {
                    BinaryImage x(n);
                    draw_outline(x, top, left, h, w);
                    family.insert(std::move(x));
                }
    return family;
}

ImageFamily gen_vertical_bars(int n, int min_len) {
    if (min_len < 2) throw precondition_error("min_len must be at least 2");
    if (n < min_len)
        throw precondition_error("empty family: n=" + std::to_string(n) + " < min_len=" +
                                 std::to_string(min_len));
    ImageFamily family(n, FamilyMeta{"bars:min_len=" + std::to_string(min_len), std::nullopt});
    for (int top = 1; top <= n; ++top)
        for (int col = 1; col <= n; ++col)
            for (int len = min_len; top + len - 1 <= n; ++len) {
                BinaryImage x(n);
                for (int r = top; r < top + len; ++r) x.set(r, col, true);
                family.insert(std::move(x));
            }
    return family;
}

ImageFamily gen_stacked_outlines(int n, int min_side) {
    if (min_side < 3) throw precondition_error("min_side must be at least 3");
    if (n < 2 * min_side - 1)
        throw precondition_error("stacked outlines need n >= 2*min_side-1 = " +
                                 std::to_string(2 * min_side - 1));
    ImageFamily family(n,
                       FamilyMeta{"stacked:min_side=" + std::to_string(min_side), std::nullopt});
    for (int top = 1; top <= n; ++top)
        for (int s1 = min_side; top + s1 - 1 <= n; ++s1)
            for (int left1 = 1; left1 + s1 - 1 <= n; ++left1) {
                const int shared = top + s1 - 1;
                for (int s2 = min_side; shared + s2 - 1 <= n; ++s2)
                    for (int left2 = 1; left2 + s2 - 1 <= n; ++left2) {
                        if (left2 > left1 + s1 - 1 || left1 > left2 + s2 - 1) continue;
                        BinaryImage x(n);
                        draw_outline(x, top, left1, s1, s1);
                        draw_outline(x, shared, left2, s2, s2);
                        family.insert(std::move(x));
                    }
            }
    return family;
}

ImageFamily gen_random_family(int n, std::uint64_t m, std::uint64_t seed) {
    if (n <= 0) throw precondition_error("n must be positive");
    const int bits = n * n;
    if (bits < 64 && m > (std::uint64_t{1} << bits))
        throw precondition_error("cannot draw " + std::to_string(m) + " distinct images from 2^" +
                                 std::to_string(bits));
    ImageFamily family(n, FamilyMeta{"random:m=" + std::to_string(m), seed});
    std::mt19937_64 engine(seed);

    // Dense regime: shuffle the full cube so the loop below cannot stall.
    if (bits <= 20 && m > (std::uint64_t{1} << bits) / 2) {
        const std::uint64_t total = std::uint64_t{1} << bits;
        std::vector<std::uint64_t> all(total);
        std::iota(all.begin(), all.end(), 0);
        for (std::uint64_t t = 0; t < m; ++t) {
            // unbiased draw in [t, total) by rejection
            const std::uint64_t span = total - t;
            const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
            std::uint64_t r;
            do r = engine();
            while (r >= limit);
            std::swap(all[t], all[t + r % span]);
            Config c(static_cast<std::size_t>(bits));
            for (int b = 0; b < bits; ++b) c[static_cast<std::size_t>(b)] = (all[t] >> b) & 1u;
            family.insert(BinaryImage(n, std::move(c)));
        }
        return family;
    }

    while (family.size() < m) {
        Config c(static_cast<std::size_t>(bits));
        std::uint64_t word = 0;
        for (int b = 0; b < bits; ++b) {
            if (b % 64 == 0) word = engine();
            c[static_cast<std::size_t>(b)] = word & 1u;
            word >>= 1;
        }
        family.insert(BinaryImage(n, std::move(c)));
    }
    return family;
}

GeneratorSpec GeneratorSpec::parse(const std::string& kind, int param, std::uint64_t seed) {
    if (kind != "rect" && kind != "bars" && kind != "stacked" && kind != "random")
        throw precondition_error("unknown family '" + kind + "' (expected rect, bars, stacked, random)");
    return GeneratorSpec{kind, param, seed};
}

int GeneratorSpec::effective_param() const {
    if (param > 0) return param;
    if (kind == "bars") return 2;
    if (kind == "random") throw precondition_error("random family needs a member count m");
    return 3;
}

ImageFamily generate(const GeneratorSpec& spec, int n) {
    const int p = spec.effective_param();
    if (spec.kind == "rect") return gen_rectangle_outlines(n, p);
    if (spec.kind == "bars") return gen_vertical_bars(n, p);
    if (spec.kind == "stacked") return gen_stacked_outlines(n, p);
    if (spec.kind == "random") return gen_random_family(n, static_cast<std::uint64_t>(p), spec.seed);
    throw precondition_error("unknown family '" + spec.kind + "'");
}

} // namespace imgtn
