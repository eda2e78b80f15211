#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imgtn {

/// Configuration of an ordered pixel subset: one 0/1 byte per pixel.
using Config = std::vector<std::uint8_t>;

/// Flat, 1-based, row-major pixel index: (row, col) -> (row - 1) * n + col.
constexpr int flat_index(int n, int row, int col) noexcept { return (row - 1) * n + col; }

/// Inverse of flat_index.
constexpr std::pair<int, int> row_col(int n, int k) noexcept {
    return {(k - 1) / n + 1, (k - 1) % n + 1};
}

/// An n x n black/white image. Bit 1 is a black pixel.
class BinaryImage {
public:
    BinaryImage() = default;
    explicit BinaryImage(int n);
    BinaryImage(int n, Config bits);

    /// Parses n^2 characters in {0,1}, row-major.
    static BinaryImage from_string(int n, std::string_view text);

    int side() const noexcept { return n_; }
    int pixel_count() const noexcept { return n_ * n_; }

    bool at(int row, int col) const { return bits_[index(row, col)] != 0; }
    void set(int row, int col, bool black) { bits_[index(row, col)] = black ? 1 : 0; }

    bool pixel(int k) const { return bits_[static_cast<std::size_t>(k - 1)] != 0; }
    void set_pixel(int k, bool black) { bits_[static_cast<std::size_t>(k - 1)] = black ? 1 : 0; }

    /// Row i as an n-bit configuration.
    Config row(int i) const;
    /// Values of the listed flat pixels, in list order.
    Config gather(std::span<const int> pixels) const;

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::string to_string() const;

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;
    friend auto operator<=>(const BinaryImage&, const BinaryImage&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(flat_index(n_, row, col) - 1);
    }

    int n_ = 0;
    Config bits_;
};

struct BinaryImageHash {
    std::size_t operator()(const BinaryImage& x) const noexcept {
        const auto bits = x.bits();
        return std::hash<std::string_view>{}(
            std::string_view(reinterpret_cast<const char*>(bits.data()), bits.size()));
    }
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const noexcept {
        return std::hash<std::string_view>{}(
            std::string_view(reinterpret_cast<const char*>(c.data()), c.size()));
    }
};

std::string config_to_string(const Config& c);
Config config_from_string(std::string_view text);

/// A pixel region A of the n x n grid.
class Region {
public:
    enum class Kind { row_prefix, rectangle, pixel_prefix };

    /// Rows 1..i, 1 <= i <= n-1.
    static Region row_prefix(int n, int i);
    /// Rectangle with 1-based top-left corner; must lie inside the grid.
    static Region rectangle(int n, int top, int left, int height, int width);
    /// Flat pixels 1..k, 1 <= k <= n^2 - 1.
    static Region pixel_prefix(int n, int k);

    /// Parses `row:i`, `pixel:k` or `rect:top,left,height,width`.
    static Region parse(int n, std::string_view text);

    Kind kind() const noexcept { return kind_; }
    int side() const noexcept { return n_; }

    bool contains(int k) const;
    /// Flat indices inside A, ascending.
    std::vector<int> pixels() const;
    /// Flat indices outside A, ascending.
    std::vector<int> complement() const;

    /// |A|
    int size() const;
    /// |dA|: unit edges separating a pixel of A from a pixel outside A or from the grid border.
    int boundary_length() const;

    std::string to_string() const;

private:
    Region(Kind kind, int n, int a, int b = 0, int c = 0, int d = 0)
        : kind_(kind), n_(n), a_(a), b_(b), c_(c), d_(d) {}

    Kind kind_;
    int n_;
    int a_, b_, c_, d_;
};

} // namespace imgtn
