#include "imgtn/image.hpp"

#include <charconv>

#include "imgtn/error.hpp"

namespace imgtn {

BinaryImage::BinaryImage(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {
    if (n <= 0) throw precondition_error("image side must be positive");
}

BinaryImage::BinaryImage(int n, Config bits) : n_(n), bits_(std::move(bits)) {
    if (n <= 0) throw precondition_error("image side must be positive");
    if (bits_.size() != static_cast<std::size_t>(n) * n)
        throw precondition_error("expected " + std::to_string(n * n) + " pixels, got " +
                                 std::to_string(bits_.size()));
    for (auto b : bits_)
        if (b > 1) throw precondition_error("pixel values must be 0 or 1");
}

BinaryImage BinaryImage::from_string(int n, std::string_view text) {
    return BinaryImage(n, config_from_string(text));
}

Config BinaryImage::row(int i) const {
    const auto first = bits_.begin() + static_cast<std::ptrdiff_t>(i - 1) * n_;
    return Config(first, first + n_);
}

Config BinaryImage::gather(std::span<const int> pixels) const {
    Config out;
    out.reserve(pixels.size());
    for (int k : pixels) out.push_back(bits_[static_cast<std::size_t>(k - 1)]);
    return out;
}

std::string BinaryImage::to_string() const { return config_to_string(bits_); }

std::string config_to_string(const Config& c) {
    std::string s(c.size(), '0');
    for (std::size_t t = 0; t < c.size(); ++t)
        if (c[t]) s[t] = '1';
    return s;
}

Config config_from_string(std::string_view text) {
    Config c;
    c.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1')
            throw precondition_error(std::string("invalid pixel character '") + ch + "'");
        c.push_back(ch == '1' ? 1 : 0);
    }
    return c;
}

// ---------------------------------------------------------------------------

Region Region::row_prefix(int n, int i) {
    if (n < 2 || i < 1 || i > n - 1)
        throw precondition_error("row prefix needs 1 <= i <= n-1 (i=" + std::to_string(i) +
                                 ", n=" + std::to_string(n) + ")");
    return Region(Kind::row_prefix, n, i);
}

Region Region::rectangle(int n, int top, int left, int height, int width) {
    if (height < 1 || width < 1 || top < 1 || left < 1 || top + height - 1 > n ||
        left + width - 1 > n)
        throw precondition_error("rectangle does not fit in the " + std::to_string(n) + "x" +
                                 std::to_string(n) + " grid");
    return Region(Kind::rectangle, n, top, left, height, width);
}

Region Region::pixel_prefix(int n, int k) {
    if (k < 1 || k > n * n - 1)
        throw precondition_error("pixel prefix needs 1 <= k <= n^2-1 (k=" + std::to_string(k) +
                                 ")");
    return Region(Kind::pixel_prefix, n, k);
}

namespace {

int parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw precondition_error("expected an integer, got '" + std::string(s) + "'");
    return value;
}

} // namespace

Region Region::parse(int n, std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw precondition_error("region must look like row:i, pixel:k or rect:t,l,h,w");
    const auto kind = text.substr(0, colon);
    auto rest = text.substr(colon + 1);
    if (kind == "row") return row_prefix(n, parse_int(rest));
    if (kind == "pixel") return pixel_prefix(n, parse_int(rest));
    if (kind == "rect") {
        int v[4];
        for (int t = 0; t < 4; ++t) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (t == 3))
                throw precondition_error("rect region needs four comma-separated integers");
            v[t] = parse_int(rest.substr(0, comma));
            if (t < 3) rest = rest.substr(comma + 1);
        }
        return rectangle(n, v[0], v[1], v[2], v[3]);
    }
    throw precondition_error("unknown region kind '" + std::string(kind) + "'");
}

bool Region::contains(int k) const {
    switch (kind_) {
    case Kind::row_prefix:
        return k <= a_ * n_;
    case Kind::pixel_prefix:
        return k <= a_;
    case Kind::rectangle: {
        const auto [r, c] = row_col(n_, k);
        return r >= a_ && r < a_ + c_ && c >= b_ && c < b_ + d_;
    }
    }
    return false;
}

std::vector<int> Region::pixels() const {
    std::vector<int> out;
    for (int k = 1; k <= n_ * n_; ++k)
        if (contains(k)) out.push_back(k);
    return out;
}

std::vector<int> Region::complement() const {
    std::vector<int> out;
    for (int k = 1; k <= n_ * n_; ++k)
        if (!contains(k)) out.push_back(k);
    return out;
}

int Region::size() const {
    switch (kind_) {
    case Kind::row_prefix:
        return a_ * n_;
    case Kind::pixel_prefix:
        return a_;
    case Kind::rectangle:
        return c_ * d_;
    }
    return 0;
}

int Region::boundary_length() const {
    int edges = 0;
    for (int k = 1; k <= n_ * n_; ++k) {
        if (!contains(k)) continue;
        const auto [r, c] = row_col(n_, k);
        const int dr[4] = {-1, 1, 0, 0};
        const int dc[4] = {0, 0, -1, 1};
        for (int t = 0; t < 4; ++t) {
            const int rr = r + dr[t], cc = c + dc[t];
            if (rr < 1 || rr > n_ || cc < 1 || cc > n_ || !contains(flat_index(n_, rr, cc))) ++edges;
        }
    }
    return edges;
}

std::string Region::to_string() const {
    switch (kind_) {
    case Kind::row_prefix:
        return "row:" + std::to_string(a_);
    case Kind::pixel_prefix:
        return "pixel:" + std::to_string(a_);
    case Kind::rectangle:
        return "rect:" + std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_) +
               "," + std::to_string(d_);
    }
    return {};
}

} // namespace imgtn
