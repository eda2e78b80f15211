#include "imgtn/family.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "imgtn/error.hpp"

namespace imgtn {

ImageFamily::ImageFamily(int n, FamilyMeta meta) : n_(n), meta_(std::move(meta)) {
    if (n <= 0) throw precondition_error("family side must be positive");
}

bool ImageFamily::insert(BinaryImage x) {
    if (x.side() != n_)
        throw precondition_error("member side " + std::to_string(x.side()) +
                                 " does not match family side " + std::to_string(n_));
    if (!index_.insert(x).second) return false;
    members_.push_back(std::move(x));
    return true;
}

bool same_members(const ImageFamily& a, const ImageFamily& b) {
    if (a.side() != b.side() || a.size() != b.size()) return false;
    for (const auto& x : a.members())
        if (!b.contains(x)) return false;
    return true;
}

ImageFamily pad_family(const ImageFamily& family, int new_side) {
    const int n = family.side();
    if (new_side < n) throw precondition_error("cannot pad to a smaller side");
    auto meta = family.meta();
    if (new_side != n) meta.name += ":pad=" + std::to_string(new_side);
    ImageFamily out(new_side, meta);
    for (const auto& x : family.members()) {
        BinaryImage y(new_side);
        for (int r = 1; r <= n; ++r)
            for (int c = 1; c <= n; ++c) y.set(r, c, x.at(r, c));
        out.insert(std::move(y));
    }
    return out;
}

ImageFamily merge(const ImageFamily& a, const ImageFamily& b) {
    if (a.side() != b.side()) throw precondition_error("cannot merge families of different sides");
    ImageFamily out(a.side(), FamilyMeta{a.meta().name + "+" + b.meta().name, std::nullopt});
    for (const auto& x : a.members()) out.insert(x);
    for (const auto& x : b.members()) out.insert(x);
    return out;
}

void write_family(std::ostream& os, const ImageFamily& family) {
    os << "n=" << family.side() << " name=" << family.meta().name << " seed=";
    if (family.meta().seed)
        os << *family.meta().seed;
    else
        os << "none";
    os << '\n';
    for (const auto& x : family.members()) os << x.to_string() << '\n';
}

namespace {

template <class Int>
Int parse_number(std::string_view s, std::size_t line, const char* field) {
    Int value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw parse_error(line, std::string("bad value for ") + field + ": '" + std::string(s) + "'");
    return value;
}

std::string_view expect_field(std::istringstream& ss, std::string& token, const char* key,
                              std::size_t line) {
    if (!(ss >> token)) throw parse_error(line, std::string("header is missing ") + key);
    const std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0)
        throw parse_error(line, "expected '" + prefix + "...', got '" + token + "'");
    return std::string_view(token).substr(prefix.size());
}

} // namespace

ImageFamily read_family(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<ImageFamily> family;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '#') continue;
        if (!family) {
            std::istringstream ss(line);
            std::string token;
            const int n = parse_number<int>(expect_field(ss, token, "n", lineno), lineno, "n");
            if (n <= 0) throw parse_error(lineno, "n must be positive");
            FamilyMeta meta;
            meta.name = std::string(expect_field(ss, token, "name", lineno));
            if (meta.name.empty()) throw parse_error(lineno, "empty name");
            const auto seed = expect_field(ss, token, "seed", lineno);
            if (seed != "none") meta.seed = parse_number<std::uint64_t>(seed, lineno, "seed");
            if (ss >> token) throw parse_error(lineno, "unexpected header field '" + token + "'");
            family.emplace(n, std::move(meta));
            continue;
        }
        const int n = family->side();
        if (line.size() != static_cast<std::size_t>(n) * n)
            throw parse_error(lineno, "member has " + std::to_string(line.size()) +
                                          " pixels, expected " + std::to_string(n * n));
        Config bits;
        try {
            bits = config_from_string(line);
        } catch (const precondition_error& e) {
            throw parse_error(lineno, e.what());
        }
        if (!family->insert(BinaryImage(n, std::move(bits))))
            throw parse_error(lineno, "duplicate member");
    }
    if (!family) throw parse_error(lineno + 1, "missing header line");
    return std::move(*family);
}

void save_family(const ImageFamily& family, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw precondition_error("cannot write " + path.string());
    write_family(os, family);
}

ImageFamily load_family(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw precondition_error("cannot open " + path.string());
    return read_family(is);
}

} // namespace imgtn
