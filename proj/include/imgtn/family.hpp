#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "imgtn/image.hpp"

namespace imgtn {

/// Provenance of a family: generator name with its parameters, plus the seed if any.
/// The name is a single whitespace-free token, e.g. `rect:min_side=3`.
struct FamilyMeta {
    std::string name = "custom";
    std::optional<std::uint64_t> seed;

    friend bool operator==(const FamilyMeta&, const FamilyMeta&) = default;
};

/// An explicit finite set f^-1(1) of n x n images. Insertion order is kept so that
/// files round-trip byte for byte; membership is hashed.
class ImageFamily {
public:
    explicit ImageFamily(int n, FamilyMeta meta = {});

    /// Adds a member; returns false if it was already present.
    bool insert(BinaryImage x);
    bool contains(const BinaryImage& x) const { return index_.contains(x); }
    /// The indicator f(x).
    int operator()(const BinaryImage& x) const { return contains(x) ? 1 : 0; }

    int side() const noexcept { return n_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    std::span<const BinaryImage> members() const noexcept { return members_; }
    const FamilyMeta& meta() const noexcept { return meta_; }
    void set_meta(FamilyMeta meta) { meta_ = std::move(meta); }

    friend bool operator==(const ImageFamily& a, const ImageFamily& b) {
        return a.n_ == b.n_ && a.meta_ == b.meta_ && a.members_ == b.members_;
    }

private:
    int n_;
    FamilyMeta meta_;
    std::vector<BinaryImage> members_;
    std::unordered_set<BinaryImage, BinaryImageHash> index_;
};

/// Same set of members, order ignored.
bool same_members(const ImageFamily& a, const ImageFamily& b);

/// Embeds every member in the top-left corner of a larger white grid.
ImageFamily pad_family(const ImageFamily& family, int new_side);

/// Union of two families with the same side.
ImageFamily merge(const ImageFamily& a, const ImageFamily& b);

// Text format:
//   n=<int> name=<token> seed=<int|none>
//   one member per line, n^2 characters in {0,1}, row-major
// Lines starting with '#' are skipped.
void write_family(std::ostream& os, const ImageFamily& family);
ImageFamily read_family(std::istream& is);

void save_family(const ImageFamily& family, const std::filesystem::path& path);
ImageFamily load_family(const std::filesystem::path& path);

} // namespace imgtn
