#include "imgtn/dense_oracle.hpp"

#include <map>

#include <Eigen/LU>

#include "imgtn/error.hpp"

namespace imgtn {

namespace {

BinaryImage base_image(const ImageFamily& family, const Bipartition& b,
                       const std::optional<FixedRowConstraint>& constraint) {
    if (b.n != family.side()) throw precondition_error("bipartition side does not match the family");
    b.validate();
    BinaryImage x(b.n);
    if (!b.fixed.empty()) {
        if (!constraint || constraint->y.size() != b.fixed.size())
            throw structural_error("pinned pixels need a matching constraint");
        for (std::size_t t = 0; t < b.fixed.size(); ++t) x.set_pixel(b.fixed[t], constraint->y[t] != 0);
    }
    return x;
}

void assign(BinaryImage& x, const std::vector<int>& pixels, std::uint64_t index) {
    const auto width = pixels.size();
    for (std::size_t t = 0; t < width; ++t) x.set_pixel(pixels[t], (index >> (width - 1 - t)) & 1u);
}

} // namespace

Eigen::MatrixXd dense_unfolding_oracle(const ImageFamily& family, const Bipartition& bipartition,
                                       const std::optional<FixedRowConstraint>& constraint) {
    if (bipartition.left.size() > 12 || bipartition.right.size() > 12)
        throw precondition_error("dense oracle limited to 12 pixels per side");
    BinaryImage x = base_image(family, bipartition, constraint);
    const std::uint64_t rows = std::uint64_t{1} << bipartition.left.size();
    const std::uint64_t cols = std::uint64_t{1} << bipartition.right.size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::uint64_t r = 0; r < rows; ++r) {
        assign(x, bipartition.left, r);
        for (std::uint64_t c = 0; c < cols; ++c) {
            assign(x, bipartition.right, c);
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = family(x);
        }
    }
    return m;
}

std::size_t dense_oracle_rank(const ImageFamily& family, const Bipartition& bipartition,
                              const std::optional<FixedRowConstraint>& constraint) {
    if (bipartition.left.size() + bipartition.right.size() > 24)
        throw precondition_error("dense oracle limited to 24 free pixels");
    BinaryImage x = base_image(family, bipartition, constraint);
    const std::uint64_t rows = std::uint64_t{1} << bipartition.left.size();
    const std::uint64_t cols = std::uint64_t{1} << bipartition.right.size();

    std::map<std::uint64_t, Eigen::Index> row_id, col_id;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ones;
    for (std::uint64_t r = 0; r < rows; ++r) {
        assign(x, bipartition.left, r);
        for (std::uint64_t c = 0; c < cols; ++c) {
            assign(x, bipartition.right, c);
            if (family.contains(x)) {
                ones.emplace_back(r, c);
                row_id.emplace(r, 0);
                col_id.emplace(c, 0);
            }
        }
    }
    if (ones.empty()) return 0;
    Eigen::Index next = 0;
    for (auto& [key, id] : row_id) id = next++;
    next = 0;
    for (auto& [key, id] : col_id) id = next++;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(row_id.size()),
                                              static_cast<Eigen::Index>(col_id.size()));
    for (auto [r, c] : ones) m(row_id[r], col_id[c]) = 1.0;
    return static_cast<std::size_t>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
}

} // namespace imgtn
