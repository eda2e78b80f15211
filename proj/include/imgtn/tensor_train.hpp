#pragma once

#include <algorithm>
#include <array>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "imgtn/error.hpp"
#include "imgtn/factorize.hpp"
#include "imgtn/family.hpp"

namespace imgtn {

/// Matrix-product representation of a function on {0,1}^(n^2): pixel k carries the
/// pair (M_{k,0}, M_{k,1}) of l_{k-1} x l_k matrices and an image y maps to
/// M_{1,y_1} M_{2,y_2} ... M_{n^2,y_{n^2}}, with l_0 = l_{n^2} = 1.
template <typename Scalar = double>
class TensorTrain {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
    using Core = std::array<Matrix, 2>;

    TensorTrain() = default;

    TensorTrain(int n, std::vector<Core> cores) : n_(n), cores_(std::move(cores)) { validate(); }

    /// The zero function with every bond dimension 1.
    static TensorTrain zero(int n) {
        std::vector<Core> cores(static_cast<std::size_t>(n) * n,
                                Core{Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
        return TensorTrain(n, std::move(cores));
    }

    /// Rank-one train of the indicator of a single image.
    static TensorTrain elementary(const BinaryImage& x) {
        std::vector<Core> cores;
        cores.reserve(static_cast<std::size_t>(x.pixel_count()));
        for (int k = 1; k <= x.pixel_count(); ++k) {
            Core c{Matrix::Zero(1, 1), Matrix::Zero(1, 1)};
            c[x.pixel(k) ? 1 : 0](0, 0) = Scalar(1);
            cores.push_back(std::move(c));
        }
        return TensorTrain(x.side(), std::move(cores));
    }

    int side() const noexcept { return n_; }
    int length() const noexcept { return static_cast<int>(cores_.size()); }

    /// 1-based pixel index.
    const Core& core(int k) const { return cores_.at(static_cast<std::size_t>(k - 1)); }
    Core& core(int k) { return cores_.at(static_cast<std::size_t>(k - 1)); }

    /// l_0, l_1, ..., l_{n^2}.
    std::vector<Eigen::Index> bond_dims() const {
        std::vector<Eigen::Index> dims;
        dims.reserve(cores_.size() + 1);
        dims.push_back(cores_.empty() ? 1 : cores_.front()[0].rows());
        for (const auto& c : cores_) dims.push_back(c[0].cols());
        return dims;
    }

    Eigen::Index max_bond() const {
        const auto dims = bond_dims();
        return *std::max_element(dims.begin(), dims.end());
    }

    void validate() const {
        if (n_ <= 0 || cores_.size() != static_cast<std::size_t>(n_) * n_)
            throw precondition_error("a tensor train on an n x n image needs n^2 cores");
        for (std::size_t k = 0; k < cores_.size(); ++k) {
            const auto& c = cores_[k];
            if (c[0].rows() != c[1].rows() || c[0].cols() != c[1].cols())
                throw precondition_error("core " + std::to_string(k + 1) + ": M_0 and M_1 differ in shape");
            if (k + 1 < cores_.size() && c[0].cols() != cores_[k + 1][0].rows())
                throw precondition_error("cores " + std::to_string(k + 1) + " and " +
                                         std::to_string(k + 2) + " do not chain");
        }
        if (cores_.front()[0].rows() != 1 || cores_.back()[0].cols() != 1)
            throw precondition_error("boundary bond dimensions must be 1");
    }

private:
    int n_ = 0;
    std::vector<Core> cores_;
};

/// Left-to-right matrix product; O(n^2 max_k l_k^2).
template <typename Scalar>
Scalar tt_eval(const TensorTrain<Scalar>& tt, const BinaryImage& x) {
    if (x.side() != tt.side())
        throw precondition_error("image side " + std::to_string(x.side()) +
                                 " does not match train side " + std::to_string(tt.side()));
    typename TensorTrain<Scalar>::RowVector acc = TensorTrain<Scalar>::RowVector::Ones(1);
    for (int k = 1; k <= tt.length(); ++k) acc = acc * tt.core(k)[x.pixel(k) ? 1 : 0];
    return acc(0);
}

/// Block-diagonal sum: evaluates to tt_eval(a, x) + tt_eval(b, x).
template <typename Scalar>
TensorTrain<Scalar> tt_add(const TensorTrain<Scalar>& a, const TensorTrain<Scalar>& b) {
    using Matrix = typename TensorTrain<Scalar>::Matrix;
    if (a.side() != b.side()) throw precondition_error("cannot add trains of different sides");
    const int d = a.length();
    std::vector<typename TensorTrain<Scalar>::Core> cores(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k)
        for (int bit = 0; bit < 2; ++bit) {
            const Matrix& x = a.core(k)[bit];
            const Matrix& y = b.core(k)[bit];
            Matrix& out = cores[static_cast<std::size_t>(k - 1)][bit];
            if (k == 1) {
                out.resize(1, x.cols() + y.cols());
                out << x, y;
            } else if (k == d) {
                out.resize(x.rows() + y.rows(), 1);
                out << x, y;
            } else {
                out = Matrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
                out.topLeftCorner(x.rows(), x.cols()) = x;
                out.bottomRightCorner(y.rows(), y.cols()) = y;
            }
        }
    if (d == 1)
        for (int bit = 0; bit < 2; ++bit)
            cores[0][bit] = a.core(1)[bit] + b.core(1)[bit];
    return TensorTrain<Scalar>(a.side(), std::move(cores));
}

template <typename Scalar>
TensorTrain<Scalar> tt_scale(TensorTrain<Scalar> tt, Scalar alpha) {
    tt.core(1)[0] *= alpha;
    tt.core(1)[1] *= alpha;
    return tt;
}

/// Literal sum of one elementary train per member: every interior bond equals |members|.
/// Memory grows with |members|^2 per core, so this is meant for small families.
template <typename Scalar = double>
TensorTrain<Scalar> tt_sum_of_members(const ImageFamily& family) {
    using Matrix = typename TensorTrain<Scalar>::Matrix;
    const int n = family.side();
    if (family.empty()) return TensorTrain<Scalar>::zero(n);
    const auto m = static_cast<Eigen::Index>(family.size());
    const int d = n * n;
    std::vector<typename TensorTrain<Scalar>::Core> cores(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        const Eigen::Index rows = k == 1 ? 1 : m, cols = k == d ? 1 : m;
        auto& core = cores[static_cast<std::size_t>(k - 1)];
        core = {Matrix::Zero(rows, cols), Matrix::Zero(rows, cols)};
        for (Eigen::Index t = 0; t < m; ++t) {
            const int bit = family.members()[static_cast<std::size_t>(t)].pixel(k) ? 1 : 0;
            core[bit](rows == 1 ? 0 : t, cols == 1 ? 0 : t) = Scalar(1);
        }
    }
    return TensorTrain<Scalar>(n, std::move(cores));
}

/// The same function as tt_sum_of_members with equal prefixes (left of a split point) and
/// equal suffixes (right of it) merged into one bond state. Interior bonds are the counts
/// of distinct member prefixes/suffixes, never more than |members|.
template <typename Scalar = double>
TensorTrain<Scalar> tt_merged_sum_of_members(const ImageFamily& family) {
    using Matrix = typename TensorTrain<Scalar>::Matrix;
    const int n = family.side();
    if (family.empty()) return TensorTrain<Scalar>::zero(n);
    const int d = n * n;
    const auto members = family.members();
    const std::size_t m = members.size();

    // prefix_id[k][t]: state of member t after pixels 1..k; suffix_id[k][t]: pixels k+1..d.
    std::vector<std::vector<int>> prefix_id(static_cast<std::size_t>(d) + 1, std::vector<int>(m, 0));
    std::vector<std::vector<int>> suffix_id(static_cast<std::size_t>(d) + 1, std::vector<int>(m, 0));
    std::vector<int> prefix_count(static_cast<std::size_t>(d) + 1, 1), suffix_count(static_cast<std::size_t>(d) + 1, 1);
    for (int k = 1; k <= d; ++k) {
        std::map<std::pair<int, int>, int> ids;
        for (std::size_t t = 0; t < m; ++t) {
            const auto key = std::make_pair(prefix_id[static_cast<std::size_t>(k - 1)][t], int(members[t].pixel(k)));
            ids.emplace(key, 0);
        }
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        prefix_count[static_cast<std::size_t>(k)] = next;
        for (std::size_t t = 0; t < m; ++t)
            prefix_id[static_cast<std::size_t>(k)][t] =
                ids[{prefix_id[static_cast<std::size_t>(k - 1)][t], int(members[t].pixel(k))}];
    }
    for (int k = d - 1; k >= 0; --k) {
        std::map<std::pair<int, int>, int> ids;
        for (std::size_t t = 0; t < m; ++t)
            ids.emplace(std::make_pair(int(members[t].pixel(k + 1)), suffix_id[static_cast<std::size_t>(k + 1)][t]), 0);
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        suffix_count[static_cast<std::size_t>(k)] = next;
        for (std::size_t t = 0; t < m; ++t)
            suffix_id[static_cast<std::size_t>(k)][t] =
                ids[{int(members[t].pixel(k + 1)), suffix_id[static_cast<std::size_t>(k + 1)][t]}];
    }

    // Cuts 0..split carry prefix states, cuts split+1..d suffix states; core split+1 joins them.
    int split = 0;
    int best = std::numeric_limits<int>::max();
    for (int s = 0; s < d; ++s) {
        int worst = 0;
        for (int k = 0; k <= s; ++k) worst = std::max(worst, prefix_count[static_cast<std::size_t>(k)]);
        for (int k = s + 1; k <= d; ++k) worst = std::max(worst, suffix_count[static_cast<std::size_t>(k)]);
        if (worst < best) {
            best = worst;
            split = s;
        }
    }
    auto bond = [&](int k) {
        return static_cast<Eigen::Index>(k <= split ? prefix_count[static_cast<std::size_t>(k)]
                                                    : suffix_count[static_cast<std::size_t>(k)]);
    };
    auto state = [&](int k, std::size_t t) {
        return static_cast<Eigen::Index>(k <= split ? prefix_id[static_cast<std::size_t>(k)][t]
                                                    : suffix_id[static_cast<std::size_t>(k)][t]);
    };

    std::vector<typename TensorTrain<Scalar>::Core> cores(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        auto& core = cores[static_cast<std::size_t>(k - 1)];
        core = {Matrix::Zero(bond(k - 1), bond(k)), Matrix::Zero(bond(k - 1), bond(k))};
        for (std::size_t t = 0; t < m; ++t)
            core[members[t].pixel(k) ? 1 : 0](state(k - 1, t), state(k, t)) = Scalar(1);
    }
    return TensorTrain<Scalar>(n, std::move(cores));
}

/// Right-to-left orthogonalization followed by a left-to-right truncated-SVD sweep that
/// keeps singular values above tol * largest at every bond. Bond dimensions never grow.
template <typename Scalar>
TensorTrain<Scalar> tt_round(TensorTrain<Scalar> tt, double tol = 1e-9) {
    using Matrix = typename TensorTrain<Scalar>::Matrix;
    if (!(tol > 0.0 && tol < 1.0)) throw precondition_error("tol must lie in (0, 1)");
    const int d = tt.length();

    for (int k = d; k >= 2; --k) {
        auto& core = tt.core(k);
        const Eigen::Index left = core[0].rows(), right = core[0].cols();
        Matrix h(left, 2 * right);
        h << core[0], core[1];
        Eigen::HouseholderQR<Matrix> qr(h.transpose());
        const Eigen::Index r = std::min(2 * right, left);
        Matrix q = qr.householderQ() * Matrix::Identity(2 * right, r);
        Matrix upper = qr.matrixQR().topRows(r);
        for (Eigen::Index c = 0; c < upper.cols(); ++c)
            for (Eigen::Index row = c + 1; row < r; ++row) upper(row, c) = Scalar(0);
        const Matrix rt = upper.transpose();
        core[0] = q.topRows(right).transpose();
        core[1] = q.bottomRows(right).transpose();
        auto& prev = tt.core(k - 1);
        prev[0] = (prev[0] * rt).eval();
        prev[1] = (prev[1] * rt).eval();
    }

    for (int k = 1; k < d; ++k) {
        auto& core = tt.core(k);
        const Eigen::Index left = core[0].rows();
        Matrix v(2 * left, core[0].cols());
        v << core[0], core[1];
        Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success)
            throw numerical_error("SVD failed at bond " + std::to_string(k) + " (" +
                                  std::to_string(v.rows()) + "x" + std::to_string(v.cols()) + ")");
        const Eigen::Index r = std::max<Eigen::Index>(1, numerical_rank(svd.singularValues(), tol));
        const Matrix u = svd.matrixU().leftCols(r);
        const Matrix carry = svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
        core[0] = u.topRows(left);
        core[1] = u.bottomRows(left);
        auto& next = tt.core(k + 1);
        next[0] = (carry * next[0]).eval();
        next[1] = (carry * next[1]).eval();
    }
    return tt;
}

/// Exact train of the family's indicator with minimal bonds l_k = rank F_{B_k}:
/// the merged elementary sum followed by rounding.
template <typename Scalar = double>
TensorTrain<Scalar> tt_from_family(const ImageFamily& family, double tol = 1e-9) {
    if (family.empty()) return TensorTrain<Scalar>::zero(family.side());
    return tt_round(tt_merged_sum_of_members<Scalar>(family), tol);
}

/// Versioned text format: `imgtn-tt 1`, `n <n>`, `bonds l_0 ... l_{n^2}`, then for each
/// pixel k and bit b ascending a line `core k b` followed by one line per matrix row.
/// Values use shortest round-trip decimal form, so reload is bit-exact.
void write_tt(std::ostream& os, const TensorTrain<double>& tt);
TensorTrain<double> read_tt(std::istream& is);

} // namespace imgtn
