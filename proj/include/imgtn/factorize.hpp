#pragma once

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "imgtn/error.hpp"
#include "imgtn/exact_rank.hpp"
#include "imgtn/unfolding.hpp"

namespace imgtn {

/// B = left * right^T, one column per local feature pair.
template <typename Scalar>
struct RankFactorization {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    std::size_t rank = 0;
    Matrix left;  ///< rows indexed by left_configs, column t scaled by sigma_t
    Matrix right; ///< rows indexed by right_configs, orthonormal columns
    Vector singular_values;

    Matrix reconstruct() const { return left * right.transpose(); }
};

/// Number of singular values strictly above tol * largest.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& singular_values, double tol) {
    if (singular_values.size() == 0 || singular_values(0) <= 0) return 0;
    const auto cutoff = tol * singular_values(0);
    return (singular_values.array() > cutoff).count();
}

/// Truncated SVD of the biadjacency. The numerical rank is cross-checked against
/// exact_rank and a mismatch is reported as a numerical_error.
template <typename Scalar = double>
RankFactorization<Scalar> factorize(const Unfolding& unfolding, double tol = 1e-9) {
    using Matrix = typename RankFactorization<Scalar>::Matrix;
    if (!(tol > 0.0 && tol < 1.0)) throw precondition_error("tol must lie in (0, 1)");

    RankFactorization<Scalar> out;
    const auto rows = unfolding.rows(), cols = unfolding.cols();
    out.left.resize(rows, 0);
    out.right.resize(cols, 0);
    if (unfolding.entries.empty()) return out;

    Matrix b = Matrix::Zero(rows, cols);
    for (auto [p, q] : unfolding.entries) b(p, q) = Scalar(1);

    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw numerical_error("SVD did not converge on a " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " unfolding");
    const Eigen::Index r = numerical_rank(svd.singularValues(), tol);
    const std::size_t exact = exact_rank(unfolding);
    if (static_cast<std::size_t>(r) != exact)
        throw numerical_error("SVD rank " + std::to_string(r) + " disagrees with exact rank " +
                              std::to_string(exact) + " on a " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " unfolding");

    Matrix u = svd.matrixU().leftCols(r);
    Matrix v = svd.matrixV().leftCols(r);
    auto sigma = svd.singularValues().head(r).eval();

    // Sign convention: first significant entry of each right factor is positive.
    for (Eigen::Index t = 0; t < r; ++t) {
        Eigen::Index first = 0;
        while (first < cols && std::abs(v(first, t)) <= 1e-12) ++first;
        if (first < cols && v(first, t) < 0) {
            v.col(t) *= Scalar(-1);
            u.col(t) *= Scalar(-1);
        }
    }

    // Descending sigma; near-ties broken by first nonzero coordinate of the left factor.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
    std::iota(order.begin(), order.end(), 0);
    auto first_nonzero = [&](Eigen::Index t) {
        Eigen::Index i = 0;
        while (i < rows && std::abs(u(i, t)) <= 1e-12) ++i;
        return i;
    };
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (std::abs(sigma(a) - sigma(b)) > 1e-9 * sigma(0)) return sigma(a) > sigma(b);
        return first_nonzero(a) < first_nonzero(b);
    });

    out.rank = static_cast<std::size_t>(r);
    out.left.resize(rows, r);
    out.right.resize(cols, r);
    out.singular_values.resize(r);
    for (Eigen::Index t = 0; t < r; ++t) {
        const auto src = order[static_cast<std::size_t>(t)];
        out.singular_values(t) = sigma(src);
        out.left.col(t) = u.col(src) * sigma(src);
        out.right.col(t) = v.col(src);
    }
    return out;
}

} // namespace imgtn
