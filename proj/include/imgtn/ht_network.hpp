#pragma once

#include <algorithm>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "imgtn/error.hpp"
#include "imgtn/factorize.hpp"
#include "imgtn/family.hpp"
#include "imgtn/ht_tree.hpp"

namespace imgtn {

/// Node-function form. `generalized`: out_m = v M_m u^T with an l x l matrix M_m
/// (channels mix in pooling). `diagonal`: out_m = V_m (u . v)^T, element-wise pooling.
enum class HTForm { generalized, diagonal };

/// Generalized pooling + 1x1 convolution for one node: out_m = v^T M_m u.
template <typename Scalar, typename DerivedU, typename DerivedV>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pool_generalized(
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> transfer,
    const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(static_cast<Eigen::Index>(transfer.size()));
    for (std::size_t m = 0; m < transfer.size(); ++m)
        out(static_cast<Eigen::Index>(m)) = v.dot(transfer[m] * u);
    return out;
}

/// Element-wise product pooling + 1x1 convolution: out_m = V_m . (u (*) v).
template <typename Scalar, typename DerivedU, typename DerivedV>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pool_diagonal(
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> weights,
    const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
    const auto product = u.cwiseProduct(v).eval();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t m = 0; m < weights.size(); ++m) out(static_cast<Eigen::Index>(m)) = weights[m].dot(product);
    return out;
}

/// kron(v, u)[r * l + c] = v_r u_c, so that v^T M u = vec_rowmajor(M) . kron(v, u).
template <typename DerivedU, typename DerivedV>
auto outer_flat(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
    using Scalar = typename DerivedU::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(u.size() * v.size());
    for (Eigen::Index r = 0; r < v.size(); ++r) out.segment(r * u.size(), u.size()) = v(r) * u;
    return out;
}

/// ConvAC / hierarchical Tucker network on the complete binary tree. Layer 1 emits a
/// fixed pixel encoding; every other node stores one weight row per output channel:
/// the row-major flattening of M_m (length l_{i-1}^2) in generalized form, or V_m
/// (length l_{i-1}) in diagonal form. The root has a single channel.
///
/// Leaf encoding: generalized form emits (1 0) for black and (0 1) for white. The
/// diagonal form has l_1 = 4 and emits that basis vector tiled (b0 b1 b0 b1) when the
/// leaf is the first child of its parent and entry-repeated (b0 b0 b1 b1) otherwise.
template <typename Scalar = double>
class HTNetwork {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    /// `channels[i-1]` is l_i for i = 1 .. 2 log2 n + 1. Weights start at zero.
    HTNetwork(int n, HTForm form, std::vector<Eigen::Index> channels)
        : tree_(n), form_(form), channels_(std::move(channels)) {
        if (static_cast<int>(channels_.size()) != tree_.layers())
            throw precondition_error("need one channel count per layer");
        if (channels_.front() != (form_ == HTForm::generalized ? 2 : 4))
            throw precondition_error("leaf layer must have 2 channels (generalized) or 4 (diagonal)");
        if (channels_.back() != 1) throw precondition_error("root layer must have exactly 1 channel");
        for (auto l : channels_)
            if (l < 1) throw precondition_error("channel counts must be positive");
        weights_.resize(static_cast<std::size_t>(tree_.layers()) + 1);
        for (int i = 2; i <= tree_.layers(); ++i)
            weights_[static_cast<std::size_t>(i)].assign(tree_.layer_size(i),
                                                         Matrix::Zero(this->channels(i), input_width(i)));
    }

    int side() const noexcept { return tree_.side(); }
    HTForm form() const noexcept { return form_; }
    const TreeStructure& tree() const noexcept { return tree_; }
    int layers() const noexcept { return tree_.layers(); }

    Eigen::Index channels(int i) const { return channels_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<Eigen::Index>& channel_counts() const noexcept { return channels_; }

    /// Length of one weight row at layer i.
    Eigen::Index input_width(int i) const {
        const auto l = channels(i - 1);
        return form_ == HTForm::generalized ? l * l : l;
    }

    /// Rows are output channels m.
    Matrix& weights(const TreeIndex& t) { return weight_ref(t); }
    const Matrix& weights(const TreeIndex& t) const { return const_cast<HTNetwork*>(this)->weight_ref(t); }

    /// M_m of a generalized node: rows index the second child's channel (v), columns the first (u).
    Matrix transfer_matrix(const TreeIndex& t, Eigen::Index m) const {
        if (form_ != HTForm::generalized) throw precondition_error("transfer matrices exist only in generalized form");
        const auto l = channels(t.layer - 1);
        Matrix out(l, l);
        const auto& w = weights(t);
        for (Eigen::Index r = 0; r < l; ++r) out.row(r) = w.row(m).segment(r * l, l);
        return out;
    }

    void set_transfer_matrix(const TreeIndex& t, Eigen::Index m, const Matrix& mat) {
        if (form_ != HTForm::generalized) throw precondition_error("transfer matrices exist only in generalized form");
        const auto l = channels(t.layer - 1);
        if (mat.rows() != l || mat.cols() != l) throw precondition_error("transfer matrix has the wrong shape");
        auto& w = weights(t);
        for (Eigen::Index r = 0; r < l; ++r) w.row(m).segment(r * l, l) = mat.row(r);
    }

    Vector leaf_output(const TreeIndex& leaf, bool black) const {
        Vector base(2);
        base << Scalar(black ? 1 : 0), Scalar(black ? 0 : 1);
        if (form_ == HTForm::generalized) return base;
        Vector out(4);
        if (tree_.is_first_child(leaf))
            out << base(0), base(1), base(0), base(1);
        else
            out << base(0), base(0), base(1), base(1);
        return out;
    }

    /// Output of one node given its children's outputs.
    Vector node_output(const TreeIndex& t, const Vector& u, const Vector& v) const {
        const auto& w = weights(t);
        if (form_ == HTForm::generalized) return w * outer_flat(u, v);
        return w * u.cwiseProduct(v);
    }

private:
    Matrix& weight_ref(const TreeIndex& t) {
        if (t.layer < 2) throw precondition_error("leaves carry no weights");
        return weights_.at(static_cast<std::size_t>(t.layer)).at(tree_.position(t));
    }

    TreeStructure tree_;
    HTForm form_;
    std::vector<Eigen::Index> channels_;
    std::vector<std::vector<Matrix>> weights_; // [layer][position]
};

/// Bottom-up evaluation; returns the root scalar.
template <typename Scalar>
Scalar ht_eval(const HTNetwork<Scalar>& net, const BinaryImage& x) {
    using Vector = typename HTNetwork<Scalar>::Vector;
    if (x.side() != net.side())
        throw precondition_error("image side " + std::to_string(x.side()) +
                                 " does not match network side " + std::to_string(net.side()));
    const auto& tree = net.tree();
    std::vector<Vector> below, above;
    for (const auto& leaf : tree.layer(1)) below.push_back(net.leaf_output(leaf, x.at(leaf.j, leaf.k)));
    for (int i = 2; i <= tree.layers(); ++i) {
        above.clear();
        for (const auto& t : tree.layer(i)) {
            const auto kids = tree.children(t);
            above.push_back(net.node_output(t, below[tree.position(kids[0])], below[tree.position(kids[1])]));
        }
        std::swap(below, above);
    }
    return below.front()(0);
}

/// A built network plus the numerical rank of F_S found at every node (index [i-1][position]).
template <typename Scalar>
struct HTBuild {
    HTNetwork<Scalar> network;
    std::vector<std::vector<Eigen::Index>> node_ranks;
};

/// Exact generalized-form network for the family's indicator, built leaves to root.
/// Each node gets an orthonormal basis of the column space of F_S restricted to the
/// support configurations that occur among members; its weights are the coordinates of
/// that basis in the product of the children's bases. l_i is the largest node rank in
/// layer i; narrower nodes are zero-padded. n must be a power of two.
template <typename Scalar = double>
HTBuild<Scalar> ht_build(const ImageFamily& family, double tol = 1e-9) {
    using Matrix = typename HTNetwork<Scalar>::Matrix;
    const int n = family.side();
    const TreeStructure tree(n);
    const int layers = tree.layers();
    const auto members = family.members();
    const std::size_t m = members.size();

    if (family.empty()) {
        std::vector<Eigen::Index> channels(static_cast<std::size_t>(layers), 1);
        channels.front() = 2;
        std::vector<std::vector<Eigen::Index>> ranks(static_cast<std::size_t>(layers));
        for (int i = 1; i <= layers; ++i) ranks[static_cast<std::size_t>(i - 1)].assign(tree.layer_size(i), 0);
        return {HTNetwork<Scalar>(n, HTForm::generalized, std::move(channels)), std::move(ranks)};
    }

    struct NodeData {
        std::vector<int> config; // member -> support configuration id
        Matrix basis;            // configurations x l_i (zero-padded)
    };
    std::vector<std::vector<NodeData>> data(static_cast<std::size_t>(layers) + 1);
    std::vector<std::vector<Eigen::Index>> ranks(static_cast<std::size_t>(layers));
    std::vector<Eigen::Index> channels(static_cast<std::size_t>(layers), 0);
    std::vector<std::vector<Matrix>> weights(static_cast<std::size_t>(layers) + 1);

    // Column space of F_S over its occurring rows: returns the rank-r orthonormal basis.
    auto column_basis = [&](const TreeIndex& t, const std::vector<int>& config, int rows) -> Matrix {
        if (t.layer == layers) return Matrix::Ones(rows, 1);
        const auto inside = tree.support_pixels(t);
        std::vector<int> outside;
        for (int k = 1; k <= n * n; ++k)
            if (!std::binary_search(inside.begin(), inside.end(), k)) outside.push_back(k);
        std::map<Config, int> complement;
        std::vector<int> column(m);
        for (std::size_t p = 0; p < m; ++p)
            column[p] = complement.emplace(members[p].gather(outside), static_cast<int>(complement.size())).first->second;
        std::map<std::vector<int>, int> distinct_columns;
        std::vector<std::vector<int>> pattern(complement.size());
        for (std::size_t p = 0; p < m; ++p) pattern[static_cast<std::size_t>(column[p])].push_back(config[p]);
        for (auto& pat : pattern) {
            std::sort(pat.begin(), pat.end());
            distinct_columns.emplace(pat, static_cast<int>(distinct_columns.size()));
        }
        Matrix b = Matrix::Zero(rows, static_cast<Eigen::Index>(distinct_columns.size()));
        for (const auto& [pat, id] : distinct_columns)
            for (int row : pat) b(row, id) = Scalar(1);
        Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU);
        if (svd.info() != Eigen::Success)
            throw numerical_error("SVD failed on a " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                  " node unfolding");
        return svd.matrixU().leftCols(numerical_rank(svd.singularValues(), tol));
    };

    // Leaves: configuration id 0 = black, 1 = white, basis = identity.
    {
        auto& leaves = data[1];
        for (const auto& t : tree.layer(1)) {
            NodeData node;
            node.config.resize(m);
            for (std::size_t p = 0; p < m; ++p) node.config[p] = members[p].at(t.j, t.k) ? 0 : 1;
            node.basis = Matrix::Identity(2, 2);
            ranks[0].push_back(column_basis(t, node.config, 2).cols());
            leaves.push_back(std::move(node));
        }
        channels[0] = 2;
    }

    for (int i = 2; i <= layers; ++i) {
        const auto nodes = tree.layer(i);
        std::vector<Matrix> bases(nodes.size());
        auto& current = data[static_cast<std::size_t>(i)];
        current.resize(nodes.size());
        for (std::size_t pos = 0; pos < nodes.size(); ++pos) {
            const auto kids = tree.children(nodes[pos]);
            const auto& a = data[static_cast<std::size_t>(i - 1)][tree.position(kids[0])];
            const auto& b = data[static_cast<std::size_t>(i - 1)][tree.position(kids[1])];
            std::map<std::pair<int, int>, int> ids;
            for (std::size_t p = 0; p < m; ++p) ids.emplace(std::make_pair(a.config[p], b.config[p]), 0);
            int next = 0;
            for (auto& [key, id] : ids) id = next++;
            auto& node = current[pos];
            node.config.resize(m);
            for (std::size_t p = 0; p < m; ++p) node.config[p] = ids[{a.config[p], b.config[p]}];
            bases[pos] = column_basis(nodes[pos], node.config, next);
            ranks[static_cast<std::size_t>(i - 1)].push_back(bases[pos].cols());
        }
        const auto width = *std::max_element(ranks[static_cast<std::size_t>(i - 1)].begin(),
                                             ranks[static_cast<std::size_t>(i - 1)].end());
        channels[static_cast<std::size_t>(i - 1)] = std::max<Eigen::Index>(width, 1);
        const auto l_in = channels[static_cast<std::size_t>(i - 2)];
        const auto l_out = channels[static_cast<std::size_t>(i - 1)];

        auto& layer_weights = weights[static_cast<std::size_t>(i)];
        layer_weights.resize(nodes.size());
        for (std::size_t pos = 0; pos < nodes.size(); ++pos) {
            const auto kids = tree.children(nodes[pos]);
            const auto& a = data[static_cast<std::size_t>(i - 1)][tree.position(kids[0])];
            const auto& b = data[static_cast<std::size_t>(i - 1)][tree.position(kids[1])];
            auto& node = current[pos];
            const Eigen::Index rows = bases[pos].rows();

            // Representative (first-child config, second-child config) for each node config.
            std::vector<std::pair<int, int>> split(static_cast<std::size_t>(rows));
            for (std::size_t p = 0; p < m; ++p)
                split[static_cast<std::size_t>(node.config[p])] = {a.config[p], b.config[p]};
            Matrix products(rows, l_in * l_in);
            for (Eigen::Index c = 0; c < rows; ++c) {
                const auto [ca, cb] = split[static_cast<std::size_t>(c)];
                products.row(c) = outer_flat(a.basis.row(ca).transpose(), b.basis.row(cb).transpose()).transpose();
            }
            Matrix w = Matrix::Zero(l_out, l_in * l_in);
            w.topRows(bases[pos].cols()) = bases[pos].transpose() * products;
            layer_weights[pos] = std::move(w);

            node.basis = Matrix::Zero(rows, l_out);
            node.basis.leftCols(bases[pos].cols()) = bases[pos];
        }
        // Children's data are no longer needed.
        data[static_cast<std::size_t>(i - 1)].clear();
    }

    HTNetwork<Scalar> net(n, HTForm::generalized, channels);
    for (int i = 2; i <= layers; ++i)
        for (const auto& t : tree.layer(i))
            net.weights(t) = std::move(weights[static_cast<std::size_t>(i)][tree.position(t)]);
    return {std::move(net), std::move(ranks)};
}

template <typename Scalar = double>
HTNetwork<Scalar> ht_from_family(const ImageFamily& family, double tol = 1e-9) {
    return ht_build<Scalar>(family, tol).network;
}

/// Rewrites every generalized node as a diagonal one at the price of squaring channel
/// counts: output channel m' of a node with l channels copies original channel
/// m' mod l when the node is its parent's first child (its output is tiled) and
/// m' div l when it is the second child (entries repeated). The copied weight row is
/// the row-major flattening of M, so V . (tiled u (*) repeated v) = v M u^T.
template <typename Scalar>
HTNetwork<Scalar> diagonalize(const HTNetwork<Scalar>& net) {
    if (net.form() != HTForm::generalized) throw precondition_error("network is already in diagonal form");
    std::vector<Eigen::Index> squared;
    for (auto l : net.channel_counts()) squared.push_back(l * l);
    HTNetwork<Scalar> out(net.side(), HTForm::diagonal, squared);
    const auto& tree = net.tree();
    for (int i = 2; i <= tree.layers(); ++i) {
        const auto l = net.channels(i);
        for (const auto& t : tree.layer(i)) {
            const auto& src = net.weights(t);
            auto& dst = out.weights(t);
            const bool first = tree.is_first_child(t);
            for (Eigen::Index mp = 0; mp < dst.rows(); ++mp) dst.row(mp) = src.row(first ? mp % l : mp / l);
        }
    }
    return out;
}

/// Embeds an image into the top-left corner of a larger white grid.
BinaryImage pad_image(const BinaryImage& x, int new_side);

/// Versioned text format: `imgtn-ht 1`, `n <n>`, `form generalized|diagonal`,
/// `channels l_1 ... l_L`, then one line `i j k m w...` per non-leaf node and output
/// channel in (i, j, k, m) lexicographic order.
void write_ht(std::ostream& os, const HTNetwork<double>& net);
HTNetwork<double> read_ht(std::istream& is);

} // namespace imgtn
