#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imgtn/certify.hpp"
#include "imgtn/generators.hpp"
#include "imgtn/ht_network.hpp"
#include "imgtn/scaling.hpp"
#include "imgtn/tensor_train.hpp"

namespace imgtn {

/// Sum, over the configurations y of the row holding pixel k that occur among members,
/// of the rank of the block of F_{B_k} with that row pinned. Splitting y at pixel k into
/// (Y1, Y2) does not change the blocks, so this upper-bounds rank F_{B_k}; at k = i n it
/// is the Lemma-1 bound for F_i.
std::size_t block_partition_bound(const ImageFamily& family, int k, int jobs = 1);

struct BondRow {
    int n = 0;
    int k = 0;
    Eigen::Index bond = 0;       ///< l_k of the rounded train
    std::size_t exact_rank = 0;  ///< rank F_{B_k} by integer elimination
    std::size_t block_bound = 0; ///< block_partition_bound
};

struct Theorem2Report {
    ScalingReport max_bond; ///< max_k l_k against n
    std::vector<BondRow> bonds;
};

/// Builds the train for each n and tabulates bonds against exact ranks and block bounds.
Theorem2Report verify_theorem2(const GeneratorSpec& spec, std::span<const int> ns, int jobs = 1);

struct LayerRow {
    int n = 0;
    int layer = 0;
    Eigen::Index channels = 0;          ///< l_i of the built network
    Eigen::Index min_node_rank = 0;     ///< per-node numerical ranks, min over the layer
    Eigen::Index max_node_rank = 0;
    std::size_t max_exact_rank = 0;     ///< max_{j,k} rank F_{S_{i,j,k}} by integer elimination
    int perimeter = 0;                  ///< |dS| of a layer-i support
};

struct Theorem1Report {
    std::vector<LayerRow> layers;
    /// Per n: log2 l_i = slope * i + intercept (least squares), and the smallest offset
    /// c' with log2 l_i <= slope * i + c' on every layer.
    struct Fit {
        int n = 0;
        LinearFit fit;
        double offset = 0.0;
    };
    std::vector<Fit> fits;
};

Theorem1Report verify_theorem1(const GeneratorSpec& spec, std::span<const int> ns, int jobs = 1);
/// max_{j,k} rank F_{S_{i,j,k}} for layers i = 1 .. 2 log2 n + 1, without building a
/// network. The family is padded to a power of two if needed.
std::vector<std::size_t> layer_exact_ranks(const ImageFamily& family, int jobs = 1);
/// Layer table for one family (padded to a power of two if needed).
std::vector<LayerRow> layer_table(const ImageFamily& family, int jobs = 1);

struct CrossCheck {
    std::size_t probes = 0;
    double max_tt_ht = 0.0; ///< max |tt_eval - ht_eval|
    double max_tt_f = 0.0;  ///< max |tt_eval - f|
    double max_ht_f = 0.0;  ///< max |ht_eval - f|
    int padded_side = 0;
};

/// Evaluates both formats on every member and `random_probes` seeded random images.
CrossCheck tt_ht_cross_check(const ImageFamily& family, std::size_t random_probes = 10000,
                             std::uint64_t seed = 1);

/// Random probe images, deterministic in the seed.
std::vector<BinaryImage> random_images(int n, std::size_t count, std::uint64_t seed);

} // namespace imgtn
