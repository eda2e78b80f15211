#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imgtn/factorize.hpp"
#include "imgtn/family.hpp"
#include "imgtn/generators.hpp"
#include "imgtn/scaling.hpp"
#include "imgtn/unfolding.hpp"

namespace imgtn {

/// Distinct configurations of row i among members, ascending.
std::vector<Config> row_configurations(const ImageFamily& family, int i);

/// rank F_{i,y}; zero when no member has y in row i.
std::size_t fixed_row_rank(const ImageFamily& family, int i, const Config& y);
/// rank F_i: rows 1..i against rows i+1..n.
std::size_t row_prefix_rank(const ImageFamily& family, int i);
/// rank F_A.
std::size_t region_rank(const ImageFamily& family, const Region& region);

struct FixedRowRank {
    int row = 0;
    Config y;
    std::size_t rank = 0;
};

/// Row-configuration counts c_i and fixed-row ranks rank F_{i,y} with their maxima.
struct AssumptionReport {
    std::vector<std::size_t> config_counts; ///< entry i-1 is c_i
    std::size_t max_config_count = 0;
    std::vector<FixedRowRank> ranks; ///< every occurring (i, y), i ascending, y ascending
    std::size_t max_rank = 0;
};

/// Fills config_counts and max_config_count only.
AssumptionReport certify_assumption1(const ImageFamily& family);
/// Fills ranks and max_rank only.
AssumptionReport certify_assumption2(const ImageFamily& family, int jobs = 1);
AssumptionReport certify_assumptions(const ImageFamily& family, int jobs = 1);

struct Lemma1Row {
    int row = 0;
    std::size_t rank = 0;  ///< rank F_i
    std::size_t bound = 0; ///< sum over occurring y of rank F_{i,y}
    bool holds = true;
};

/// rank F_i <= sum_y rank F_{i,y} for i = 1..n-1, both sides exact.
std::vector<Lemma1Row> verify_lemma1(const ImageFamily& family, int jobs = 1);

struct RegionRank {
    std::string region;
    int size = 0;
    int boundary = 0;
    std::size_t rank = 0;
};

struct RegionProfile {
    std::vector<RegionRank> entries;
    std::optional<LinearFit> log_rank_vs_boundary; ///< log2 rank = a |dA| + b
    std::optional<LinearFit> log_rank_vs_size;     ///< log2 rank = a |A| + b
};

RegionProfile region_rank_profile(const ImageFamily& family, std::span<const Region> regions,
                                  int jobs = 1);

struct BaselineResult {
    std::size_t rank = 0;
    std::size_t cap = 0; ///< min(m, 2^|A|, 2^|complement|)
};

BaselineResult random_baseline_profile(int n, std::uint64_t m, std::uint64_t seed, const Region& cut);

/// Local features of a region: the factorization of F_A plus per-factor support sizes.
struct FeatureDecomposition {
    Unfolding unfolding;
    RankFactorization<double> factors;
    std::vector<std::size_t> left_support;  ///< nonzeros of left factor t
    std::vector<std::size_t> right_support; ///< nonzeros of right factor t
    std::vector<bool> left_is_01;           ///< left factor t, rescaled, is a 0/1 vector
};

FeatureDecomposition feature_decomposition(const ImageFamily& family, const Region& region,
                                           double tol = 1e-9);

/// Scalar measurements that scaling experiments can track.
enum class Quantity {
    member_count,
    max_row_configs,     ///< max_i c_i
    max_fixed_row_rank,  ///< max_{i,y} rank F_{i,y}
    max_row_prefix_rank, ///< max_i rank F_i
    middle_cut_rank,     ///< rank F_{n/2}
    max_prefix_rank,     ///< max_k rank F_{B_k}, the minimal tensor-train bond
};

Quantity parse_quantity(const std::string& name);
std::string quantity_name(Quantity q);

double measure(const ImageFamily& family, Quantity q, int jobs = 1);

/// Measures q on generate(spec, n) for each n; ns ascending with at least two entries.
ScalingReport scaling_experiment(const GeneratorSpec& spec, std::span<const int> ns, Quantity q,
                                 int jobs = 1);

} // namespace imgtn
