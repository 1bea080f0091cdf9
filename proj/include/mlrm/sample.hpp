#pragma once

// Dataset-level redundancy: does a batch of samples add anything to what a
// corpus already covers? Measures are computed against a frame fitted once on
// the base corpus and then frozen, so adding data can only move the measure,
// never the yardstick.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlrm/metrics.hpp"
#include "mlrm/pca.hpp"
#include "mlrm/types.hpp"

namespace mlrm {

inline constexpr std::uint64_t kDefaultMaxPairs = 2'000'000;

// Mean pairwise distance 2 * sum_{i<j} d(x_i, x_j) / (N (N-1)). Exact when
// the pair count fits max_pairs, otherwise a seeded uniform sample of
// max_pairs pairs.
double avg_pairwise_distance(const FeatureMatrix& x, DistanceMetric metric,
                             std::uint64_t max_pairs = kDefaultMaxPairs,
                             std::uint64_t seed = 0);

// Quantization frame over (up to) the first `dims` principal axes; raw
// coordinates are used instead when the data has <= 3 columns. Bin edges are
// equal-width over the fit data; later batches clamp to the edge cells.
struct CoverageFrame {
    std::size_t dims = 0;
    std::size_t bins = 0;
    std::optional<PcaModel> projection;  // absent = raw coordinates
    std::vector<double> lo, hi;          // per-dim ranges from the fit data
    bool degenerate = false;             // some dim had zero range

    std::vector<int> cell_codes(const FeatureMatrix& x) const;
};

CoverageFrame fit_coverage_frame(const FeatureMatrix& x0, std::size_t dims, std::size_t bins);

// Fraction of grid cells occupied, in [0, 1].
double grid_coverage(const FeatureMatrix& x, const CoverageFrame& frame);

enum class HolisticMeasure { Entropy, Diversity, Coverage };

struct HolisticParams {
    std::size_t entropy_dims = 2;
    std::size_t entropy_bins = 16;
    std::size_t coverage_dims = 2;
    std::size_t coverage_bins = 8;
    DistanceMetric metric = DistanceMetric::Euclidean;
    std::uint64_t max_pairs = kDefaultMaxPairs;
    std::uint64_t seed = 0;
};

struct HolisticResult {
    RedundancyScore score;
    double p_before = 0.0;  // measure on the base corpus alone
    double p_after = 0.0;   // measure on base + batch
    HolisticMeasure measure = HolisticMeasure::Entropy;
};

// r = redundancy_index(measure(X0), measure(X0 + batch)), higher-is-better.
HolisticResult holistic_redundancy(const FeatureMatrix& x0, const FeatureMatrix& batch,
                                   HolisticMeasure measure,
                                   const HolisticParams& params = {});

// Subgroup membership: ids in [0, names.size()).
struct SubgroupPartition {
    std::vector<int> group_ids;
    std::vector<std::string> group_names;
};

struct GroupStats {
    std::vector<std::string> names;
    std::vector<std::size_t> counts;
    std::vector<double> rates;   // count / N
    FeatureMatrix disparity;     // [i][j] = rate_i / rate_j
};

GroupStats group_stats(const SubgroupPartition& partition);

// Farthest-point selection: start from the sample nearest the centroid, then
// repeatedly add the sample farthest from the chosen set. The seed only
// breaks exact distance ties. Returns indices in selection order.
std::vector<std::size_t> greedy_diverse_subset(const FeatureMatrix& x, std::size_t target,
                                               DistanceMetric metric, std::uint64_t seed);

struct SmoteResult {
    FeatureMatrix x;       // originals first, synthetic rows appended
    LabelVector y;
    std::size_t synthesized = 0;
};

// Minority-class oversampling by convex interpolation between a minority
// sample and one of its k nearest minority neighbours. Grows the minority
// until count_min / count_maj >= target_ratio.
SmoteResult smote_oversample(const FeatureMatrix& x, const LabelVector& y,
                             double target_ratio = 1.0, std::size_t k = 5,
                             std::uint64_t seed = 0);

}  // namespace mlrm
