#pragma once

// Feature-level redundancy: correlation screens, information-theoretic pair
// and gain scores, and wrapper (train-a-model) scores, plus greedy subset
// selection driven by either scorer.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mlrm/metrics.hpp"
#include "mlrm/model.hpp"
#include "mlrm/pca.hpp"
#include "mlrm/split.hpp"
#include "mlrm/types.hpp"

namespace mlrm {

enum class CorrelationKind { Pearson, Spearman };

// Spearman uses midranks for ties. Constant inputs have no defined
// correlation (UndefinedCorrelation).
double correlation(std::span<const double> a, std::span<const double> b, CorrelationKind kind);

// Normalized mutual information I(a;b) / min(H(a), H(b)) after quantile
// binning, in [0, 1]. 1 means one feature determines the other.
double pair_redundancy(std::span<const double> a, std::span<const double> b,
                       std::size_t bins = kDefaultBins);

struct FeatureSubset {
    std::vector<std::size_t> indices;  // unique, ascending
};

// I(candidate; y | given) in bits after per-column quantile binning.
double cmi_gain(const FeatureMatrix& x, std::size_t candidate, const LabelVector& y,
                const FeatureSubset& given, std::size_t bins = kDefaultBins);

struct WrapperResult {
    RedundancyScore score;  // r = 1 - (P(base+f) - P(base)) / (|P(base)| + eps)
    double acc_base = 0.0;
    double acc_with = 0.0;
};

// Trains the template classifier on `base` and on `base + candidate` (same
// split, same seed) and compares validation balanced accuracy. An empty base
// scores as a constant predictor: 1 / n_classes.
WrapperResult wrapper_redundancy(const FeatureMatrix& x, const LabelVector& y,
                                 const FeatureSubset& base, std::size_t candidate,
                                 const MlpSpec& tmpl, const SplitConfig& split,
                                 std::uint64_t seed);

enum class SelectMode { Forward, Backward };
enum class SelectScorer { CmiGain, Wrapper };

struct SelectStop {
    std::optional<std::size_t> max_features;
    double min_gain = 0.0;
};

struct TrailEntry {
    std::size_t round = 0;
    std::size_t feature = 0;
    double score = 0.0;  // gain (forward) or loss / redundancy (backward)
    bool chosen = false;
};

struct SelectResult {
    FeatureSubset subset;
    std::vector<TrailEntry> trail;
};

// Greedy feature selection.
// Forward: add the best-scoring candidate while its gain >= min_gain.
// Backward: drop the most dispensable feature while dropping is free
// (CMI loss <= min_gain, or wrapper redundancy within the model tolerance).
// Exact score ties resolve to the lowest feature index.
SelectResult select_features(const FeatureMatrix& x, const LabelVector& y, SelectMode mode,
                             SelectScorer scorer, const SelectStop& stop, const MlpSpec& tmpl,
                             const SplitConfig& split, std::size_t bins, std::uint64_t seed);

}  // namespace mlrm
