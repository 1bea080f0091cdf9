#pragma once

// Scalar redundancy arithmetic plus the information-theoretic toolbox every
// other module builds on. Entropies are plug-in estimates in bits (log base
// 2); no small-sample bias correction is applied.

#include <span>
#include <vector>

#include "mlrm/types.hpp"

namespace mlrm {

inline constexpr double kDefaultEpsilon = 1e-12;  // denominator guard
inline constexpr double kEqTolerance = 1e-9;      // width of the "r == 1" band
inline constexpr double kNumTolerance = 1e-9;     // slack for fp identities
inline constexpr double kModelTolerance = 0.02;   // "as good as" for accuracies
inline constexpr std::size_t kDefaultBins = 16;

Interpretation classify_redundancy(double r, double tol = kEqTolerance);

// Core redundancy index. `before` is the metric without the candidate
// component, `after` the metric once it is added:
//   higher-is-better:  r = 1 - (after - before) / (|before| + eps)
//   lower-is-better:   r = 1 - (before - after) / (|before| + eps)
// r = 1 means the addition moved nothing, r > 1 means it actively hurt.
RedundancyScore redundancy_index(MetricValue before, MetricValue after,
                                 double epsilon = kDefaultEpsilon);

// Representation ratio of two subgroup rates: rate_a / rate_b.
double relative_redundancy(double rate_a, double rate_b);

// Entropy in bits of the empirical distribution; permutation-invariant in bin
// order (terms are summed over sorted counts).
double shannon_entropy(const Histogram& hist);

enum class BinScheme { EqualWidth, Quantile };

// Per-column discretization into integer codes 0..bins-1, returned as a
// matrix of exact small integers. Quantile edges use nearest-rank order
// statistics; values equal to an edge go to the lower bin.
FeatureMatrix quantize_features(const FeatureMatrix& x, std::size_t bins, BinScheme scheme);

// Extract one column of an integer-coded matrix as ints.
std::vector<int> column_codes(const FeatureMatrix& coded, std::size_t col);

// Entropy in bits of a code sequence.
double entropy_of_codes(std::span<const int> codes);

// Compact joint coding: pairs (a[i], b[i]) mapped to 0..K-1 in first
// appearance order. Building block for joint entropies over several columns.
std::vector<int> compose_codes(std::span<const int> a, std::span<const int> b);

// Plug-in mutual information I(a;b) = H(a) + H(b) - H(a,b), bits.
// Exactly symmetric in its arguments; I(a,a) == H(a) exactly.
double mutual_information(std::span<const int> a, std::span<const int> b);

// I(f;y | given) via four joint entropies. Empty `given` reduces to
// mutual_information exactly.
double conditional_mutual_information(std::span<const int> f, std::span<const int> y,
                                      const std::vector<std::vector<int>>& given);

// Mean per-class recall. Every class id in [0, n_classes) must occur in
// y_true.
MetricValue balanced_accuracy(const LabelVector& y_true, const LabelVector& y_pred);

enum class DistanceMetric { Euclidean, Manhattan };

double pairwise_distance(std::span<const double> a, std::span<const double> b,
                         DistanceMetric metric);

}  // namespace mlrm
