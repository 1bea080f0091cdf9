#pragma once

// Small MLP classifiers and the redundancy measures defined over them:
// one-shot magnitude pruning, capacity search, and ensemble-member drop
// scores. Training is plain mini-batch SGD on softmax cross-entropy and is
// bit-for-bit reproducible for a fixed spec and dataset.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mlrm/metrics.hpp"
#include "mlrm/split.hpp"
#include "mlrm/types.hpp"

namespace mlrm {

enum class Activation { ReLU, Tanh };

struct MlpSpec {
    std::vector<std::size_t> layer_sizes;  // input, hidden..., n_classes
    Activation activation = Activation::ReLU;
    std::uint64_t seed = 0;
    double learning_rate = 0.05;
    std::size_t epochs = 40;
    std::size_t batch_size = 32;

    void validate() const;
    std::size_t layers() const { return layer_sizes.size() - 1; }
};

// Flat parameter storage: every weight matrix (layer-major, row-major), then
// every bias vector. `layout` holds the strictly increasing start offset of
// each block: L weight blocks followed by L bias blocks.
struct ParamVector {
    std::vector<double> values;
    std::vector<std::size_t> layout;
};

std::size_t param_count(const MlpSpec& spec);
std::size_t weight_count(const MlpSpec& spec);  // parameters before the bias blocks
ParamVector zero_params(const MlpSpec& spec);

// Glorot-uniform weights (a = sqrt(6 / (fan_in + fan_out))), zero biases,
// drawn from the spec seed.
ParamVector init_params(const MlpSpec& spec);

struct TrainLog {
    std::vector<double> epoch_loss;  // mean cross-entropy per epoch
};

ParamVector train_mlp(const MlpSpec& spec, const FeatureMatrix& x, const LabelVector& y,
                      TrainLog* log = nullptr);

// Mean cross-entropy over the set (bits of optimization, nats of unit).
double loss_value(const MlpSpec& spec, const ParamVector& params, const FeatureMatrix& x,
                  const LabelVector& y);

// d(mean CE)/d(theta), laid out exactly like ParamVector::values.
std::vector<double> loss_gradient(const MlpSpec& spec, const ParamVector& params,
                                  const FeatureMatrix& x, const LabelVector& y);

// Argmax class, ties to the lowest class id.
std::vector<int> predict(const MlpSpec& spec, const ParamVector& params, const FeatureMatrix& x);

MetricValue evaluate_model(const MlpSpec& spec, const ParamVector& params,
                           const FeatureMatrix& x, const LabelVector& y);

struct PruneMask {
    std::vector<std::uint8_t> keep;  // one flag per parameter
    double sparsity = 0.0;           // masked / total parameters
};

ParamVector apply_mask(const ParamVector& params, const PruneMask& mask);

struct PruneOutcome {
    PruneMask mask;
    RedundancyScore score;  // removal-form redundancy of the masked weights
    double acc_base = 0.0;
    double acc_pruned = 0.0;
};

// One-shot global magnitude pruning. Weights (never biases) are sorted by
// |value| ascending and masked in sparsity steps of `step`; returns the
// largest step whose masked validation balanced accuracy stays within `tol`
// of the unmasked model.
PruneOutcome l1_prune_search(const MlpSpec& spec, const ParamVector& params,
                             const FeatureMatrix& x_val, const LabelVector& y_val,
                             double step = 0.01, double tol = 0.0);

enum class OverparamMode { Added, Removed };

// Capacity redundancy. Added: did extra capacity buy anything over `base`?
// Removed: did taking capacity away from `base` cost anything?
RedundancyScore overparam_redundancy(MetricValue base, MetricValue modified, OverparamMode mode,
                                     double epsilon = kDefaultEpsilon);

struct CapacityResult {
    std::size_t chosen_width = 0;
    std::vector<std::pair<std::size_t, double>> width_accuracy;  // per candidate
};

// Trains one model per candidate hidden width (ascending) and returns the
// smallest width whose validation balanced accuracy is within `tol` of the
// best. Candidate trainings are independent and run in parallel.
CapacityResult capacity_search(const FeatureMatrix& x, const LabelVector& y,
                               const std::vector<std::size_t>& widths, const MlpSpec& tmpl,
                               double tol, const SplitConfig& split, std::uint64_t seed);

struct Submodule {
    std::string id;
    MlpSpec spec;
    ParamVector params;
};

struct SubmodularResult {
    RedundancyScore score;   // 1 - normalized drop
    double raw_drop = 0.0;   // (P(full) - P(without)) / (|P(full)| + eps)
    double acc_full = 0.0;
    double acc_without = 0.0;
};

// Majority-vote ensemble accuracy with and without one member (vote ties go
// to the lowest class id).
SubmodularResult submodular_perf_redundancy(const std::vector<Submodule>& modules,
                                            const std::string& drop_id, const FeatureMatrix& x,
                                            const LabelVector& y,
                                            double epsilon = kDefaultEpsilon);

// L2 distance between parameter vectors; requires identical architectures.
double submodule_param_distance(const Submodule& a, const Submodule& b);

// .mlpk container: one JSON header line, then raw little-endian float64.
void save_params(const std::string& path, const MlpSpec& spec, const ParamVector& params);
std::pair<MlpSpec, ParamVector> load_params(const std::string& path);

}  // namespace mlrm
