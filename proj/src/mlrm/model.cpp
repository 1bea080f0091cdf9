#include "mlrm/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "mlrm/kernels.hpp"
#include "mlrm/parallel.hpp"
#include "mlrm/rng.hpp"

namespace mlrm {

void MlpSpec::validate() const {
    if (layer_sizes.size() < 2) {
        fail(Err::InvalidConfig, "MLP needs at least input and output layers");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) fail(Err::InvalidConfig, "layer sizes must be positive");
    }
    if (!(learning_rate > 0.0)) fail(Err::InvalidConfig, "learning rate must be positive");
    if (epochs == 0) fail(Err::InvalidConfig, "epochs must be >= 1");
    if (batch_size == 0) fail(Err::InvalidConfig, "batch size must be >= 1");
}

namespace {

struct Layout {
    std::vector<std::size_t> offsets;  // 2L block starts
    std::size_t weights = 0;
    std::size_t total = 0;
};

Layout make_layout(const MlpSpec& spec) {
    Layout lay;
    const std::size_t layers = spec.layers();
    lay.offsets.reserve(2 * layers);
    std::size_t off = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        lay.offsets.push_back(off);
        off += spec.layer_sizes[l + 1] * spec.layer_sizes[l];
    }
    lay.weights = off;
    for (std::size_t l = 0; l < layers; ++l) {
        lay.offsets.push_back(off);
        off += spec.layer_sizes[l + 1];
    }
    lay.total = off;
    return lay;
}

void check_params(const MlpSpec& spec, const ParamVector& params) {
    Layout lay = make_layout(spec);
    if (params.values.size() != lay.total || params.layout != lay.offsets) {
        fail(Err::ShapeMismatch, "parameter vector does not match the MLP spec");
    }
}

double activate(Activation act, double z) {
    return act == Activation::ReLU ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

double activate_grad(Activation act, double z, double a) {
    return act == Activation::ReLU ? (z > 0.0 ? 1.0 : 0.0) : 1.0 - a * a;
}

struct Workspace {
    std::vector<std::vector<double>> z;  // pre-activations per layer
    std::vector<std::vector<double>> a;  // activations, a[0] is the input copy
    std::vector<double> probs;
    std::vector<double> delta, delta_prev;

    explicit Workspace(const MlpSpec& spec) {
        const std::size_t layers = spec.layers();
        z.resize(layers);
        a.resize(layers + 1);
        a[0].resize(spec.layer_sizes[0]);
        std::size_t widest = 0;
        for (std::size_t l = 0; l < layers; ++l) {
            z[l].resize(spec.layer_sizes[l + 1]);
            a[l + 1].resize(spec.layer_sizes[l + 1]);
            widest = std::max(widest, spec.layer_sizes[l + 1]);
        }
        probs.resize(spec.layer_sizes.back());
        delta.resize(widest);
        delta_prev.resize(widest);
    }
};

// Forward pass; leaves logits in ws.a.back() and softmax in ws.probs.
void forward(const MlpSpec& spec, const ParamVector& params, const double* input,
             Workspace& ws) {
    const auto& ker = kern::active();
    const std::size_t layers = spec.layers();
    std::copy_n(input, spec.layer_sizes[0], ws.a[0].data());
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = spec.layer_sizes[l];
        const std::size_t out = spec.layer_sizes[l + 1];
        const double* w = params.values.data() + params.layout[l];
        const double* b = params.values.data() + params.layout[layers + l];
        const bool last = (l + 1 == layers);
        for (std::size_t j = 0; j < out; ++j) {
            double zj = ker.dot(w + j * in, ws.a[l].data(), in) + b[j];
            ws.z[l][j] = zj;
            ws.a[l + 1][j] = last ? zj : activate(spec.activation, zj);
        }
    }
    const auto& logits = ws.a[layers];
    double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        ws.probs[j] = std::exp(logits[j] - top);
        sum += ws.probs[j];
    }
    for (auto& p : ws.probs) p /= sum;
}

// Backward pass for one sample; adds dCE/dtheta into grad.
void backward(const MlpSpec& spec, const ParamVector& params, int label, Workspace& ws,
              std::vector<double>& grad) {
    const auto& ker = kern::active();
    const std::size_t layers = spec.layers();

    std::copy(ws.probs.begin(), ws.probs.end(), ws.delta.begin());
    ws.delta[static_cast<std::size_t>(label)] -= 1.0;

    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t in = spec.layer_sizes[l];
        const std::size_t out = spec.layer_sizes[l + 1];
        double* gw = grad.data() + params.layout[l];
        double* gb = grad.data() + params.layout[layers + l];
        for (std::size_t j = 0; j < out; ++j) {
            ker.axpy(gw + j * in, ws.a[l].data(), ws.delta[j], in);
            gb[j] += ws.delta[j];
        }
        if (l == 0) break;
        const double* w = params.values.data() + params.layout[l];
        std::fill(ws.delta_prev.begin(), ws.delta_prev.begin() + static_cast<long>(in), 0.0);
        for (std::size_t j = 0; j < out; ++j) {
            ker.axpy(ws.delta_prev.data(), w + j * in, ws.delta[j], in);
        }
        for (std::size_t i = 0; i < in; ++i) {
            ws.delta[i] =
                ws.delta_prev[i] * activate_grad(spec.activation, ws.z[l - 1][i], ws.a[l][i]);
        }
    }
}

void check_training_data(const MlpSpec& spec, const FeatureMatrix& x, const LabelVector& y) {
    x.validate("training features");
    y.validate("training labels");
    if (x.rows != y.size()) fail(Err::ShapeMismatch, "feature/label row mismatch");
    if (x.rows == 0) fail(Err::EmptyInput, "empty training set");
    if (x.cols != spec.layer_sizes.front()) {
        fail(Err::ShapeMismatch, "input width does not match the first layer");
    }
    if (static_cast<std::size_t>(y.n_classes) != spec.layer_sizes.back()) {
        fail(Err::ShapeMismatch, "n_classes does not match the output layer");
    }
}

}  // namespace

std::size_t param_count(const MlpSpec& spec) { return make_layout(spec).total; }
std::size_t weight_count(const MlpSpec& spec) { return make_layout(spec).weights; }

ParamVector zero_params(const MlpSpec& spec) {
    spec.validate();
    Layout lay = make_layout(spec);
    return {std::vector<double>(lay.total, 0.0), lay.offsets};
}

ParamVector init_params(const MlpSpec& spec) {
    spec.validate();
    Layout lay = make_layout(spec);
    ParamVector p{std::vector<double>(lay.total, 0.0), lay.offsets};
    Rng rng(spec.seed);
    const std::size_t layers = spec.layers();
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = spec.layer_sizes[l];
        const std::size_t out = spec.layer_sizes[l + 1];
        const double a = std::sqrt(6.0 / static_cast<double>(in + out));
        double* w = p.values.data() + lay.offsets[l];
        for (std::size_t i = 0; i < in * out; ++i) w[i] = rng.uniform(-a, a);
    }
    return p;
}

ParamVector train_mlp(const MlpSpec& spec, const FeatureMatrix& x, const LabelVector& y,
                      TrainLog* log) {
    spec.validate();
    check_training_data(spec, x, y);

    ParamVector params = init_params(spec);
    Rng order_rng(spec.seed ^ 0x9E3779B97F4A7C15ULL);
    Workspace ws(spec);
    std::vector<double> grad(params.values.size(), 0.0);
    const auto& ker = kern::active();
    const std::size_t n = x.rows;

    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        auto perm = order_rng.permutation(n);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += spec.batch_size) {
            const std::size_t stop = std::min(n, start + spec.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = start; i < stop; ++i) {
                std::size_t row = perm[i];
                forward(spec, params, x.row_ptr(row), ws);
                double p = ws.probs[static_cast<std::size_t>(y.labels[row])];
                epoch_loss += -std::log(std::max(p, 1e-300));
                backward(spec, params, y.labels[row], ws, grad);
            }
            double scale = -spec.learning_rate / static_cast<double>(stop - start);
            ker.axpy(params.values.data(), grad.data(), scale, params.values.size());
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) {
            fail(Err::DivergenceDetected,
                 "training loss became non-finite at epoch " + std::to_string(epoch));
        }
        if (log) log->epoch_loss.push_back(epoch_loss);
    }
    return params;
}

double loss_value(const MlpSpec& spec, const ParamVector& params, const FeatureMatrix& x,
                  const LabelVector& y) {
    spec.validate();
    check_params(spec, params);
    check_training_data(spec, x, y);
    Workspace ws(spec);
    double loss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        forward(spec, params, x.row_ptr(r), ws);
        loss += -std::log(std::max(ws.probs[static_cast<std::size_t>(y.labels[r])], 1e-300));
    }
    return loss / static_cast<double>(x.rows);
}

std::vector<double> loss_gradient(const MlpSpec& spec, const ParamVector& params,
                                  const FeatureMatrix& x, const LabelVector& y) {
    spec.validate();
    check_params(spec, params);
    check_training_data(spec, x, y);
    Workspace ws(spec);
    std::vector<double> grad(params.values.size(), 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        forward(spec, params, x.row_ptr(r), ws);
        backward(spec, params, y.labels[r], ws, grad);
    }
    const auto& ker = kern::active();
    std::vector<double> out(grad.size());
    ker.scale(out.data(), grad.data(), 1.0 / static_cast<double>(x.rows), grad.size());
    return out;
}

std::vector<int> predict(const MlpSpec& spec, const ParamVector& params, const FeatureMatrix& x) {
    spec.validate();
    check_params(spec, params);
    x.validate("prediction features");
    if (x.cols != spec.layer_sizes.front()) {
        fail(Err::ShapeMismatch, "input width does not match the first layer");
    }
    Workspace ws(spec);
    std::vector<int> out(x.rows, 0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        forward(spec, params, x.row_ptr(r), ws);
        const auto& logits = ws.a.back();
        std::size_t arg = 0;
        for (std::size_t j = 1; j < logits.size(); ++j) {
            if (logits[j] > logits[arg]) arg = j;  // ties keep the lowest id
        }
        out[r] = static_cast<int>(arg);
    }
    return out;
}

MetricValue evaluate_model(const MlpSpec& spec, const ParamVector& params,
                           const FeatureMatrix& x, const LabelVector& y) {
    auto preds = predict(spec, params, x);
    return balanced_accuracy(y, {std::move(preds), y.n_classes});
}

ParamVector apply_mask(const ParamVector& params, const PruneMask& mask) {
    if (mask.keep.size() != params.values.size()) {
        fail(Err::ShapeMismatch, "mask length does not match the parameter vector");
    }
    ParamVector out = params;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (!mask.keep[i]) out.values[i] = 0.0;
    }
    return out;
}

PruneOutcome l1_prune_search(const MlpSpec& spec, const ParamVector& params,
                             const FeatureMatrix& x_val, const LabelVector& y_val,
                             double step, double tol) {
    spec.validate();
    check_params(spec, params);
    if (!(step > 0.0) || step >= 1.0) fail(Err::InvalidConfig, "step must be in (0, 1)");
    if (tol < 0.0) fail(Err::InvalidConfig, "tolerance must be non-negative");

    const std::size_t weights = weight_count(spec);
    const std::size_t total = params.values.size();

    std::vector<std::size_t> order(weights);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(params.values[a]) < std::fabs(params.values[b]);
    });

    const double base = evaluate_model(spec, params, x_val, y_val).value;

    PruneMask best;
    best.keep.assign(total, 1);
    best.sparsity = 0.0;
    double best_acc = base;

    ParamVector masked = params;
    std::size_t masked_so_far = 0;
    for (std::size_t i = 1;; ++i) {
        double f = static_cast<double>(i) * step;
        if (f >= 1.0 - 1e-12) break;
        auto target = static_cast<std::size_t>(
            std::llround(f * static_cast<double>(weights)));
        target = std::min(target, weights);
        for (; masked_so_far < target; ++masked_so_far) {
            masked.values[order[masked_so_far]] = 0.0;
        }
        double acc = evaluate_model(spec, masked, x_val, y_val).value;
        if (acc >= base - tol) {
            best.keep.assign(total, 1);
            for (std::size_t m = 0; m < target; ++m) best.keep[order[m]] = 0;
            best.sparsity = static_cast<double>(target) / static_cast<double>(total);
            best_acc = acc;
        }
    }

    PruneOutcome out;
    out.mask = std::move(best);
    out.acc_base = base;
    out.acc_pruned = best_acc;
    out.score = overparam_redundancy({base, Direction::HigherIsBetter},
                                     {best_acc, Direction::HigherIsBetter},
                                     OverparamMode::Removed);
    return out;
}

RedundancyScore overparam_redundancy(MetricValue base, MetricValue modified, OverparamMode mode,
                                     double epsilon) {
    if (base.direction != modified.direction) {
        fail(Err::DirectionMismatch, "overparam_redundancy inputs must share a direction");
    }
    if (mode == OverparamMode::Added) {
        return redundancy_index(base, modified, epsilon);
    }
    // Removed: r = 1 - (base - modified) / (|base| + eps); flip the direction
    // so redundancy_index produces exactly that arithmetic.
    Direction flipped = base.direction == Direction::HigherIsBetter
                            ? Direction::LowerIsBetter
                            : Direction::HigherIsBetter;
    return redundancy_index({base.value, flipped}, {modified.value, flipped}, epsilon);
}

CapacityResult capacity_search(const FeatureMatrix& x, const LabelVector& y,
                               const std::vector<std::size_t>& widths, const MlpSpec& tmpl,
                               double tol, const SplitConfig& split, std::uint64_t seed) {
    if (widths.empty()) fail(Err::InvalidConfig, "capacity_search needs candidate widths");
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        if (widths[i] >= widths[i + 1]) {
            fail(Err::InvalidConfig, "candidate widths must be strictly increasing");
        }
    }
    if (widths.front() == 0) fail(Err::InvalidConfig, "width 0 is not a model");
    if (tol < 0.0) fail(Err::InvalidConfig, "tolerance must be non-negative");
    tmpl.validate();

    auto parts = split_dataset(y, split, seed);
    FeatureMatrix x_tr = take_rows(x, parts.train);
    LabelVector y_tr = take_labels(y, parts.train);
    FeatureMatrix x_val = take_rows(x, parts.val);
    LabelVector y_val = take_labels(y, parts.val);

    const std::size_t hidden_layers = std::max<std::size_t>(1, tmpl.layers() - 1);
    std::vector<double> accs(widths.size(), 0.0);
    parallel_for(widths.size(), [&](std::size_t i) {
        MlpSpec spec = tmpl;
        spec.layer_sizes.assign(hidden_layers + 2, widths[i]);
        spec.layer_sizes.front() = x.cols;
        spec.layer_sizes.back() = static_cast<std::size_t>(y.n_classes);
        ParamVector params = train_mlp(spec, x_tr, y_tr);
        accs[i] = evaluate_model(spec, params, x_val, y_val).value;
    });

    CapacityResult res;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        res.width_accuracy.emplace_back(widths[i], accs[i]);
    }
    double best = *std::max_element(accs.begin(), accs.end());
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (accs[i] >= best - tol) {
            res.chosen_width = widths[i];
            break;
        }
    }
    return res;
}

namespace {

std::vector<int> ensemble_predict(const std::vector<const Submodule*>& members,
                                  const FeatureMatrix& x, int n_classes) {
    std::vector<std::vector<int>> votes;
    votes.reserve(members.size());
    for (const auto* m : members) votes.push_back(predict(m->spec, m->params, x));

    std::vector<int> out(x.rows, 0);
    std::vector<int> tally(static_cast<std::size_t>(n_classes));
    for (std::size_t r = 0; r < x.rows; ++r) {
        std::fill(tally.begin(), tally.end(), 0);
        for (const auto& v : votes) {
            int c = v[r];
            if (c >= 0 && c < n_classes) tally[static_cast<std::size_t>(c)]++;
        }
        int arg = 0;
        for (int c = 1; c < n_classes; ++c) {
            if (tally[static_cast<std::size_t>(c)] > tally[static_cast<std::size_t>(arg)]) {
                arg = c;  // ties keep the lowest class id
            }
        }
        out[r] = arg;
    }
    return out;
}

}  // namespace

SubmodularResult submodular_perf_redundancy(const std::vector<Submodule>& modules,
                                            const std::string& drop_id, const FeatureMatrix& x,
                                            const LabelVector& y, double epsilon) {
    if (modules.size() < 2) {
        fail(Err::InvalidConfig, "ensemble redundancy needs at least 2 members");
    }
    const Submodule* dropped = nullptr;
    for (const auto& m : modules) {
        if (m.id == drop_id) dropped = &m;
    }
    if (!dropped) fail(Err::NotFound, "no submodule with id '" + drop_id + "'");

    std::vector<const Submodule*> all, remaining;
    for (const auto& m : modules) {
        all.push_back(&m);
        if (&m != dropped) remaining.push_back(&m);
    }

    SubmodularResult res;
    res.acc_full =
        balanced_accuracy(y, {ensemble_predict(all, x, y.n_classes), y.n_classes}).value;
    res.acc_without =
        balanced_accuracy(y, {ensemble_predict(remaining, x, y.n_classes), y.n_classes}).value;
    res.raw_drop = (res.acc_full - res.acc_without) / (std::fabs(res.acc_full) + epsilon);
    res.score.r = 1.0 - res.raw_drop;
    res.score.interpretation = classify_redundancy(res.score.r);
    return res;
}

double submodule_param_distance(const Submodule& a, const Submodule& b) {
    if (a.spec.layer_sizes != b.spec.layer_sizes || a.spec.activation != b.spec.activation) {
        fail(Err::IncomparableSubmodules, "parameter distance needs identical architectures");
    }
    if (a.params.values.size() != b.params.values.size()) {
        fail(Err::IncomparableSubmodules, "parameter vectors differ in length");
    }
    const auto& ker = kern::active();
    return std::sqrt(
        ker.sq_l2(a.params.values.data(), b.params.values.data(), a.params.values.size()));
}

void save_params(const std::string& path, const MlpSpec& spec, const ParamVector& params) {
    spec.validate();
    check_params(spec, params);
    nlohmann::json header{
        {"format", "mlpk"},
        {"version", 1},
        {"layer_sizes", spec.layer_sizes},
        {"activation", spec.activation == Activation::ReLU ? "relu" : "tanh"},
        {"seed", spec.seed},
        {"learning_rate", spec.learning_rate},
        {"epochs", spec.epochs},
        {"batch_size", spec.batch_size},
        {"layout", params.layout},
        {"count", params.values.size()},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Err::IoError, "cannot open '" + path + "' for writing");
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(params.values.data()),
              static_cast<std::streamsize>(params.values.size() * sizeof(double)));
    if (!out) fail(Err::IoError, "short write to '" + path + "'");
}

std::pair<MlpSpec, ParamVector> load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Err::IoError, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) fail(Err::FormatError, "missing header line");

    nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "mlpk") {
        fail(Err::FormatError, "not an mlpk container");
    }
    MlpSpec spec;
    try {
        spec.layer_sizes = header.at("layer_sizes").get<std::vector<std::size_t>>();
        std::string act = header.at("activation").get<std::string>();
        if (act == "relu") {
            spec.activation = Activation::ReLU;
        } else if (act == "tanh") {
            spec.activation = Activation::Tanh;
        } else {
            fail(Err::FormatError, "unknown activation '" + act + "'");
        }
        spec.seed = header.value("seed", std::uint64_t{0});
        spec.learning_rate = header.value("learning_rate", 0.05);
        spec.epochs = header.value("epochs", std::size_t{40});
        spec.batch_size = header.value("batch_size", std::size_t{32});
    } catch (const nlohmann::json::exception& e) {
        fail(Err::FormatError, std::string("bad mlpk header: ") + e.what());
    }
    spec.validate();

    Layout lay = make_layout(spec);
    auto layout = header.value("layout", std::vector<std::size_t>{});
    auto count = header.value("count", std::size_t{0});
    if (layout != lay.offsets || count != lay.total) {
        fail(Err::FormatError, "mlpk layout does not match the architecture");
    }

    ParamVector params{std::vector<double>(count), lay.offsets};
    in.read(reinterpret_cast<char*>(params.values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
        fail(Err::FormatError, "mlpk payload truncated");
    }
    for (double v : params.values) {
        if (!std::isfinite(v)) fail(Err::FormatError, "mlpk payload has non-finite values");
    }
    return {spec, params};
}

}  // namespace mlrm
