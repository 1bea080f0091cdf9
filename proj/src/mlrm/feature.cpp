#include "mlrm/feature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlrm/parallel.hpp"

namespace mlrm {
namespace {

void validate_subset(const FeatureSubset& s, std::size_t cols, const char* what) {
    for (std::size_t i = 0; i < s.indices.size(); ++i) {
        if (s.indices[i] >= cols) {
            fail(Err::ShapeMismatch, std::string(what) + ": feature index out of range");
        }
        if (i > 0 && s.indices[i] <= s.indices[i - 1]) {
            fail(Err::InvalidConfig, std::string(what) + ": indices must be unique ascending");
        }
    }
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) {
        fail(Err::UndefinedCorrelation, "correlation of a constant sequence");
    }
    return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

// 1-based midranks: ties share the average of their rank run.
std::vector<double> midranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return v[l] < v[r]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double correlation(std::span<const double> a, std::span<const double> b, CorrelationKind kind) {
    if (a.size() != b.size()) fail(Err::ShapeMismatch, "correlation inputs differ in length");
    if (a.size() < 2) fail(Err::TooFewSamples, "correlation needs >= 2 samples");
    for (double v : a) {
        if (!std::isfinite(v)) fail(Err::InvalidMetric, "non-finite value");
    }
    for (double v : b) {
        if (!std::isfinite(v)) fail(Err::InvalidMetric, "non-finite value");
    }
    if (kind == CorrelationKind::Pearson) return pearson(a, b);
    auto ra = midranks(a);
    auto rb = midranks(b);
    return pearson(ra, rb);
}

double pair_redundancy(std::span<const double> a, std::span<const double> b, std::size_t bins) {
    if (a.size() != b.size()) fail(Err::ShapeMismatch, "pair_redundancy inputs differ in length");
    if (a.empty()) fail(Err::EmptyInput, "pair_redundancy on empty input");

    FeatureMatrix two(a.size(), 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        two.at(i, 0) = a[i];
        two.at(i, 1) = b[i];
    }
    auto coded = quantize_features(two, bins, BinScheme::Quantile);
    auto ca = column_codes(coded, 0);
    auto cb = column_codes(coded, 1);
    double ha = entropy_of_codes(ca);
    double hb = entropy_of_codes(cb);
    double floor_h = std::min(ha, hb);
    if (floor_h <= 0.0) {
        fail(Err::DivisionByZero, "pair_redundancy on a zero-entropy feature");
    }
    return std::clamp(mutual_information(ca, cb) / floor_h, 0.0, 1.0);
}

double cmi_gain(const FeatureMatrix& x, std::size_t candidate, const LabelVector& y,
                const FeatureSubset& given, std::size_t bins) {
    x.validate("cmi_gain features");
    y.validate("cmi_gain labels");
    if (x.rows != y.size()) fail(Err::ShapeMismatch, "feature/label row mismatch");
    if (candidate >= x.cols) fail(Err::ShapeMismatch, "candidate index out of range");
    validate_subset(given, x.cols, "cmi_gain given set");
    for (std::size_t g : given.indices) {
        if (g == candidate) fail(Err::InvalidConfig, "candidate already in the given set");
    }

    auto coded = quantize_features(x, bins, BinScheme::Quantile);
    auto f = column_codes(coded, candidate);
    std::vector<std::vector<int>> z;
    z.reserve(given.indices.size());
    for (std::size_t g : given.indices) z.push_back(column_codes(coded, g));
    return conditional_mutual_information(f, y.labels, z);
}

namespace {

double accuracy_on_subset(const FeatureMatrix& x, const LabelVector& y,
                          const std::vector<std::size_t>& subset, const MlpSpec& tmpl,
                          const SplitIndices& parts) {
    if (subset.empty()) {
        return 1.0 / static_cast<double>(y.n_classes);  // constant predictor
    }
    FeatureMatrix cols = take_columns(x, subset);
    FeatureMatrix x_tr = take_rows(cols, parts.train);
    FeatureMatrix x_val = take_rows(cols, parts.val);
    LabelVector y_tr = take_labels(y, parts.train);
    LabelVector y_val = take_labels(y, parts.val);

    MlpSpec spec = tmpl;
    spec.layer_sizes.front() = subset.size();
    spec.layer_sizes.back() = static_cast<std::size_t>(y.n_classes);
    ParamVector params = train_mlp(spec, x_tr, y_tr);
    return evaluate_model(spec, params, x_val, y_val).value;
}

}  // namespace

WrapperResult wrapper_redundancy(const FeatureMatrix& x, const LabelVector& y,
                                 const FeatureSubset& base, std::size_t candidate,
                                 const MlpSpec& tmpl, const SplitConfig& split,
                                 std::uint64_t seed) {
    x.validate("wrapper features");
    y.validate("wrapper labels");
    if (x.rows != y.size()) fail(Err::ShapeMismatch, "feature/label row mismatch");
    if (candidate >= x.cols) fail(Err::ShapeMismatch, "candidate index out of range");
    validate_subset(base, x.cols, "wrapper base set");
    for (std::size_t b : base.indices) {
        if (b == candidate) fail(Err::InvalidConfig, "candidate already in the base set");
    }
    tmpl.validate();

    auto parts = split_dataset(y, split, seed);

    std::vector<std::size_t> with = base.indices;
    with.insert(std::lower_bound(with.begin(), with.end(), candidate), candidate);

    WrapperResult res;
    res.acc_base = accuracy_on_subset(x, y, base.indices, tmpl, parts);
    res.acc_with = accuracy_on_subset(x, y, with, tmpl, parts);
    res.score = redundancy_index({res.acc_base, Direction::HigherIsBetter},
                                 {res.acc_with, Direction::HigherIsBetter});
    return res;
}

SelectResult select_features(const FeatureMatrix& x, const LabelVector& y, SelectMode mode,
                             SelectScorer scorer, const SelectStop& stop, const MlpSpec& tmpl,
                             const SplitConfig& split, std::size_t bins, std::uint64_t seed) {
    x.validate("select features");
    y.validate("select labels");
    if (x.rows != y.size()) fail(Err::ShapeMismatch, "feature/label row mismatch");
    if (x.cols == 0) fail(Err::EmptyInput, "no features to select from");
    if (stop.min_gain < 0.0) fail(Err::InvalidConfig, "min_gain must be non-negative");

    SelectResult res;
    std::vector<std::size_t> current;  // ascending

    auto score_candidates = [&](const std::vector<std::size_t>& cands,
                                const std::vector<std::size_t>& base_set,
                                bool backward) -> std::vector<double> {
        std::vector<double> scores(cands.size(), 0.0);
        if (scorer == SelectScorer::CmiGain) {
            for (std::size_t i = 0; i < cands.size(); ++i) {
                std::vector<std::size_t> base = base_set;
                if (backward) std::erase(base, cands[i]);
                scores[i] = cmi_gain(x, cands[i], y, {base}, bins);
            }
        } else {
            parallel_for(cands.size(), [&](std::size_t i) {
                std::vector<std::size_t> base = base_set;
                if (backward) std::erase(base, cands[i]);
                auto w = wrapper_redundancy(x, y, {base}, cands[i], tmpl, split, seed);
                // forward wants the normalized accuracy gain, backward the
                // redundancy of adding the feature back
                scores[i] = backward ? w.score.r : 1.0 - w.score.r;
            });
        }
        return scores;
    };

    if (mode == SelectMode::Forward) {
        std::size_t cap = stop.max_features.value_or(x.cols);
        for (std::size_t round = 0; current.size() < std::min(cap, x.cols); ++round) {
            std::vector<std::size_t> cands;
            for (std::size_t f = 0; f < x.cols; ++f) {
                if (!std::binary_search(current.begin(), current.end(), f)) cands.push_back(f);
            }
            if (cands.empty()) break;
            auto scores = score_candidates(cands, current, false);

            std::size_t best = 0;
            for (std::size_t i = 1; i < cands.size(); ++i) {
                if (scores[i] > scores[best]) best = i;  // ties keep the lowest index
            }
            bool take = scores[best] >= stop.min_gain;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                res.trail.push_back({round, cands[i], scores[i], take && i == best});
            }
            if (!take) break;
            current.insert(std::lower_bound(current.begin(), current.end(), cands[best]),
                           cands[best]);
        }
    } else {
        current.resize(x.cols);
        std::iota(current.begin(), current.end(), 0);
        std::size_t floor_size = std::max<std::size_t>(stop.max_features.value_or(1), 1);
        for (std::size_t round = 0; current.size() > floor_size; ++round) {
            auto scores = score_candidates(current, current, true);

            std::size_t best = 0;
            bool removable;
            if (scorer == SelectScorer::CmiGain) {
                for (std::size_t i = 1; i < current.size(); ++i) {
                    if (scores[i] < scores[best]) best = i;  // smallest unique contribution
                }
                removable = scores[best] <= stop.min_gain + kNumTolerance;
            } else {
                for (std::size_t i = 1; i < current.size(); ++i) {
                    if (scores[i] > scores[best]) best = i;  // most redundant member
                }
                removable = scores[best] >= 1.0 - kModelTolerance;
            }
            for (std::size_t i = 0; i < current.size(); ++i) {
                res.trail.push_back({round, current[i], scores[i], removable && i == best});
            }
            if (!removable) break;
            current.erase(current.begin() + static_cast<long>(best));
        }
    }

    res.subset.indices = current;
    return res;
}

}  // namespace mlrm
