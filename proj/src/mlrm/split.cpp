#include "mlrm/split.hpp"

#include <algorithm>
#include <cmath>

#include "mlrm/error.hpp"
#include "mlrm/rng.hpp"

namespace mlrm {

SplitIndices split_dataset(const LabelVector& y, const SplitConfig& cfg, std::uint64_t seed) {
    y.validate("split labels");
    if (!(cfg.train > 0.0) || !(cfg.val > 0.0) || !(cfg.test > 0.0)) {
        fail(Err::InvalidConfig, "split fractions must be positive");
    }
    if (std::fabs(cfg.train + cfg.val + cfg.test - 1.0) > 1e-9) {
        fail(Err::InvalidConfig, "split fractions must sum to 1");
    }

    auto counts = y.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] < 3) {
            fail(Err::TooFewSamples,
                 "class " + std::to_string(c) + " has fewer than 3 samples");
        }
    }

    Rng rng(seed);
    SplitIndices out;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        std::vector<std::size_t> ids;
        ids.reserve(counts[c]);
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y.labels[i] == static_cast<int>(c)) ids.push_back(i);
        }
        rng.shuffle(ids);

        auto n = ids.size();
        auto n_val = static_cast<std::size_t>(std::floor(cfg.val * static_cast<double>(n) + 0.5));
        auto n_test = static_cast<std::size_t>(std::floor(cfg.test * static_cast<double>(n) + 0.5));
        n_val = std::max<std::size_t>(n_val, 1);
        n_test = std::max<std::size_t>(n_test, 1);
        while (n_val + n_test + 1 > n) {
            if (n_val >= n_test && n_val > 1) {
                --n_val;
            } else if (n_test > 1) {
                --n_test;
            } else {
                break;
            }
        }
        std::size_t n_train = n - n_val - n_test;
        for (std::size_t i = 0; i < n_train; ++i) out.train.push_back(ids[i]);
        for (std::size_t i = n_train; i < n_train + n_val; ++i) out.val.push_back(ids[i]);
        for (std::size_t i = n_train + n_val; i < n; ++i) out.test.push_back(ids[i]);
    }
    return out;
}

FeatureMatrix take_rows(const FeatureMatrix& x, const std::vector<std::size_t>& idx) {
    FeatureMatrix out(idx.size(), x.cols);
    out.col_names = x.col_names;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double* src = x.row_ptr(idx[r]);
        std::copy(src, src + x.cols, out.row_ptr(r));
    }
    return out;
}

LabelVector take_labels(const LabelVector& y, const std::vector<std::size_t>& idx) {
    LabelVector out;
    out.n_classes = y.n_classes;
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) out.labels.push_back(y.labels[i]);
    return out;
}

FeatureMatrix take_columns(const FeatureMatrix& x, const std::vector<std::size_t>& cols) {
    for (std::size_t c : cols) {
        if (c >= x.cols) fail(Err::ShapeMismatch, "column index out of range");
    }
    FeatureMatrix out(x.rows, cols.size());
    if (!x.col_names.empty()) {
        for (std::size_t c : cols) out.col_names.push_back(x.col_names[c]);
    }
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) out.at(r, c) = x.at(r, cols[c]);
    }
    return out;
}

FeatureMatrix concat_columns(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.rows != b.rows) fail(Err::ShapeMismatch, "row counts differ");
    FeatureMatrix out(a.rows, a.cols + b.cols);
    if (!a.col_names.empty() || !b.col_names.empty()) {
        for (std::size_t c = 0; c < a.cols; ++c) out.col_names.push_back(a.name_of(c));
        for (std::size_t c = 0; c < b.cols; ++c) out.col_names.push_back(b.name_of(c) + "_b");
    }
    for (std::size_t r = 0; r < a.rows; ++r) {
        std::copy(a.row_ptr(r), a.row_ptr(r) + a.cols, out.row_ptr(r));
        std::copy(b.row_ptr(r), b.row_ptr(r) + b.cols, out.row_ptr(r) + a.cols);
    }
    return out;
}

}  // namespace mlrm
