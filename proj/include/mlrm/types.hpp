#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlrm/error.hpp"

namespace mlrm {

// Dense row-major matrix of finite doubles; one row per sample.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    std::vector<std::string> col_names;  // optional; empty means f0..f{cols-1}

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c)
        : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
    double* row_ptr(std::size_t r) { return data.data() + r * cols; }
    const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows);
        for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
        return out;
    }

    std::string name_of(std::size_t c) const {
        if (c < col_names.size()) return col_names[c];
        return "f" + std::to_string(c);
    }

    // Throws ShapeMismatch / InvalidMetric on structural or non-finite data.
    void validate(const char* what = "feature matrix") const;
};

// Integer class labels 0..n_classes-1.
struct LabelVector {
    std::vector<int> labels;
    int n_classes = 0;

    std::size_t size() const { return labels.size(); }
    void validate(const char* what = "labels") const;
    std::vector<std::size_t> class_counts() const;
};

// Non-negative counts; probabilities are count/total.
struct Histogram {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

enum class Direction { HigherIsBetter, LowerIsBetter };

struct MetricValue {
    double value = 0.0;
    Direction direction = Direction::HigherIsBetter;
};

enum class Interpretation {
    NotFullyRedundant,       // r < 1: the removed part carried unique value
    FullyRedundantNeutral,   // r == 1 (within tolerance)
    FullyRedundantHarmful,   // r > 1: removal actually helped
};

struct RedundancyScore {
    double r = 0.0;
    Interpretation interpretation = Interpretation::NotFullyRedundant;
};

const char* interpretation_name(Interpretation i);

}  // namespace mlrm
