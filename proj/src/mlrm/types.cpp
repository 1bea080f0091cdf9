#include "mlrm/types.hpp"

#include <cmath>
#include <unordered_set>

namespace mlrm {

void FeatureMatrix::validate(const char* what) const {
    if (data.size() != rows * cols) {
        fail(Err::ShapeMismatch, std::string(what) + ": storage is " +
                                     std::to_string(data.size()) + " values, expected " +
                                     std::to_string(rows * cols));
    }
    if (!col_names.empty()) {
        if (col_names.size() != cols) {
            fail(Err::ShapeMismatch, std::string(what) + ": " +
                                         std::to_string(col_names.size()) +
                                         " column names for " + std::to_string(cols) +
                                         " columns");
        }
        std::unordered_set<std::string> seen;
        for (const auto& n : col_names) {
            if (!seen.insert(n).second) {
                fail(Err::InvalidMetric, std::string(what) + ": duplicate column name '" + n + "'");
            }
        }
    }
    for (double v : data) {
        if (!std::isfinite(v)) {
            fail(Err::InvalidMetric, std::string(what) + ": non-finite value");
        }
    }
}

void LabelVector::validate(const char* what) const {
    if (n_classes < 1) {
        fail(Err::DegenerateLabels, std::string(what) + ": n_classes must be >= 1");
    }
    for (int y : labels) {
        if (y < 0 || y >= n_classes) {
            fail(Err::DegenerateLabels, std::string(what) + ": label " + std::to_string(y) +
                                            " outside [0, " + std::to_string(n_classes) + ")");
        }
    }
}

std::vector<std::size_t> LabelVector::class_counts() const {
    validate();
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (int y : labels) counts[static_cast<std::size_t>(y)]++;
    return counts;
}

const char* interpretation_name(Interpretation i) {
    switch (i) {
        case Interpretation::NotFullyRedundant: return "NotFullyRedundant";
        case Interpretation::FullyRedundantNeutral: return "FullyRedundantNeutral";
        case Interpretation::FullyRedundantHarmful: return "FullyRedundantHarmful";
    }
    return "Unknown";
}

}  // namespace mlrm
