#pragma once

// Stratified train/val/test split. Each class is shuffled and apportioned
// separately so every part sees every class, which balanced accuracy needs.

#include <cstdint>
#include <vector>

#include "mlrm/types.hpp"

namespace mlrm {

struct SplitConfig {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct SplitIndices {
    std::vector<std::size_t> train, val, test;
};

// Requires fractions positive and summing to 1 (within 1e-9), and at least 3
// samples of every class.
SplitIndices split_dataset(const LabelVector& y, const SplitConfig& cfg, std::uint64_t seed);

FeatureMatrix take_rows(const FeatureMatrix& x, const std::vector<std::size_t>& idx);
LabelVector take_labels(const LabelVector& y, const std::vector<std::size_t>& idx);
FeatureMatrix take_columns(const FeatureMatrix& x, const std::vector<std::size_t>& cols);
FeatureMatrix concat_columns(const FeatureMatrix& a, const FeatureMatrix& b);

}  // namespace mlrm
