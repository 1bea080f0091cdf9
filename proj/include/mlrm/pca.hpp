#pragma once

// Principal component analysis via eigendecomposition of the sample
// covariance. When features outnumber samples the N x N Gram matrix is
// decomposed instead and eigenvectors are mapped back (snapshot method).
// Component signs are pinned (largest-magnitude coordinate positive) so fits
// are reproducible.

#include <cstddef>
#include <vector>

#include "mlrm/types.hpp"

namespace mlrm {

struct PcaModel {
    std::vector<double> mean;                 // per-column mean of the fit data
    FeatureMatrix components;                 // k x m, rows are unit-norm axes
    std::vector<double> explained_variance;   // k eigenvalues, descending
};

// Requires 2 <= N and 1 <= k <= min(N-1, m).
PcaModel pca_fit(const FeatureMatrix& x, std::size_t k);

// Project rows onto the fitted axes: (x - mean) * components^T.
FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x);

// Symmetric eigendecomposition (cyclic Jacobi). `a` is n x n row-major and is
// destroyed. Returns eigenvalues descending with matching unit eigenvectors
// as rows of `vectors`.
void symmetric_eigen(std::vector<double>& a, std::size_t n,
                     std::vector<double>& values, std::vector<double>& vectors);

}  // namespace mlrm
