#include "mlrm/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlrm/error.hpp"
#include "mlrm/kernels.hpp"

namespace mlrm {

void symmetric_eigen(std::vector<double>& a, std::size_t n,
                     std::vector<double>& values, std::vector<double>& vectors) {
    if (a.size() != n * n) fail(Err::ShapeMismatch, "symmetric_eigen: bad matrix size");

    // V starts as identity; rows of the final V^T are the eigenvectors.
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a[i * n + i]));
    for (double x : a) scale = std::max(scale, std::fabs(x));
    const double stop = (scale > 0.0 ? scale : 1.0) * 1e-14;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(a[p * n + q]);
        if (off <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::fabs(apq) <= stop * 1e-4) continue;
                double app = a[p * n + p];
                double aqq = a[q * n + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    double aip = a[i * n + p];
                    double aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double api = a[p * n + i];
                    double aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = v[i * n + p];
                    double viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return diag[l] > diag[r]; });

    values.resize(n);
    vectors.assign(n * n, 0.0);
    for (std::size_t out = 0; out < n; ++out) {
        std::size_t col = order[out];
        values[out] = diag[col];
        for (std::size_t i = 0; i < n; ++i) vectors[out * n + i] = v[i * n + col];
    }
}

namespace {

void pin_sign(double* row, std::size_t m) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
        double mag = std::fabs(row[j]);
        if (mag > best + 1e-18) {
            best = mag;
            arg = j;
        }
    }
    if (row[arg] < 0.0) {
        for (std::size_t j = 0; j < m; ++j) row[j] = -row[j];
    }
}

}  // namespace

PcaModel pca_fit(const FeatureMatrix& x, std::size_t k) {
    x.validate("pca_fit input");
    const std::size_t n = x.rows, m = x.cols;
    if (n < 2) fail(Err::TooFewSamples, "pca_fit needs at least 2 samples");
    if (k < 1 || k > std::min(n - 1, m)) {
        fail(Err::InvalidK, "pca_fit: k must be in [1, min(N-1, m)]");
    }

    PcaModel model;
    model.mean.assign(m, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t j = 0; j < m; ++j) model.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < m; ++j) model.mean[j] /= static_cast<double>(n);

    std::vector<double> centered(n * m);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t j = 0; j < m; ++j) centered[r * m + j] = row[j] - model.mean[j];
    }

    const auto& ker = kern::active();
    const double denom = static_cast<double>(n - 1);
    model.components = FeatureMatrix(k, m);
    model.explained_variance.assign(k, 0.0);

    if (m <= n) {
        // covariance route: C = Xc^T Xc / (n-1), m x m
        std::vector<double> cov(m * m, 0.0);
        std::vector<double> col_i(n), col_j(n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t r = 0; r < n; ++r) col_i[r] = centered[r * m + i];
            for (std::size_t j = i; j < m; ++j) {
                for (std::size_t r = 0; r < n; ++r) col_j[r] = centered[r * m + j];
                double c = ker.dot(col_i.data(), col_j.data(), n) / denom;
                cov[i * m + j] = c;
                cov[j * m + i] = c;
            }
        }
        std::vector<double> values, vectors;
        symmetric_eigen(cov, m, values, vectors);
        for (std::size_t c = 0; c < k; ++c) {
            model.explained_variance[c] = std::max(0.0, values[c]);
            std::copy_n(vectors.data() + c * m, m, model.components.row_ptr(c));
            pin_sign(model.components.row_ptr(c), m);
        }
    } else {
        // snapshot route: G = Xc Xc^T / (n-1), n x n; v = Xc^T u / ||.||
        std::vector<double> gram(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                double g = ker.dot(centered.data() + i * m, centered.data() + j * m, m) / denom;
                gram[i * n + j] = g;
                gram[j * n + i] = g;
            }
        }
        std::vector<double> values, vectors;
        symmetric_eigen(gram, n, values, vectors);
        std::vector<double> axis(m);
        for (std::size_t c = 0; c < k; ++c) {
            model.explained_variance[c] = std::max(0.0, values[c]);
            std::fill(axis.begin(), axis.end(), 0.0);
            const double* u = vectors.data() + c * n;
            for (std::size_t r = 0; r < n; ++r) {
                ker.axpy(axis.data(), centered.data() + r * m, u[r], m);
            }
            double norm = std::sqrt(ker.dot(axis.data(), axis.data(), m));
            double* out = model.components.row_ptr(c);
            if (norm > 1e-30) {
                ker.scale(out, axis.data(), 1.0 / norm, m);
            } else {
                // rank-deficient tail: fall back to a deterministic unit axis
                std::fill(out, out + m, 0.0);
                out[c % m] = 1.0;
            }
            pin_sign(out, m);
        }
    }
    return model;
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x) {
    x.validate("pca_transform input");
    const std::size_t m = model.mean.size();
    const std::size_t k = model.components.rows;
    if (x.cols != m) fail(Err::ShapeMismatch, "pca_transform: column count mismatch");

    const auto& ker = kern::active();
    FeatureMatrix out(x.rows, k);
    std::vector<double> centered(m);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* row = x.row_ptr(r);
        for (std::size_t j = 0; j < m; ++j) centered[j] = row[j] - model.mean[j];
        for (std::size_t c = 0; c < k; ++c) {
            out.at(r, c) = ker.dot(centered.data(), model.components.row_ptr(c), m);
        }
    }
    return out;
}

}  // namespace mlrm
