#include "mlrm/kernels.hpp"

#include <cmath>

namespace mlrm::kern {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double* y, const double* x, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sq_l2_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double l1_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

void accumulate_u8_scalar(std::uint32_t* acc, const std::uint8_t* row, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += row[i];
}

void scale_scalar(double* y, const double* x, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * alpha;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels table{
        "scalar",      dot_scalar,           axpy_scalar, sq_l2_scalar,
        l1_scalar,     accumulate_u8_scalar, scale_scalar,
    };
    return table;
}

}  // namespace mlrm::kern
