// AVX2 kernel variants. Compiled with -mavx2 only; the dispatcher guarantees
// none of this runs on CPUs without AVX2. Elementwise ops (axpy, scale) use
// separate mul/add so lanes match the scalar kernels bit-for-bit; reductions
// keep one 4-lane accumulator so results are stable run to run.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "mlrm/kernels.hpp"

namespace mlrm::kern {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy_avx2(double* y, const double* x, double alpha, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double sq_l2_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double l1_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
    return total;
}

void accumulate_u8_avx2(std::uint32_t* acc, const std::uint8_t* row, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(row + i));
        __m256i wide = _mm256_cvtepu8_epi32(bytes);
        __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), _mm256_add_epi32(cur, wide));
    }
    for (; i < n; ++i) acc[i] += row[i];
}

void scale_avx2(double* y, const double* x, double alpha, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    }
    for (; i < n; ++i) y[i] = x[i] * alpha;
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels table{
        "avx2",  dot_avx2,           axpy_avx2,  sq_l2_avx2,
        l1_avx2, accumulate_u8_avx2, scale_avx2,
    };
    return table;
}

}  // namespace mlrm::kern

#endif  // x86_64
