#pragma once

// Hot inner loops, provided as a scalar reference implementation and an AVX2
// variant selected at runtime. The scalar table is the semantic ground truth;
// SIMD variants must agree bit-for-bit on integer work and to reassociation
// error on floating-point reductions (see tests/test_kernels.cpp).
//
// Selection order: MLRM_KERNEL env override ("scalar" or "avx2"), else the
// best variant the CPU supports.

#include <cstddef>
#include <cstdint>

namespace mlrm::kern {

enum class Isa { Scalar, Avx2 };

struct Kernels {
    const char* name;

    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double* y, const double* x, double alpha, std::size_t n);
    // sum_i (a[i] - b[i])^2
    double (*sq_l2)(const double* a, const double* b, std::size_t n);
    // sum_i |a[i] - b[i]|
    double (*l1)(const double* a, const double* b, std::size_t n);
    // acc[i] += row[i], widening u8 -> u32 (exact)
    void (*accumulate_u8)(std::uint32_t* acc, const std::uint8_t* row, std::size_t n);
    // y[i] = x[i] * alpha
    void (*scale)(double* y, const double* x, double alpha, std::size_t n);
};

const Kernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_kernels();
#endif

bool cpu_has_avx2();

// Table in effect for this process (env override applied once).
const Kernels& active();

// Direct access regardless of the environment; throws InvalidConfig if the
// requested ISA is not available on this machine/build.
const Kernels& table_for(Isa isa);

}  // namespace mlrm::kern
