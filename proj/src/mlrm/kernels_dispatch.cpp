#include <cstdlib>
#include <string>

#include "mlrm/error.hpp"
#include "mlrm/kernels.hpp"

namespace mlrm::kern {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const Kernels& table_for(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return scalar_kernels();
        case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (cpu_has_avx2()) return avx2_kernels();
#endif
            fail(Err::InvalidConfig, "AVX2 kernels unavailable on this machine");
    }
    return scalar_kernels();
}

namespace {

const Kernels& select() {
    if (const char* env = std::getenv("MLRM_KERNEL")) {
        std::string want(env);
        if (want == "scalar") return scalar_kernels();
        if (want == "avx2") return table_for(Isa::Avx2);
        if (!want.empty()) {
            fail(Err::InvalidConfig, "unknown MLRM_KERNEL value '" + want + "'");
        }
    }
    return cpu_has_avx2() ? table_for(Isa::Avx2) : scalar_kernels();
}

}  // namespace

const Kernels& active() {
    static const Kernels& chosen = select();
    return chosen;
}

}  // namespace mlrm::kern
