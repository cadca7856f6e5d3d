#include <cstdlib>
#include <string>

#include "epr/errors.hpp"
#include "epr/kernels/tally_kernel.hpp"

namespace epr {
namespace kernels {

bool avx2_available() {
#if defined(EPR_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

KernelKind select_kernel() {
    const char* env = std::getenv("EPR_KERNEL");
    if (env == nullptr || *env == '\0' || std::string(env) == "auto")
        return avx2_available() ? KernelKind::Avx2 : KernelKind::Scalar;
    const std::string choice(env);
    if (choice == "scalar") return KernelKind::Scalar;
    if (choice == "avx2") {
        if (!avx2_available())
            throw ConfigError("EPR_KERNEL=avx2 but AVX2+FMA is not available");
        return KernelKind::Avx2;
    }
    throw ConfigError("EPR_KERNEL must be auto, scalar, or avx2 (got '" + choice + "')");
}

const char* kernel_name(KernelKind kind) {
    return kind == KernelKind::Avx2 ? "avx2" : "scalar";
}

TallyFn kernel_fn(KernelKind kind) {
    if (kind == KernelKind::Avx2) {
#if defined(EPR_HAVE_AVX2)
        if (avx2_available()) return &tally_avx2;
#endif
        throw ValidationError("avx2 kernel requested but not available on this machine");
    }
    return &tally_scalar;
}

}  // namespace kernels
}  // namespace epr
