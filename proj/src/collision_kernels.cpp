#include "flrwb/collision_kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace flrwb::kernels {

namespace {

bool avx2_supported() {
#if defined(FLRWB_HAVE_AVX2_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool avx512_supported() {
#if defined(FLRWB_HAVE_AVX512_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx512f");
#else
    return false;
#endif
}

std::string requested_kernel() {
    const char* env = std::getenv("FLRWB_KERNEL");
    return env ? std::string(env) : std::string("auto");
}

}  // namespace

PairPassFn select_pair_pass() {
    const std::string want = requested_kernel();
    if (want == "scalar") return pair_pass_scalar;
#if defined(FLRWB_HAVE_AVX512_TU)
    if (want == "avx512") {
        if (!avx512_supported())
            throw std::runtime_error("FLRWB_KERNEL=avx512: cpu lacks avx512f");
        return pair_pass_avx512;
    }
#else
    if (want == "avx512")
        throw std::runtime_error("FLRWB_KERNEL=avx512: built without avx512 kernels");
#endif
#if defined(FLRWB_HAVE_AVX2_TU)
    if (want == "avx2") {
        if (!avx2_supported()) throw std::runtime_error("FLRWB_KERNEL=avx2: cpu lacks avx2/fma");
        return pair_pass_avx2;
    }
#else
    if (want == "avx2") throw std::runtime_error("FLRWB_KERNEL=avx2: built without avx2 kernels");
#endif
    if (want != "auto" && want != "scalar")
        throw std::runtime_error("FLRWB_KERNEL must be auto, scalar, avx2, or avx512");
#if defined(FLRWB_HAVE_AVX512_TU)
    if (avx512_supported()) return pair_pass_avx512;
#endif
#if defined(FLRWB_HAVE_AVX2_TU)
    if (avx2_supported()) return pair_pass_avx2;
#endif
    return pair_pass_scalar;
}

std::string selected_kernel_name() {
    const PairPassFn fn = select_pair_pass();
#if defined(FLRWB_HAVE_AVX512_TU)
    if (fn == pair_pass_avx512) return "avx512";
#endif
#if defined(FLRWB_HAVE_AVX2_TU)
    if (fn == pair_pass_avx2) return "avx2";
#endif
    (void)fn;
    return "scalar";
}

}  // namespace flrwb::kernels
