#include "kernels_internal.hpp"

#include "dqca/errors.hpp"

namespace dqca::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(DQCA_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend& current() {
    static Backend b = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    return b;
}

} // namespace

Backend active() { return current(); }

bool available(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: return cpu_has_avx2();
    }
    return false;
}

void force(Backend b) {
    if (!available(b))
        throw unsupported_error("kernel backend '" + name(b) + "' is unavailable on this CPU");
    current() = b;
}

std::string name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

const Ops& ops(Backend b) {
    if (!available(b))
        throw unsupported_error("kernel backend '" + name(b) + "' is unavailable on this CPU");
#ifdef DQCA_HAVE_AVX2
    if (b == Backend::avx2) return avx2_ops();
#endif
    return scalar_ops();
}

const Ops& ops() { return ops(current()); }

} // namespace dqca::kernels
