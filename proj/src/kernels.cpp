// Runtime dispatch between the scalar reference kernels and the AVX2 variants.

#include "attrlab/kernels.hpp"

#include <atomic>

namespace attrlab::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool avx2_available() {
#if defined(ATTRLAB_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool use_avx2() {
    static const bool available = avx2_available();
    return available && !g_force_scalar.load(std::memory_order_relaxed);
}

}  // namespace

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

const char* active_isa() { return use_avx2() ? "avx2" : "scalar"; }

#ifdef ATTRLAB_HAVE_AVX2
#define ATTRLAB_DISPATCH(fn, ...) \
    return use_avx2() ? detail::avx2::fn(__VA_ARGS__) : detail::scalar::fn(__VA_ARGS__)
#define ATTRLAB_DISPATCH_VOID(fn, ...)              \
    if (use_avx2())                                 \
        detail::avx2::fn(__VA_ARGS__);              \
    else                                            \
        detail::scalar::fn(__VA_ARGS__)
#else
#define ATTRLAB_DISPATCH(fn, ...) return detail::scalar::fn(__VA_ARGS__)
#define ATTRLAB_DISPATCH_VOID(fn, ...) detail::scalar::fn(__VA_ARGS__)
#endif

double sumsq(const double* a, std::size_t n) { ATTRLAB_DISPATCH(sumsq, a, n); }

double sumsq_diff(const double* a, const double* b, std::size_t n) {
    ATTRLAB_DISPATCH(sumsq_diff, a, b, n);
}

double dot(const double* a, const double* b, std::size_t n) {
    ATTRLAB_DISPATCH(dot, a, b, n);
}

double weighted_sumsq(const double* a, const double* w, std::size_t n) {
    ATTRLAB_DISPATCH(weighted_sumsq, a, w, n);
}

double weak_sum_real(const double* a, const double* b, const double* w,
                     std::size_t n) {
    ATTRLAB_DISPATCH(weak_sum_real, a, b, w, n);
}

double weak_sum_quad(const double* a, const double* b, const double* w,
                     std::size_t ngroups) {
    ATTRLAB_DISPATCH(weak_sum_quad, a, b, w, ngroups);
}

void vmul(const double* a, const double* b, double* out, std::size_t n) {
    ATTRLAB_DISPATCH_VOID(vmul, a, b, out, n);
}

void vaxpy(double alpha, const double* x, double* y, std::size_t n) {
    ATTRLAB_DISPATCH_VOID(vaxpy, alpha, x, y, n);
}

void vscale_add(const double* e, const double* x, double h, const double* k,
                double* out, std::size_t n) {
    ATTRLAB_DISPATCH_VOID(vscale_add, e, x, h, k, out, n);
}

}  // namespace attrlab::kernels
