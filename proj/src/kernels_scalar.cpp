// Scalar reference kernels. These are the ground truth the SIMD variants are
// tested against; keep them simple and obviously correct.

#include "attrlab/kernels.hpp"

#include <cmath>

namespace attrlab::kernels::detail::scalar {

double sumsq(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
    return s;
}

double sumsq_diff(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double weighted_sumsq(const double* a, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * a[i];
    return s;
}

double weak_sum_real(const double* a, const double* b, const double* w,
                     std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        s += w[i] * d / (1.0 + d);
    }
    return s;
}

double weak_sum_quad(const double* a, const double* b, const double* w,
                     std::size_t ngroups) {
    double s = 0.0;
    for (std::size_t g = 0; g < ngroups; ++g) {
        const std::size_t i = 4 * g;
        const double d0 = a[i] - b[i];
        const double d1 = a[i + 1] - b[i + 1];
        const double d2 = a[i + 2] - b[i + 2];
        const double d3 = a[i + 3] - b[i + 3];
        const double d = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3);
        s += w[g] * d / (1.0 + d);
    }
    return s;
}

void vmul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void vaxpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void vscale_add(const double* e, const double* x, double h, const double* k,
                double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = e[i] * (x[i] + h * k[i]);
}

}  // namespace attrlab::kernels::detail::scalar
