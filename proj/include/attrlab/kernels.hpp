#pragma once
// Data-parallel inner-loop kernels used by the metric, solver and attractor
// layers. Every kernel has a scalar reference implementation and (on x86-64)
// an AVX2/FMA variant; the active variant is selected once at runtime from
// CPU capabilities. SIMD and scalar paths are equivalence-tested.

#include <cstddef>

namespace attrlab::kernels {

// --- reductions -----------------------------------------------------------

// sum a[i]^2
double sumsq(const double* a, std::size_t n);

// sum (a[i]-b[i])^2
double sumsq_diff(const double* a, const double* b, std::size_t n);

// sum a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum w[i]*a[i]^2   (enstrophy / V'-norm style weighted squares)
double weighted_sumsq(const double* a, const double* w, std::size_t n);

// sum w[i] * d/(1+d) with d = |a[i]-b[i]|   (weak metric, real basis)
double weak_sum_real(const double* a, const double* b, const double* w,
                     std::size_t n);

// groups of 4 doubles per mode (two complex components); one weight per
// group: sum_g w[g] * d_g/(1+d_g), d_g = Euclidean norm of the 4-vector
// difference. (weak metric, 2D Fourier basis)
double weak_sum_quad(const double* a, const double* b, const double* w,
                     std::size_t ngroups);

// --- elementwise ----------------------------------------------------------

// out[i] = a[i]*b[i]
void vmul(const double* a, const double* b, double* out, std::size_t n);

// y[i] += alpha*x[i]
void vaxpy(double alpha, const double* x, double* y, std::size_t n);

// out[i] = e[i]*(x[i] + h*k[i])   (integrating-factor stage update)
void vscale_add(const double* e, const double* x, double h, const double* k,
                double* out, std::size_t n);

// --- dispatch control ------------------------------------------------------

// "avx2" or "scalar"
const char* active_isa();

// force the scalar path (test hook); pass false to restore auto-detection
void force_scalar(bool on);

namespace detail::scalar {
double sumsq(const double* a, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double weighted_sumsq(const double* a, const double* w, std::size_t n);
double weak_sum_real(const double* a, const double* b, const double* w,
                     std::size_t n);
double weak_sum_quad(const double* a, const double* b, const double* w,
                     std::size_t ngroups);
void vmul(const double* a, const double* b, double* out, std::size_t n);
void vaxpy(double alpha, const double* x, double* y, std::size_t n);
void vscale_add(const double* e, const double* x, double h, const double* k,
                double* out, std::size_t n);
}  // namespace detail::scalar

#ifdef ATTRLAB_HAVE_AVX2
namespace detail::avx2 {
double sumsq(const double* a, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double weighted_sumsq(const double* a, const double* w, std::size_t n);
double weak_sum_real(const double* a, const double* b, const double* w,
                     std::size_t n);
double weak_sum_quad(const double* a, const double* b, const double* w,
                     std::size_t ngroups);
void vmul(const double* a, const double* b, double* out, std::size_t n);
void vaxpy(double alpha, const double* x, double* y, std::size_t n);
void vscale_add(const double* e, const double* x, double h, const double* k,
                double* out, std::size_t n);
}  // namespace detail::avx2
#endif

}  // namespace attrlab::kernels
