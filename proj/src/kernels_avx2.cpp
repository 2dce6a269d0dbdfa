// AVX2/FMA kernel variants. Compiled with -mavx2 -mfma; only dispatched to
// when the CPU reports both features at runtime.

#include "attrlab/kernels.hpp"

#ifdef ATTRLAB_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace attrlab::kernels::detail::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double sumsq(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d v0 = _mm256_loadu_pd(a + i);
        __m256d v1 = _mm256_loadu_pd(a + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * a[i];
    return s;
}

double sumsq_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 =
            _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double weighted_sumsq(const double* a, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        __m256d vw = _mm256_mul_pd(_mm256_loadu_pd(w + i), v);
        acc = _mm256_fmadd_pd(vw, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * a[i] * a[i];
    return s;
}

double weak_sum_real(const double* a, const double* b, const double* w,
                     std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        d = _mm256_andnot_pd(signmask, d);
        __m256d t = _mm256_div_pd(d, _mm256_add_pd(one, d));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), t, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        s += w[i] * d / (1.0 + d);
    }
    return s;
}

double weak_sum_quad(const double* a, const double* b, const double* w,
                     std::size_t ngroups) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t g = 0;
    // four groups (16 doubles) per iteration; 4x4 transpose-style reduction
    for (; g + 4 <= ngroups; g += 4) {
        const std::size_t i = 4 * g;
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4),
                                   _mm256_loadu_pd(b + i + 4));
        __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 8),
                                   _mm256_loadu_pd(b + i + 8));
        __m256d d3 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 12),
                                   _mm256_loadu_pd(b + i + 12));
        d0 = _mm256_mul_pd(d0, d0);
        d1 = _mm256_mul_pd(d1, d1);
        d2 = _mm256_mul_pd(d2, d2);
        d3 = _mm256_mul_pd(d3, d3);
        // row sums of (d0,d1,d2,d3) -> one lane per group
        __m256d h01 = _mm256_hadd_pd(d0, d1);  // [d0a+d0b, d1a+d1b, d0c+d0d, d1c+d1d]
        __m256d h23 = _mm256_hadd_pd(d2, d3);
        __m256d perm = _mm256_permute2f128_pd(h01, h23, 0x21);
        __m256d blend = _mm256_blend_pd(h01, h23, 0b1100);
        __m256d sq = _mm256_add_pd(perm, blend);  // [|d_g|^2]_{g..g+3}
        __m256d d = _mm256_sqrt_pd(sq);
        __m256d t = _mm256_div_pd(d, _mm256_add_pd(one, d));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + g), t, acc);
    }
    double s = hsum(acc);
    for (; g < ngroups; ++g) {
        const std::size_t i = 4 * g;
        const double e0 = a[i] - b[i];
        const double e1 = a[i + 1] - b[i + 1];
        const double e2 = a[i + 2] - b[i + 2];
        const double e3 = a[i + 3] - b[i + 3];
        const double d = std::sqrt(e0 * e0 + e1 * e1 + e2 * e2 + e3 * e3);
        s += w[g] * d / (1.0 + d);
    }
    return s;
}

void vmul(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void vaxpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void vscale_add(const double* e, const double* x, double h, const double* k,
                double* out, std::size_t n) {
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_fmadd_pd(vh, _mm256_loadu_pd(k + i), _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(e + i), s));
    }
    for (; i < n; ++i) out[i] = e[i] * (x[i] + h * k[i]);
}

}  // namespace attrlab::kernels::detail::avx2

#endif  // ATTRLAB_HAVE_AVX2
