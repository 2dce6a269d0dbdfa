// Equivalence of the SIMD kernel variants against the scalar references, plus
// basic algebraic identities.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "attrlab/kernels.hpp"
#include "attrlab/rng.hpp"

using namespace attrlab;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.gaussian();
    return v;
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace

TEST_CASE("reduction kernels match the scalar reference on all remainders") {
    Rng rng(7);
    for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(4),
                          std::size_t(7), std::size_t(8), std::size_t(63),
                          std::size_t(64), std::size_t(1025), std::size_t(4099)}) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        std::vector<double> w(n);
        for (auto& x : w) x = std::abs(rng.gaussian()) + 0.1;

        kernels::force_scalar(true);
        const double s_sumsq = kernels::sumsq(a.data(), n);
        const double s_diff = kernels::sumsq_diff(a.data(), b.data(), n);
        const double s_dot = kernels::dot(a.data(), b.data(), n);
        const double s_wsq = kernels::weighted_sumsq(a.data(), w.data(), n);
        const double s_weak = kernels::weak_sum_real(a.data(), b.data(), w.data(), n);
        kernels::force_scalar(false);

        CHECK(close_rel(kernels::sumsq(a.data(), n), s_sumsq, 1e-12));
        CHECK(close_rel(kernels::sumsq_diff(a.data(), b.data(), n), s_diff, 1e-12));
        CHECK(close_rel(kernels::dot(a.data(), b.data(), n), s_dot, 1e-12));
        CHECK(close_rel(kernels::weighted_sumsq(a.data(), w.data(), n), s_wsq, 1e-12));
        CHECK(close_rel(kernels::weak_sum_real(a.data(), b.data(), w.data(), n),
                        s_weak, 1e-12));
    }
}

TEST_CASE("weak_sum_quad matches the scalar reference") {
    Rng rng(11);
    for (std::size_t g : {std::size_t(1), std::size_t(2), std::size_t(5),
                          std::size_t(16), std::size_t(257)}) {
        const auto a = random_vec(rng, 4 * g);
        const auto b = random_vec(rng, 4 * g);
        std::vector<double> w(g);
        for (auto& x : w) x = std::abs(rng.gaussian()) + 0.05;
        kernels::force_scalar(true);
        const double ref = kernels::weak_sum_quad(a.data(), b.data(), w.data(), g);
        kernels::force_scalar(false);
        CHECK(close_rel(kernels::weak_sum_quad(a.data(), b.data(), w.data(), g),
                        ref, 1e-12));
    }
}

TEST_CASE("elementwise kernels match the scalar reference") {
    Rng rng(13);
    const std::size_t n = 1031;
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const auto x = random_vec(rng, n);
    const auto k = random_vec(rng, n);

    std::vector<double> out_s(n), out_v(n), y_s = a, y_v = a;
    kernels::force_scalar(true);
    kernels::vmul(a.data(), b.data(), out_s.data(), n);
    kernels::vaxpy(0.37, x.data(), y_s.data(), n);
    std::vector<double> sa_s(n);
    kernels::vscale_add(b.data(), x.data(), 0.21, k.data(), sa_s.data(), n);
    kernels::force_scalar(false);
    kernels::vmul(a.data(), b.data(), out_v.data(), n);
    kernels::vaxpy(0.37, x.data(), y_v.data(), n);
    std::vector<double> sa_v(n);
    kernels::vscale_add(b.data(), x.data(), 0.21, k.data(), sa_v.data(), n);

    for (std::size_t i = 0; i < n; ++i) {
        CHECK(out_s[i] == doctest::Approx(out_v[i]).epsilon(1e-14));
        CHECK(y_s[i] == doctest::Approx(y_v[i]).epsilon(1e-14));
        CHECK(sa_s[i] == doctest::Approx(sa_v[i]).epsilon(1e-14));
    }
}

TEST_CASE("in-place vmul is safe") {
    Rng rng(17);
    const std::size_t n = 129;
    auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    auto expect = a;
    for (std::size_t i = 0; i < n; ++i) expect[i] *= b[i];
    kernels::vmul(a.data(), b.data(), a.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == expect[i]);
}

TEST_CASE("identities: sumsq_diff(a,a)=0, dot(a,a)=sumsq(a)") {
    Rng rng(19);
    const std::size_t n = 513;
    const auto a = random_vec(rng, n);
    CHECK(kernels::sumsq_diff(a.data(), a.data(), n) == 0.0);
    CHECK(close_rel(kernels::dot(a.data(), a.data(), n),
                    kernels::sumsq(a.data(), n), 1e-13));
}

TEST_CASE("dispatch reports an ISA") {
    const std::string isa = kernels::active_isa();
    CHECK((isa == "avx2" || isa == "scalar"));
}
