// Pseudospectral NSE: projection identities, the nonlinear term against a
// direct convolution oracle, closed-form decay, manufactured steady states,
// convergence order, energy budget and absorbing estimates.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "attrlab/nse2d.hpp"
#include "attrlab/rng.hpp"

using namespace attrlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

NseParams params_k(int K, double nu = 1.0, double dt = 1e-3) {
    NseParams p;
    p.L = 2.0 * kPi;
    p.nu = nu;
    p.K = K;
    p.dt = dt;
    return p;
}

PhaseVector random_divfree(const NseParams& p, std::uint64_t seed, double radius) {
    Rng rng(seed);
    return nse_random_field(p, rng, radius);
}

// direct convolution of the truncated quadratic term, then Leray projection:
// w_k = (1/L) sum_{p+q=k} i (c_p . k_q) c_q, everything inside |k_i| <= K
PhaseVector convolution_oracle(const NseParams& prm, const PhaseVector& u) {
    const BasisId b = prm.basis();
    const int K = prm.K;
    const double kunit = 2.0 * kPi / prm.L;
    PhaseVector w(b);
    for (int p2 = -K; p2 <= K; ++p2)
        for (int p1 = -K; p1 <= K; ++p1) {
            const std::complex<double> cp[2] = {u.nse_coeff(p1, p2, 0),
                                                u.nse_coeff(p1, p2, 1)};
            if (cp[0] == 0.0 && cp[1] == 0.0) continue;
            for (int q2 = -K; q2 <= K; ++q2)
                for (int q1 = -K; q1 <= K; ++q1) {
                    const int k1 = p1 + q1, k2 = p2 + q2;
                    if (k1 < -K || k1 > K || k2 < -K || k2 > K) continue;
                    const std::complex<double> cq[2] = {u.nse_coeff(q1, q2, 0),
                                                        u.nse_coeff(q1, q2, 1)};
                    if (cq[0] == 0.0 && cq[1] == 0.0) continue;
                    const std::complex<double> advect =
                        std::complex<double>(0.0, 1.0) * kunit *
                        (cp[0] * double(q1) + cp[1] * double(q2)) / prm.L;
                    for (int m = 0; m < 2; ++m) {
                        const auto cur = w.nse_coeff(k1, k2, m);
                        w.nse_set_coeff(k1, k2, m, cur + advect * cq[m]);
                    }
                }
        }
    leray_project_inplace(b, w.data);
    return w;
}

}  // namespace

TEST_CASE("leray projection: idempotent, kills gradients, orthogonal output") {
    const NseParams p = params_k(4);
    const BasisId b = p.basis();
    Rng rng(1);

    PhaseVector f(b);
    for (auto& x : f.data) x = rng.gaussian();
    PhaseVector once = leray_project(b, f);
    const PhaseVector twice = leray_project(b, once);
    for (std::size_t i = 0; i < once.data.size(); ++i)
        CHECK(once.data[i] == doctest::Approx(twice.data[i]).epsilon(1e-14));
    CHECK(max_divergence(b, once.data) < 1e-12 * (1.0 + once.norm()));

    // divergence-free input is unchanged
    const PhaseVector df = random_divfree(p, 2, 1.0);
    const PhaseVector dfp = leray_project(b, df);
    CHECK(strong_dist(df, dfp) < 1e-13);

    // pure gradient field (u_k parallel to k) maps to zero
    PhaseVector grad(b);
    for (int k2 = -4; k2 <= 4; ++k2)
        for (int k1 = -4; k1 <= 4; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            const std::complex<double> amp(rng.gaussian(), rng.gaussian());
            grad.nse_set_coeff(k1, k2, 0, amp * double(k1));
            grad.nse_set_coeff(k1, k2, 1, amp * double(k2));
        }
    const PhaseVector zero = leray_project(b, grad);
    CHECK(zero.norm() < 1e-12 * grad.norm());
}

TEST_CASE("nonlinear term: shear flow advects nothing") {
    const NseParams p = params_k(8);
    const PhaseVector shear = nse_shear_field(p);
    const PhaseVector bterm = nonlinear_term(p, shear);
    CHECK(bterm.norm() < 1e-13 * (1.0 + shear.norm()));
}

TEST_CASE("nonlinear term matches the direct convolution oracle") {
    NseParams p = params_k(4);
    const PhaseVector u = random_divfree(p, 3, 1.7);
    const PhaseVector fast = nonlinear_term(p, u);
    const PhaseVector slow = convolution_oracle(p, u);
    CHECK(strong_dist(fast, slow) < 1e-10 * (1.0 + slow.norm()));

    // a two-mode field against the same oracle (hand-checkable size)
    PhaseVector two(p.basis());
    const PhaseVector m1 = nse_mode_field(p.basis(), 1, 0, {0.9, 0.0});
    const PhaseVector m2 = nse_mode_field(p.basis(), 1, 2, {0.0, 1.1});
    for (std::size_t i = 0; i < two.data.size(); ++i)
        two.data[i] = m1.data[i] + m2.data[i];
    CHECK(strong_dist(nonlinear_term(p, two), convolution_oracle(p, two)) < 1e-11);
}

TEST_CASE("energy orthogonality of B, preserved by dealiasing only") {
    NseParams p = params_k(8);
    const PhaseVector u = random_divfree(p, 4, 2.0);
    const double scale = u.norm() * u.norm() * u.norm();

    const PhaseVector bd = nonlinear_term(p, u);
    const double dealiased = std::abs(pairing(bd.data, u.data));
    CHECK(dealiased < 1e-10 * scale);

    p.dealias = false;
    const PhaseVector ba = nonlinear_term(p, u);
    const double aliased = std::abs(pairing(ba.data, u.data));
    CHECK(aliased > 100.0 * dealiased);
}

TEST_CASE("shear flow decays at e^{-nu t} to 1e-6 relative") {
    const NseParams p = params_k(16, 1.0, 1e-3);
    const PhaseVector u0 = nse_shear_field(p);
    const Symbol none = make_symbol("unforced", std::nullopt, std::nullopt);
    const Trajectory run = nse_integrate(p, u0, none, 0.0, 1.0);
    const PhaseVector uT = run.sample_vec(run.n_samples - 1);
    PhaseVector expect = u0;
    for (auto& x : expect.data) x *= std::exp(-1.0);
    CHECK(strong_dist(uT, expect) / expect.norm() < 1e-6);
}

TEST_CASE("manufactured steady state drifts below 1e-8 per unit time") {
    const NseParams p = params_k(8, 0.7, 2e-3);
    PhaseVector ustar(p.basis());
    const PhaseVector m1 = nse_mode_field(p.basis(), 1, 0, {0.4, 0.1});
    const PhaseVector m2 = nse_mode_field(p.basis(), 0, 1, {0.0, 0.3});
    const PhaseVector m3 = nse_mode_field(p.basis(), 1, 1, {0.2, -0.2});
    for (std::size_t i = 0; i < ustar.data.size(); ++i)
        ustar.data[i] = m1.data[i] + m2.data[i] + m3.data[i];

    // g = nu A u* + B(u*, u*) holds the state fixed
    const PhaseVector bterm = nonlinear_term(p, ustar);
    const auto& tables = basis_tables(p.basis());
    std::vector<double> shape(ustar.data.size());
    for (std::size_t i = 0; i < shape.size(); ++i)
        shape[i] = p.nu * tables.ksq_double[i] * ustar.data[i] + bterm.data[i];
    Symbol g = make_symbol(
        "steady", ForceField::make(p.basis(), shape, profile_constant(1.0)),
        std::nullopt);

    const double T = 4.0;
    const Trajectory run = nse_integrate(p, ustar, g, 0.0, T);
    const PhaseVector uT = run.sample_vec(run.n_samples - 1);
    CHECK(strong_dist(uT, ustar) / T < 1e-8);
}

TEST_CASE("self-convergence order is 4 +- 0.3") {
    const int K = 8;
    const double T = 1.0, nu = 0.02;
    PhaseVector u0(params_k(K).basis());
    const PhaseVector m1 = nse_mode_field(u0.basis, 1, 0, {4.0, 0.0});
    const PhaseVector m2 = nse_mode_field(u0.basis, 1, 2, {0.0, 3.0});
    for (std::size_t i = 0; i < u0.data.size(); ++i)
        u0.data[i] = m1.data[i] + m2.data[i];
    const Symbol none = make_symbol("unforced", std::nullopt, std::nullopt);

    auto endpoint = [&](double dt) {
        const NseParams p = params_k(K, nu, dt);
        const Trajectory run = nse_integrate(p, u0, none, 0.0, T);
        return run.sample_vec(run.n_samples - 1);
    };
    const PhaseVector ref = endpoint(2.5e-4);
    const double e1 = strong_dist(endpoint(8e-3), ref);
    const double e2 = strong_dist(endpoint(4e-3), ref);
    const double e3 = strong_dist(endpoint(2e-3), ref);
    const double o1 = std::log2(e1 / e2);
    const double o2 = std::log2(e2 / e3);
    INFO("errors ", e1, " ", e2, " ", e3, " orders ", o1, " ", o2);
    CHECK(o1 == doctest::Approx(4.0).epsilon(0.075));
    CHECK(o2 == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("energy budget: identity residual at quadrature accuracy") {
    const NseParams p = params_k(16, 1.0, 1e-3);
    const Symbol none = make_symbol("unforced", std::nullopt, std::nullopt);

    // zero trajectory: residual is exactly zero
    const PhaseVector zero(p.basis());
    const Trajectory zrun = nse_integrate(p, zero, none, 0.0, 0.05);
    const EnergyBudgetReport zrep = energy_budget(p, zrun, none);
    CHECK(zrep.max_abs_residual == 0.0);

    // decaying shear: closed-form integrals; the residual is the trapezoid
    // quadrature error of 2 nu int ||u||^2, bounded by (dt^2/12) max|f''| T
    // with f = 2 nu |u0|^2 e^{-2 nu s} here
    const Trajectory srun = nse_integrate(p, nse_shear_field(p), none, 0.0, 1.0);
    const EnergyBudgetReport srep = energy_budget(p, srun, none);
    const double e0sq = nse_shear_field(p).norm() * nse_shear_field(p).norm();
    const double quad_bound = (p.dt * p.dt / 12.0) * 8.0 * e0sq * 1.0;
    CHECK(srep.max_abs_residual < quad_bound);
    CHECK(srep.max_abs_residual > 0.0);

    // forced run stays below 1e-6
    ForceParams fp;
    fp.amplitude = 0.3;
    fp.ratio2 = 0.5;
    PhaseVector shape(p.basis());
    const PhaseVector s1 = nse_mode_field(p.basis(), 0, 1, {1.0, 0.0});
    const PhaseVector s2 = nse_mode_field(p.basis(), 1, 0, {0.0, 0.5});
    for (std::size_t i = 0; i < shape.data.size(); ++i)
        shape.data[i] = s1.data[i] + s2.data[i];
    const Symbol g = builtin_force("quasiperiodic", p.basis(), shape.data, fp);
    const Trajectory frun =
        nse_integrate(p, random_divfree(p, 5, 0.5), g, 0.0, 1.0);
    const EnergyBudgetReport frep = energy_budget(p, frun, g);
    INFO("forced max violation ", frep.max_violation);
    CHECK(frep.max_violation < 1e-6);
}

TEST_CASE("absorbing radius: formula limits and scaling") {
    const NseParams p = params_k(16);
    const AbsorbingEstimate e0 = absorbing_radius(p, 0.0);
    CHECK(e0.radius == 0.0);  // pure decay: any positive radius absorbs
    CHECK(e0.K_inf == 0.0);
    const AbsorbingEstimate e1 = absorbing_radius(p, 0.8);
    const AbsorbingEstimate e2 = absorbing_radius(p, 1.6);
    CHECK(e2.K_inf == doctest::Approx(2.0 * e1.K_inf));
    CHECK(e2.radius == doctest::Approx(std::sqrt(2.0) * e1.radius));
    CHECK(e1.entry_time(10.0 * e1.radius) > 0.0);
    // entry time into a target is decreasing in the decay rate
    NseParams p2 = p;
    p2.nu = 2.0;
    const AbsorbingEstimate e3 = absorbing_radius(p2, 0.8);
    CHECK(e3.entry_time(10.0 * e1.radius) < e1.entry_time(10.0 * e1.radius));
}

TEST_CASE("simulated runs enter the predicted absorbing ball") {
    NseParams p = params_k(16, 1.0, 2e-3);
    PhaseVector shape(p.basis());
    const PhaseVector s1 = nse_mode_field(p.basis(), 0, 1, {1.0, 0.0});
    const PhaseVector s2 = nse_mode_field(p.basis(), 1, 0, {0.5, 0.0});
    for (std::size_t i = 0; i < shape.data.size(); ++i)
        shape.data[i] = s1.data[i] + s2.data[i];
    ForceParams fp;
    fp.amplitude = 0.5;
    const Symbol g = builtin_force("constant", p.basis(), shape.data, fp);
    const ProbeGrid grid{0.0, 8.0, 1e-3};
    const double g_bound = translation_bound_norm(g, grid);
    const AbsorbingEstimate est = absorbing_radius(p, g_bound);
    REQUIRE(est.radius > 0.0);
    const double tbar = est.entry_time(10.0 * est.radius);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const PhaseVector u0 = random_divfree(p, seed, 10.0 * est.radius);
        const double t1 = std::ceil(tbar / p.dt) * p.dt;
        IntegrateOptions opts;
        opts.snapshot_every = 1;
        const Trajectory run = nse_integrate(p, u0, g, 0.0, t1, opts);
        CHECK(run.sample_vec(run.n_samples - 1).norm() <= est.radius);
    }
}

TEST_CASE("trajectories stay divergence-free and replay bit-identically") {
    NseParams p = params_k(8, 0.5, 2e-3);
    ForceParams fp;
    fp.amplitude = 0.4;
    PhaseVector shape = nse_mode_field(p.basis(), 0, 1, {1.0, 0.0});
    const Symbol g = builtin_force("quasiperiodic", p.basis(), shape.data, fp);
    const PhaseVector u0 = random_divfree(p, 7, 1.0);
    const Trajectory a = nse_integrate(p, u0, g, 0.0, 1.0);
    for (std::size_t i = 0; i < a.n_samples; i += 50) {
        const double nrm = a.sample_vec(i).norm();
        CHECK(max_divergence(a.basis, a.sample(i)) <= 1e-12 * (1.0 + nrm));
    }
    const Trajectory b = nse_integrate(p, u0, g, 0.0, 1.0);
    CHECK(a.data == b.data);
}

TEST_CASE("preconditions: stability bound and divergence guard") {
    NseParams p = params_k(8, 1.0, 0.5);  // dt far above the advective bound
    const PhaseVector u0 = random_divfree(p, 8, 5.0);
    const Symbol none = make_symbol("unforced", std::nullopt, std::nullopt);
    CHECK_THROWS_AS(nse_integrate(p, u0, none, 0.0, 1.0), SolverError);

    // guard triggers on |u| exceeding the declared radius
    NseParams q = params_k(8, 1e-3, 1e-3);
    IntegrateOptions opts;
    opts.guard_radius = 1e-6;
    CHECK_THROWS_AS(nse_integrate(q, random_divfree(q, 9, 1.0), none, 0.0, 0.1, opts),
                    SolverError);

    // non-divergence-free initial data is rejected
    PhaseVector bad(p.basis());
    bad.nse_set_coeff(1, 0, 0, {1.0, 0.0});  // parallel to k
    NseParams ok = params_k(8, 1.0, 1e-3);
    CHECK_THROWS_AS(nse_integrate(ok, bad, none, 0.0, 0.01), ValidationError);
}
