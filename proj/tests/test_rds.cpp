// Reaction-diffusion solver: heat-kernel decay, dissipative contraction, the
// Chafee-Infante steady state against an independent Newton oracle, energy
// identity residuals, and the absorbing estimate.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "attrlab/rds.hpp"
#include "attrlab/rng.hpp"

using namespace attrlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

RdsParams params_m(int M, double dt = 1e-3, double a = 1.0) {
    RdsParams p;
    p.ell = kPi;
    p.a = a;
    p.M = M;
    p.dt = dt;
    return p;
}

Symbol unforced(const Nonlinearity& f) {
    return make_symbol("test", std::nullopt, f);
}

Symbol nothing() { return make_symbol("none", std::nullopt, std::nullopt); }

// independent Galerkin residual F(c) = a ksq c + P_M f(u) - g for the Newton
// oracle: own synthesis/projection on the solver's collocation grid
struct GalerkinResidual {
    RdsParams p;
    Nonlinearity f;
    int N, J;
    double h, scale;

    GalerkinResidual(const RdsParams& prm, const Nonlinearity& nl)
        : p(prm), f(nl), N(2 * prm.M + 2), J(2 * prm.M + 1),
          h(prm.ell / (2.0 * prm.M + 2.0)), scale(std::sqrt(2.0 / prm.ell)) {}

    double phi(int k, int j) const {  // phi_k(x_j), k = 1..M, j = 1..J
        return scale * std::sin(kPi * double(k) * double(j) / double(N));
    }

    std::vector<double> operator()(const std::vector<double>& c) const {
        std::vector<double> u(std::size_t(J), 0.0);
        for (int j = 1; j <= J; ++j)
            for (int k = 1; k <= p.M; ++k)
                u[std::size_t(j - 1)] += c[std::size_t(k - 1)] * phi(k, j);
        std::vector<double> F(std::size_t(p.M), 0.0);
        for (int k = 1; k <= p.M; ++k) {
            const double lam = p.a * std::pow(kPi * double(k) / p.ell, 2);
            double proj = 0.0;
            for (int j = 1; j <= J; ++j)
                proj += f(u[std::size_t(j - 1)], 0.0) * phi(k, j);
            F[std::size_t(k - 1)] = lam * c[std::size_t(k - 1)] + h * proj;
        }
        return F;
    }
};

// damped Newton with finite-difference Jacobian
std::vector<double> newton_steady(const GalerkinResidual& res,
                                  std::vector<double> c, int iters = 40) {
    const int M = static_cast<int>(c.size());
    for (int it = 0; it < iters; ++it) {
        const std::vector<double> F = res(c);
        double nrm = 0.0;
        for (double x : F) nrm += x * x;
        if (std::sqrt(nrm) < 1e-12) break;
        // FD Jacobian
        std::vector<double> Jm(std::size_t(M) * M);
        const double eps = 1e-7;
        for (int k = 0; k < M; ++k) {
            std::vector<double> cpert = c;
            cpert[std::size_t(k)] += eps;
            const std::vector<double> Fp = res(cpert);
            for (int r = 0; r < M; ++r)
                Jm[std::size_t(r) * M + k] = (Fp[std::size_t(r)] - F[std::size_t(r)]) / eps;
        }
        // Gaussian elimination
        std::vector<double> rhs = F;
        std::vector<double> A = Jm;
        std::vector<int> piv(std::size_t(M));
        for (int col = 0; col < M; ++col) {
            int best = col;
            for (int r = col + 1; r < M; ++r)
                if (std::abs(A[std::size_t(r) * M + col]) >
                    std::abs(A[std::size_t(best) * M + col]))
                    best = r;
            for (int cc = 0; cc < M; ++cc)
                std::swap(A[std::size_t(col) * M + cc], A[std::size_t(best) * M + cc]);
            std::swap(rhs[std::size_t(col)], rhs[std::size_t(best)]);
            for (int r = col + 1; r < M; ++r) {
                const double m = A[std::size_t(r) * M + col] / A[std::size_t(col) * M + col];
                for (int cc = col; cc < M; ++cc)
                    A[std::size_t(r) * M + cc] -= m * A[std::size_t(col) * M + cc];
                rhs[std::size_t(r)] -= m * rhs[std::size_t(col)];
            }
        }
        std::vector<double> dc(std::size_t(M));
        for (int r = M - 1; r >= 0; --r) {
            double s = rhs[std::size_t(r)];
            for (int cc = r + 1; cc < M; ++cc)
                s -= A[std::size_t(r) * M + cc] * dc[std::size_t(cc)];
            dc[std::size_t(r)] = s / A[std::size_t(r) * M + r];
        }
        for (int k = 0; k < M; ++k) c[std::size_t(k)] -= dc[std::size_t(k)];
    }
    return c;
}

}  // namespace

TEST_CASE("heat kernel: first sine mode decays at e^{-a (pi/ell)^2 t}") {
    const RdsParams p = params_m(64, 1e-3);
    const PhaseVector u0 = rds_mode_field(p, 1, 1.0);
    const Trajectory run = rds_integrate(p, u0, nothing(), 0.0, 1.0);
    const PhaseVector uT = run.sample_vec(run.n_samples - 1);
    PhaseVector expect = u0;
    for (auto& x : expect.data) x *= std::exp(-1.0);  // lambda_1 = 1 here
    CHECK(strong_dist(uT, expect) / expect.norm() < 1e-6);
}

TEST_CASE("f = v adds uniform damping: |u| decreases monotonically") {
    const RdsParams p = params_m(32, 1e-3);
    Rng rng(1);
    const PhaseVector u0 = rds_random_field(p, rng, 2.0);
    const Symbol sig = unforced(builtin_nonlinearity("linear", 2.0));
    const Trajectory run = rds_integrate(p, u0, sig, 0.0, 2.0);
    double prev = 1e300;
    for (std::size_t i = 0; i < run.n_samples; i += 100) {
        const double nrm = run.sample_vec(i).norm();
        CHECK(nrm < prev + 1e-14);
        prev = nrm;
    }
    CHECK(prev < 0.3 * u0.norm());
}

TEST_CASE("Chafee-Infante: convergence to the Newton steady state") {
    const RdsParams p = params_m(32, 1e-3);
    const double lambda = 2.0;  // between the first two eigenvalues 1 and 4
    const Nonlinearity f = builtin_nonlinearity("cubic", 4.0, lambda);
    const Symbol sig = unforced(f);

    // generic positive initial data
    const PhaseVector u0 = rds_mode_field(p, 1, 0.5);
    const Trajectory run = rds_integrate(p, u0, sig, 0.0, 30.0);
    const PhaseVector uT = run.sample_vec(run.n_samples - 1);
    CHECK(uT.norm() > 0.5);  // a nonzero steady state

    const GalerkinResidual res(p, f);
    const std::vector<double> root = newton_steady(res, uT.data);
    double fn = 0.0;
    for (double x : res(root)) fn += x * x;
    CHECK(std::sqrt(fn) < 1e-8);  // Newton residual

    PhaseVector steady(p.basis());
    steady.data = root;
    CHECK(strong_dist(uT, steady) < 1e-5);

    // the mirrored state attracts negative data
    const Trajectory run2 =
        rds_integrate(p, rds_mode_field(p, 1, -0.5), sig, 0.0, 30.0);
    const PhaseVector uT2 = run2.sample_vec(run2.n_samples - 1);
    CHECK(strong_dist(uT2, steady) > 1.0);
    PhaseVector mirrored = steady;
    for (auto& x : mirrored.data) x = -x;
    CHECK(strong_dist(uT2, mirrored) < 1e-5);
}

TEST_CASE("energy identity: exact zero, quadrature-level, order-2 refinement") {
    const RdsParams p = params_m(32, 1e-3);

    // zero trajectory with f(0,t)=0 and g=0
    const Symbol lin = unforced(builtin_nonlinearity("linear", 2.0));
    const Trajectory zrun =
        rds_integrate(p, PhaseVector(p.basis()), lin, 0.0, 0.1);
    CHECK(energy_identity_check(p, zrun, lin).max_abs_residual == 0.0);

    // pure heat run: residual at quadrature accuracy
    const Trajectory hrun =
        rds_integrate(p, rds_mode_field(p, 1, 1.0), nothing(), 0.0, 1.0);
    const EnergyIdentityReport hrep = energy_identity_check(p, hrun, nothing());
    CHECK(hrep.max_abs_residual < 1e-5);

    // forced Example I run: residual shrinks at the scheme's order (2)
    std::vector<double> shape(basis_num_doubles(p.basis()), 0.0);
    shape[0] = 0.4;
    shape[2] = 0.2;
    ForceParams fp;
    fp.amplitude = 1.0;
    auto residual_at = [&](double dt) {
        RdsParams q = p;
        q.dt = dt;
        Symbol sig = builtin_force("quasiperiodic", q.basis(), shape, fp);
        sig.f = std::make_shared<const Nonlinearity>(
            builtin_nonlinearity("example1", 2.0));
        sig.id = "example1+qp";
        Rng rng(3);
        const PhaseVector u0 = rds_random_field(q, rng, 1.0);
        const Trajectory run = rds_integrate(q, u0, sig, 0.0, 2.0);
        return energy_identity_check(q, run, sig).max_abs_residual;
    };
    const double r1 = residual_at(4e-3);
    const double r2 = residual_at(2e-3);
    const double r3 = residual_at(1e-3);
    INFO("residuals ", r1, " ", r2, " ", r3);
    const double o1 = std::log2(r1 / r2);
    const double o2 = std::log2(r2 / r3);
    CHECK(o1 == doctest::Approx(2.0).epsilon(0.2));
    CHECK(o2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("absorbing estimate: formula scale and containment") {
    const RdsParams p = params_m(32, 1e-2);
    const Nonlinearity lin = builtin_nonlinearity("linear", 2.0);

    // g = 0 and C = 0: pure contraction
    const AbsorbingEstimate e0 = absorbing_radius_rds(p, lin, 0.0);
    CHECK(e0.radius == 0.0);
    // C from dissipativity only: K_inf = 2 C ell / (lambda1 beta)
    const Nonlinearity chafee = builtin_nonlinearity("cubic", 4.0, 2.0);
    const AbsorbingEstimate ec = absorbing_radius_rds(p, chafee, 0.0);
    CHECK(ec.K_inf == doctest::Approx(2.0 * chafee.Cdiss * p.ell / ec.decay_rate));

    // entry time decreases as lambda1 beta grows
    RdsParams fast = p;
    fast.a = 4.0;
    const AbsorbingEstimate ef = absorbing_radius_rds(fast, chafee, 0.0);
    CHECK(ef.entry_time(10.0) < ec.entry_time(10.0));

    // simulated containment: linear reaction with a constant force
    std::vector<double> shape(basis_num_doubles(p.basis()), 0.0);
    shape[0] = 1.0;
    Symbol sig = builtin_force("constant", p.basis(), shape);
    sig.f = std::make_shared<const Nonlinearity>(lin);
    const ProbeGrid grid{0.0, 8.0, 1e-3};
    const double g_bound = translation_bound_norm(sig, grid);
    const AbsorbingEstimate est = absorbing_radius_rds(p, lin, g_bound);
    REQUIRE(est.radius > 0.0);
    const double tbar = est.entry_time(10.0 * est.radius);
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        Rng rng(seed);
        const PhaseVector u0 = rds_random_field(p, rng, 10.0 * est.radius);
        const double t1 = std::ceil(tbar / p.dt) * p.dt;
        const Trajectory run = rds_integrate(p, u0, sig, 0.0, t1);
        CHECK(run.sample_vec(run.n_samples - 1).norm() <= est.radius);
    }
}

TEST_CASE("dissipativity in action: d|u|^2/dt <= -2 beta lambda1 |u|^2 + 2C ell") {
    const RdsParams p = params_m(32, 1e-3);
    const Nonlinearity f = builtin_nonlinearity("cubic", 4.0, 2.0);
    const Symbol sig = unforced(f);
    Rng rng(5);
    const PhaseVector u0 = rds_random_field(p, rng, 3.0);
    const Trajectory run = rds_integrate(p, u0, sig, 0.0, 5.0);
    const double rate = 2.0 * p.a * std::pow(kPi / p.ell, 2);
    const double offset = 2.0 * f.Cdiss * p.ell;
    for (std::size_t i = 0; i + 1 < run.n_samples; i += 50) {
        const double e0 = std::pow(run.sample_vec(i).norm(), 2);
        const double e1 = std::pow(run.sample_vec(i + 1).norm(), 2);
        const double lhs = (e1 - e0) / run.dt;
        CHECK(lhs <= -rate * 0.5 * (e0 + e1) + offset + 1e-6 * (1.0 + e0));
    }
}

TEST_CASE("Dirichlet invariance: reconstructed field vanishes at the ends") {
    const RdsParams p = params_m(48, 1e-3);
    Rng rng(6);
    const PhaseVector u = rds_random_field(p, rng, 2.0);
    CHECK(std::abs(rds_eval_at(p, u.data, 0.0)) < 1e-12 * (1.0 + u.norm()));
    CHECK(std::abs(rds_eval_at(p, u.data, p.ell)) < 1e-10 * (1.0 + u.norm()));
    // interior values match the collocation grid synthesis
    const auto vals = rds_grid_values(p, u.data);
    const double h = p.ell / (2.0 * p.M + 2.0);
    CHECK(vals[0] == doctest::Approx(rds_eval_at(p, u.data, h)).epsilon(1e-12));
}

TEST_CASE("deterministic replay and stability rejection") {
    const RdsParams p = params_m(32, 2e-3);
    const Symbol sig = unforced(builtin_nonlinearity("cubic", 4.0, 2.0));
    Rng rng(7);
    const PhaseVector u0 = rds_random_field(p, rng, 1.0);
    const Trajectory a = rds_integrate(p, u0, sig, 0.0, 1.0);
    const Trajectory b = rds_integrate(p, u0, sig, 0.0, 1.0);
    CHECK(a.data == b.data);

    // explicit stepping of a steep reaction slope is rejected up front
    RdsParams coarse = p;
    coarse.dt = 0.5;
    const Symbol steep = unforced(builtin_nonlinearity("example1", 2.0));
    CHECK_THROWS_AS(rds_integrate(coarse, u0, steep, 900.0, 1000.0), SolverError);

    // restriction property: re-integration from a stored sample reproduces
    // the stored tail bit-for-bit (autonomous symbol)
    const std::size_t mid = a.n_samples / 2;
    const Trajectory tail =
        rds_integrate(p, a.sample_vec(mid), sig, a.time(mid), a.t_end());
    for (std::size_t i = 0; i + mid < a.n_samples; ++i) {
        const auto x = a.sample(mid + i);
        const auto y = tail.sample(i);
        CHECK(std::equal(x.begin(), x.end(), y.begin()));
    }
}
