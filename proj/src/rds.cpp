#include "attrlab/rds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "attrlab/kernels.hpp"
#include "attrlab/rng.hpp"

namespace attrlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// sine synthesis/analysis tables on the collocation grid: N = 2M+2 intervals,
// J = 2M+1 interior points. The discrete orthogonality
//   sum_j sin(pi k j / N) sin(pi m j / N) = N/2 delta_km  (k,m < N)
// makes analysis(synthesis(c)) exact and keeps the quadrature pairing
// (f(u), u) equal to h * sum_j f(u_j) u_j.
struct RdsTables {
    int M = 0, N = 0, J = 0;
    double h = 0.0;  // grid spacing ell/N
    std::vector<double> synth;    // J x M row-major: phi_k(x_j)
    std::vector<double> analysis; // M x J row-major: phi_k(x_j)
};

RdsTables make_tables(const RdsParams& p) {
    RdsTables t;
    t.M = p.M;
    t.N = 2 * p.M + 2;
    t.J = t.N - 1;
    t.h = p.ell / double(t.N);
    const double scale = std::sqrt(2.0 / p.ell);
    t.synth.resize(std::size_t(t.J) * t.M);
    t.analysis.resize(std::size_t(t.M) * t.J);
    for (int j = 0; j < t.J; ++j)
        for (int k = 0; k < t.M; ++k) {
            const double v = scale * std::sin(kPi * double(k + 1) * double(j + 1) /
                                              double(t.N));
            t.synth[std::size_t(j) * t.M + k] = v;
            t.analysis[std::size_t(k) * t.J + j] = v;
        }
    return t;
}

void synth_grid(const RdsTables& t, std::span<const double> c,
                std::vector<double>& vals) {
    vals.resize(std::size_t(t.J));
    for (int j = 0; j < t.J; ++j)
        vals[std::size_t(j)] =
            kernels::dot(t.synth.data() + std::size_t(j) * t.M, c.data(),
                         std::size_t(t.M));
}

void project_modes(const RdsTables& t, const std::vector<double>& vals,
                   std::span<double> out) {
    for (int k = 0; k < t.M; ++k)
        out[std::size_t(k)] =
            t.h * kernels::dot(t.analysis.data() + std::size_t(k) * t.J,
                               vals.data(), std::size_t(t.J));
}

// sampled Lipschitz bound of f over [-V,V] x {times}
double sampled_slope(const Symbol& sigma, double V, double t0, double t1) {
    if (!sigma.f) return 0.0;
    const double delta = std::max(V, 1.0) * 1e-4;
    double worst = 0.0;
    for (double t : {t0, 0.5 * (t0 + t1), t1}) {
        for (int i = 0; i <= 256; ++i) {
            const double v = -V + 2.0 * V * double(i) / 256.0;
            const double s =
                std::fabs(sigma.f_eval(v + delta, t) - sigma.f_eval(v, t)) / delta;
            worst = std::max(worst, s);
        }
    }
    return worst;
}

double supnorm_bound_rds(const RdsParams& p, std::span<const double> c) {
    double s = 0.0;
    for (double x : c) s += std::fabs(x);
    return s * std::sqrt(2.0 / p.ell);
}

}  // namespace

void RdsParams::validate() const {
    if (a <= 0.0) throw ValidationError("diffusion coefficient must be positive");
    if (M < 2) throw ValidationError("M must be at least 2");
    if (ell <= 0.0) throw ValidationError("ell must be positive");
    if (dt <= 0.0) throw ValidationError("dt must be positive");
}

Trajectory rds_integrate(const RdsParams& params, const PhaseVector& u0,
                         const Symbol& sigma, double t0, double t1,
                         const IntegrateOptions& opts) {
    params.validate();
    require_same_basis(params.basis(), u0.basis);
    if (t1 < t0) throw ValidationError("t1 < t0");
    const double guard = opts.guard_radius > 0.0 ? opts.guard_radius : 1e6;

    // documented stability bound: dt * (sampled reaction slope) <= 1.5
    const double V = std::max(supnorm_bound_rds(params, u0.data), 1.0);
    const double slope = sampled_slope(sigma, 2.0 * V, t0, t1);
    if (params.dt * slope > 1.5)
        throw SolverError("dt above the reaction stability bound " +
                          std::to_string(slope > 0 ? 1.5 / slope : 0.0));

    const auto n_steps =
        static_cast<std::size_t>(std::llround((t1 - t0) / params.dt));
    if (std::abs(t0 + double(n_steps) * params.dt - t1) >
        1e-9 * std::max(1.0, std::abs(t1)))
        throw ValidationError("t_span is not a step multiple");

    const BasisId basis = params.basis();
    const auto& bt = basis_tables(basis);
    const std::size_t n = bt.n_doubles;
    const RdsTables tables = make_tables(params);

    std::vector<double> E(n);
    for (std::size_t i = 0; i < n; ++i)
        E[i] = std::exp(-params.a * bt.ksq_double[i] * params.dt);

    std::vector<double> c = u0.data;
    std::vector<double> a1(n), a2(n), stage(n), acc(n), tmp(n), force(n);
    std::vector<double> vals, fvals(std::size_t(tables.J));

    auto rhs = [&](const std::vector<double>& state, double t, std::vector<double>& out) {
        if (sigma.f) {
            synth_grid(tables, state, vals);
            for (int j = 0; j < tables.J; ++j) {
                const double fv = sigma.f_eval(vals[std::size_t(j)], t);
                if (!std::isfinite(fv))
                    throw SolverError("nonlinearity evaluation failed at t=" +
                                      std::to_string(t));
                fvals[std::size_t(j)] = -fv;
            }
            project_modes(tables, fvals, out);
        } else {
            std::fill(out.begin(), out.end(), 0.0);
        }
        if (sigma.has_force()) {
            sigma.force_coeffs(t, force);
            kernels::vaxpy(1.0, force.data(), out.data(), n);
        }
    };

    const int every = std::max(1, opts.snapshot_every);
    Trajectory traj;
    traj.basis = basis;
    traj.t_start = t0;
    traj.dt = params.dt * every;
    traj.symbol_id = sigma.id;
    traj.reserve_samples(n_steps / std::size_t(every) + 2);
    traj.append(c);

    const double h = params.dt;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = t0 + double(step) * h;
        rhs(c, t, a1);
        kernels::vscale_add(E.data(), c.data(), h, a1.data(), stage.data(), n);
        rhs(stage, t + h, a2);
        kernels::vmul(E.data(), c.data(), acc.data(), n);
        kernels::vmul(E.data(), a1.data(), tmp.data(), n);
        kernels::vaxpy(0.5 * h, tmp.data(), acc.data(), n);
        kernels::vaxpy(0.5 * h, a2.data(), acc.data(), n);
        c.swap(acc);

        const double nrm = std::sqrt(kernels::sumsq(c.data(), n));
        if (!std::isfinite(nrm) || nrm > guard)
            throw SolverError("divergence detected at t=" + std::to_string(t + h) +
                              " (|u|=" + std::to_string(nrm) + ")");
        if ((step + 1) % std::size_t(every) == 0) traj.append(c);
    }
    return traj;
}

EnergyIdentityReport energy_identity_check(const RdsParams& params,
                                           const Trajectory& u,
                                           const Symbol& sigma) {
    if (u.n_samples < 2)
        throw ValidationError("trajectory too short for an identity check");
    EnergyIdentityReport rep;
    std::vector<double> force(u.block());
    auto terms_at = [&](std::size_t i) {
        const auto s = u.sample(i);
        const double t = u.time(i);
        const double grad = params.a * enstrophy_sq(u.basis, s);
        const double react =
            sigma.f ? rds_reaction_pairing(params, s, sigma, t) : 0.0;
        double pw = 0.0;
        if (sigma.has_force()) {
            sigma.force_coeffs(t, force);
            pw = pairing(force, s);
        }
        return grad + react - pw;
    };
    double sum = 0.0;
    double prev_terms = terms_at(0);
    double prev_esq = kernels::sumsq(u.sample(0).data(), u.block());
    for (std::size_t i = 1; i < u.n_samples; ++i) {
        const double esq = kernels::sumsq(u.sample(i).data(), u.block());
        const double terms = terms_at(i);
        const double r =
            (esq - prev_esq) / (2.0 * u.dt) + 0.5 * (terms + prev_terms);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(r));
        sum += std::fabs(r);
        ++rep.n_steps;
        prev_terms = terms;
        prev_esq = esq;
    }
    rep.mean_abs_residual = rep.n_steps ? sum / double(rep.n_steps) : 0.0;
    return rep;
}

AbsorbingEstimate absorbing_radius_rds(const RdsParams& params,
                                       const Nonlinearity& f, double g_bound) {
    params.validate();
    if (g_bound < 0.0) throw ValidationError("negative force bound");
    const double lambda1 = std::pow(kPi / params.ell, 2);
    const double rate = lambda1 * params.a;
    AbsorbingEstimate est;
    est.decay_rate = rate;
    est.K_inf = 2.0 * f.Cdiss * params.ell / rate +
                g_bound / (params.a * (1.0 - std::exp(-rate)));
    est.radius = std::sqrt(2.0 * est.K_inf);
    return est;
}

std::vector<double> rds_grid_values(const RdsParams& params,
                                    std::span<const double> coeffs) {
    const RdsTables t = make_tables(params);
    std::vector<double> vals;
    synth_grid(t, coeffs, vals);
    return vals;
}

double rds_eval_at(const RdsParams& params, std::span<const double> coeffs,
                   double x) {
    const double scale = std::sqrt(2.0 / params.ell);
    double s = 0.0;
    for (int k = 0; k < params.M; ++k)
        s += coeffs[std::size_t(k)] * scale *
             std::sin(kPi * double(k + 1) * x / params.ell);
    return s;
}

double rds_reaction_pairing(const RdsParams& params, std::span<const double> coeffs,
                            const Symbol& sigma, double t) {
    const RdsTables tb = make_tables(params);
    std::vector<double> vals;
    synth_grid(tb, coeffs, vals);
    double s = 0.0;
    for (double v : vals) s += sigma.f_eval(v, t) * v;
    return tb.h * s;
}

PhaseVector rds_mode_field(const RdsParams& params, int kappa, double amp) {
    PhaseVector u(params.basis());
    u.rds_coeff(kappa) = amp;
    return u;
}

PhaseVector rds_random_field(const RdsParams& params, Rng& rng, double radius) {
    PhaseVector u(params.basis());
    for (int k = 1; k <= params.M; ++k)
        u.rds_coeff(k) = std::exp(-double(k - 1) / 3.0) * rng.gaussian();
    const double nrm = u.norm();
    if (nrm == 0.0) throw SolverError("degenerate random field");
    const double s = radius / nrm;
    for (double& x : u.data) x *= s;
    return u;
}

}  // namespace attrlab
