#include "attrlab/systems.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "attrlab/kernels.hpp"
#include "attrlab/parallel.hpp"
#include "attrlab/rng.hpp"

namespace attrlab {

BasisId SystemHandle::basis() const {
    if (std::holds_alternative<NseParams>(params))
        return std::get<NseParams>(params).basis();
    return std::get<RdsParams>(params).basis();
}

double SystemHandle::step_dt() const {
    if (std::holds_alternative<NseParams>(params))
        return std::get<NseParams>(params).dt;
    return std::get<RdsParams>(params).dt;
}

SystemHandle make_nse_system(const NseParams& p, Symbol sigma, int snapshot_every,
                             double guard_radius) {
    p.validate();
    SystemHandle s;
    s.params = p;
    s.sigma0 = std::move(sigma);
    s.snapshot_every = snapshot_every;
    s.guard_radius = guard_radius;
    return s;
}

SystemHandle make_rds_system(const RdsParams& p, Symbol sigma, int snapshot_every,
                             double guard_radius) {
    p.validate();
    SystemHandle s;
    s.params = p;
    s.sigma0 = std::move(sigma);
    s.snapshot_every = snapshot_every;
    s.guard_radius = guard_radius;
    return s;
}

Trajectory integrate_system(const SystemHandle& sys, const PhaseVector& u0,
                            double t0, double t1) {
    IntegrateOptions opts;
    opts.snapshot_every = sys.snapshot_every;
    opts.guard_radius = sys.guard_radius;
    if (std::holds_alternative<NseParams>(sys.params))
        return nse_integrate(std::get<NseParams>(sys.params), u0, sys.sigma0, t0,
                             t1, opts);
    return rds_integrate(std::get<RdsParams>(sys.params), u0, sys.sigma0, t0, t1,
                         opts);
}

SetSample reach_sample(const SystemHandle& sys, const SetSample& A, double t) {
    require_same_basis(sys.basis(), A.basis);
    if (t < 0.0) throw ValidationError("reach time must be nonnegative");
    SetSample out;
    out.basis = A.basis;
    out.points.resize(A.points.size());
    if (t == 0.0) {
        out.points = A.points;
        return out;
    }
    std::vector<std::string> failures(A.points.size());
    parallel_for(A.points.size(), [&](std::size_t i) {
        try {
            // endpoint only: snapshot nothing in between
            SystemHandle local = sys;
            local.snapshot_every = std::max<int>(
                1, static_cast<int>(std::llround(t / sys.step_dt())));
            const Trajectory run = integrate_system(local, A.points[i], 0.0, t);
            out.points[i] = run.sample_vec(run.n_samples - 1);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw SolverError("reach_sample failed for initial point " +
                              std::to_string(i) + ": " + failures[i]);
    return out;
}

SetSample omega_limit_sample(const SystemHandle& sys, const SetSample& A,
                             double t_transient, double t_horizon, double stride) {
    require_same_basis(sys.basis(), A.basis);
    if (!(t_horizon > t_transient) || t_transient < 0.0)
        throw ValidationError("need t_horizon > t_transient >= 0");
    if (stride < sys.sample_dt())
        throw ValidationError("stride below the snapshot spacing");
    std::vector<SetSample> per_point(A.points.size());
    std::vector<std::string> failures(A.points.size());
    parallel_for(A.points.size(), [&](std::size_t i) {
        try {
            const Trajectory run = integrate_system(sys, A.points[i], 0.0, t_horizon);
            SetSample snaps;
            snaps.basis = A.basis;
            for (double t = t_transient; t <= t_horizon + 1e-12;
                 t += stride) {
                std::size_t idx;
                try {
                    idx = grid_index(run, t);
                } catch (const GridMismatchError&) {
                    // snap to the nearest stored sample
                    idx = std::min<std::size_t>(
                        run.n_samples - 1,
                        static_cast<std::size_t>(
                            std::llround((t - run.t_start) / run.dt)));
                }
                snaps.points.push_back(run.sample_vec(idx));
            }
            per_point[i] = std::move(snaps);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw SolverError("omega_limit_sample failed for initial point " +
                              std::to_string(i) + ": " + failures[i]);
    SetSample out;
    out.basis = A.basis;
    for (auto& s : per_point)
        for (auto& p : s.points) out.points.push_back(std::move(p));
    return out;
}

A2Report check_A2_energy(const Trajectory& u, double eps, double delta) {
    if (delta < u.dt)
        throw ValidationError("delta must be at least the sample spacing");
    A2Report rep;
    std::vector<double> norms(u.n_samples);
    for (std::size_t i = 0; i < u.n_samples; ++i)
        norms[i] = std::sqrt(kernels::sumsq(u.sample(i).data(), u.block()));
    const auto w = static_cast<std::size_t>(std::floor(delta / u.dt + 1e-12));
    // sliding min of |u(t0)| over t0 in (t-delta, t): indices [i-w, i-1]
    std::deque<std::size_t> qmin;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < u.n_samples; ++i) {
        const std::size_t j = i - 1;  // newest candidate t0
        while (!qmin.empty() && norms[qmin.back()] >= norms[j]) qmin.pop_back();
        qmin.push_back(j);
        while (qmin.front() + w < i) qmin.pop_front();
        const double v = norms[i] - norms[qmin.front()] - eps;
        if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.worst_time = u.time(i);
        }
        ++rep.n_checked;
    }
    if (rep.n_checked == 0) rep.worst_violation = 0.0;
    rep.pass = rep.worst_violation <= 0.0;
    return rep;
}

A3Report check_A3_cauchy(const std::vector<Trajectory>& runs, double T,
                         double tol_w, double weight_base) {
    if (runs.size() < 2) throw ValidationError("A3 needs at least two runs");
    A3Report rep;
    const MetricSpec weak = MetricSpec::weak(weight_base);
    const Trajectory& first = runs[0];
    const std::size_t i0 = grid_index(first, first.t_start);
    const std::size_t i1 = grid_index(first, first.t_start + T);
    for (std::size_t a = 0; a < runs.size(); ++a)
        for (std::size_t b = a + 1; b < runs.size(); ++b)
            rep.weak_max =
                std::max(rep.weak_max,
                         traj_dist_window(runs[a], runs[b], first.t_start,
                                          first.t_start + T, weak));
    rep.weak_precondition = rep.weak_max <= tol_w;
    rep.strong_tol = std::sqrt(tol_w);
    std::size_t good = 0;
    for (std::size_t i = i0; i <= i1; ++i) {
        double worst = 0.0;
        for (std::size_t a = 0; a < runs.size(); ++a)
            for (std::size_t b = a + 1; b < runs.size(); ++b)
                worst = std::max(worst, strong_dist_span(runs[a].sample(i),
                                                         runs[b].sample(i)));
        if (worst <= rep.strong_tol) ++good;
    }
    rep.strong_fraction = double(good) / double(i1 - i0 + 1);
    return rep;
}

PhaseVector random_field(const SystemHandle& sys, Rng& rng, double radius) {
    if (std::holds_alternative<NseParams>(sys.params))
        return nse_random_field(std::get<NseParams>(sys.params), rng, radius);
    return rds_random_field(std::get<RdsParams>(sys.params), rng, radius);
}

SetSample random_ensemble(const SystemHandle& sys, std::uint64_t seed,
                          std::size_t n, double radius) {
    Rng rng(seed);
    SetSample s;
    s.basis = sys.basis();
    s.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        s.points.push_back(random_field(sys, rng, radius));
    return s;
}

AbsorbingEstimate system_absorbing(const SystemHandle& sys, const ProbeGrid& grid) {
    const double g_bound = sys.sigma0.has_force()
                               ? translation_bound_norm(sys.sigma0, grid)
                               : 0.0;
    if (std::holds_alternative<NseParams>(sys.params))
        return absorbing_radius(std::get<NseParams>(sys.params), g_bound);
    if (!sys.sigma0.f)
        throw ValidationError("RDS system needs a nonlinearity");
    return absorbing_radius_rds(std::get<RdsParams>(sys.params), *sys.sigma0.f,
                                g_bound);
}

}  // namespace attrlab
