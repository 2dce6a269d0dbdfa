#pragma once
// The evolutionary-system surface: trajectory generation behind one handle,
// reach maps, omega-limit sampling, and numeric proxies for the energy (A2)
// and strong-convergence (A3) assumptions.

#include <optional>
#include <variant>

#include "attrlab/nse2d.hpp"
#include "attrlab/rds.hpp"

namespace attrlab {

struct SystemHandle {
    std::variant<NseParams, RdsParams> params;
    Symbol sigma0;
    int snapshot_every = 1;
    double guard_radius = 0.0;  // 0: solver default

    BasisId basis() const;
    double step_dt() const;
    double sample_dt() const { return step_dt() * snapshot_every; }
};

SystemHandle make_nse_system(const NseParams& p, Symbol sigma,
                             int snapshot_every = 1, double guard_radius = 0.0);
SystemHandle make_rds_system(const RdsParams& p, Symbol sigma,
                             int snapshot_every = 1, double guard_radius = 0.0);

// one deterministic run
Trajectory integrate_system(const SystemHandle& sys, const PhaseVector& u0,
                            double t0, double t1);

// R(t)A: forward image of every point of A at time t (exact finite image for
// these with-uniqueness solvers). Parallel over points; failures carry the
// offending initial point index.
SetSample reach_sample(const SystemHandle& sys, const SetSample& A, double t);

// endpoint snapshots at t_transient + k*stride <= t_horizon for every start
// point: an outer finite approximation of omega(A) samples
SetSample omega_limit_sample(const SystemHandle& sys, const SetSample& A,
                             double t_transient, double t_horizon, double stride);

struct A2Report {
    double worst_violation = 0.0;  // max over t of |u(t)| - min_{t0} |u(t0)| - eps
    double worst_time = 0.0;
    std::size_t n_checked = 0;
    bool pass = false;  // worst_violation <= 0
};

// for every sample time t, checks some t0 in (t-delta, t) on the grid has
// |u(t)| <= |u(t0)| + eps
A2Report check_A2_energy(const Trajectory& u, double eps, double delta);

struct A3Report {
    double weak_max = 0.0;        // max pairwise weak window distance on [0,T]
    double strong_tol = 0.0;      // derived tolerance sqrt(tol_w)
    double strong_fraction = 0.0; // fraction of grid times strong-Cauchy
    bool weak_precondition = false;
};

// diagnostic only: fraction of grid times in [0,T] at which the runs are
// pairwise strong-Cauchy below sqrt(tol_w)
A3Report check_A3_cauchy(const std::vector<Trajectory>& runs, double T,
                         double tol_w, double weight_base = 2.0);

// random initial data in the solver basis, |u0| = radius
PhaseVector random_field(const SystemHandle& sys, Rng& rng, double radius);

// seeded ensemble of n random fields with |u0| = radius
SetSample random_ensemble(const SystemHandle& sys, std::uint64_t seed,
                          std::size_t n, double radius);

// absorbing estimate of the handle's system with its own symbol's force bound
// measured on the probe grid
AbsorbingEstimate system_absorbing(const SystemHandle& sys, const ProbeGrid& grid);

}  // namespace attrlab
