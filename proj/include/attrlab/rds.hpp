#pragma once
// Scalar reaction-diffusion solver on [0,ell] with Dirichlet conditions:
//   du/dt - a u_xx + f(u,t) = g(x,t)
// Sine-mode Galerkin with exact diffusion factors; f collocated on a uniform
// physical grid and projected back by the discrete sine quadrature (which
// preserves the sign structure of the dissipativity condition).

#include <span>

#include "attrlab/forcing.hpp"
#include "attrlab/nse2d.hpp"  // IntegrateOptions, AbsorbingEstimate
#include "attrlab/phase.hpp"
#include "attrlab/trajectory.hpp"

namespace attrlab {

struct RdsParams {
    double ell = 3.14159265358979323846;
    double a = 1.0;  // diffusion coefficient (>= beta > 0)
    int M = 64;      // sine-mode truncation
    double dt = 1e-3;

    BasisId basis() const { return BasisId{BasisKind::rds_sine, M, ell}; }
    void validate() const;
};

// deterministic semi-implicit run on [t0,t1] (integrating-factor Heun:
// exact sine-mode diffusion factors, explicit collocated reaction and force)
Trajectory rds_integrate(const RdsParams& params, const PhaseVector& u0,
                         const Symbol& sigma, double t0, double t1,
                         const IntegrateOptions& opts = {});

struct EnergyIdentityReport {
    double max_abs_residual = 0.0;  // worst per-step residual of the identity
    double mean_abs_residual = 0.0;
    std::size_t n_steps = 0;
};

// discrete residual of (1/2) d|u|^2/dt + (a grad u, grad u) + (f(u),u) = <g,u>
// per stored step, midpoint quadrature between samples
EnergyIdentityReport energy_identity_check(const RdsParams& params,
                                           const Trajectory& u,
                                           const Symbol& sigma);

// explicit Groenwall constants, lambda1 = (pi/ell)^2, beta = a. Uses the
// symbol's declared dissipativity constants (gamma, Cdiss) and the forcing
// module's translation-bound norm g_bound.
AbsorbingEstimate absorbing_radius_rds(const RdsParams& params,
                                       const Nonlinearity& f, double g_bound);

// --- helpers -----------------------------------------------------------------

// values of the reconstructed field on the collocation grid (2M+1 interior
// points of 2M+2 intervals)
std::vector<double> rds_grid_values(const RdsParams& params,
                                    std::span<const double> coeffs);

// field value at x (sine synthesis)
double rds_eval_at(const RdsParams& params, std::span<const double> coeffs,
                   double x);

// (f(u,t), u) by the exact collocation quadrature the solver uses
double rds_reaction_pairing(const RdsParams& params, std::span<const double> coeffs,
                            const Symbol& sigma, double t);

// coefficient vector of amp * phi_kappa (orthonormal sine mode)
PhaseVector rds_mode_field(const RdsParams& params, int kappa, double amp);

// random field with decaying spectrum, normalized to |u| = radius
PhaseVector rds_random_field(const RdsParams& params, class Rng& rng,
                             double radius);

}  // namespace attrlab
