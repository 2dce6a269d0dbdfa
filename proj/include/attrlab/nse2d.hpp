#pragma once
// Pseudospectral solver for the 2D space-periodic incompressible NSE
//   du/dt + nu A u + B(u,u) = g(t)
// on [0,L]^2, integrating-factor RK4 (exact viscous factor, explicit
// nonlinearity+force), with energy-budget and absorbing-ball diagnostics.

#include <complex>
#include <span>

#include "attrlab/forcing.hpp"
#include "attrlab/phase.hpp"
#include "attrlab/trajectory.hpp"

namespace attrlab {

struct NseParams {
    double L = 2.0 * 3.14159265358979323846;
    double nu = 1.0;
    int K = 16;          // retain |k_i| <= K
    double dt = 1e-3;
    bool dealias = true;  // pad products to an alias-free grid (2/3 rule)

    BasisId basis() const { return BasisId{BasisKind::nse2d, K, L}; }
    void validate() const;
};

struct IntegrateOptions {
    int snapshot_every = 1;     // store every n-th step
    double guard_radius = 0.0;  // 0: default 1e6; blow-up threshold on |u|
};

// projection of each mode onto the plane orthogonal to kappa; zero mean
// enforced; idempotent
void leray_project_inplace(const BasisId& basis, std::span<double> coeffs);
PhaseVector leray_project(const BasisId& basis, const PhaseVector& field);

// B(u,u) = P(u . grad u) in basis coefficients, pseudospectral with the
// params' dealiasing policy
PhaseVector nonlinear_term(const NseParams& params, const PhaseVector& u);

// deterministic grid-sampled run on [t0, t1]
Trajectory nse_integrate(const NseParams& params, const PhaseVector& u0,
                         const Symbol& g, double t0, double t1,
                         const IntegrateOptions& opts = {});

struct EnergyBudgetReport {
    double max_violation = 0.0;    // max positive residual over grid pairs
    double max_abs_residual = 0.0;
    double mean_abs_residual = 0.0;
    std::size_t n_pairs = 0;
};

// residual of |u(t)|^2 + 2 nu int ||u||^2 <= |u(t0)|^2 + 2 int <g,u> over all
// stored grid pairs t0 < t (trapezoid quadrature; identity for the Galerkin
// system up to quadrature accuracy)
EnergyBudgetReport energy_budget(const NseParams& params, const Trajectory& u,
                                 const Symbol& g);

struct AbsorbingEstimate {
    double radius = 0.0;      // R of X = {|u| <= R}; R^2 = 2 K_inf
    double K_inf = 0.0;       // asymptotic bound on |u|^2
    double decay_rate = 0.0;  // nu lambda1 (NSE) or lambda1 beta (RDS)

    // predicted entry time into {|u| <= R} from |u0| = r0
    double entry_time(double r0) const;
    // entry into {|u| <= r_target}; requires r_target^2 > K_inf
    double entry_time_to(double r0, double r_target) const;
};

// explicit Groenwall constants of the truncated system, lambda1 = (2pi/L)^2;
// g_bound is the forcing module's translation-bound norm in V'
AbsorbingEstimate absorbing_radius(const NseParams& params, double g_bound);

// --- spectral helpers ---------------------------------------------------------

// enstrophy^2 = sum |k|^2 |c_k|^2
double enstrophy_sq(const BasisId& basis, std::span<const double> coeffs);

// ||g||_{V'}^2 = sum |c_k|^2 / |k|^2 (mean mode must vanish)
double vprime_sq(const BasisId& basis, std::span<const double> coeffs);

// <g, u> pairing of two coefficient arrays
double pairing(std::span<const double> a, std::span<const double> b);

// max over modes of |kappa . u_kappa| (divergence diagnostic, integer kappa)
double max_divergence(const BasisId& basis, std::span<const double> coeffs);

// single divergence-free mode amp * kperp/|k| at kappa and its conjugate;
// the resulting field is real
PhaseVector nse_mode_field(const BasisId& basis, int k1, int k2,
                           std::complex<double> amp);

// shear flow (sin(2*pi*y/L), 0): the closed-form decay test field
PhaseVector nse_shear_field(const NseParams& params, double amplitude = 1.0);

// random divergence-free field with decaying spectrum, normalized to |u|=radius
PhaseVector nse_random_field(const NseParams& params, class Rng& rng,
                             double radius);

}  // namespace attrlab
