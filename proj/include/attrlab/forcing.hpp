#pragma once
// Time-dependent symbols sigma = (f, g): evaluation, translation, the
// translation-boundedness norm, the normal-function test, and the
// equicontinuity / pointwise-limit classifiers for nonlinearities.
//
// All sup-over-t quantities are measured on finite probe horizons and are
// lower bounds of the true sups; classifier verdicts are sampled necessary
// conditions, never proofs.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attrlab/basis.hpp"
#include "attrlab/nonlinearity.hpp"

namespace attrlab {

// scalar time profile s(t); sq_mass, when present, is the exact integral of
// s^2 over [a,b] (grid quadrature cannot resolve e.g. the spike train)
struct TimeProfile {
    std::function<double(double)> value;
    std::function<double(double, double)> sq_mass;  // may be empty
    std::string tag;
};

TimeProfile profile_constant(double c);
// sum_i amp[i] * sin(freq[i] * t), exact squared window mass
TimeProfile profile_sines(const std::vector<double>& amps,
                          const std::vector<double>& freqs);
// exp(-rate |t|)
TimeProfile profile_decaying(double rate);
// sum_{n=0..500} 2^n chi_{[n, n+4^{-n}]}(t); each spike carries unit squared
// mass, so the profile is translation bounded but not normal
TimeProfile profile_spikes();
// expression in t (grammar of expr.hpp); quadrature-only mass
TimeProfile profile_expression(const std::string& expr);

// force g(t) = profile(t) * shape, shape in basis coefficients
struct ForceField {
    BasisId basis;
    std::vector<double> shape;
    TimeProfile profile;
    double shape_vprime_sq = 0.0;  // ||shape||_{V'}^2 = sum |c|^2 / |k|^2

    static ForceField make(const BasisId& basis, std::vector<double> shape,
                           TimeProfile profile);
};

struct Symbol {
    std::string id;
    std::shared_ptr<const ForceField> force;     // null: unforced
    std::shared_ptr<const Nonlinearity> f;       // null: no reaction term
    double shift = 0.0;                          // accumulated translation

    bool has_force() const { return force != nullptr; }
    // writes profile(t+shift) * shape into out (out.size() == basis doubles)
    void force_coeffs(double t, std::span<double> out) const;
    double force_value(double t) const;          // profile value at t+shift
    double force_vprime_sq(double t) const;      // ||g(t)||_{V'}^2
    // integral over [a,b] of ||g||_{V'}^2; exact when the profile supports it
    double force_window_mass(double a, double b) const;
    bool has_exact_mass() const;
    double f_eval(double v, double t) const;     // nonlinearity with shift
};

Symbol make_symbol(std::string id, std::optional<ForceField> force,
                   std::optional<Nonlinearity> f);

// sigma(.+h); composition is exact (shifts add)
Symbol translate_symbol(const Symbol& sigma, double h);

struct ProbeGrid {
    double t0 = 0.0;
    double t1 = 1000.0;
    double step = 1e-3;  // quadrature / window-start resolution
};

// sup over window starts on the grid of int_t^{t+1} ||g||_{V'}^2 ds.
// A lower bound of the true sup (finite horizon, gridded starts).
double translation_bound_norm(const Symbol& g, const ProbeGrid& grid);

// sup over window starts of int_t^{t+delta} ||g||_{V'}^2 ds
double normal_defect(const Symbol& g, double delta, const ProbeGrid& grid);

struct NormalSweep {
    std::vector<double> deltas;
    std::vector<double> defects;
    bool normal = false;       // some probed delta drove the defect below eps
    double delta_at = 0.0;     // first such delta
};

// sweeps delta downward (halving) from delta0 to delta_min
NormalSweep is_normal(const Symbol& g, double eps, const ProbeGrid& grid,
                      double delta0 = 1.0, double delta_min = 1e-4);

// --- nonlinearity classifiers -----------------------------------------------

struct ModulusTable {
    std::vector<double> gaps;    // l values
    std::vector<double> theta;   // theta(l, R)
    double R = 0.0;
    bool passes = false;  // theta shrinks as l -> 0 on the sampled horizon
};

// theta(l,R) = max over sampled t, over |v1-v2| <= l in [-R,R], of
// |f(v1,t)-f(v2,t)|. Passes the sampled necessary condition for
// C^{p.u.}-translation-compactness iff theta(l_min) <= max(1e-6*(1+theta_max),
// 0.05*theta_max).
ModulusTable equicontinuity_modulus(const Nonlinearity& f, double R,
                                    const std::vector<double>& t_samples,
                                    double v_resolution,
                                    const std::vector<double>& gaps);

struct LimitProbe {
    std::vector<double> v_grid;
    std::vector<bool> converged;
    std::vector<double> limit;     // last value; meaningful where converged
    std::vector<double> residual;  // tail variation
    std::size_t diverging = 0;     // count of flagged v points
    double max_jump = 0.0;         // max |limit| gap between adjacent
                                   // converged grid points
};

// per-v convergence of f(v, t_n) along the (increasing, unbounded within the
// probe) t_sequence; tail-variation tolerance tol
LimitProbe pointwise_limit_probe(const Nonlinearity& f,
                                 const std::vector<double>& v_grid,
                                 const std::vector<double>& t_sequence,
                                 double tol = 1e-2);

// --- built-in catalog ---------------------------------------------------------

struct ForceTruth {
    bool translation_compact = false;
    bool normal = false;
    bool translation_bounded = false;
};

struct ForceParams {
    double amplitude = 1.0;
    double freq1 = 0.7;
    double freq2 = 0.7 * 1.4142135623730951;  // incommensurate pair
    double ratio2 = 1.0;                      // second sine amplitude ratio
    double decay_rate = 1.0;
};

// name in {constant, quasiperiodic, decaying, spike_train}; shape is the
// spatial coefficient profile the time profile multiplies
Symbol builtin_force(const std::string& name, const BasisId& basis,
                     std::vector<double> shape, const ForceParams& params = {});

ForceTruth builtin_force_truth(const std::string& name);

}  // namespace attrlab
