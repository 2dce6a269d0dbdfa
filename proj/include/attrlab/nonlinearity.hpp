#pragma once
// Time-dependent scalar reaction terms f(v,t) with their declared
// dissipativity/growth constants, the built-in catalog, and the structural
// validator for the sign and growth conditions.

#include <functional>
#include <string>
#include <vector>

#include "attrlab/expr.hpp"

namespace attrlab {

struct Nonlinearity {
    std::function<double(double v, double t)> eval;
    double p = 2.0;      // growth exponent >= 2
    double gamma = 1.0;  // f(v,t) v >= gamma |v|^p - Cdiss
    double Cdiss = 0.0;
    double Cgrow = 1.0;  // |f(v,t)|^{p/(p-1)} <= Cgrow (|v|^p + 1)
    std::string tag;

    double operator()(double v, double t) const { return eval(v, t); }
};

// name in {example1, example2, example3, cubic, linear}; p >= 2 where the
// formula depends on it. "cubic" is f = v^3 - lambda v (p = 4).
Nonlinearity builtin_nonlinearity(const std::string& name, double p,
                                  double lambda = 0.0);

// user-declared f(v,t) from the manifest expression grammar; constants are
// declared by the manifest, not inferred
Nonlinearity nonlinearity_from_expression(const std::string& expr, double p,
                                          double gamma, double Cdiss,
                                          double Cgrow, const std::string& tag);

// smooth bump used by examples II/III: 0 for s<=0, 1 for s>=1
double smooth_step(double s);

struct NonlinearityReport {
    double worst_diss_margin = 0.0;  // min over grid of f.v - (gamma|v|^p - C)
    double worst_grow_margin = 0.0;  // min over grid of C(|v|^p+1) - |f|^{q}
    double diss_arg_v = 0.0, diss_arg_t = 0.0;
    double grow_arg_v = 0.0, grow_arg_t = 0.0;
    bool pass = false;  // both margins >= 0 (up to -1e-12 slack)
};

// worst-case margins of the dissipativity and growth conditions over the
// sampled (v,t) grid with the declared constants
NonlinearityReport validate_nonlinearity(const Nonlinearity& f,
                                         const std::vector<double>& v_grid,
                                         const std::vector<double>& t_grid);

// uniform grids helper
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace attrlab
