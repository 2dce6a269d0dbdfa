#include "attrlab/nonlinearity.hpp"

#include <cmath>

#include "attrlab/errors.hpp"

namespace attrlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double cap_T(double t) { return t > 0.0 ? t : 0.0; }

// |v|^{p-2} v, well-defined for p >= 2 including v = 0
double odd_pow(double v, double pm1) {
    return v >= 0.0 ? std::pow(v, pm1) : -std::pow(-v, pm1);
}

double example1(double v, double t, double p) {
    const double T = cap_T(t);
    const double s = 1.0 / (1.0 + T);
    if (v <= 0.0) return odd_pow(v, p - 1.0);
    if (v <= s) return -(1.0 + T) * v;
    return std::pow(v - s, p - 1.0) - 1.0;
}

double bump2(double v) {
    // infinitely differentiable, supported on (-2pi, 2pi), 1 on [-pi, pi]
    return smooth_step((2.0 * kPi - std::fabs(v)) / kPi);
}

double example2(double v, double t, double p) {
    const double T = cap_T(t);
    if (v <= -2.0 * kPi) return odd_pow(v + 2.0 * kPi, p - 1.0);
    if (v >= 2.0 * kPi) return std::pow(v - 2.0 * kPi, p - 1.0);
    return bump2(v) * std::sin((1.0 + T) * v);
}

double bump3(double v, double T) {
    // supported on (-2+1/(2(1+T)), 2-1/(2(1+T))), 1 on (-2+1/(1+T), 2-1/(1+T))
    const double outer = 2.0 - 0.5 / (1.0 + T);
    const double inner = 2.0 - 1.0 / (1.0 + T);
    return smooth_step((outer - std::fabs(v)) / (outer - inner));
}

double example3(double v, double t, double p) {
    const double T = cap_T(t);
    if (v <= -2.0) return odd_pow(v + 2.0, p - 1.0);
    if (v >= 2.0) return std::pow(v - 2.0, p - 1.0);
    return bump3(v, T) * std::sin(T * T);
}

}  // namespace

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

Nonlinearity builtin_nonlinearity(const std::string& name, double p,
                                  double lambda) {
    if (p < 2.0) throw ValidationError("nonlinearity exponent p must be >= 2");
    Nonlinearity f;
    f.tag = name;
    if (name == "linear") {
        f.eval = [](double v, double) { return v; };
        f.p = 2.0;
        f.gamma = 1.0;
        f.Cdiss = 0.0;
        f.Cgrow = 1.0;
    } else if (name == "cubic") {
        f.eval = [lambda](double v, double) { return v * v * v - lambda * v; };
        f.p = 4.0;
        if (lambda == 0.0) {
            f.gamma = 1.0;
            f.Cdiss = 0.0;
        } else {
            f.gamma = 0.5;
            f.Cdiss = 0.5 * lambda * lambda;
        }
        f.Cgrow = 2.0 * (1.0 + lambda * lambda);
    } else if (name == "example1") {
        f.eval = [p](double v, double t) { return example1(v, t, p); };
        f.p = p;
        f.gamma = std::pow(2.0, -p);
        f.Cdiss = 3.0;
        f.Cgrow = 4.0;
    } else if (name == "example2") {
        f.eval = [p](double v, double t) { return example2(v, t, p); };
        f.p = p;
        f.gamma = std::pow(2.0, -p);
        f.Cdiss = std::pow(2.0 * kPi, p) + 2.0 * kPi;
        f.Cgrow = 4.0 * (1.0 + std::pow(2.0 * kPi, p));
    } else if (name == "example3") {
        f.eval = [p](double v, double t) { return example3(v, t, p); };
        f.p = p;
        f.gamma = std::pow(2.0, -p);
        f.Cdiss = std::pow(2.0, p) + 3.0;
        f.Cgrow = 4.0 * (1.0 + std::pow(2.0, p));
    } else {
        throw ValidationError("unknown builtin nonlinearity '" + name + "'");
    }
    return f;
}

Nonlinearity nonlinearity_from_expression(const std::string& expr, double p,
                                          double gamma, double Cdiss,
                                          double Cgrow, const std::string& tag) {
    if (p < 2.0) throw ValidationError("nonlinearity exponent p must be >= 2");
    if (gamma <= 0.0) throw ValidationError("gamma must be positive");
    const Expr e = Expr::parse(expr);
    Nonlinearity f;
    f.eval = [e](double v, double t) { return e.eval(v, t); };
    f.p = p;
    f.gamma = gamma;
    f.Cdiss = Cdiss;
    f.Cgrow = Cgrow;
    f.tag = tag.empty() ? expr : tag;
    return f;
}

NonlinearityReport validate_nonlinearity(const Nonlinearity& f,
                                         const std::vector<double>& v_grid,
                                         const std::vector<double>& t_grid) {
    if (v_grid.empty() || t_grid.empty())
        throw ValidationError("empty validation grid");
    NonlinearityReport r;
    r.worst_diss_margin = std::numeric_limits<double>::infinity();
    r.worst_grow_margin = std::numeric_limits<double>::infinity();
    const double q = f.p / (f.p - 1.0);
    bool pass = true;
    for (double t : t_grid) {
        for (double v : v_grid) {
            const double fv = f(v, t);
            if (!std::isfinite(fv))
                throw SolverError("nonlinearity evaluation failed at v=" +
                                  std::to_string(v) + ", t=" + std::to_string(t));
            const double vp = std::pow(std::fabs(v), f.p);
            const double diss = fv * v - (f.gamma * vp - f.Cdiss);
            const double grow = f.Cgrow * (vp + 1.0) - std::pow(std::fabs(fv), q);
            // roundoff slack relative to the terms being compared
            const double slack = 1e-10 * (1.0 + vp + std::fabs(fv * v));
            if (diss < -slack || grow < -slack) pass = false;
            if (diss < r.worst_diss_margin) {
                r.worst_diss_margin = diss;
                r.diss_arg_v = v;
                r.diss_arg_t = t;
            }
            if (grow < r.worst_grow_margin) {
                r.worst_grow_margin = grow;
                r.grow_arg_v = v;
                r.grow_arg_t = t;
            }
        }
    }
    r.pass = pass;
    return r;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return g;
}

}  // namespace attrlab
