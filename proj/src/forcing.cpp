#include "attrlab/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "attrlab/errors.hpp"

namespace attrlab {

namespace {

constexpr int kMaxSpike = 500;

double sin_cross_integral(double w1, double w2, double a, double b) {
    // int_a^b sin(w1 s) sin(w2 s) ds
    if (w1 == w2) {
        if (w1 == 0.0) return 0.0;
        return 0.5 * (b - a) - (std::sin(2.0 * w1 * b) - std::sin(2.0 * w1 * a)) /
                                   (4.0 * w1);
    }
    const double wm = w1 - w2;
    const double wp = w1 + w2;
    auto F = [&](double s) {
        return std::sin(wm * s) / (2.0 * wm) - std::sin(wp * s) / (2.0 * wp);
    };
    return F(b) - F(a);
}

double spike_width(int n) { return std::ldexp(1.0, -2 * n); }  // 4^{-n}

}  // namespace

TimeProfile profile_constant(double c) {
    TimeProfile p;
    p.value = [c](double) { return c; };
    p.sq_mass = [c](double a, double b) { return c * c * (b - a); };
    p.tag = "constant";
    return p;
}

TimeProfile profile_sines(const std::vector<double>& amps,
                          const std::vector<double>& freqs) {
    if (amps.size() != freqs.size() || amps.empty())
        throw ValidationError("profile_sines: amps/freqs size mismatch");
    TimeProfile p;
    p.value = [amps, freqs](double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < amps.size(); ++i)
            s += amps[i] * std::sin(freqs[i] * t);
        return s;
    };
    p.sq_mass = [amps, freqs](double a, double b) {
        double m = 0.0;
        for (std::size_t i = 0; i < amps.size(); ++i)
            for (std::size_t j = 0; j < amps.size(); ++j)
                m += amps[i] * amps[j] * sin_cross_integral(freqs[i], freqs[j], a, b);
        return m;
    };
    p.tag = "sines";
    return p;
}

TimeProfile profile_decaying(double rate) {
    if (rate <= 0.0) throw ValidationError("decay rate must be positive");
    TimeProfile p;
    p.value = [rate](double t) { return std::exp(-rate * std::fabs(t)); };
    p.sq_mass = [rate](double a, double b) {
        auto seg_pos = [rate](double lo, double hi) {
            // int exp(-2 r s) on [lo,hi], lo,hi >= 0
            return (std::exp(-2.0 * rate * lo) - std::exp(-2.0 * rate * hi)) /
                   (2.0 * rate);
        };
        double m = 0.0;
        if (b > 0.0) m += seg_pos(std::max(a, 0.0), b);
        if (a < 0.0) m += seg_pos(std::max(-b, 0.0), -a);
        return m;
    };
    p.tag = "decaying";
    return p;
}

TimeProfile profile_spikes() {
    TimeProfile p;
    p.value = [](double t) {
        const double fn = std::floor(t);
        if (fn < 0.0 || fn > double(kMaxSpike)) return 0.0;
        const int n = static_cast<int>(fn);
        if (t - fn <= spike_width(n)) return std::ldexp(1.0, n);  // 2^n
        return 0.0;
    };
    p.sq_mass = [](double a, double b) {
        if (b <= a) return 0.0;
        const int lo = std::max(0, static_cast<int>(std::floor(a)) - 1);
        const int hi = std::min(kMaxSpike, static_cast<int>(std::floor(b)));
        double m = 0.0;
        for (int n = lo; n <= hi; ++n) {
            // overlap in spike-local coordinates keeps 4^{-n} resolvable
            const double olo = std::max(a - double(n), 0.0);
            const double ohi = std::min(b - double(n), spike_width(n));
            if (ohi > olo) m += std::ldexp(ohi - olo, 2 * n);  // 4^n * len
        }
        return m;
    };
    p.tag = "spike_train";
    return p;
}

TimeProfile profile_expression(const std::string& expr) {
    const Expr e = Expr::parse(expr);
    TimeProfile p;
    p.value = [e](double t) { return e.eval(0.0, t); };
    p.tag = "expr:" + expr;
    return p;
}

ForceField ForceField::make(const BasisId& basis, std::vector<double> shape,
                            TimeProfile profile) {
    if (shape.size() != basis_num_doubles(basis))
        throw ValidationError("force shape length does not match basis");
    const auto& tables = basis_tables(basis);
    ForceField f;
    f.basis = basis;
    f.profile = std::move(profile);
    double vp = 0.0;
    const std::size_t gs = basis_group_size(basis);
    for (std::size_t g = 0; g < tables.n_groups; ++g) {
        const double ksq = tables.ksq_group[g];
        for (std::size_t c = 0; c < gs; ++c) {
            const double x = shape[g * gs + c];
            if (ksq == 0.0) {
                if (x != 0.0)
                    throw ValidationError("force has a nonzero mean-mode entry");
                continue;
            }
            vp += x * x / ksq;
        }
    }
    f.shape = std::move(shape);
    f.shape_vprime_sq = vp;
    return f;
}

Symbol make_symbol(std::string id, std::optional<ForceField> force,
                   std::optional<Nonlinearity> f) {
    Symbol s;
    s.id = std::move(id);
    if (force) s.force = std::make_shared<const ForceField>(std::move(*force));
    if (f) s.f = std::make_shared<const Nonlinearity>(std::move(*f));
    return s;
}

void Symbol::force_coeffs(double t, std::span<double> out) const {
    if (!force) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double s = force->profile.value(t + shift);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * force->shape[i];
}

double Symbol::force_value(double t) const {
    return force ? force->profile.value(t + shift) : 0.0;
}

double Symbol::force_vprime_sq(double t) const {
    if (!force) return 0.0;
    const double s = force->profile.value(t + shift);
    return s * s * force->shape_vprime_sq;
}

bool Symbol::has_exact_mass() const {
    return force && static_cast<bool>(force->profile.sq_mass);
}

double Symbol::force_window_mass(double a, double b) const {
    if (!force) return 0.0;
    if (!force->profile.sq_mass)
        throw ValidationError("profile has no exact mass; use quadrature path");
    return force->shape_vprime_sq * force->profile.sq_mass(a + shift, b + shift);
}

double Symbol::f_eval(double v, double t) const {
    if (!f) throw ValidationError("symbol has no nonlinearity");
    return (*f)(v, t + shift);
}

Symbol translate_symbol(const Symbol& sigma, double h) {
    Symbol out = sigma;
    out.shift += h;
    return out;
}

namespace {

// max over window starts on the grid of int_t^{t+win} ||g||_{V'}^2
double windowed_sup(const Symbol& g, double win, const ProbeGrid& grid) {
    if (!(win > 0.0)) throw ValidationError("window must be positive");
    if (!(grid.t1 > grid.t0 + win))
        throw ValidationError("probe horizon shorter than the window");
    const std::size_t n_start =
        static_cast<std::size_t>(std::floor((grid.t1 - grid.t0 - win) / grid.step)) + 1;
    if (g.has_exact_mass()) {
        double sup = 0.0;
        for (std::size_t i = 0; i < n_start; ++i) {
            const double t = grid.t0 + double(i) * grid.step;
            sup = std::max(sup, g.force_window_mass(t, t + win));
        }
        return sup;
    }
    // trapezoid prefix of ||g||_{V'}^2 on the grid, then O(1) windows
    const auto n_grid =
        static_cast<std::size_t>(std::ceil((grid.t1 - grid.t0) / grid.step)) + 1;
    std::vector<double> prefix(n_grid, 0.0);
    double prev = g.force_vprime_sq(grid.t0);
    for (std::size_t i = 1; i < n_grid; ++i) {
        const double cur = g.force_vprime_sq(grid.t0 + double(i) * grid.step);
        prefix[i] = prefix[i - 1] + 0.5 * (prev + cur) * grid.step;
        prev = cur;
    }
    const auto wsteps = static_cast<std::size_t>(std::llround(win / grid.step));
    double sup = 0.0;
    for (std::size_t i = 0; i + wsteps < n_grid; ++i)
        sup = std::max(sup, prefix[i + wsteps] - prefix[i]);
    return sup;
}

}  // namespace

double translation_bound_norm(const Symbol& g, const ProbeGrid& grid) {
    return windowed_sup(g, 1.0, grid);
}

double normal_defect(const Symbol& g, double delta, const ProbeGrid& grid) {
    return windowed_sup(g, delta, grid);
}

NormalSweep is_normal(const Symbol& g, double eps, const ProbeGrid& grid,
                      double delta0, double delta_min) {
    NormalSweep sweep;
    for (double d = delta0; d >= delta_min; d *= 0.5) {
        const double defect = normal_defect(g, d, grid);
        sweep.deltas.push_back(d);
        sweep.defects.push_back(defect);
        if (!sweep.normal && defect <= eps) {
            sweep.normal = true;
            sweep.delta_at = d;
        }
    }
    return sweep;
}

ModulusTable equicontinuity_modulus(const Nonlinearity& f, double R,
                                    const std::vector<double>& t_samples,
                                    double v_resolution,
                                    const std::vector<double>& gaps) {
    if (R <= 0.0) throw ValidationError("R must be positive");
    if (t_samples.empty() || gaps.empty())
        throw ValidationError("empty probe grids");
    const auto n = static_cast<std::size_t>(std::floor(2.0 * R / v_resolution)) + 1;
    if (n > (std::size_t{1} << 22))
        throw ValidationError("v_resolution too fine for the probe");
    std::vector<double> vals(n);
    ModulusTable table;
    table.R = R;
    table.gaps = gaps;
    table.theta.assign(gaps.size(), 0.0);
    for (double t : t_samples) {
        for (std::size_t i = 0; i < n; ++i)
            vals[i] = f(-R + double(i) * v_resolution, t);
        for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
            const auto w =
                static_cast<std::size_t>(std::floor(gaps[gi] / v_resolution + 1e-12));
            if (w == 0) continue;
            // sliding max and min over windows of w+1 samples
            std::deque<std::size_t> qmax, qmin;
            double best = table.theta[gi];
            for (std::size_t i = 0; i < n; ++i) {
                while (!qmax.empty() && vals[qmax.back()] <= vals[i]) qmax.pop_back();
                qmax.push_back(i);
                while (!qmin.empty() && vals[qmin.back()] >= vals[i]) qmin.pop_back();
                qmin.push_back(i);
                while (qmax.front() + w < i) qmax.pop_front();
                while (qmin.front() + w < i) qmin.pop_front();
                if (i >= w)
                    best = std::max(best, vals[qmax.front()] - vals[qmin.front()]);
            }
            table.theta[gi] = best;
        }
    }
    double theta_min_gap = 0.0, theta_max_gap = 0.0, gmin = gaps[0], gmax = gaps[0];
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
        if (gaps[gi] <= gmin) {
            gmin = gaps[gi];
            theta_min_gap = table.theta[gi];
        }
        if (gaps[gi] >= gmax) {
            gmax = gaps[gi];
            theta_max_gap = table.theta[gi];
        }
    }
    table.passes =
        theta_min_gap <= std::max(1e-6 * (1.0 + theta_max_gap), 0.05 * theta_max_gap);
    return table;
}

LimitProbe pointwise_limit_probe(const Nonlinearity& f,
                                 const std::vector<double>& v_grid,
                                 const std::vector<double>& t_sequence,
                                 double tol) {
    if (v_grid.empty() || t_sequence.size() < 4)
        throw ValidationError("limit probe needs a v grid and >= 4 times");
    for (std::size_t i = 1; i < t_sequence.size(); ++i)
        if (t_sequence[i] <= t_sequence[i - 1])
            throw ValidationError("t_sequence must increase");
    LimitProbe probe;
    probe.v_grid = v_grid;
    probe.converged.assign(v_grid.size(), false);
    probe.limit.assign(v_grid.size(), 0.0);
    probe.residual.assign(v_grid.size(), 0.0);
    const std::size_t tail = std::max<std::size_t>(2, t_sequence.size() / 4);
    for (std::size_t i = 0; i < v_grid.size(); ++i) {
        const double last = f(v_grid[i], t_sequence.back());
        double res = 0.0;
        for (std::size_t k = t_sequence.size() - tail; k < t_sequence.size(); ++k)
            res = std::max(res, std::fabs(f(v_grid[i], t_sequence[k]) - last));
        probe.limit[i] = last;
        probe.residual[i] = res;
        probe.converged[i] = res <= tol;
        if (!probe.converged[i]) ++probe.diverging;
    }
    for (std::size_t i = 0; i + 1 < v_grid.size(); ++i)
        if (probe.converged[i] && probe.converged[i + 1])
            probe.max_jump =
                std::max(probe.max_jump, std::fabs(probe.limit[i + 1] - probe.limit[i]));
    return probe;
}

Symbol builtin_force(const std::string& name, const BasisId& basis,
                     std::vector<double> shape, const ForceParams& params) {
    TimeProfile profile;
    if (name == "constant")
        profile = profile_constant(params.amplitude);
    else if (name == "quasiperiodic")
        profile = profile_sines({params.amplitude, params.amplitude * params.ratio2},
                                {params.freq1, params.freq2});
    else if (name == "decaying") {
        profile = profile_decaying(params.decay_rate);
        if (params.amplitude != 1.0) {
            TimeProfile base = profile;
            const double amp = params.amplitude;
            profile.value = [base, amp](double t) { return amp * base.value(t); };
            profile.sq_mass = [base, amp](double a, double b) {
                return amp * amp * base.sq_mass(a, b);
            };
        }
    } else if (name == "spike_train")
        profile = profile_spikes();
    else
        throw ValidationError("unknown builtin force '" + name + "'");
    profile.tag = name;
    Symbol s;
    s.id = "force:" + name;
    s.force = std::make_shared<const ForceField>(
        ForceField::make(basis, std::move(shape), std::move(profile)));
    return s;
}

ForceTruth builtin_force_truth(const std::string& name) {
    if (name == "constant") return {true, true, true};
    if (name == "quasiperiodic") return {true, true, true};
    if (name == "decaying") return {true, true, true};
    if (name == "spike_train") return {false, false, true};
    throw ValidationError("unknown builtin force '" + name + "'");
}

}  // namespace attrlab
