#include "attrlab/nse2d.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "attrlab/kernels.hpp"
#include "attrlab/rng.hpp"

namespace attrlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::mutex& fftw_planner_mutex() {
    static std::mutex mu;  // FFTW planning is not thread-safe
    return mu;
}

// product grid: alias-free (>= 3K+1) when dealiased, minimal (2K+2) otherwise
int grid_size(const NseParams& p) {
    if (p.dealias) {
        int n = 3 * p.K + 1;
        if (n % 2) ++n;
        return n;
    }
    return 2 * p.K + 2;
}

struct Cplx {
    double re, im;
};

// FFT buffers + plans for the pseudospectral nonlinear term
class NseWorkspace {
  public:
    explicit NseWorkspace(const NseParams& p)
        : params_(p), basis_(p.basis()), N_(grid_size(p)) {
        const std::size_t cells = std::size_t(N_) * N_;
        for (auto& b : buf_) b = static_cast<Cplx*>(fftw_malloc(cells * sizeof(Cplx)));
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fwd_ = fftw_plan_dft_2d(N_, N_, reinterpret_cast<fftw_complex*>(buf_[0]),
                                reinterpret_cast<fftw_complex*>(buf_[0]),
                                FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(N_, N_, reinterpret_cast<fftw_complex*>(buf_[0]),
                                reinterpret_cast<fftw_complex*>(buf_[0]),
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~NseWorkspace() {
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            fftw_destroy_plan(fwd_);
            fftw_destroy_plan(bwd_);
        }
        for (auto& b : buf_) fftw_free(b);
    }

    NseWorkspace(const NseWorkspace&) = delete;
    NseWorkspace& operator=(const NseWorkspace&) = delete;

    // B(u,u) coefficients of P(u . grad u); out may alias nothing
    void nonlinear(std::span<const double> coeffs, std::span<double> out) {
        // grids: u1, u2, d u1/dx, d u1/dy, d u2/dx, d u2/dy
        spread(coeffs, 0, Deriv::none, buf_[0]);
        spread(coeffs, 1, Deriv::none, buf_[1]);
        spread(coeffs, 0, Deriv::ddx, buf_[2]);
        spread(coeffs, 0, Deriv::ddy, buf_[3]);
        spread(coeffs, 1, Deriv::ddx, buf_[4]);
        spread(coeffs, 1, Deriv::ddy, buf_[5]);
        for (int b = 0; b < 6; ++b) backward(buf_[b]);
        // w_i = u . grad u_i, formed from the real parts (fields are real)
        const std::size_t cells = std::size_t(N_) * N_;
        for (std::size_t i = 0; i < cells; ++i) {
            const double u1 = buf_[0][i].re;
            const double u2 = buf_[1][i].re;
            const double w1 = u1 * buf_[2][i].re + u2 * buf_[3][i].re;
            const double w2 = u1 * buf_[4][i].re + u2 * buf_[5][i].re;
            buf_[0][i] = {w1, 0.0};
            buf_[1][i] = {w2, 0.0};
        }
        forward(buf_[0]);
        forward(buf_[1]);
        gather(buf_[0], buf_[1], out);
        leray_project_inplace(basis_, out);
    }

    const BasisId& basis() const { return basis_; }

  private:
    enum class Deriv { none, ddx, ddy };

    int wrap(int k) const { return k >= 0 ? k : k + N_; }

    void spread(std::span<const double> coeffs, int comp, Deriv d, Cplx* buf) {
        const std::size_t cells = std::size_t(N_) * N_;
        std::fill_n(reinterpret_cast<double*>(buf), 2 * cells, 0.0);
        const int K = params_.K;
        const double kunit = 2.0 * kPi / params_.L;
        const double invL = 1.0 / params_.L;
        for (int k2 = -K; k2 <= K; ++k2) {
            for (int k1 = -K; k1 <= K; ++k1) {
                const std::size_t g = nse_group_of_mode(basis_, k1, k2);
                const std::size_t idx = 4 * g + 2 * std::size_t(comp);
                double re = coeffs[idx] * invL;
                double im = coeffs[idx + 1] * invL;
                if (d != Deriv::none) {
                    const double k = kunit * (d == Deriv::ddx ? k1 : k2);
                    const double nre = -k * im;  // multiply by i*k
                    im = k * re;
                    re = nre;
                }
                buf[std::size_t(wrap(k1)) * N_ + wrap(k2)] = {re, im};
            }
        }
    }

    void gather(const Cplx* w1, const Cplx* w2, std::span<double> out) {
        const int K = params_.K;
        const double scale = params_.L / (double(N_) * N_);
        std::fill(out.begin(), out.end(), 0.0);
        for (int k2 = -K; k2 <= K; ++k2) {
            for (int k1 = -K; k1 <= K; ++k1) {
                const std::size_t g = nse_group_of_mode(basis_, k1, k2);
                const std::size_t src = std::size_t(wrap(k1)) * N_ + wrap(k2);
                out[4 * g] = scale * w1[src].re;
                out[4 * g + 1] = scale * w1[src].im;
                out[4 * g + 2] = scale * w2[src].re;
                out[4 * g + 3] = scale * w2[src].im;
            }
        }
    }

    void forward(Cplx* b) {
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(b),
                         reinterpret_cast<fftw_complex*>(b));
    }
    void backward(Cplx* b) {
        fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(b),
                         reinterpret_cast<fftw_complex*>(b));
    }

    NseParams params_;
    BasisId basis_;
    int N_;
    Cplx* buf_[6] = {};
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// sup-norm bound: |u(x)| <= sum_k |c_k| / L
double supnorm_bound(const BasisId& basis, std::span<const double> c) {
    const auto& t = basis_tables(basis);
    double s = 0.0;
    for (std::size_t g = 0; g < t.n_groups; ++g) {
        const std::size_t i = 4 * g;
        s += std::sqrt(c[i] * c[i] + c[i + 1] * c[i + 1] + c[i + 2] * c[i + 2] +
                       c[i + 3] * c[i + 3]);
    }
    return s / basis.length;
}

}  // namespace

void NseParams::validate() const {
    if (nu <= 0.0) throw ValidationError("nu must be positive");
    if (K < 4) throw ValidationError("K must be at least 4");
    if (L <= 0.0) throw ValidationError("L must be positive");
    if (dt <= 0.0) throw ValidationError("dt must be positive");
}

void leray_project_inplace(const BasisId& basis, std::span<double> c) {
    const int K = basis.trunc;
    for (int k2 = -K; k2 <= K; ++k2) {
        for (int k1 = -K; k1 <= K; ++k1) {
            const std::size_t i = 4 * nse_group_of_mode(basis, k1, k2);
            if (k1 == 0 && k2 == 0) {
                c[i] = c[i + 1] = c[i + 2] = c[i + 3] = 0.0;
                continue;
            }
            const double ksq = double(k1) * k1 + double(k2) * k2;
            const double pr = (k1 * c[i] + k2 * c[i + 2]) / ksq;      // Re(k.c)/k^2
            const double pi = (k1 * c[i + 1] + k2 * c[i + 3]) / ksq;  // Im(k.c)/k^2
            c[i] -= k1 * pr;
            c[i + 1] -= k1 * pi;
            c[i + 2] -= k2 * pr;
            c[i + 3] -= k2 * pi;
        }
    }
}

PhaseVector leray_project(const BasisId& basis, const PhaseVector& field) {
    require_same_basis(basis, field.basis);
    PhaseVector out = field;
    leray_project_inplace(basis, out.data);
    return out;
}

PhaseVector nonlinear_term(const NseParams& params, const PhaseVector& u) {
    params.validate();
    require_same_basis(params.basis(), u.basis);
    NseWorkspace ws(params);
    PhaseVector out(params.basis());
    ws.nonlinear(u.data, out.data);
    return out;
}

Trajectory nse_integrate(const NseParams& params, const PhaseVector& u0,
                         const Symbol& g, double t0, double t1,
                         const IntegrateOptions& opts) {
    params.validate();
    require_same_basis(params.basis(), u0.basis);
    if (t1 < t0) throw ValidationError("t1 < t0");
    if (max_divergence(u0.basis, u0.data) > 1e-9 * (1.0 + u0.norm()))
        throw ValidationError("initial field is not divergence-free");
    const double guard =
        opts.guard_radius > 0.0 ? opts.guard_radius : 1e6;

    // documented stability bound for the explicit nonlinearity: advective CFL
    // dt <= 0.7 / (k_max * max(U0, 0.1)) with U0 the spectral sup-norm bound
    const double kmax = 2.0 * kPi * params.K / params.L;
    const double u_bound = std::max(supnorm_bound(u0.basis, u0.data), 0.1);
    const double dt_max = 0.7 / (kmax * u_bound);
    if (params.dt > dt_max)
        throw SolverError("dt above the advective stability bound " +
                          std::to_string(dt_max));

    const auto n_steps = static_cast<std::size_t>(
        std::llround((t1 - t0) / params.dt));
    if (std::abs(t0 + double(n_steps) * params.dt - t1) >
        1e-9 * std::max(1.0, std::abs(t1)))
        throw ValidationError("t_span is not a step multiple");

    const BasisId basis = params.basis();
    const auto& tables = basis_tables(basis);
    const std::size_t n = tables.n_doubles;

    // exact viscous factors
    std::vector<double> Eh(n), Eh2(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eh[i] = std::exp(-params.nu * tables.ksq_double[i] * params.dt);
        Eh2[i] = std::exp(-params.nu * tables.ksq_double[i] * params.dt * 0.5);
    }

    NseWorkspace ws(params);
    std::vector<double> c = u0.data;
    std::vector<double> a(n), b(n), c3(n), d(n), stage(n), acc(n), tmp(n);
    std::vector<double> force(n);

    auto rhs = [&](const std::vector<double>& state, double t, std::vector<double>& out) {
        ws.nonlinear(state, out);
        for (std::size_t i = 0; i < n; ++i) out[i] = -out[i];
        if (g.has_force()) {
            g.force_coeffs(t, force);
            kernels::vaxpy(1.0, force.data(), out.data(), n);
        }
    };

    const int every = std::max(1, opts.snapshot_every);
    Trajectory traj;
    traj.basis = basis;
    traj.t_start = t0;
    traj.dt = params.dt * every;
    traj.symbol_id = g.id;
    traj.reserve_samples(n_steps / std::size_t(every) + 2);
    traj.append(c);

    const double h = params.dt;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = t0 + double(step) * h;
        rhs(c, t, a);
        kernels::vscale_add(Eh2.data(), c.data(), 0.5 * h, a.data(), stage.data(), n);
        rhs(stage, t + 0.5 * h, b);
        kernels::vmul(Eh2.data(), c.data(), stage.data(), n);
        kernels::vaxpy(0.5 * h, b.data(), stage.data(), n);
        rhs(stage, t + 0.5 * h, c3);
        kernels::vmul(Eh.data(), c.data(), stage.data(), n);
        kernels::vmul(Eh2.data(), c3.data(), tmp.data(), n);
        kernels::vaxpy(h, tmp.data(), stage.data(), n);
        rhs(stage, t + h, d);
        // u_{n+1} = Eh c + h/6 (Eh a + 2 Eh2 (b + c3) + d)
        kernels::vmul(Eh.data(), c.data(), acc.data(), n);
        kernels::vmul(Eh.data(), a.data(), tmp.data(), n);
        kernels::vaxpy(h / 6.0, tmp.data(), acc.data(), n);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = b[i] + c3[i];
        kernels::vmul(Eh2.data(), tmp.data(), tmp.data(), n);
        kernels::vaxpy(h / 3.0, tmp.data(), acc.data(), n);
        kernels::vaxpy(h / 6.0, d.data(), acc.data(), n);
        c.swap(acc);

        const double nrm = std::sqrt(kernels::sumsq(c.data(), n));
        if (!std::isfinite(nrm) || nrm > guard)
            throw SolverError("divergence detected at t=" + std::to_string(t + h) +
                              " (|u|=" + std::to_string(nrm) + ")");
        if ((step + 1) % std::size_t(every) == 0) traj.append(c);
    }
    return traj;
}

EnergyBudgetReport energy_budget(const NseParams& params, const Trajectory& u,
                                 const Symbol& g) {
    const std::size_t n = u.n_samples;
    if (n < 2) throw ValidationError("trajectory too short for an energy budget");
    std::vector<double> esq(n), iens(n, 0.0), ipw(n, 0.0);
    std::vector<double> force(u.block());
    double prev_ens = 0.0, prev_pw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = u.sample(i);
        esq[i] = kernels::sumsq(s.data(), s.size());
        const double ens = enstrophy_sq(u.basis, s);
        g.force_coeffs(u.time(i), force);
        const double pw = pairing(force, s);
        if (i > 0) {
            iens[i] = iens[i - 1] + 0.5 * (prev_ens + ens) * u.dt;
            ipw[i] = ipw[i - 1] + 0.5 * (prev_pw + pw) * u.dt;
        }
        prev_ens = ens;
        prev_pw = pw;
    }
    EnergyBudgetReport rep;
    // stride the earlier endpoint when the run is long
    const std::size_t stride = n <= 4096 ? 1 : n / 4096;
    double sum_abs = 0.0;
    for (std::size_t i = 0; i < n; i += stride) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = esq[j] - esq[i] + 2.0 * params.nu * (iens[j] - iens[i]) -
                             2.0 * (ipw[j] - ipw[i]);
            rep.max_violation = std::max(rep.max_violation, r);
            rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
            sum_abs += std::abs(r);
            ++rep.n_pairs;
        }
    }
    rep.mean_abs_residual = rep.n_pairs ? sum_abs / double(rep.n_pairs) : 0.0;
    return rep;
}

double AbsorbingEstimate::entry_time(double r0) const {
    if (r0 <= radius) return 0.0;
    return std::log(r0 * r0 / K_inf) / decay_rate;
}

double AbsorbingEstimate::entry_time_to(double r0, double r_target) const {
    if (!(r_target * r_target > K_inf))
        throw ValidationError("target radius not above the asymptotic bound");
    if (r0 <= r_target) return 0.0;
    return std::log(r0 * r0 / (r_target * r_target - K_inf)) / decay_rate;
}

AbsorbingEstimate absorbing_radius(const NseParams& params, double g_bound) {
    params.validate();
    if (g_bound < 0.0) throw ValidationError("negative force bound");
    const double lambda1 = std::pow(2.0 * kPi / params.L, 2);
    AbsorbingEstimate est;
    est.decay_rate = params.nu * lambda1;
    est.K_inf = g_bound / (params.nu * (1.0 - std::exp(-est.decay_rate)));
    est.radius = std::sqrt(2.0 * est.K_inf);
    return est;
}

double enstrophy_sq(const BasisId& basis, std::span<const double> coeffs) {
    const auto& t = basis_tables(basis);
    return kernels::weighted_sumsq(coeffs.data(), t.ksq_double.data(), coeffs.size());
}

double vprime_sq(const BasisId& basis, std::span<const double> coeffs) {
    const auto& t = basis_tables(basis);
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (t.ksq_double[i] == 0.0) continue;
        s += coeffs[i] * coeffs[i] / t.ksq_double[i];
    }
    return s;
}

double pairing(std::span<const double> a, std::span<const double> b) {
    return kernels::dot(a.data(), b.data(), a.size());
}

double max_divergence(const BasisId& basis, std::span<const double> c) {
    const int K = basis.trunc;
    double worst = 0.0;
    for (int k2 = -K; k2 <= K; ++k2) {
        for (int k1 = -K; k1 <= K; ++k1) {
            const std::size_t i = 4 * nse_group_of_mode(basis, k1, k2);
            const double re = k1 * c[i] + k2 * c[i + 2];
            const double im = k1 * c[i + 1] + k2 * c[i + 3];
            worst = std::max(worst, std::sqrt(re * re + im * im));
        }
    }
    return worst;
}

PhaseVector nse_mode_field(const BasisId& basis, int k1, int k2,
                           std::complex<double> amp) {
    if (k1 == 0 && k2 == 0) throw ValidationError("mean mode is excluded");
    PhaseVector u(basis);
    const double kn = std::sqrt(double(k1) * k1 + double(k2) * k2);
    const std::complex<double> c1 = amp * (-k2 / kn);
    const std::complex<double> c2 = amp * (k1 / kn);
    u.nse_set_coeff(k1, k2, 0, c1);
    u.nse_set_coeff(k1, k2, 1, c2);
    u.nse_set_coeff(-k1, -k2, 0, std::conj(c1));
    u.nse_set_coeff(-k1, -k2, 1, std::conj(c2));
    return u;
}

PhaseVector nse_shear_field(const NseParams& params, double amplitude) {
    // u = amplitude (sin(2 pi y / L), 0):
    // coefficient at (0,1): u1 = amp L/(2i), conjugate at (0,-1)
    PhaseVector u(params.basis());
    const std::complex<double> c1(0.0, -amplitude * params.L / 2.0);
    u.nse_set_coeff(0, 1, 0, c1);
    u.nse_set_coeff(0, -1, 0, std::conj(c1));
    return u;
}

PhaseVector nse_random_field(const NseParams& params, Rng& rng, double radius) {
    const BasisId basis = params.basis();
    PhaseVector u(basis);
    const int K = params.K;
    for (int k2 = -K; k2 <= K; ++k2) {
        for (int k1 = -K; k1 <= K; ++k1) {
            const bool half = (k2 > 0) || (k2 == 0 && k1 > 0);
            if (!half) continue;
            const double kk = std::sqrt(double(k1) * k1 + double(k2) * k2);
            const double sigma = std::exp(-0.5 * kk) / (1.0 + kk * kk);
            const std::complex<double> amp(sigma * rng.gaussian(),
                                           sigma * rng.gaussian());
            const double kn = kk;
            const std::complex<double> c1 = amp * (-k2 / kn);
            const std::complex<double> c2 = amp * (k1 / kn);
            u.nse_set_coeff(k1, k2, 0, c1);
            u.nse_set_coeff(k1, k2, 1, c2);
            u.nse_set_coeff(-k1, -k2, 0, std::conj(c1));
            u.nse_set_coeff(-k1, -k2, 1, std::conj(c2));
        }
    }
    const double nrm = u.norm();
    if (nrm == 0.0) throw SolverError("degenerate random field");
    const double s = radius / nrm;
    for (double& x : u.data) x *= s;
    return u;
}

}  // namespace attrlab
