#include "attrlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace attrlab {

namespace {

// relative tolerance for matching grid times
constexpr double kGridTol = 1e-9;

bool near_integer(double x, double* out) {
    const double r = std::round(x);
    if (std::abs(x - r) <= kGridTol * std::max(1.0, std::abs(x))) {
        *out = r;
        return true;
    }
    return false;
}

void require_shared_grid(const Trajectory& u, const Trajectory& v) {
    require_same_basis(u.basis, v.basis);
    if (std::abs(u.dt - v.dt) > 1e-12 * std::max(u.dt, v.dt))
        throw GridMismatchError("different dt");
    double k;
    if (!near_integer((u.t_start - v.t_start) / u.dt, &k))
        throw GridMismatchError("t_start offset is not a step multiple");
}

}  // namespace

PhaseVector Trajectory::sample_vec(std::size_t i) const {
    PhaseVector p(basis);
    const auto s = sample(i);
    std::copy(s.begin(), s.end(), p.data.begin());
    return p;
}

void Trajectory::append(std::span<const double> coeffs) {
    data.insert(data.end(), coeffs.begin(), coeffs.end());
    ++n_samples;
}

void Trajectory::reserve_samples(std::size_t n) { data.reserve(n * block()); }

std::size_t grid_index(const Trajectory& u, double t) {
    double k;
    if (!near_integer((t - u.t_start) / u.dt, &k) || k < 0.0 ||
        k > double(u.n_samples - 1))
        throw GridMismatchError("time off grid or outside sampled range");
    return static_cast<std::size_t>(k);
}

Trajectory translate(const Trajectory& u, double s) {
    if (s < 0.0) throw ValidationError("translate: negative shift");
    double k;
    if (!near_integer(s / u.dt, &k))
        throw GridMismatchError("shift is not a step multiple");
    const auto shift = static_cast<std::size_t>(k);
    if (shift >= u.n_samples)
        throw GridMismatchError("shift beyond trajectory length");
    Trajectory out;
    out.basis = u.basis;
    out.t_start = u.t_start;
    out.dt = u.dt;
    out.symbol_id = u.symbol_id;
    out.n_samples = u.n_samples - shift;
    out.data.assign(u.data.begin() + static_cast<std::ptrdiff_t>(shift * u.block()),
                    u.data.end());
    return out;
}

TrajectoryPiece extract_piece(const Trajectory& u, double t_star, double T,
                              const Provenance& prov) {
    const std::size_t i0 = grid_index(u, t_star);
    const std::size_t i1 = grid_index(u, t_star + T);
    TrajectoryPiece p;
    p.traj.basis = u.basis;
    p.traj.t_start = 0.0;
    p.traj.dt = u.dt;
    p.traj.symbol_id = u.symbol_id;
    p.traj.n_samples = i1 - i0 + 1;
    p.traj.data.assign(u.data.begin() + static_cast<std::ptrdiff_t>(i0 * u.block()),
                       u.data.begin() + static_cast<std::ptrdiff_t>((i1 + 1) * u.block()));
    p.provenance = prov;
    p.provenance.offset = t_star;
    return p;
}

double traj_dist_window(const Trajectory& u, const Trajectory& v, double a,
                        double b, const MetricSpec& spec) {
    require_shared_grid(u, v);
    if (b < a) throw ValidationError("window with b < a");
    const std::size_t ia = grid_index(u, a);
    const std::size_t ib = grid_index(u, b);
    const std::size_t ja = grid_index(v, a);
    double sup = 0.0;
    for (std::size_t i = 0; i <= ib - ia; ++i) {
        const auto su = u.sample(ia + i);
        const auto sv = v.sample(ja + i);
        const double d = spec.kind == MetricSpec::Kind::strong
                             ? strong_dist_span(su, sv)
                             : weak_dist_span(u.basis, su, sv, spec.weight_base);
        if (d > sup) sup = d;
    }
    return sup;
}

HalflineDist traj_dist_halfline(const Trajectory& u, const Trajectory& v,
                                double a, const MetricSpec& spec) {
    const int lmax = spec.series_truncation;
    if (lmax < 1) throw ValidationError("series_truncation must be >= 1");
    // both trajectories must cover [a, a+lmax]
    (void)grid_index(u, a + double(lmax));
    (void)grid_index(v, a + double(lmax));
    HalflineDist out;
    double running = 0.0;  // window sup is monotone in l; reuse the prefix
    std::size_t prev_hi = grid_index(u, a);
    const std::size_t ia = grid_index(u, a);
    const std::size_t ja = grid_index(v, a);
    double wl = 1.0;
    for (int l = 1; l <= lmax; ++l) {
        wl *= 0.5;
        const std::size_t hi = grid_index(u, a + double(l));
        for (std::size_t i = prev_hi; i <= hi; ++i) {
            const auto su = u.sample(i);
            const auto sv = v.sample(ja + (i - ia));
            const double d = spec.kind == MetricSpec::Kind::strong
                                 ? strong_dist_span(su, sv)
                                 : weak_dist_span(u.basis, su, sv, spec.weight_base);
            if (d > running) running = d;
        }
        prev_hi = hi;
        out.value += wl * running / (1.0 + running);
    }
    out.tail_bound = wl;
    return out;
}

}  // namespace attrlab
