#pragma once
// Time-sampled solution paths and the trajectory-space metrics
// sup-over-window and weighted half-line series.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "attrlab/phase.hpp"

namespace attrlab {

struct Trajectory {
    BasisId basis;
    double t_start = 0.0;
    double dt = 0.0;  // uniform sample spacing
    std::string symbol_id;
    std::size_t n_samples = 0;
    std::vector<double> data;  // n_samples contiguous coefficient blocks

    std::size_t block() const { return basis_num_doubles(basis); }
    double time(std::size_t i) const { return t_start + double(i) * dt; }
    double t_end() const {
        return n_samples == 0 ? t_start : time(n_samples - 1);
    }
    std::span<const double> sample(std::size_t i) const {
        return {data.data() + i * block(), block()};
    }
    std::span<double> sample_mut(std::size_t i) {
        return {data.data() + i * block(), block()};
    }
    PhaseVector sample_vec(std::size_t i) const;
    void append(std::span<const double> coeffs);
    void reserve_samples(std::size_t n);
};

struct Provenance {
    std::string run_id;    // source run identifier
    int source_run = -1;   // index into the owning library's run list
    double offset = 0.0;   // window start t* in the source run's clock
};

// a T-length window renormalized to [0,T]
struct TrajectoryPiece {
    Trajectory traj;  // t_start = 0
    Provenance provenance;
};

// index of the grid point at time t; throws GridMismatchError when t is off
// the grid or outside the sampled range
std::size_t grid_index(const Trajectory& u, double t);

// shifted restriction (T(s)u)(t) = u(t+s); s must be a grid multiple.
// Exact index shift, no arithmetic on samples.
Trajectory translate(const Trajectory& u, double s);

// window [t*, t*+T] of u renormalized to [0,T]
TrajectoryPiece extract_piece(const Trajectory& u, double t_star, double T,
                              const Provenance& prov);

// --- trajectory-space metrics ------------------------------------------------
// Trajectories are compared only on shared uniform grids; mismatches are
// rejected, never resampled.

// sup_{t in [a,b]} d(u(t), v(t)) over the shared grid
double traj_dist_window(const Trajectory& u, const Trajectory& v, double a,
                        double b, const MetricSpec& spec);

struct HalflineDist {
    double value = 0.0;       // truncated series sum_{l=1..L_max}
    double tail_bound = 0.0;  // 2^{-L_max}, bounds the dropped tail
};

// sum_l 2^{-l} d_l/(1+d_l), d_l = window distance on [a, a+l], truncated at
// spec.series_truncation
HalflineDist traj_dist_halfline(const Trajectory& u, const Trajectory& v,
                                double a, const MetricSpec& spec);

}  // namespace attrlab
