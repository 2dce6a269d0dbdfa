#pragma once
// Attractor-piece harvesting, finite epsilon-net tracking sets, tracking
// verification, approximation schedules, equicontinuity tables, section and
// invariance checks, and the translate-covering compactness proxy.
//
// Pieces are kernel proxies: post-transient windows of long runs standing in
// for restrictions of complete trajectories. Every report states this.

#include <cstdint>
#include <memory>

#include "attrlab/systems.hpp"

namespace attrlab {

struct PieceLibrary {
    BasisId basis;
    double T = 0.0;       // piece length
    double dt = 0.0;      // sample spacing
    std::size_t n_per = 0;  // samples per piece
    double t0 = 0.0, stride = 0.0, horizon = 0.0;  // harvest metadata
    std::vector<std::shared_ptr<const Trajectory>> runs;

    struct PieceRef {
        int run = 0;
        std::size_t start = 0;  // sample index of the window start
    };
    std::vector<PieceRef> pieces;

    std::size_t size() const { return pieces.size(); }
    std::span<const double> piece_sample(std::size_t p, std::size_t s) const {
        const PieceRef& r = pieces[p];
        return runs[std::size_t(r.run)]->sample(r.start + s);
    }
    double piece_start_time(std::size_t p) const {
        const PieceRef& r = pieces[p];
        return runs[std::size_t(r.run)]->time(r.start);
    }
    TrajectoryPiece materialize(std::size_t p) const;
};

// sup-strong distance between two library pieces
double piece_pair_dist(const PieceLibrary& lib, std::size_t i, std::size_t j);

// sup-strong distance between piece p and the window of u starting at sample
// index u_start; returns +inf early once the partial sup exceeds cap
double piece_window_dist(const PieceLibrary& lib, std::size_t p,
                         const Trajectory& u, std::size_t u_start,
                         double cap = std::numeric_limits<double>::infinity());

// max pairwise piece distance (exact, parallel)
double library_diameter(const PieceLibrary& lib);

// integrates the ensemble to the horizon and extracts all windows
// [t*, t*+T], t* = t0 + k stride, renormalized to [0,T]
std::shared_ptr<PieceLibrary> harvest_pieces(const SystemHandle& sys,
                                             const SetSample& ensemble,
                                             double t0, double T, double stride,
                                             double horizon);

// library built directly from stored runs (same windowing)
std::shared_ptr<PieceLibrary> library_from_runs(
    std::vector<std::shared_ptr<const Trajectory>> runs, double t0, double T,
    double stride, double horizon);

struct TrackingNet {
    double epsilon = 0.0;
    double T = 0.0;
    double cover_radius = 0.0;  // epsilon/2 used by the greedy build
    std::vector<std::size_t> members;  // library indices
    std::shared_ptr<const PieceLibrary> library;
};

// greedy covering at radius epsilon/2: repeatedly pick the yet-uncovered
// piece covering the most uncovered pieces, ties to the lowest index
TrackingNet build_tracking_net(std::shared_ptr<const PieceLibrary> lib,
                               double epsilon);

// exhaustive coverage check: every piece within cover_radius of some member;
// worst gap written to *worst when given
bool net_covers_library(const TrackingNet& net, double* worst = nullptr);

struct WindowResult {
    double t_star = 0.0;
    double min_dist = 0.0;
    std::size_t argmin = 0;
};

struct TestTrackingResult {
    std::vector<WindowResult> windows;
    double worst_dist = 0.0;
    double worst_t_star = 0.0;
    bool pass = false;
};

struct TrackingReport {
    double epsilon = 0.0, t0 = 0.0, stride = 0.0;
    std::vector<TestTrackingResult> tests;
    double max_min_dist = 0.0;
    bool pass = false;  // every window minimum < epsilon, every test
};

// for each test and each window start t* > t0 on the stride grid, the min
// over net members of the sup-strong window distance. stride <= 0 defaults
// to T/4 (a sampling compromise over "all t*", stated in the report).
TrackingReport verify_tracking(const TrackingNet& net,
                               const std::vector<Trajectory>& tests, double t0,
                               double stride = 0.0);

struct ScheduleEntry {
    std::size_t index = 0;   // argmin net member (ties to lowest index)
    double dist = 0.0;       // achieved window distance
    double window_start = 0.0;
};

// per window [jT, (j+1)T], j = j0..J, the argmin member and its distance
std::vector<ScheduleEntry> tracking_schedule(const TrackingNet& net,
                                             const Trajectory& u,
                                             std::size_t j0, std::size_t J);

struct ScheduleStage {
    double epsilon = 0.0, T = 0.0;
    std::size_t J = 0;
    double start = 0.0;  // stage begins at this time
    std::vector<ScheduleEntry> entries;
};

struct StagedSchedule {
    double t0 = 0.0;  // schedule origin (entry-time of the first net plus 1)
    std::vector<double> entry_times;  // measured per-net entry times
    std::vector<ScheduleStage> stages;
    std::vector<double> boundaries;  // t0 + sum J_l T_l after each stage
};

// staged approximation: nets must have strictly decreasing eps and strictly
// increasing T; J_n from the floor formula on measured per-net entry times
StagedSchedule multiscale_schedule(const std::vector<TrackingNet>& nets,
                                   const Trajectory& u, double t0);

struct ThetaTable {
    std::vector<double> gaps;
    std::vector<double> theta;
};

// theta(l) = max over pieces, over |t1-t2| = l, of the strong distance;
// gaps must be multiples of the library dt (0 allowed)
ThetaTable equicontinuity_modulus(const PieceLibrary& lib,
                                  const std::vector<double>& gaps);

struct SectionReport {
    std::vector<double> times;
    std::vector<double> hausdorff_dist;
    double max_dist = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Hausdorff distance between the piece sections {piece(t)} and the omega
// sample, per requested t in [0,T]
SectionReport section_check(const PieceLibrary& lib,
                            const std::vector<double>& times,
                            const SetSample& omega, double tol);

struct InvarianceReport {
    double forward_containment = 0.0;  // sup_{x in R(t)omega} dist(x, omega)
    double reverse_component = 0.0;    // sup_{y in omega} dist(y, R(t)omega)
    double tol = 0.0;
    bool pass = false;  // forward containment within tol
};

InvarianceReport invariance_check(const SetSample& omega, const SystemHandle& sys,
                                  double t, double tol);

struct CoveringTable {
    std::vector<std::size_t> prefix_sizes;  // growing shift-set prefixes
    std::vector<double> epsilons;
    // counts[prefix][eps]: greedy cover count of the translate set
    std::vector<std::vector<std::size_t>> counts;
    double window = 0.0;
};

// greedy cover counts of {translate(u,h)} under the sup-strong metric on
// [0,window]; counts saturating as the prefix grows is the compactness proxy
CoveringTable translate_covering(const Trajectory& u,
                                 const std::vector<double>& epsilons,
                                 const std::vector<double>& shifts,
                                 double window);

}  // namespace attrlab
