#include "attrlab/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "attrlab/kernels.hpp"
#include "attrlab/parallel.hpp"

namespace attrlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t steps_of(double span, double dt, const char* what) {
    const double k = span / dt;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-6 || r < 0.0)
        throw ValidationError(std::string(what) + " is not a sample-grid multiple");
    return static_cast<std::size_t>(r);
}

// simple fixed-size bitset over vector<uint64_t>
struct BitRows {
    std::size_t n = 0, words = 0;
    std::vector<std::uint64_t> bits;
    explicit BitRows(std::size_t n_, std::size_t rows)
        : n(n_), words((n_ + 63) / 64), bits(words * rows, 0) {}
    std::uint64_t* row(std::size_t r) { return bits.data() + r * words; }
    const std::uint64_t* row(std::size_t r) const { return bits.data() + r * words; }
    static void set(std::uint64_t* row, std::size_t j) {
        row[j >> 6] |= (std::uint64_t{1} << (j & 63));
    }
    static bool get(const std::uint64_t* row, std::size_t j) {
        return (row[j >> 6] >> (j & 63)) & 1;
    }
};

}  // namespace

TrajectoryPiece PieceLibrary::materialize(std::size_t p) const {
    const PieceRef& r = pieces[p];
    const Trajectory& run = *runs[std::size_t(r.run)];
    Provenance prov;
    prov.run_id = run.symbol_id + "#run" + std::to_string(r.run);
    prov.source_run = r.run;
    return extract_piece(run, run.time(r.start), T, prov);
}

double piece_pair_dist(const PieceLibrary& lib, std::size_t i, std::size_t j) {
    double sup = 0.0;
    for (std::size_t s = 0; s < lib.n_per; ++s) {
        const auto a = lib.piece_sample(i, s);
        const auto b = lib.piece_sample(j, s);
        const double d = kernels::sumsq_diff(a.data(), b.data(), a.size());
        if (d > sup) sup = d;
    }
    return std::sqrt(sup);
}

double piece_window_dist(const PieceLibrary& lib, std::size_t p,
                         const Trajectory& u, std::size_t u_start, double cap) {
    const double capsq = cap < kInf ? cap * cap : kInf;
    double sup = 0.0;
    for (std::size_t s = 0; s < lib.n_per; ++s) {
        const auto a = lib.piece_sample(p, s);
        const auto b = u.sample(u_start + s);
        const double d = kernels::sumsq_diff(a.data(), b.data(), a.size());
        if (d > sup) {
            sup = d;
            if (sup > capsq) return kInf;
        }
    }
    return std::sqrt(sup);
}

double library_diameter(const PieceLibrary& lib) {
    const std::size_t P = lib.size();
    std::vector<double> row_max(P, 0.0);
    parallel_for(P, [&](std::size_t i) {
        double m = 0.0;
        for (std::size_t j = i + 1; j < P; ++j)
            m = std::max(m, piece_pair_dist(lib, i, j));
        row_max[i] = m;
    });
    double d = 0.0;
    for (double m : row_max) d = std::max(d, m);
    return d;
}

std::shared_ptr<PieceLibrary> library_from_runs(
    std::vector<std::shared_ptr<const Trajectory>> runs, double t0, double T,
    double stride, double horizon) {
    if (runs.empty()) throw ValidationError("no runs to harvest");
    const Trajectory& r0 = *runs.front();
    auto lib = std::make_shared<PieceLibrary>();
    lib->basis = r0.basis;
    lib->dt = r0.dt;
    lib->T = T;
    lib->t0 = t0;
    lib->stride = stride;
    lib->horizon = horizon;
    const std::size_t t_steps = steps_of(T, r0.dt, "piece length T");
    if (t_steps == 0) throw ValidationError("piece length below sample spacing");
    lib->n_per = t_steps + 1;
    const std::size_t s_steps =
        std::max<std::size_t>(1, steps_of(stride, r0.dt, "stride"));
    for (std::size_t ri = 0; ri < runs.size(); ++ri) {
        const Trajectory& run = *runs[ri];
        require_same_basis(run.basis, lib->basis);
        if (std::abs(run.dt - lib->dt) > 1e-12 * lib->dt)
            throw GridMismatchError("harvest runs with differing sample spacing");
        const double off = (t0 - run.t_start) / run.dt;
        const auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(off - 1e-9)));
        for (std::size_t start = i0; start + t_steps < run.n_samples;
             start += s_steps)
            lib->pieces.push_back({static_cast<int>(ri), start});
    }
    if (lib->pieces.empty())
        throw ValidationError("harvest produced no pieces (horizon too short?)");
    lib->runs = std::move(runs);
    return lib;
}

std::shared_ptr<PieceLibrary> harvest_pieces(const SystemHandle& sys,
                                             const SetSample& ensemble,
                                             double t0, double T, double stride,
                                             double horizon) {
    require_same_basis(sys.basis(), ensemble.basis);
    if (ensemble.points.empty()) throw ValidationError("empty ensemble");
    if (horizon < t0 + T)
        throw ValidationError("horizon must be at least t0 + T");
    std::vector<std::shared_ptr<const Trajectory>> runs(ensemble.points.size());
    std::vector<std::string> failures(ensemble.points.size());
    parallel_for(ensemble.points.size(), [&](std::size_t i) {
        try {
            runs[i] = std::make_shared<const Trajectory>(
                integrate_system(sys, ensemble.points[i], 0.0, horizon));
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw SolverError("harvest run " + std::to_string(i) +
                              " failed: " + failures[i]);
    return library_from_runs(std::move(runs), t0, T, stride, horizon);
}

TrackingNet build_tracking_net(std::shared_ptr<const PieceLibrary> lib,
                               double epsilon) {
    if (!lib || lib->size() == 0) throw ValidationError("empty piece library");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    const PieceLibrary& L = *lib;
    const std::size_t P = L.size();
    const double radius = 0.5 * epsilon;

    // coverage adjacency at radius epsilon/2 (early-exit distance scans)
    BitRows cover(P, P);
    parallel_for(P, [&](std::size_t i) {
        auto* row = cover.row(i);
        for (std::size_t j = 0; j < P; ++j) {
            if (j == i) {
                BitRows::set(row, j);
                continue;
            }
            double sup = 0.0;
            const double capsq = radius * radius;
            bool ok = true;
            for (std::size_t s = 0; s < L.n_per; ++s) {
                const auto a = L.piece_sample(i, s);
                const auto b = L.piece_sample(j, s);
                const double d = kernels::sumsq_diff(a.data(), b.data(), a.size());
                if (d > sup) {
                    sup = d;
                    if (sup > capsq) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) BitRows::set(row, j);
        }
    });

    // greedy max-coverage over yet-uncovered candidates
    std::vector<std::uint64_t> uncovered(cover.words, ~std::uint64_t{0});
    if (P % 64) uncovered[cover.words - 1] = (std::uint64_t{1} << (P % 64)) - 1;
    auto count_and = [&](const std::uint64_t* row) {
        std::uint64_t c = 0;
        for (std::size_t w = 0; w < cover.words; ++w)
            c += std::uint64_t(__builtin_popcountll(row[w] & uncovered[w]));
        return c;
    };
    auto any_uncovered = [&] {
        for (auto w : uncovered)
            if (w) return true;
        return false;
    };
    TrackingNet net;
    net.epsilon = epsilon;
    net.T = L.T;
    net.cover_radius = radius;
    net.library = lib;
    while (any_uncovered()) {
        std::size_t best = P;
        std::uint64_t best_score = 0;
        for (std::size_t i = 0; i < P; ++i) {
            if (!BitRows::get(uncovered.data(), i)) continue;  // candidates: uncovered
            const std::uint64_t score = count_and(cover.row(i));
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        if (best == P) throw SolverError("greedy cover stalled");
        net.members.push_back(best);
        const auto* row = cover.row(best);
        for (std::size_t w = 0; w < cover.words; ++w) uncovered[w] &= ~row[w];
    }
    return net;
}

bool net_covers_library(const TrackingNet& net, double* worst) {
    const PieceLibrary& L = *net.library;
    std::vector<double> gaps(L.size());
    parallel_for(L.size(), [&](std::size_t i) {
        double best = kInf;
        for (std::size_t m : net.members)
            best = std::min(best, piece_pair_dist(L, i, m));
        gaps[i] = best;
    });
    double w = 0.0;
    for (double g : gaps) w = std::max(w, g);
    if (worst) *worst = w;
    return w <= net.cover_radius + 1e-12;
}

namespace {

// min over net members of the window distance; exact min via capped scans
WindowResult window_min(const TrackingNet& net, const Trajectory& u,
                        std::size_t u_start) {
    const PieceLibrary& L = *net.library;
    WindowResult res;
    res.t_star = u.time(u_start);
    res.min_dist = kInf;
    res.argmin = 0;
    for (std::size_t mi = 0; mi < net.members.size(); ++mi) {
        const double d =
            piece_window_dist(L, net.members[mi], u, u_start, res.min_dist);
        if (d < res.min_dist) {
            res.min_dist = d;
            res.argmin = mi;
        }
    }
    return res;
}

}  // namespace

TrackingReport verify_tracking(const TrackingNet& net,
                               const std::vector<Trajectory>& tests, double t0,
                               double stride) {
    const PieceLibrary& L = *net.library;
    if (tests.empty()) throw ValidationError("no test trajectories");
    if (stride <= 0.0) stride = net.T / 4.0;
    TrackingReport rep;
    rep.epsilon = net.epsilon;
    rep.t0 = t0;
    rep.stride = stride;
    rep.tests.resize(tests.size());
    const std::size_t t_steps = L.n_per - 1;
    parallel_for(tests.size(), [&](std::size_t ti) {
        const Trajectory& u = tests[ti];
        require_same_basis(u.basis, L.basis);
        if (std::abs(u.dt - L.dt) > 1e-12 * L.dt)
            throw GridMismatchError("test run sample spacing differs from net");
        const std::size_t s_steps =
            std::max<std::size_t>(1, steps_of(stride, u.dt, "stride"));
        // first window start strictly beyond t0
        double off = (t0 - u.t_start) / u.dt;
        auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor(off + 1e-9) + 1.0));
        if (i0 + t_steps >= u.n_samples)
            throw ValidationError("test trajectory shorter than t0 + T");
        TestTrackingResult& r = rep.tests[ti];
        for (std::size_t start = i0; start + t_steps < u.n_samples;
             start += s_steps) {
            WindowResult w = window_min(net, u, start);
            if (w.min_dist > r.worst_dist) {
                r.worst_dist = w.min_dist;
                r.worst_t_star = w.t_star;
            }
            r.windows.push_back(w);
        }
        r.pass = r.worst_dist < net.epsilon;
    });
    rep.pass = true;
    for (const auto& r : rep.tests) {
        rep.max_min_dist = std::max(rep.max_min_dist, r.worst_dist);
        rep.pass = rep.pass && r.pass;
    }
    return rep;
}

std::vector<ScheduleEntry> tracking_schedule(const TrackingNet& net,
                                             const Trajectory& u, std::size_t j0,
                                             std::size_t J) {
    if (J < j0) throw ValidationError("J < j0");
    const PieceLibrary& L = *net.library;
    require_same_basis(u.basis, L.basis);
    std::vector<ScheduleEntry> entries;
    entries.reserve(J - j0 + 1);
    for (std::size_t j = j0; j <= J; ++j) {
        const double start_time = double(j) * net.T;
        const std::size_t start = grid_index(u, start_time);
        if (start + (L.n_per - 1) >= u.n_samples)
            throw ValidationError("window beyond trajectory");
        const WindowResult w = window_min(net, u, start);
        entries.push_back({w.argmin, w.min_dist, start_time});
    }
    return entries;
}

namespace {

// earliest stride-grid window start after which every window tracks < eps
double measure_entry_time(const TrackingNet& net, const Trajectory& u, double t0) {
    const PieceLibrary& L = *net.library;
    const std::size_t t_steps = L.n_per - 1;
    const std::size_t s_steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(net.T / 4.0 / u.dt)));
    double off = (t0 - u.t_start) / u.dt;
    auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(off - 1e-9)));
    std::vector<std::pair<double, double>> mins;  // (t*, min dist)
    for (std::size_t start = i0; start + t_steps < u.n_samples; start += s_steps)
        mins.emplace_back(u.time(start), window_min(net, u, start).min_dist);
    if (mins.empty()) throw ValidationError("trajectory too short for this net");
    // earliest suffix of all-pass windows
    std::size_t k = mins.size();
    while (k > 0 && mins[k - 1].second < net.epsilon) --k;
    if (k == mins.size())
        throw ValidationError("trajectory never tracks below epsilon=" +
                              std::to_string(net.epsilon));
    return mins[k].first;
}

}  // namespace

StagedSchedule multiscale_schedule(const std::vector<TrackingNet>& nets,
                                   const Trajectory& u, double t0) {
    if (nets.empty()) throw ValidationError("no nets");
    for (std::size_t i = 1; i < nets.size(); ++i) {
        if (!(nets[i].epsilon < nets[i - 1].epsilon))
            throw ValidationError("epsilons must strictly decrease");
        if (!(nets[i].T > nets[i - 1].T))
            throw ValidationError("piece lengths must strictly increase");
    }
    StagedSchedule sched;
    // measured entry times, padded to the corollary's spacing
    std::vector<double> tt(nets.size());
    for (std::size_t i = 0; i < nets.size(); ++i) {
        double e = std::max(measure_entry_time(nets[i], u, t0), t0);
        if (i == 1) e = std::max(e, tt[0] + 1.0);
        if (i >= 2) e = std::max(e, tt[i - 1] + nets[i - 2].T);
        tt[i] = e;
    }
    sched.entry_times = tt;
    // schedule origin on the sample grid
    double b = tt[0] + 1.0;
    b = u.t_start + std::ceil((b - u.t_start) / u.dt - 1e-9) * u.dt;
    sched.t0 = b;
    const double t_end = u.t_end();
    for (std::size_t n = 0; n < nets.size(); ++n) {
        const double Tn = nets[n].T;
        std::size_t J;
        if (n + 1 < nets.size()) {
            const double num = tt[n + 1] - b;
            J = static_cast<std::size_t>(std::max(0.0, std::floor(num / Tn))) + 1;
        } else {
            if (t_end < b + Tn)
                throw ValidationError("trajectory too short for the last stage");
            J = static_cast<std::size_t>(std::floor((t_end - b) / Tn + 1e-9));
        }
        ScheduleStage stage;
        stage.epsilon = nets[n].epsilon;
        stage.T = Tn;
        stage.J = J;
        stage.start = b;
        for (std::size_t j = 0; j < J; ++j) {
            const double ws = b + double(j) * Tn;
            const std::size_t start = grid_index(u, ws);
            if (start + (nets[n].library->n_per - 1) >= u.n_samples)
                throw ValidationError("trajectory too short for stage window");
            const WindowResult w = window_min(nets[n], u, start);
            stage.entries.push_back({w.argmin, w.min_dist, ws});
        }
        b += double(J) * Tn;
        sched.boundaries.push_back(b);
        sched.stages.push_back(std::move(stage));
    }
    return sched;
}

ThetaTable equicontinuity_modulus(const PieceLibrary& lib,
                                  const std::vector<double>& gaps) {
    ThetaTable table;
    table.gaps = gaps;
    table.theta.assign(gaps.size(), 0.0);
    // dedupe overlapping windows: per run, pairs (i, i+w) over the contiguous
    // union of piece spans (uniform stride keeps it contiguous)
    std::vector<std::size_t> lo(lib.runs.size(), std::size_t(-1));
    std::vector<std::size_t> hi(lib.runs.size(), 0);
    for (const auto& p : lib.pieces) {
        const auto r = std::size_t(p.run);
        lo[r] = std::min(lo[r], p.start);
        hi[r] = std::max(hi[r], p.start);
    }
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
        if (gaps[gi] > lib.T + 1e-12)
            throw ValidationError("gap exceeds the piece length");
        const std::size_t w = steps_of(gaps[gi], lib.dt, "gap");
        if (w == 0) {
            table.theta[gi] = 0.0;
            continue;
        }
        std::vector<double> run_max(lib.runs.size(), 0.0);
        parallel_for(lib.runs.size(), [&](std::size_t r) {
            if (lo[r] == std::size_t(-1)) return;
            const Trajectory& run = *lib.runs[r];
            double m = 0.0;
            const std::size_t last = hi[r] + (lib.n_per - 1) - w;
            for (std::size_t i = lo[r]; i <= last; ++i) {
                const auto a = run.sample(i);
                const auto b = run.sample(i + w);
                m = std::max(m, kernels::sumsq_diff(a.data(), b.data(), a.size()));
            }
            run_max[r] = std::sqrt(m);
        });
        for (double m : run_max) table.theta[gi] = std::max(table.theta[gi], m);
    }
    return table;
}

SectionReport section_check(const PieceLibrary& lib,
                            const std::vector<double>& times,
                            const SetSample& omega, double tol) {
    require_same_basis(lib.basis, omega.basis);
    SectionReport rep;
    rep.times = times;
    rep.tol = tol;
    const MetricSpec strong = MetricSpec::strong();
    for (double t : times) {
        const std::size_t s = steps_of(t, lib.dt, "section time");
        if (s >= lib.n_per) throw ValidationError("section time beyond T");
        SetSample sec;
        sec.basis = lib.basis;
        sec.points.reserve(lib.size());
        for (std::size_t p = 0; p < lib.size(); ++p) {
            PhaseVector v(lib.basis);
            const auto sp = lib.piece_sample(p, s);
            std::copy(sp.begin(), sp.end(), v.data.begin());
            sec.points.push_back(std::move(v));
        }
        const double h = hausdorff(sec, omega, strong);
        rep.hausdorff_dist.push_back(h);
        rep.max_dist = std::max(rep.max_dist, h);
    }
    rep.pass = rep.max_dist <= tol;
    return rep;
}

InvarianceReport invariance_check(const SetSample& omega, const SystemHandle& sys,
                                  double t, double tol) {
    InvarianceReport rep;
    rep.tol = tol;
    const MetricSpec strong = MetricSpec::strong();
    const SetSample fwd = reach_sample(sys, omega, t);
    rep.forward_containment = hausdorff_one_sided(fwd, omega, strong);
    rep.reverse_component = hausdorff_one_sided(omega, fwd, strong);
    rep.pass = rep.forward_containment <= tol;
    return rep;
}

CoveringTable translate_covering(const Trajectory& u,
                                 const std::vector<double>& epsilons,
                                 const std::vector<double>& shifts,
                                 double window) {
    if (epsilons.empty() || shifts.empty())
        throw ValidationError("empty epsilon or shift list");
    const std::size_t w_steps = steps_of(window, u.dt, "window");
    std::vector<std::size_t> starts;
    starts.reserve(shifts.size());
    for (double h : shifts) {
        const std::size_t i = grid_index(u, u.t_start + h);
        if (i + w_steps >= u.n_samples)
            throw ValidationError("shift window beyond trajectory");
        starts.push_back(i);
    }
    const std::size_t P = starts.size();
    // pairwise sup-strong distances between translate windows
    std::vector<double> dist(P * P, 0.0);
    parallel_for(P, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < P; ++j) {
            double sup = 0.0;
            for (std::size_t s = 0; s <= w_steps; ++s) {
                const auto a = u.sample(starts[i] + s);
                const auto b = u.sample(starts[j] + s);
                sup = std::max(sup,
                               kernels::sumsq_diff(a.data(), b.data(), a.size()));
            }
            dist[i * P + j] = dist[j * P + i] = std::sqrt(sup);
        }
    });
    CoveringTable table;
    table.epsilons = epsilons;
    table.window = window;
    for (std::size_t pre = 1; pre <= P; pre = (pre < P && 2 * pre > P) ? P : 2 * pre) {
        table.prefix_sizes.push_back(pre);
        std::vector<std::size_t> row;
        for (double eps : epsilons) {
            // greedy max-coverage at radius eps over the prefix
            std::vector<bool> covered(pre, false);
            std::size_t n_cov = 0, count = 0;
            while (n_cov < pre) {
                std::size_t best = pre, best_score = 0;
                for (std::size_t i = 0; i < pre; ++i) {
                    if (covered[i]) continue;
                    std::size_t score = 0;
                    for (std::size_t j = 0; j < pre; ++j)
                        if (!covered[j] && dist[i * P + j] <= eps) ++score;
                    if (score > best_score) {
                        best_score = score;
                        best = i;
                    }
                }
                if (best == pre) break;
                ++count;
                for (std::size_t j = 0; j < pre; ++j)
                    if (!covered[j] && dist[best * P + j] <= eps) {
                        covered[j] = true;
                        ++n_cov;
                    }
            }
            row.push_back(count);
        }
        table.counts.push_back(std::move(row));
        if (pre == P) break;
    }
    return table;
}

}  // namespace attrlab
