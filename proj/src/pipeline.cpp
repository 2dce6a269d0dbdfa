#include "attrlab/pipeline.hpp"

#include <cmath>
#include <fstream>

#include "attrlab/kernels.hpp"
#include "attrlab/parallel.hpp"
#include "attrlab/rng.hpp"

namespace attrlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double num_or(const json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    return j.at(key).get<double>();
}

std::int64_t int_or(const json& j, const char* key, std::int64_t dflt) {
    if (!j.contains(key)) return dflt;
    return j.at(key).get<std::int64_t>();
}

std::string str_or(const json& j, const char* key, const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    return j.at(key).get<std::string>();
}

bool is_auto(const json& j, const char* key) {
    return j.contains(key) && j.at(key).is_string() &&
           j.at(key).get<std::string>() == "auto";
}

// "auto" or absent -> fallback; else the number
double auto_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key) || is_auto(j, key)) return fallback;
    return j.at(key).get<double>();
}

void write_report(const fs::path& dir, const json& report) {
    fs::create_directories(dir);
    std::ofstream os(dir / "report.json");
    if (!os) throw ValidationError("cannot write report in " + dir.string());
    os << report.dump(2) << "\n";
}

std::optional<json> existing_report(const fs::path& dir, const std::string& hash) {
    const fs::path p = dir / "report.json";
    if (!fs::exists(p)) return std::nullopt;
    try {
        std::ifstream is(p);
        json j = json::parse(is);
        if (j.value("manifest_hash", "") == hash) return j;
    } catch (...) {
    }
    return std::nullopt;
}

std::vector<double> dbl_array(const json& j) {
    std::vector<double> v;
    for (const auto& x : j) v.push_back(x.get<double>());
    return v;
}

}  // namespace

// --- system / symbol construction ---------------------------------------------

Nonlinearity build_nonlinearity(const json& j) {
    if (j.contains("builtin")) {
        const std::string name = j.at("builtin").get<std::string>();
        const double p = num_or(j, "p", name == "cubic" ? 4.0 : 2.0);
        const double lambda = num_or(j, "lambda", 0.0);
        return builtin_nonlinearity(name, p, lambda);
    }
    if (j.contains("expr")) {
        return nonlinearity_from_expression(
            j.at("expr").get<std::string>(), num_or(j, "p", 2.0),
            num_or(j, "gamma", 1.0), num_or(j, "Cdiss", 0.0),
            num_or(j, "Cgrow", 1.0), str_or(j, "tag", ""));
    }
    throw ValidationError("nonlinearity needs 'builtin' or 'expr'");
}

namespace {

std::vector<double> build_shape(const json& j, const BasisId& basis) {
    PhaseVector shape(basis);
    if (basis.kind == BasisKind::nse2d) {
        std::vector<double> k1{0.0, 1.0}, k2{1.0, 0.0}, amps{1.0, 0.5};
        if (j.contains("shape_k1")) {
            k1 = dbl_array(j.at("shape_k1"));
            k2 = dbl_array(j.at("shape_k2"));
            amps = dbl_array(j.at("shape_amps"));
            if (k1.size() != k2.size() || k1.size() != amps.size())
                throw ValidationError("force shape arrays differ in length");
        }
        for (std::size_t i = 0; i < k1.size(); ++i) {
            const PhaseVector mode =
                nse_mode_field(basis, static_cast<int>(k1[i]),
                               static_cast<int>(k2[i]), amps[i]);
            for (std::size_t d = 0; d < shape.data.size(); ++d)
                shape.data[d] += mode.data[d];
        }
    } else {
        std::vector<double> modes{1.0}, amps{1.0};
        if (j.contains("shape_modes")) {
            modes = dbl_array(j.at("shape_modes"));
            amps = dbl_array(j.at("shape_amps"));
            if (modes.size() != amps.size())
                throw ValidationError("force shape arrays differ in length");
        }
        for (std::size_t i = 0; i < modes.size(); ++i)
            shape.data[static_cast<std::size_t>(modes[i]) - 1] += amps[i];
    }
    return shape.data;
}

}  // namespace

Symbol build_symbol(const json& j, const BasisId& basis, bool rds_expected) {
    std::optional<ForceField> force;
    std::optional<Nonlinearity> f;
    if (j.contains("force")) {
        const json& fj = j.at("force");
        std::vector<double> shape = build_shape(fj, basis);
        if (fj.contains("builtin")) {
            ForceParams p;
            p.amplitude = num_or(fj, "amplitude", 1.0);
            p.freq1 = num_or(fj, "freq1", p.freq1);
            p.freq2 = num_or(fj, "freq2", p.freq2);
            p.ratio2 = num_or(fj, "ratio2", 1.0);
            p.decay_rate = num_or(fj, "decay_rate", 1.0);
            Symbol s = builtin_force(fj.at("builtin").get<std::string>(), basis,
                                     std::move(shape), p);
            force = *s.force;
        } else if (fj.contains("profile_expr")) {
            force = ForceField::make(
                basis, std::move(shape),
                profile_expression(fj.at("profile_expr").get<std::string>()));
        } else {
            throw ValidationError("force needs 'builtin' or 'profile_expr'");
        }
    }
    if (j.contains("nonlinearity")) f = build_nonlinearity(j.at("nonlinearity"));
    if (rds_expected && !f)
        throw ValidationError("rds symbol needs a nonlinearity");
    Symbol s = make_symbol(str_or(j, "id", "sigma0"), std::move(force),
                           std::move(f));
    return s;
}

SystemHandle build_system(const json& root) {
    if (!root.contains("system")) throw ValidationError("missing [system]");
    const json& sj = root.at("system");
    const std::string solver = str_or(sj, "solver", "");
    const int snap = static_cast<int>(int_or(sj, "snapshot_every", 1));
    const double guard = num_or(sj, "guard_radius", 0.0);
    const json symbol = root.value("symbol", json::object());
    if (solver == "nse2d") {
        NseParams p;
        p.L = num_or(sj, "L", p.L);
        p.nu = num_or(sj, "nu", p.nu);
        p.K = static_cast<int>(int_or(sj, "K", p.K));
        p.dt = num_or(sj, "dt", p.dt);
        if (sj.contains("dealias")) p.dealias = sj.at("dealias").get<bool>();
        return make_nse_system(p, build_symbol(symbol, p.basis(), false), snap,
                               guard);
    }
    if (solver == "rds") {
        RdsParams p;
        p.ell = num_or(sj, "ell", p.ell);
        p.a = num_or(sj, "a", p.a);
        p.M = static_cast<int>(int_or(sj, "M", p.M));
        p.dt = num_or(sj, "dt", p.dt);
        return make_rds_system(p, build_symbol(symbol, p.basis(), true), snap,
                               guard);
    }
    throw ValidationError("system.solver must be 'nse2d' or 'rds'");
}

// --- context -------------------------------------------------------------------

const SystemHandle& PipelineContext::sys() {
    if (!system) system = build_system(manifest.root);
    return *system;
}

const AbsorbingEstimate& PipelineContext::absorbing_est() {
    if (!absorbing) {
        const json probe_cfg = manifest.root.value("probe", json::object());
        probe.t0 = num_or(probe_cfg, "t0", 0.0);
        probe.t1 = num_or(probe_cfg, "t1", 64.0);
        probe.step = num_or(probe_cfg, "step", 1e-3);
        absorbing = system_absorbing(sys(), probe);
    }
    return *absorbing;
}

double PipelineContext::auto_radius() {
    const auto& est = absorbing_est();
    return est.radius > 0.0 ? est.radius : 1.0;
}

double PipelineContext::auto_t0() {
    const auto& est = absorbing_est();
    const double r = auto_radius();
    if (est.K_inf > 0.0) return est.entry_time(10.0 * r);
    return est.entry_time_to(10.0 * r, r);
}

// --- stages --------------------------------------------------------------------

namespace {

json base_report(PipelineContext& ctx, const std::string& stage) {
    return json{{"stage", stage},
                {"manifest_hash", ctx.manifest.hash},
                {"proxy_note",
                 "empirical attractor proxies: post-transient windows of finite "
                 "runs; probed sups are lower bounds on finite horizons"}};
}

PhaseVector initial_field(PipelineContext& ctx, const json& cfg, Rng& rng,
                          double radius) {
    if (cfg.contains("mode")) {  // deterministic single-mode start (rds)
        if (!std::holds_alternative<RdsParams>(ctx.sys().params))
            throw ValidationError("'mode' starts are for the rds solver");
        const auto& p = std::get<RdsParams>(ctx.sys().params);
        return rds_mode_field(p, static_cast<int>(cfg.at("mode").get<double>()),
                              radius);
    }
    return random_field(ctx.sys(), rng, radius);
}

}  // namespace

json stage_simulate(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "simulate";
    if (auto r = existing_report(dir, ctx.manifest.hash)) return *r;
    Rng rng(ctx.seed);
    const double radius = auto_num(cfg, "radius", ctx.auto_radius());
    const PhaseVector u0 = initial_field(ctx, cfg, rng, radius);
    const double t0 = num_or(cfg, "t0", 0.0);
    const double t1 = num_or(cfg, "t1", t0 + 10.0);
    const Trajectory run = integrate_system(ctx.sys(), u0, t0, t1);
    const std::string name = str_or(cfg, "out_name", "run000");
    save_trajectory(run, dir / name, ctx.seed);
    json rep = base_report(ctx, "simulate");
    rep["run"] = name;
    rep["t0"] = t0;
    rep["t1"] = t1;
    rep["n_samples"] = run.n_samples;
    rep["final_norm"] = std::sqrt(
        kernels::sumsq(run.sample(run.n_samples - 1).data(), run.block()));
    write_report(dir, rep);
    return rep;
}

json stage_harvest(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "harvest";
    if (auto r = existing_report(dir, ctx.manifest.hash)) {
        if (!ctx.library && fs::exists(dir / "library" / "library.json"))
            ctx.library = load_library(dir / "library");
        if (ctx.library) return *r;
    }
    const double R = ctx.auto_radius();
    const double radius = auto_num(cfg, "radius", R);
    const double t0 = auto_num(cfg, "t0", ctx.auto_t0());
    const double T = num_or(cfg, "T", 1.0);
    const double stride = num_or(cfg, "stride", T / 4.0);
    const double horizon =
        auto_num(cfg, "horizon", num_or(cfg, "horizon_factor", 50.0) * ctx.auto_t0());
    const auto n_ens = static_cast<std::size_t>(int_or(cfg, "ensemble", 4));
    SetSample ensemble = random_ensemble(ctx.sys(), ctx.seed, n_ens, radius);
    // optional +-first-mode starts shadowing the heteroclinic passages
    const auto axis = static_cast<std::size_t>(int_or(cfg, "axis_starts", 0));
    if (axis > 0 && std::holds_alternative<RdsParams>(ctx.sys().params)) {
        const auto& p = std::get<RdsParams>(ctx.sys().params);
        ensemble.points.push_back(rds_mode_field(p, 1, 1e-2));
        if (axis > 1) ensemble.points.push_back(rds_mode_field(p, 1, -1e-2));
    }
    ctx.library = harvest_pieces(ctx.sys(), ensemble, t0, T, stride, horizon);
    if (cfg.value("save", true)) save_library(*ctx.library, dir / "library");
    json rep = base_report(ctx, "harvest");
    rep["t0"] = t0;
    rep["T"] = T;
    rep["stride"] = stride;
    rep["horizon"] = horizon;
    rep["ensemble"] = ensemble.points.size();
    rep["pieces"] = ctx.library->size();
    rep["runs"] = ctx.library->runs.size();
    write_report(dir, rep);
    return rep;
}

json stage_net(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "net";
    if (auto r = existing_report(dir, ctx.manifest.hash)) {
        if (!ctx.net && fs::exists(dir / "net.json")) {
            ctx.net = load_net(dir / "net.json");
            ctx.library = ctx.net->library;
        }
        if (ctx.net) return *r;
    }
    if (!ctx.library) throw ValidationError("net stage requires a harvest stage");
    double epsilon;
    double diam = 0.0;
    if (cfg.contains("epsilon")) {
        epsilon = cfg.at("epsilon").get<double>();
    } else {
        diam = library_diameter(*ctx.library);
        epsilon = num_or(cfg, "epsilon_frac", 0.1) * diam;
    }
    ctx.net = build_tracking_net(ctx.library, epsilon);
    double worst_gap = 0.0;
    const bool covered = net_covers_library(*ctx.net, &worst_gap);
    fs::create_directories(dir);
    save_net(*ctx.net, dir / "net.json", "../harvest/library");
    json rep = base_report(ctx, "net");
    rep["epsilon"] = epsilon;
    rep["library_diameter"] = diam;
    rep["members"] = ctx.net->members.size();
    rep["coverage_ok"] = covered;
    rep["coverage_worst_gap"] = worst_gap;
    write_report(dir, rep);
    return rep;
}

json stage_verify(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "verify";
    if (auto r = existing_report(dir, ctx.manifest.hash)) return *r;
    if (!ctx.net) throw ValidationError("verify stage requires a net stage");
    const double t0 = auto_num(cfg, "t0", ctx.auto_t0());
    const double stride = num_or(cfg, "stride", 0.0);
    const auto n_tests = static_cast<std::size_t>(int_or(cfg, "tests", 10));
    const double radius = auto_num(cfg, "radius", ctx.auto_radius());
    const double horizon = auto_num(
        cfg, "horizon", ctx.library ? ctx.library->horizon : 10.0 * t0);
    Rng rng(ctx.seed + 1);
    std::vector<Trajectory> tests;
    tests.reserve(n_tests);
    for (std::size_t i = 0; i < n_tests; ++i) {
        const PhaseVector u0 = random_field(ctx.sys(), rng, radius);
        tests.push_back(integrate_system(ctx.sys(), u0, 0.0, horizon));
    }
    const TrackingReport rep0 = verify_tracking(*ctx.net, tests, t0, stride);
    // distance traces, plot-ready
    std::vector<std::vector<double>> rows;
    for (std::size_t ti = 0; ti < rep0.tests.size(); ++ti)
        for (const auto& w : rep0.tests[ti].windows)
            rows.push_back({double(ti), w.t_star, w.min_dist, double(w.argmin)});
    fs::create_directories(dir);
    write_csv(dir / "tracking_trace.csv", {"test", "t_star", "min_dist", "argmin"},
              rows);
    json rep = base_report(ctx, "verify");
    rep["epsilon"] = rep0.epsilon;
    rep["t0"] = rep0.t0;
    rep["stride_note"] =
        "window starts sampled at the stride; the property is asserted on the "
        "sampled grid";
    rep["stride"] = rep0.stride;
    rep["tests"] = rep0.tests.size();
    rep["max_min_dist"] = rep0.max_min_dist;
    json per = json::array();
    for (const auto& t : rep0.tests)
        per.push_back(json{{"worst_dist", t.worst_dist},
                           {"worst_t_star", t.worst_t_star},
                           {"pass", t.pass},
                           {"windows", t.windows.size()}});
    rep["per_test"] = per;
    rep["pass"] = rep0.pass;
    write_report(dir, rep);
    return rep;
}

json stage_schedule(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "schedule";
    if (auto r = existing_report(dir, ctx.manifest.hash)) return *r;
    if (!ctx.net) throw ValidationError("schedule stage requires a net stage");
    const auto j0 = static_cast<std::size_t>(int_or(cfg, "j0", 1));
    const auto J = static_cast<std::size_t>(int_or(cfg, "J", j0 + 8));
    Rng rng(ctx.seed + 2);
    const double radius = auto_num(cfg, "radius", ctx.auto_radius());
    const PhaseVector u0 = random_field(ctx.sys(), rng, radius);
    const double horizon = double(J + 1) * ctx.net->T + ctx.sys().sample_dt();
    const Trajectory probe = integrate_system(ctx.sys(), u0, 0.0, horizon);
    const auto entries = tracking_schedule(*ctx.net, probe, j0, J);
    std::vector<std::vector<double>> rows;
    for (const auto& e : entries)
        rows.push_back({e.window_start, double(e.index), e.dist});
    fs::create_directories(dir);
    write_csv(dir / "schedule.csv", {"window_start", "member", "dist"}, rows);
    json rep = base_report(ctx, "schedule");
    rep["j0"] = j0;
    rep["J"] = J;
    rep["length"] = entries.size();
    json idx = json::array();
    for (const auto& e : entries) idx.push_back(e.index);
    rep["indices"] = idx;
    write_report(dir, rep);
    return rep;
}

json stage_classify_force(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "classify_force";
    if (auto r = existing_report(dir, ctx.manifest.hash)) return *r;
    const Symbol& sigma = ctx.sys().sigma0;
    if (!sigma.has_force())
        throw ValidationError("classify-force needs a force in [symbol]");
    ProbeGrid grid;
    grid.t0 = num_or(cfg, "probe_t0", 0.0);
    grid.t1 = num_or(cfg, "probe_t1", 64.0);
    grid.step = num_or(cfg, "probe_step", 1e-3);
    const double eps = num_or(cfg, "eps", 1e-2);
    const double tb = translation_bound_norm(sigma, grid);
    const NormalSweep sweep = is_normal(sigma, eps, grid, num_or(cfg, "delta0", 1.0),
                                        num_or(cfg, "delta_min", 1e-3));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sweep.deltas.size(); ++i)
        rows.push_back({sweep.deltas[i], sweep.defects[i]});
    fs::create_directories(dir);
    write_csv(dir / "defect_curve.csv", {"delta", "defect"}, rows);
    json rep = base_report(ctx, "classify_force");
    rep["translation_bound_norm"] = tb;
    rep["translation_bounded"] = std::isfinite(tb);
    rep["normal"] = sweep.normal;
    rep["eps"] = eps;
    rep["probe_horizon"] = grid.t1;
    rep["horizon_note"] = "probed sup over a finite horizon: a lower bound";
    write_report(dir, rep);
    return rep;
}

json stage_classify_nonlinearity(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "classify_nonlinearity";
    if (auto r = existing_report(dir, ctx.manifest.hash)) return *r;
    const Symbol& sigma = ctx.sys().sigma0;
    if (!sigma.f)
        throw ValidationError("classify-nonlinearity needs a nonlinearity");
    const Nonlinearity& f = *sigma.f;
    const double R = num_or(cfg, "R", 1.0);
    const double vres = num_or(cfg, "v_resolution", 1e-3);
    std::vector<double> gaps;
    if (cfg.contains("gaps"))
        gaps = dbl_array(cfg.at("gaps"));
    else
        for (int j = 0; j <= 10; ++j) gaps.push_back(R * std::pow(2.0, -j));
    std::vector<double> t_samples{0.0};
    const double t_max = num_or(cfg, "t_max", 1000.0);
    for (double t = 1.0; t <= t_max; t *= 2.0) t_samples.push_back(t);
    const ModulusTable table = equicontinuity_modulus(f, R, t_samples, vres, gaps);
    // validator margins on the spec grid
    const NonlinearityReport val = validate_nonlinearity(
        f, linspace(-10.0, 10.0, 2001), linspace(0.0, 100.0, 101));
    // pointwise limits
    std::vector<double> vg = linspace(num_or(cfg, "limit_v_lo", -2.0),
                                      num_or(cfg, "limit_v_hi", 2.0),
                                      static_cast<std::size_t>(int_or(cfg, "limit_n", 201)));
    std::vector<double> ts;
    for (int n = 1; n <= 200; ++n) ts.push_back(5.0 * std::sqrt(2.0) * n);
    const LimitProbe probe = pointwise_limit_probe(f, vg, ts);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < table.gaps.size(); ++i)
        rows.push_back({table.gaps[i], table.theta[i]});
    fs::create_directories(dir);
    write_csv(dir / "theta_table.csv", {"gap", "theta"}, rows);
    json rep = base_report(ctx, "classify_nonlinearity");
    rep["tag"] = f.tag;
    rep["equicontinuity_pass"] = table.passes;
    rep["verdict_note"] =
        "sampled necessary condition for C^{p.u.} translation compactness, "
        "not a proof";
    rep["validate_pass"] = val.pass;
    rep["diss_margin"] = val.worst_diss_margin;
    rep["grow_margin"] = val.worst_grow_margin;
    rep["limit_diverging_points"] = probe.diverging;
    rep["limit_max_jump"] = probe.max_jump;
    write_report(dir, rep);
    return rep;
}

json stage_equicontinuity(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "equicontinuity";
    if (auto r = existing_report(dir, ctx.manifest.hash)) return *r;
    if (!ctx.library)
        throw ValidationError("equicontinuity stage requires a harvest stage");
    std::vector<double> gaps;
    if (cfg.contains("gaps"))
        gaps = dbl_array(cfg.at("gaps"));
    else
        for (double g = 0.0; g <= ctx.library->T + 1e-12; g += ctx.library->dt)
            gaps.push_back(g);
    const ThetaTable table = equicontinuity_modulus(*ctx.library, gaps);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < table.gaps.size(); ++i)
        rows.push_back({table.gaps[i], table.theta[i]});
    fs::create_directories(dir);
    write_csv(dir / "theta_table.csv", {"gap", "theta"}, rows);
    json rep = base_report(ctx, "equicontinuity");
    rep["gaps"] = table.gaps.size();
    rep["theta_first"] = table.theta.empty() ? 0.0 : table.theta.front();
    rep["theta_last"] = table.theta.empty() ? 0.0 : table.theta.back();
    write_report(dir, rep);
    return rep;
}

json stage_section(PipelineContext& ctx, const json& cfg) {
    const fs::path dir = ctx.out / "section";
    if (auto r = existing_report(dir, ctx.manifest.hash)) return *r;
    if (!ctx.library) throw ValidationError("section stage requires a harvest stage");
    const PieceLibrary& lib = *ctx.library;
    std::vector<double> times{0.0, lib.T / 2.0, lib.T};
    if (cfg.contains("times")) times = dbl_array(cfg.at("times"));
    double tol;
    if (cfg.contains("tol"))
        tol = cfg.at("tol").get<double>();
    else if (ctx.net)
        tol = num_or(cfg, "tol_factor", 2.0) * ctx.net->epsilon;
    else
        throw ValidationError("section stage needs 'tol' or a net stage");
    const double transient = auto_num(cfg, "omega_transient", lib.t0);
    const double stride = num_or(cfg, "omega_stride", lib.stride);
    const auto n_pts = static_cast<std::size_t>(int_or(cfg, "omega_points", 4));
    SetSample starts = random_ensemble(ctx.sys(), ctx.seed + 3, n_pts,
                                       ctx.auto_radius());
    const SetSample omega =
        omega_limit_sample(ctx.sys(), starts, transient, lib.horizon, stride);
    const SectionReport rep0 = section_check(lib, times, omega, tol);
    json rep = base_report(ctx, "section");
    rep["times"] = rep0.times;
    rep["hausdorff"] = rep0.hausdorff_dist;
    rep["max_dist"] = rep0.max_dist;
    rep["tol"] = rep0.tol;
    rep["pass"] = rep0.pass;
    write_report(dir, rep);
    return rep;
}

// --- driver --------------------------------------------------------------------

int run_pipeline(const Manifest& m, const fs::path& out) {
    PipelineContext ctx;
    ctx.manifest = m;
    ctx.out = out;
    ctx.seed = static_cast<std::uint64_t>(
        int_or(m.root, "seed", 0));
    if (m.root.contains("workers"))
        set_worker_cap(static_cast<int>(m.root.at("workers").get<std::int64_t>()));
    fs::create_directories(out);
    {
        std::ofstream os(out / "manifest_echo.json");
        os << m.root.dump(2) << "\n";
    }
    std::vector<std::string> stages;
    if (m.root.contains("pipeline") && m.root.at("pipeline").contains("stages"))
        for (const auto& s : m.root.at("pipeline").at("stages"))
            stages.push_back(s.get<std::string>());
    bool verification_failed = false;
    try {
        for (const std::string& s : stages) {
            const json cfg = m.root.value(s, json::object());
            json rep;
            if (s == "simulate")
                rep = stage_simulate(ctx, cfg);
            else if (s == "harvest")
                rep = stage_harvest(ctx, cfg);
            else if (s == "net")
                rep = stage_net(ctx, cfg);
            else if (s == "verify")
                rep = stage_verify(ctx, cfg);
            else if (s == "schedule")
                rep = stage_schedule(ctx, cfg);
            else if (s == "classify_force")
                rep = stage_classify_force(ctx, cfg);
            else if (s == "classify_nonlinearity")
                rep = stage_classify_nonlinearity(ctx, cfg);
            else if (s == "equicontinuity")
                rep = stage_equicontinuity(ctx, cfg);
            else if (s == "section")
                rep = stage_section(ctx, cfg);
            else
                throw ValidationError("unknown stage '" + s + "'");
            if (rep.contains("pass") && !rep.at("pass").get<bool>())
                verification_failed = true;
        }
    } catch (const ValidationError& e) {
        fprintf(stderr, "%s\n", e.what());
        return kExitValidation;
    } catch (const SolverError& e) {
        fprintf(stderr, "%s\n", e.what());
        return kExitSolver;
    }
    return verification_failed ? kExitVerification : kExitOk;
}

json summarize_artifacts(const fs::path& out) {
    json summary = json::object();
    for (const auto& entry : fs::directory_iterator(out)) {
        if (!entry.is_directory()) continue;
        const fs::path rp = entry.path() / "report.json";
        if (!fs::exists(rp)) continue;
        std::ifstream is(rp);
        summary[entry.path().filename().string()] = json::parse(is);
    }
    return summary;
}

}  // namespace attrlab
