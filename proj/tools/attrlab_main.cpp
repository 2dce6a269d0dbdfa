// Batch CLI over the experiment pipeline. Subcommands mirror manifest
// stages; every flag maps onto a manifest field (--set table.key=value covers
// the rest). Times are in simulation units, spatial sizes in the solver's
// domain units. Exit codes: 0 ok, 1 validation, 2 solver failure,
// 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "attrlab/kernels.hpp"
#include "attrlab/parallel.hpp"
#include "attrlab/pipeline.hpp"

namespace {

using attrlab::Manifest;
using nlohmann::json;

struct CommonOpts {
    std::string manifest_path;
    std::string out = "out";
    std::vector<std::string> sets;  // table.key=value overrides
    int workers = 0;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--manifest", o.manifest_path,
                    "manifest file providing [system]/[symbol]/stage tables");
    cmd->add_option("--out", o.out, "artifact directory (default: out)");
    cmd->add_option("--set", o.sets,
                    "override a manifest field, e.g. --set system.dt=0.001");
    cmd->add_option("--workers", o.workers, "cap ensemble/matrix parallelism");
    cmd->add_option("--seed", o.seed, "seed fixing all stochastic choices");
}

json parse_scalar_token(const std::string& tok) {
    const json j = attrlab::parse_manifest_text("x = " + tok);
    return j.at("x");
}

void apply_set(json& root, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw attrlab::ValidationError("--set expects table.key=value");
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    json* node = &root;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string part = path.substr(
            start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw attrlab::ValidationError("bad --set path");
        if (dot == std::string::npos) {
            (*node)[part] = parse_scalar_token(value);
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

Manifest assemble(const CommonOpts& o, const std::vector<std::string>& stages) {
    Manifest m;
    if (!o.manifest_path.empty()) {
        m = attrlab::load_manifest(o.manifest_path);
    } else {
        m.root = json::object();
        m.hash = "cli";
    }
    for (const auto& s : o.sets) apply_set(m.root, s);
    if (o.seed >= 0) m.root["seed"] = o.seed;
    if (o.workers > 0) m.root["workers"] = o.workers;
    if (!stages.empty()) {
        json arr = json::array();
        for (const auto& s : stages) arr.push_back(s);
        m.root["pipeline"]["stages"] = arr;
    }
    if (!o.sets.empty() || o.seed >= 0) {
        // overrides change the effective manifest; refresh the hash
        m.hash = attrlab::bytes_hash_hex(m.root.dump());
    }
    return m;
}

int dispatch(const CommonOpts& o, const std::vector<std::string>& stages) {
    try {
        const Manifest m = assemble(o, stages);
        return attrlab::run_pipeline(m, o.out);
    } catch (const attrlab::ValidationError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return attrlab::kExitValidation;
    } catch (const attrlab::BasisMismatchError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return attrlab::kExitValidation;
    } catch (const attrlab::GridMismatchError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return attrlab::kExitValidation;
    } catch (const attrlab::SolverError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return attrlab::kExitSolver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return attrlab::kExitValidation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "attrlab: dissipative-PDE attractor laboratory (tracking nets, "
        "classifiers, schedules)"};
    app.require_subcommand(1);

    struct Cmd {
        CLI::App* app;
        CommonOpts opts;
        std::vector<std::string> stages;
    };
    std::vector<std::unique_ptr<Cmd>> cmds;
    auto add = [&](const std::string& name, const std::string& desc,
                   std::vector<std::string> stages) -> Cmd& {
        auto c = std::make_unique<Cmd>();
        c->app = app.add_subcommand(name, desc);
        c->stages = std::move(stages);
        add_common(c->app, c->opts);
        cmds.push_back(std::move(c));
        return *cmds.back();
    };

    add("run", "execute the manifest's [pipeline].stages", {});
    add("simulate", "integrate one run and persist the trajectory store",
        {"simulate"});
    add("harvest", "integrate an ensemble and window it into a piece library",
        {"harvest"});
    add("build-net", "greedy epsilon/2 covering net over a harvested library",
        {"harvest", "net"});
    add("verify-tracking",
        "check fresh trajectories against the net (exit 3 on failure)",
        {"harvest", "net", "verify"});
    add("schedule", "argmin member sequence over consecutive T-windows",
        {"harvest", "net", "schedule"});
    add("classify-force",
        "translation-bound norm and normal-function sweep of [symbol.force]",
        {"classify_force"});
    add("classify-nonlinearity",
        "equicontinuity modulus, condition margins, pointwise-limit probe",
        {"classify_nonlinearity"});
    add("equicontinuity", "theta(l) table of a harvested library",
        {"harvest", "equicontinuity"});
    add("section-check",
        "piece sections vs omega-limit sample (exit 3 on failure)",
        {"harvest", "net", "section"});

    // report: aggregate stage reports
    CommonOpts report_opts;
    CLI::App* report_cmd =
        app.add_subcommand("report", "aggregate stage reports under --out");
    report_cmd->add_option("--out", report_opts.out, "artifact directory");

    CLI::App* isa_cmd = app.add_subcommand("isa", "print the active kernel ISA");

    CLI11_PARSE(app, argc, argv);

    if (report_cmd->parsed()) {
        try {
            std::cout << attrlab::summarize_artifacts(report_opts.out).dump(2)
                      << "\n";
            return attrlab::kExitOk;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return attrlab::kExitValidation;
        }
    }
    if (isa_cmd->parsed()) {
        std::printf("%s\n", attrlab::kernels::active_isa());
        return 0;
    }
    for (const auto& c : cmds)
        if (c->app->parsed()) return dispatch(c->opts, c->stages);
    return attrlab::kExitValidation;
}
