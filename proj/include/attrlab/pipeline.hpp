#pragma once
// Batch experiment orchestration: manifest in, persisted runs and JSON/CSV
// reports out. Each stage writes <out>/<stage>/report.json carrying the
// manifest hash; a re-run with the same hash skips the stage.

#include <filesystem>
#include <optional>

#include "attrlab/attractor.hpp"
#include "attrlab/manifest.hpp"
#include "attrlab/storage.hpp"

namespace attrlab {

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitVerification = 3;

struct PipelineContext {
    Manifest manifest;
    std::filesystem::path out;
    std::uint64_t seed = 0;

    // built lazily from the manifest
    std::optional<SystemHandle> system;
    std::optional<AbsorbingEstimate> absorbing;
    ProbeGrid probe;
    std::shared_ptr<const PieceLibrary> library;
    std::optional<TrackingNet> net;

    const SystemHandle& sys();
    const AbsorbingEstimate& absorbing_est();
    double auto_t0();       // predicted entry time from |u0| = 10R
    double auto_radius();   // absorbing radius R
};

// [system] + [symbol] blocks -> solver handle
SystemHandle build_system(const nlohmann::json& root);
Nonlinearity build_nonlinearity(const nlohmann::json& j);
Symbol build_symbol(const nlohmann::json& j, const BasisId& basis,
                    bool rds_expected);

// stage runners; each returns its report (also written to disk)
nlohmann::json stage_simulate(PipelineContext& ctx, const nlohmann::json& cfg);
nlohmann::json stage_harvest(PipelineContext& ctx, const nlohmann::json& cfg);
nlohmann::json stage_net(PipelineContext& ctx, const nlohmann::json& cfg);
nlohmann::json stage_verify(PipelineContext& ctx, const nlohmann::json& cfg);
nlohmann::json stage_schedule(PipelineContext& ctx, const nlohmann::json& cfg);
nlohmann::json stage_classify_force(PipelineContext& ctx,
                                    const nlohmann::json& cfg);
nlohmann::json stage_classify_nonlinearity(PipelineContext& ctx,
                                           const nlohmann::json& cfg);
nlohmann::json stage_equicontinuity(PipelineContext& ctx,
                                    const nlohmann::json& cfg);
nlohmann::json stage_section(PipelineContext& ctx, const nlohmann::json& cfg);

// executes [pipeline].stages in order; returns an exit code
int run_pipeline(const Manifest& m, const std::filesystem::path& out);

// aggregates stage reports under an artifact directory
nlohmann::json summarize_artifacts(const std::filesystem::path& out);

}  // namespace attrlab
