#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "finex/pipeline.hpp"

namespace {

struct CliOverrides {
    std::optional<double> radius;
    std::optional<double> lonely_threshold;
    std::optional<int> jenks_k;
    std::optional<std::string> out_dir;
    bool full_precision = false;
};

finex::RunConfig load_with_overrides(const std::string& config_path, const CliOverrides& ov) {
    finex::RunConfig config = finex::load_config(config_path);
    if (ov.radius) config.catchment_radius_m = *ov.radius;
    if (ov.lonely_threshold) config.lonely_threshold_m = *ov.lonely_threshold;
    if (ov.jenks_k) config.jenks_k = *ov.jenks_k;
    if (ov.out_dir) config.output_dir = *ov.out_dir;
    if (ov.full_precision) config.full_precision = true;
    if (!(config.catchment_radius_m > 0.0)) {
        finex::fail(finex::Errc::InvalidConfig, "--radius must be > 0");
    }
    if (!(config.lonely_threshold_m > 0.0)) {
        finex::fail(finex::Errc::InvalidConfig, "--lonely-threshold must be > 0");
    }
    if (config.jenks_k < 1) {
        finex::fail(finex::Errc::InvalidConfig, "--jenks-k must be >= 1");
    }
    return config;
}

void add_common(CLI::App* cmd, std::string& config_path, CliOverrides& ov) {
    cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    cmd->add_option("--radius", ov.radius, "Catchment radius in meters (overrides config)");
    cmd->add_option("--lonely-threshold", ov.lonely_threshold,
                    "Lonely-ATM threshold in meters (overrides config)");
    cmd->add_option("--jenks-k", ov.jenks_k, "Number of natural-breaks classes (overrides config)");
    cmd->add_option("--out", ov.out_dir, "Output directory (overrides config)");
    cmd->add_flag("--full-precision", ov.full_precision, "Emit full-precision numeric columns");
}

int run_ingest_check(const finex::RunConfig& config) {
    const finex::IngestResult ing = finex::ingest(config);
    std::printf("areas: %zu\n", ing.dataset.areas.size());
    std::printf("points loaded: %zu\n", ing.n_points_loaded);
    std::printf("points after dedup: %zu\n", ing.dataset.points.size());
    for (const auto& id : ing.dropped_cashback_ids) {
        std::printf("dropped cashback sharing a free-ATM postcode: %s\n", id.c_str());
    }
    for (const auto& note : ing.notes) {
        std::printf("note: %s\n", note.c_str());
    }
    std::printf("study area: %.1f m^2 (CRS %s)\n", ing.study_area.area_m2(), ing.crs_name.c_str());
    std::printf("ward lookup: %s\n", ing.wards ? "present" : "absent");
    std::printf("historical ranks: %s\n", ing.historical_ranks.empty() ? "absent" : "present");
    return 0;
}

int run_with_stages(const finex::RunConfig& config, const finex::Stages& stages, bool require_optional) {
    const finex::RunArtifacts artifacts = finex::run_stages(config, stages, require_optional);
    for (const auto& f : artifacts.files) {
        std::printf("wrote %s\n", f.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localized financial-exclusion index pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides ov;

    auto* ingest_check = app.add_subcommand("ingest-check", "Validate the configured inputs");
    auto* catchment = app.add_subcommand("catchment", "Write per-area catchment profiles");
    auto* nni = app.add_subcommand("nni", "Write per-kind nearest-neighbour statistics");
    auto* index = app.add_subcommand("index", "Write the composite index (CSV + GeoJSON)");
    auto* validate = app.add_subcommand("validate", "Compare ward rankings against a historical file");
    auto* scenario = app.add_subcommand("scenario", "Apply the configured interventions and report deltas");
    auto* run_all_cmd = app.add_subcommand("run-all", "Run every stage");
    for (CLI::App* cmd : {ingest_check, catchment, nni, index, validate, scenario, run_all_cmd}) {
        add_common(cmd, config_path, ov);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const finex::RunConfig config = load_with_overrides(config_path, ov);
        if (ingest_check->parsed()) {
            return run_ingest_check(config);
        }
        finex::Stages stages;
        bool require_optional = false;
        if (catchment->parsed()) {
            stages.catchments = true;
        } else if (nni->parsed()) {
            stages.nni = true;
        } else if (index->parsed()) {
            stages.index = true;
        } else if (validate->parsed()) {
            stages.validate = true;
            require_optional = true;
        } else if (scenario->parsed()) {
            stages.scenario = true;
            require_optional = true;
        } else {
            stages = finex::Stages::all();
        }
        return run_with_stages(config, stages, require_optional);
    } catch (const finex::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
