#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finex/scenario.hpp"
#include "finex/scoring.hpp"
#include "finex/validation.hpp"

namespace finex {

enum class NniAreaMode { StudyArea, BoundingBox };

struct RunConfig {
    double catchment_radius_m = 500.0;
    double lonely_threshold_m = 250.0;
    AlternativeSet alternative_set = AlternativeSet::AnyAtm;
    bool dedup_supermarket_cashback = true;
    bool impute_missing = false;
    NniAreaMode nni_area = NniAreaMode::StudyArea;
    int jenks_k = 5;
    BoundsPolicy bounds_policy = BoundsPolicy::FrozenBaseline;
    bool full_precision = false;
    std::map<std::string, double> score_overrides; // kind name -> score
    WeightScheme weights;
    std::optional<ScenarioSpec> scenario;

    struct Inputs {
        std::string areas;
        std::string infrastructure;
        std::string study_area;
        std::string area_polygons;    // optional
        std::string ward_lookup;      // optional
        std::string historical_ranks; // optional
    } inputs;

    std::string output_dir = "out";
    std::string base_dir; // directory of the config file; relative inputs resolve against it

    ScoreTable effective_scores() const;
    ScoringParams scoring_params() const;
    std::string resolve_input(const std::string& path) const;
};

/// Parse a JSON run configuration. Relative input paths resolve against the
/// config file's directory.
RunConfig load_config(const std::string& path);

/// FNV-1a hash of the scoring-relevant configuration, as fixed-width hex.
std::string config_fingerprint(const RunConfig& config);

struct IngestResult {
    Dataset dataset; // areas sorted by area_id, points by id
    StudyArea study_area;
    std::string crs_name; // as declared by the study-area file; echoed to outputs
    std::map<std::string, std::vector<ProjPoint>> area_polygons;
    std::optional<WardLookup> wards;
    std::map<std::string, double> historical_ranks;
    std::map<std::string, std::string> oac_labels; // optional per-area classification
    std::vector<std::string> dropped_cashback_ids;
    std::vector<std::string> notes; // imputation records and similar
    std::size_t n_points_loaded = 0;
};

/// Load and validate every configured input; applies the supermarket-cashback
/// postcode dedup when enabled. Errors name the file, row and column.
IngestResult ingest(const RunConfig& config);

struct Stages {
    bool catchments = false;
    bool nni = false;
    bool index = false;
    bool validate = false;
    bool scenario = false;

    static Stages all() { return {true, true, true, true, true}; }
};

struct RunArtifacts {
    std::vector<std::string> files; // paths written, in write order
    std::vector<IndexResult> results;
    std::optional<RankComparison> validation;
    std::optional<ScenarioReport> scenario;
};

/// Run the requested stages and write their artifacts under
/// config.output_dir. Any stage failure removes everything written by this
/// run and rethrows with a stage-tagged message. `require_optional` makes the
/// validate/scenario stages fail when their inputs are not configured instead
/// of being skipped.
RunArtifacts run_stages(const RunConfig& config, const Stages& stages,
                        bool require_optional = false);

/// All stages (the run-all subcommand).
RunArtifacts run_all(const RunConfig& config);

} // namespace finex
