#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finex/scoring.hpp"

namespace finex {

enum class Intervention { PaypointBanking, CashRecyclers, DigitalInclusion };

std::string_view to_string(Intervention i);
Intervention intervention_from_string(std::string_view name);

enum class BoundsPolicy { FrozenBaseline, Recompute };

struct ScenarioSpec {
    std::vector<Intervention> interventions;
    double recycler_lonely_threshold_m = 250.0;
    int digital_from = 10; // IUC level before the upgrade
    int digital_to = 7;    // IUC level after
    BoundsPolicy bounds_policy = BoundsPolicy::FrozenBaseline;

    void validate() const;
};

/// PayPoints gain the Post Office score. The points keep their PayPoint kind;
/// only the effective score table changes, so provenance survives.
Dataset apply_paypoint(Dataset data);

/// Free ATMs that are lonely under the FreeOnly alternative set at
/// `threshold` become Recyclers (score 4); everything else is untouched.
/// Returns the converted point ids through `converted` when given.
Dataset apply_recyclers(Dataset data, double threshold,
                        std::vector<std::string>* converted = nullptr);

/// Areas at IUC `from_level` move to `to_level`; all others keep theirs.
Dataset apply_digital(Dataset data, int from_level, int to_level);

struct ScenarioRow {
    std::string area_id;
    double baseline_score = 0.0;
    double scenario_score = 0.0;
    double delta = 0.0; // scenario - baseline
};

struct ScenarioReport {
    std::vector<ScenarioRow> rows; // area order
    double max_delta = 0.0;
    double mean_delta = 0.0;
    int areas_affected = 0; // |delta| > 1e-9
    std::vector<std::string> recycler_conversions;
};

/// Baseline scores plus the bounds they were normalized with. The bounds are
/// required under the FrozenBaseline policy.
struct BaselineIndex {
    std::vector<IndexResult> results;
    std::optional<NormalizationBounds> bounds;
};

/// Apply the interventions in the listed order to a copy of the baseline
/// dataset, re-score, and report per-area deltas. The interventions commute,
/// so the order is cosmetic.
ScenarioReport run_scenario(const ScenarioSpec& spec, const Dataset& baseline_data,
                            const ScoringParams& params, const WeightScheme& weights,
                            const BaselineIndex& baseline);

} // namespace finex
