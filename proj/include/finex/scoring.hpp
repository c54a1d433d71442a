#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finex/composite.hpp"
#include "finex/indicators.hpp"
#include "finex/infrastructure.hpp"

namespace finex {

/// One scoring unit: a small area with its centroid and raw indicators.
struct AreaInput {
    std::string area_id;
    ProjPoint centroid;
    IndicatorVector indicators; // avcash_raw / lonely_count filled during scoring
};

/// Everything the scoring engine consumes. Areas are kept sorted by area_id
/// and points by id so results never depend on input row order.
struct Dataset {
    std::vector<AreaInput> areas;
    std::vector<InfrastructurePoint> points;
    ScoreTable scores;
};

struct ScoringParams {
    double catchment_radius_m = 500.0;
    double lonely_threshold_m = 250.0;
    AlternativeSet alternative_set = AlternativeSet::AnyAtm;
};

/// Result of scoring one dataset state end to end.
struct ScoredDataset {
    std::vector<CatchmentProfile> catchments;   // per area, area order
    std::vector<ComponentArray> oriented;       // polarity-aligned raw vectors
    NormalizationBounds bounds;                 // bounds actually applied
    bool bounds_were_frozen = false;
    std::vector<ComponentArray> normalized;
    std::vector<IndexResult> results;           // score filled; class left 0
    std::vector<std::string> degenerate_components;
};

/// Catchment counts, loneliness, polarity, min-max and aggregation for one
/// dataset state. With `frozen_bounds`, values are normalized against those
/// bounds and clamped to [0,1]; otherwise bounds are fitted to this dataset.
ScoredDataset score_dataset(const Dataset& data, const ScoringParams& params,
                            const WeightScheme& weights,
                            const std::optional<NormalizationBounds>& frozen_bounds = std::nullopt);

} // namespace finex
