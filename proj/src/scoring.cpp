#include "finex/scoring.hpp"

namespace finex {

ScoredDataset score_dataset(const Dataset& data, const ScoringParams& params,
                            const WeightScheme& weights,
                            const std::optional<NormalizationBounds>& frozen_bounds) {
    weights.validate();
    if (!(params.catchment_radius_m > 0.0)) {
        fail(Errc::InvalidConfig, "catchment radius must be > 0");
    }
    if (!(params.lonely_threshold_m > 0.0)) {
        fail(Errc::InvalidConfig, "lonely threshold must be > 0");
    }

    ScoredDataset out;

    const LonelyAnalysis lonely =
        lonely_atms(data.points, params.lonely_threshold_m, params.alternative_set);

    for (const AreaInput& area : data.areas) {
        CatchmentProfile profile;
        profile.area_id = area.area_id;
        profile.counts = catchment_counts(area.centroid, params.catchment_radius_m, data.points);
        profile.avcash_raw = avcash(profile.counts, data.scores);
        for (const AtmNeighbor& atm : lonely.atms) {
            const InfrastructurePoint& p = data.points[atm.point_index];
            if (atm.lonely && p.kind == InfraKind::FreeAtm &&
                distance(area.centroid, p.location) <= params.catchment_radius_m) {
                ++profile.lonely_free_atms;
            }
        }
        out.catchments.push_back(profile);

        IndicatorVector joined = area.indicators;
        joined.area_id = area.area_id;
        joined.avcash_raw = profile.avcash_raw;
        joined.lonely_count = profile.lonely_free_atms;
        validate(joined);
        out.oriented.push_back(align_polarity(joined));
    }

    if (frozen_bounds) {
        out.bounds = *frozen_bounds;
        out.bounds_were_frozen = true;
    } else {
        out.bounds = NormalizationBounds::fit(out.oriented);
    }

    std::array<bool, kComponentCount> degenerate{};
    for (std::size_t i = 0; i < data.areas.size(); ++i) {
        const ComponentArray norm =
            normalize_components(out.oriented[i], out.bounds, out.bounds_were_frozen, &degenerate);
        out.normalized.push_back(norm);

        IndexResult r;
        r.area_id = data.areas[i].area_id;
        r.components = norm;
        r.score = aggregate(norm, weights);
        out.results.push_back(std::move(r));
    }
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        if (degenerate[c]) {
            out.degenerate_components.emplace_back(kComponentNames[c]);
        }
    }
    return out;
}

} // namespace finex
