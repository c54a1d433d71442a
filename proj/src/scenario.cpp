#include "finex/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace finex {

std::string_view to_string(Intervention i) {
    switch (i) {
        case Intervention::PaypointBanking: return "paypoint_banking";
        case Intervention::CashRecyclers: return "cash_recyclers";
        case Intervention::DigitalInclusion: return "digital_inclusion";
    }
    return "unknown";
}

Intervention intervention_from_string(std::string_view name) {
    if (name == "paypoint_banking") return Intervention::PaypointBanking;
    if (name == "cash_recyclers") return Intervention::CashRecyclers;
    if (name == "digital_inclusion") return Intervention::DigitalInclusion;
    fail(Errc::SchemaViolation, "unknown intervention '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
    if (!(recycler_lonely_threshold_m > 0.0)) {
        fail(Errc::InvalidConfig, "scenario: recycler lonely threshold must be > 0");
    }
    if (digital_from < 1 || digital_from > 10 || digital_to < 1 || digital_to > 10) {
        fail(Errc::InvalidConfig, "scenario: IUC levels must be in 1..10");
    }
    if (digital_to >= digital_from) {
        fail(Errc::InvalidConfig, "scenario: digital_to must be a lower IUC level than digital_from");
    }
}

Dataset apply_paypoint(Dataset data) {
    data.scores.set(InfraKind::PayPoint, data.scores.at(InfraKind::PostOffice));
    return data;
}

Dataset apply_recyclers(Dataset data, double threshold, std::vector<std::string>* converted) {
    const LonelyAnalysis lonely = lonely_atms(data.points, threshold, AlternativeSet::FreeOnly);
    for (const AtmNeighbor& atm : lonely.atms) {
        InfrastructurePoint& p = data.points[atm.point_index];
        if (atm.lonely && p.kind == InfraKind::FreeAtm) {
            p.kind = InfraKind::Recycler;
            if (converted) converted->push_back(p.id);
        }
    }
    if (converted) std::sort(converted->begin(), converted->end());
    return data;
}

Dataset apply_digital(Dataset data, int from_level, int to_level) {
    for (AreaInput& area : data.areas) {
        if (area.indicators.iuc_score == from_level) {
            area.indicators.iuc_score = to_level;
        }
    }
    return data;
}

ScenarioReport run_scenario(const ScenarioSpec& spec, const Dataset& baseline_data,
                            const ScoringParams& params, const WeightScheme& weights,
                            const BaselineIndex& baseline) {
    spec.validate();
    if (spec.bounds_policy == BoundsPolicy::FrozenBaseline && !baseline.bounds) {
        fail(Errc::MissingBaseline,
             "scenario: FrozenBaseline policy requires recorded baseline normalization bounds");
    }
    if (baseline.results.size() != baseline_data.areas.size()) {
        fail(Errc::MissingBaseline, "scenario: baseline results do not cover the dataset areas");
    }

    Dataset data = baseline_data;
    ScenarioReport report;
    for (const Intervention i : spec.interventions) {
        switch (i) {
            case Intervention::PaypointBanking:
                data = apply_paypoint(std::move(data));
                break;
            case Intervention::CashRecyclers:
                data = apply_recyclers(std::move(data), spec.recycler_lonely_threshold_m,
                                       &report.recycler_conversions);
                break;
            case Intervention::DigitalInclusion:
                data = apply_digital(std::move(data), spec.digital_from, spec.digital_to);
                break;
        }
    }

    const std::optional<NormalizationBounds> frozen =
        spec.bounds_policy == BoundsPolicy::FrozenBaseline ? baseline.bounds : std::nullopt;
    const ScoredDataset scored = score_dataset(data, params, weights, frozen);

    double sum = 0.0;
    for (std::size_t i = 0; i < scored.results.size(); ++i) {
        ScenarioRow row;
        row.area_id = scored.results[i].area_id;
        row.baseline_score = baseline.results[i].score;
        row.scenario_score = scored.results[i].score;
        row.delta = row.scenario_score - row.baseline_score;
        sum += row.delta;
        report.max_delta = report.rows.empty() ? row.delta : std::max(report.max_delta, row.delta);
        report.areas_affected += std::abs(row.delta) > 1e-9 ? 1 : 0;
        report.rows.push_back(std::move(row));
    }
    report.mean_delta = report.rows.empty() ? 0.0 : sum / static_cast<double>(report.rows.size());
    return report;
}

} // namespace finex
