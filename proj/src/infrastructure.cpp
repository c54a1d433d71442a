#include "finex/infrastructure.hpp"

#include <cmath>
#include <limits>

namespace finex {

std::string_view to_string(InfraKind kind) {
    switch (kind) {
        case InfraKind::FreeAtm: return "free_atm";
        case InfraKind::PostOffice: return "post_office";
        case InfraKind::Branch: return "branch";
        case InfraKind::Cashback: return "cashback";
        case InfraKind::ChargingAtm: return "charging_atm";
        case InfraKind::PayPoint: return "paypoint";
        case InfraKind::Recycler: return "recycler";
    }
    return "unknown";
}

InfraKind kind_from_string(std::string_view name) {
    for (const InfraKind k : kAllKinds) {
        if (to_string(k) == name) return k;
    }
    fail(Errc::SchemaViolation, "unknown infrastructure kind '" + std::string(name) + "'");
}

std::string_view to_string(OperatorClass c) {
    switch (c) {
        case OperatorClass::Bank: return "bank";
        case OperatorClass::Iad: return "iad";
        case OperatorClass::Other: return "other";
    }
    return "unknown";
}

OperatorClass operator_class_from_string(std::string_view name) {
    if (name == "bank") return OperatorClass::Bank;
    if (name == "iad") return OperatorClass::Iad;
    if (name == "other") return OperatorClass::Other;
    fail(Errc::SchemaViolation, "unknown operator class '" + std::string(name) + "'");
}

ScoreTable::ScoreTable()
    : scores_{3.0, 2.0, 1.0, 0.5, -0.5, 0.0, 4.0} {}

double ScoreTable::at(InfraKind kind) const noexcept {
    return scores_[static_cast<std::size_t>(kind)];
}

void ScoreTable::set(InfraKind kind, double score) {
    if (!std::isfinite(score)) {
        fail(Errc::InvalidParameter, "ScoreTable: score must be finite");
    }
    scores_[static_cast<std::size_t>(kind)] = score;
}

KindCounts catchment_counts(const ProjPoint& centroid, double radius,
                            const std::vector<InfrastructurePoint>& points) {
    if (!(radius > 0.0)) {
        fail(Errc::InvalidParameter, "catchment_counts: radius must be > 0");
    }
    KindCounts counts{};
    for (const auto& p : points) {
        if (distance(centroid, p.location) <= radius) {
            ++counts[static_cast<std::size_t>(p.kind)];
        }
    }
    return counts;
}

double avcash(const KindCounts& counts, const ScoreTable& table) {
    double total = 0.0;
    for (const InfraKind k : kAllKinds) {
        total += counts[static_cast<std::size_t>(k)] * table.at(k);
    }
    return total;
}

namespace {

bool is_subject(InfraKind k) {
    return k == InfraKind::FreeAtm || k == InfraKind::ChargingAtm;
}

bool is_alternative(InfraKind k, AlternativeSet set) {
    if (k == InfraKind::FreeAtm || k == InfraKind::Recycler) return true;
    return set == AlternativeSet::AnyAtm && k == InfraKind::ChargingAtm;
}

} // namespace

LonelyAnalysis lonely_atms(const std::vector<InfrastructurePoint>& points, double threshold,
                           AlternativeSet alternatives) {
    if (!(threshold > 0.0)) {
        fail(Errc::InvalidParameter, "lonely_atms: threshold must be > 0");
    }
    LonelyAnalysis out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!is_subject(points[i].kind)) continue;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i || !is_alternative(points[j].kind, alternatives)) continue;
            best = std::min(best, distance(points[i].location, points[j].location));
        }
        AtmNeighbor atm{i, best, best > threshold};
        if (best <= 100.0) {
            ++out.bins.le100;
        } else if (best <= 250.0) {
            ++out.bins.le250;
        } else if (best <= 500.0) {
            ++out.bins.le500;
        } else {
            ++out.bins.gt500;
        }
        out.lonely_count += atm.lonely ? 1 : 0;
        out.atms.push_back(atm);
    }
    return out;
}

NNStats nn_stats(const std::vector<ProjPoint>& points, double area_m2) {
    if (points.size() < 2) {
        fail(Errc::InsufficientPoints, "nn_stats: need at least 2 points");
    }
    if (!(area_m2 > 0.0)) {
        fail(Errc::InvalidParameter, "nn_stats: area must be > 0");
    }
    const auto n = static_cast<double>(points.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sum += nearest_neighbor(i, points).distance_m;
    }
    NNStats s;
    s.n_points = static_cast<int>(points.size());
    s.area_m2 = area_m2;
    s.observed_mean_m = sum / n;
    s.expected_mean_m = 0.5 / std::sqrt(n / area_m2);
    s.nni = s.observed_mean_m / s.expected_mean_m;
    // Clark-Evans standard error of the expected mean under CSR.
    const double se = 0.26136 / std::sqrt(n * n / area_m2);
    s.z_score = (s.observed_mean_m - s.expected_mean_m) / se;
    return s;
}

NNStats nn_stats(const std::vector<ProjPoint>& points, const StudyArea& area) {
    return nn_stats(points, area.area_m2());
}

} // namespace finex
