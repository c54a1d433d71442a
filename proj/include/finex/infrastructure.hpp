#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finex/geometry.hpp"

namespace finex {

/// Cash-access infrastructure kinds. PayPoint scores 0 in the baseline index
/// and only gains value under the paypoint-banking intervention; Recycler
/// appears only as the product of the cash-recycler intervention.
enum class InfraKind {
    FreeAtm,
    PostOffice,
    Branch,
    Cashback,
    ChargingAtm,
    PayPoint,
    Recycler,
};

inline constexpr std::size_t kKindCount = 7;

inline constexpr std::array<InfraKind, kKindCount> kAllKinds = {
    InfraKind::FreeAtm,    InfraKind::PostOffice, InfraKind::Branch,
    InfraKind::Cashback,   InfraKind::ChargingAtm, InfraKind::PayPoint,
    InfraKind::Recycler,
};

std::string_view to_string(InfraKind kind);
InfraKind kind_from_string(std::string_view name); // throws SchemaViolation on unknown names

enum class OperatorClass { Bank, Iad, Other };

std::string_view to_string(OperatorClass c);
OperatorClass operator_class_from_string(std::string_view name);

struct InfrastructurePoint {
    std::string id;
    InfraKind kind = InfraKind::FreeAtm;
    ProjPoint location;
    std::string postcode; // empty = unknown
    std::optional<OperatorClass> operator_class;
};

/// Per-unit availability-of-cash scores, indexed by kind.
class ScoreTable {
public:
    /// Defaults: free ATM 3, Post Office 2, branch 1, cashback 0.5,
    /// charging ATM -0.5, PayPoint 0, recycler 4.
    ScoreTable();

    double at(InfraKind kind) const noexcept;
    void set(InfraKind kind, double score); // score must be finite

private:
    std::array<double, kKindCount> scores_;
};

using KindCounts = std::array<int, kKindCount>;

struct CatchmentProfile {
    std::string area_id;
    KindCounts counts{};
    double avcash_raw = 0.0;
    int lonely_free_atms = 0;
};

/// Number of points of each kind within `radius` of the centroid (boundary
/// inclusive). Co-located units are counted individually.
KindCounts catchment_counts(const ProjPoint& centroid, double radius,
                            const std::vector<InfrastructurePoint>& points);

double avcash(const KindCounts& counts, const ScoreTable& table);

/// Which kinds count as an "alternative" when measuring ATM loneliness.
/// Recyclers dispense cash for free and count in both sets.
enum class AlternativeSet { AnyAtm, FreeOnly };

struct AtmNeighbor {
    std::size_t point_index = 0; // into the input point vector
    double nn_distance_m = 0.0;  // +inf when no alternative exists at all
    bool lonely = false;
};

struct LonelyBins {
    int le100 = 0;
    int le250 = 0;
    int le500 = 0;
    int gt500 = 0;
};

struct LonelyAnalysis {
    std::vector<AtmNeighbor> atms; // subjects in input order
    LonelyBins bins;
    int lonely_count = 0;
};

/// Nearest-alternative distance and loneliness flag for every free and
/// charging ATM in `points` (other kinds are not subjects). An ATM is lonely
/// when its nearest alternative is farther than `threshold`; an ATM with no
/// alternatives at all is lonely.
LonelyAnalysis lonely_atms(const std::vector<InfrastructurePoint>& points, double threshold,
                           AlternativeSet alternatives);

/// Clark-Evans nearest-neighbour statistics.
struct NNStats {
    int n_points = 0;
    double area_m2 = 0.0;
    double observed_mean_m = 0.0;
    double expected_mean_m = 0.0;
    double nni = 0.0;
    double z_score = 0.0;
};

NNStats nn_stats(const std::vector<ProjPoint>& points, double area_m2);
NNStats nn_stats(const std::vector<ProjPoint>& points, const StudyArea& area);

} // namespace finex
