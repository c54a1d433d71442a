#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finex/error.hpp"

namespace finex {

/// Per-area raw indicators (Census/admin inputs plus the joined
/// infrastructure measures).
struct IndicatorVector {
    std::string area_id;
    double claimant_pct = 0.0;       // % of population
    double median_income = 0.0;      // currency units / year
    double rented_or_shared_pct = 0.0; // % of households
    double lone_parent_pct = 0.0;    // % of households
    int iuc_score = 1;               // 1..10, 10 = e-withdrawn
    double car_access_pct = 0.0;     // % of households
    double avcash_raw = 0.0;         // joined from the catchment profile
    int lonely_count = 0;            // joined lonely free-ATM count
};

void validate(const IndicatorVector& v);

/// The eight index components in their fixed summation order
/// (alphabetical by name, for bit-stable aggregation).
enum class Component : std::size_t {
    Avcash = 0,
    CarAccess,
    Claimant,
    Housing,
    Income,
    Iuc,
    LoneParents,
    Loneliness,
};

inline constexpr std::size_t kComponentCount = 8;

inline constexpr std::array<std::string_view, kComponentCount> kComponentNames = {
    "avcash", "car_access", "claimant", "housing", "income", "iuc", "lone_parents", "loneliness",
};

using ComponentArray = std::array<double, kComponentCount>;

/// Orient every indicator so that higher always means more financially
/// included: percent risk factors become 100 - value, IUC becomes 11 - value,
/// the lonely-ATM count is negated, and income / car access / avcash pass
/// through unchanged.
ComponentArray align_polarity(const IndicatorVector& v);

struct NormalizationBounds {
    ComponentArray min{};
    ComponentArray max{};

    /// Column-wise min/max over a set of oriented vectors.
    static NormalizationBounds fit(std::span<const ComponentArray> rows);
};

struct MinmaxResult {
    std::vector<double> values;
    bool degenerate = false; // max == min: all outputs forced to 0
};

/// (x - min) / (max - min) for one column.
MinmaxResult minmax(std::span<const double> values, double min_value, double max_value);

/// Normalize one oriented vector against bounds. With `clamp` (frozen foreign
/// bounds), outputs are clipped to [0,1]. Degenerate components map to 0 and
/// are reported through `degenerate_mask` when given.
ComponentArray normalize_components(const ComponentArray& oriented, const NormalizationBounds& bounds,
                                    bool clamp, std::array<bool, kComponentCount>* degenerate_mask = nullptr);

struct CorrelationReport {
    // Pearson r; NaN where a column has zero variance.
    std::array<std::array<double, kComponentCount>, kComponentCount> matrix{};
    struct FlaggedPair {
        Component a;
        Component b;
        double r;
    };
    std::vector<FlaggedPair> flagged;      // |r| > threshold, reported only
    std::vector<Component> degenerate;     // zero-variance columns
    double threshold = 0.95;
};

/// Full pairwise Pearson matrix over oriented raw vectors; pairs with
/// |r| > threshold are flagged but never dropped. Requires >= 3 rows.
CorrelationReport correlation_screen(std::span<const ComponentArray> rows, double threshold = 0.95);

/// Pearson correlation of two equal-length columns; NaN if either has zero
/// variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

} // namespace finex
