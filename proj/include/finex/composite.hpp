#pragma once

#include <string>
#include <vector>

#include "finex/indicators.hpp"

namespace finex {

/// Hierarchical domain/sub-variable weights. Defaults are the exact fractions
/// behind the published two-decimal percentages: supply, demand and
/// alternatives at 1/3 each, split 4/15+1/15, 2/21*3+1/21 and 1/6+1/6.
struct WeightScheme {
    double supply = 1.0 / 3.0;
    double demand = 1.0 / 3.0;
    double alternatives = 1.0 / 3.0;

    double avcash = 4.0 / 15.0;
    double loneliness = 1.0 / 15.0;
    double claimant = 2.0 / 21.0;
    double income = 2.0 / 21.0;
    double housing = 2.0 / 21.0;
    double lone_parents = 1.0 / 21.0;
    double iuc = 1.0 / 6.0;
    double car_access = 1.0 / 6.0;

    /// Sub-weights in canonical component order.
    ComponentArray as_components() const;

    /// All weights non-negative, sub-weights sum to 1 and to their domain
    /// weights within 1e-9. Throws InvalidConfig otherwise.
    void validate() const;
};

/// 100 x weighted sum of normalized components, summed in canonical
/// component order. Validates the weights first.
double aggregate(const ComponentArray& normalized, const WeightScheme& weights);

struct JenksResult {
    std::vector<double> class_min;  // per class, ascending
    std::vector<double> class_max;
    std::vector<int> labels;        // 1..k, aligned to the input order
    double within_ssd = 0.0;
};

/// Exact natural-breaks classification: partition into k contiguous classes
/// of the sorted values minimizing total within-class squared deviation.
/// Ties between optimal partitions go to the lexicographically lowest break
/// positions. Requires k >= 1 and at least k distinct values.
JenksResult jenks_breaks(const std::vector<double>& values, int k);

struct IndexResult {
    std::string area_id;
    ComponentArray components{};
    double score = 0.0;
    int jenks_class = 0; // 1 = lowest-score class
    std::string config_fingerprint;
};

/// Labels every result 1..k by its score's natural-breaks class.
void classify(std::vector<IndexResult>& results, int k);

} // namespace finex
