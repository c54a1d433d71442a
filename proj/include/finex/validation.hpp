#pragma once

#include <map>
#include <string>
#include <vector>

#include "finex/composite.hpp"

namespace finex {

struct WardLookup {
    std::map<std::string, std::string> area_to_ward;
    std::map<std::string, std::string> ward_names; // ward_id -> display name
};

/// Median LSOA score per ward; even counts take the mean of the two middle
/// values. Every scored area must appear in the lookup.
std::map<std::string, double> ward_medians(const std::vector<IndexResult>& results,
                                           const WardLookup& lookup);

struct WardRank {
    std::string ward_id;
    double median_score = 0.0;
    double rank_now = 0.0;  // 1 = lowest median (most excluded); ties averaged
    double rank_then = 0.0;
    double delta = 0.0;     // rank_then - rank_now
};

struct RankComparison {
    std::vector<WardRank> rows; // sorted by ward_id
    double spearman = 0.0;      // on the two rank vectors
    double pearson_medians = 0.0;
};

/// Compare the current ward ranking against a historical one. The historical
/// ranks must cover exactly the same ward set and form a permutation of 1..W.
RankComparison rank_and_compare(const std::map<std::string, double>& medians,
                                const std::map<std::string, double>& historical);

/// Average-rank vector (1 = smallest value; ties share the mean rank).
std::map<std::string, double> average_ranks(const std::map<std::string, double>& values);

/// Spearman's rho, computed as the Pearson correlation of two rank vectors
/// over the same key set.
double spearman_rho(const std::map<std::string, double>& ranks_a,
                    const std::map<std::string, double>& ranks_b);

} // namespace finex
