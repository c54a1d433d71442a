#include "finex/validation.hpp"

#include <algorithm>
#include <cmath>

#include "finex/indicators.hpp"

namespace finex {

std::map<std::string, double> ward_medians(const std::vector<IndexResult>& results,
                                           const WardLookup& lookup) {
    std::map<std::string, std::vector<double>> grouped;
    for (const auto& r : results) {
        const auto it = lookup.area_to_ward.find(r.area_id);
        if (it == lookup.area_to_ward.end()) {
            fail(Errc::MissingLookup, "ward lookup has no entry for area '" + r.area_id + "'");
        }
        grouped[it->second].push_back(r.score);
    }
    std::map<std::string, double> medians;
    for (auto& [ward, scores] : grouped) {
        std::sort(scores.begin(), scores.end());
        const std::size_t m = scores.size();
        medians[ward] = (m % 2 == 1) ? scores[m / 2]
                                     : (scores[m / 2 - 1] + scores[m / 2]) / 2.0;
    }
    return medians;
}

std::map<std::string, double> average_ranks(const std::map<std::string, double>& values) {
    std::vector<std::pair<std::string, double>> items(values.begin(), values.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        return a.second < b.second || (a.second == b.second && a.first < b.first);
    });
    std::map<std::string, double> ranks;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i;
        while (j + 1 < items.size() && items[j + 1].second == items[i].second) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[items[t].first] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const std::map<std::string, double>& ranks_a,
                    const std::map<std::string, double>& ranks_b) {
    std::vector<double> xs, ys;
    xs.reserve(ranks_a.size());
    ys.reserve(ranks_a.size());
    for (const auto& [key, ra] : ranks_a) {
        xs.push_back(ra);
        ys.push_back(ranks_b.at(key));
    }
    return pearson(xs, ys);
}

RankComparison rank_and_compare(const std::map<std::string, double>& medians,
                                const std::map<std::string, double>& historical) {
    std::string missing, extra;
    for (const auto& [w, _] : medians) {
        if (!historical.count(w)) missing += (missing.empty() ? "" : ", ") + w;
    }
    for (const auto& [w, _] : historical) {
        if (!medians.count(w)) extra += (extra.empty() ? "" : ", ") + w;
    }
    if (!missing.empty() || !extra.empty()) {
        fail(Errc::SetDifference, "ward sets differ; missing from historical: {" + missing +
                                      "}; unknown in historical: {" + extra + "}");
    }

    // Historical ranks must be a permutation of 1..W.
    std::vector<double> sorted_hist;
    for (const auto& [_, r] : historical) sorted_hist.push_back(r);
    std::sort(sorted_hist.begin(), sorted_hist.end());
    for (std::size_t i = 0; i < sorted_hist.size(); ++i) {
        if (sorted_hist[i] != static_cast<double>(i + 1)) {
            fail(Errc::SchemaViolation, "historical ranks are not a permutation of 1..W");
        }
    }

    const auto rank_now = average_ranks(medians);

    RankComparison out;
    for (const auto& [ward, median] : medians) {
        WardRank row;
        row.ward_id = ward;
        row.median_score = median;
        row.rank_now = rank_now.at(ward);
        row.rank_then = historical.at(ward);
        row.delta = row.rank_then - row.rank_now;
        out.rows.push_back(row);
    }
    out.spearman = spearman_rho(rank_now, historical);

    std::vector<double> med_col, hist_col;
    for (const auto& [ward, median] : medians) {
        med_col.push_back(median);
        hist_col.push_back(historical.at(ward));
    }
    out.pearson_medians = pearson(med_col, hist_col);
    return out;
}

} // namespace finex
