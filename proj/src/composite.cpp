#include "finex/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace finex {

ComponentArray WeightScheme::as_components() const {
    ComponentArray w{};
    w[static_cast<std::size_t>(Component::Avcash)] = avcash;
    w[static_cast<std::size_t>(Component::CarAccess)] = car_access;
    w[static_cast<std::size_t>(Component::Claimant)] = claimant;
    w[static_cast<std::size_t>(Component::Housing)] = housing;
    w[static_cast<std::size_t>(Component::Income)] = income;
    w[static_cast<std::size_t>(Component::Iuc)] = iuc;
    w[static_cast<std::size_t>(Component::LoneParents)] = lone_parents;
    w[static_cast<std::size_t>(Component::Loneliness)] = loneliness;
    return w;
}

void WeightScheme::validate() const {
    constexpr double kTol = 1e-9;
    const double subs[] = {avcash, loneliness, claimant, income, housing, lone_parents, iuc, car_access};
    for (const double w : subs) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            fail(Errc::InvalidConfig, "weights: sub-weights must be finite and >= 0");
        }
    }
    for (const double w : {supply, demand, alternatives}) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            fail(Errc::InvalidConfig, "weights: domain weights must be finite and >= 0");
        }
    }
    const double total = std::accumulate(std::begin(subs), std::end(subs), 0.0);
    if (std::abs(total - 1.0) > kTol) {
        fail(Errc::InvalidConfig, "weights: sub-weights must sum to 1 (got " + std::to_string(total) + ")");
    }
    if (std::abs((avcash + loneliness) - supply) > kTol) {
        fail(Errc::InvalidConfig, "weights: supply sub-weights do not sum to the supply domain weight");
    }
    if (std::abs((claimant + income + housing + lone_parents) - demand) > kTol) {
        fail(Errc::InvalidConfig, "weights: demand sub-weights do not sum to the demand domain weight");
    }
    if (std::abs((iuc + car_access) - alternatives) > kTol) {
        fail(Errc::InvalidConfig, "weights: alternatives sub-weights do not sum to the alternatives domain weight");
    }
}

double aggregate(const ComponentArray& normalized, const WeightScheme& weights) {
    weights.validate();
    const ComponentArray w = weights.as_components();
    double sum = 0.0;
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        sum += w[c] * normalized[c];
    }
    return 100.0 * sum;
}

namespace {

// Within-class sum of squared deviations for sorted[i..j], via prefix sums.
struct SsdTable {
    std::vector<double> pre;  // prefix sums of values
    std::vector<double> pre2; // prefix sums of squares

    explicit SsdTable(const std::vector<double>& sorted) {
        pre.resize(sorted.size() + 1, 0.0);
        pre2.resize(sorted.size() + 1, 0.0);
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            pre[i + 1] = pre[i] + sorted[i];
            pre2[i + 1] = pre2[i] + sorted[i] * sorted[i];
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        const double n = static_cast<double>(j - i + 1);
        const double s = pre[j + 1] - pre[i];
        const double s2 = pre2[j + 1] - pre2[i];
        return s2 - (s * s) / n;
    }
};

} // namespace

JenksResult jenks_breaks(const std::vector<double>& values, int k) {
    if (k < 1) {
        fail(Errc::InvalidParameter, "jenks_breaks: k must be >= 1");
    }
    const std::size_t n = values.size();
    if (n < static_cast<std::size_t>(k)) {
        fail(Errc::InfeasibleClassing, "jenks_breaks: fewer values than classes");
    }
    const std::size_t distinct = std::set<double>(values.begin(), values.end()).size();
    if (distinct < static_cast<std::size_t>(k)) {
        fail(Errc::InfeasibleClassing, "jenks_breaks: fewer distinct values than classes");
    }

    // Sort once, remembering where each value came from.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = values[order[i]];

    const SsdTable ssd(sorted);
    const auto kk = static_cast<std::size_t>(k);
    const double inf = std::numeric_limits<double>::infinity();

    // suffix[m][i]: minimal SSD of sorted[i..n-1] split into m classes.
    std::vector<std::vector<double>> suffix(kk + 1, std::vector<double>(n + 1, inf));
    suffix[0][n] = 0.0;
    for (std::size_t m = 1; m <= kk; ++m) {
        for (std::size_t i = 0; i + m <= n; ++i) {
            double best = inf;
            // First class is sorted[i..j]; leave at least m-1 elements after it.
            for (std::size_t j = i; j + (m - 1) < n; ++j) {
                const double rest = suffix[m - 1][j + 1];
                if (rest == inf) continue;
                best = std::min(best, ssd(i, j) + rest);
            }
            suffix[m][i] = best;
        }
    }

    // Greedy forward reconstruction: the earliest boundary achieving the
    // optimum at each stage yields the lexicographically lowest breaks.
    std::vector<std::size_t> bounds; // index of last element per class
    std::size_t start = 0;
    for (std::size_t m = kk; m >= 1; --m) {
        const double target = suffix[m][start];
        for (std::size_t j = start; j + (m - 1) < n; ++j) {
            if (ssd(start, j) + suffix[m - 1][j + 1] == target) {
                bounds.push_back(j);
                start = j + 1;
                break;
            }
        }
        if (m == 1) break;
    }

    JenksResult out;
    out.labels.assign(n, 0);
    std::size_t lo = 0;
    double total = 0.0;
    for (std::size_t c = 0; c < bounds.size(); ++c) {
        const std::size_t hi = bounds[c];
        out.class_min.push_back(sorted[lo]);
        out.class_max.push_back(sorted[hi]);
        total += ssd(lo, hi);
        for (std::size_t i = lo; i <= hi; ++i) {
            out.labels[order[i]] = static_cast<int>(c) + 1;
        }
        lo = hi + 1;
    }
    out.within_ssd = total;
    return out;
}

void classify(std::vector<IndexResult>& results, int k) {
    if (results.size() < static_cast<std::size_t>(k)) {
        fail(Errc::InfeasibleClassing, "classify: fewer areas than classes");
    }
    std::vector<double> scores;
    scores.reserve(results.size());
    for (const auto& r : results) scores.push_back(r.score);
    const JenksResult jr = jenks_breaks(scores, k);
    for (std::size_t i = 0; i < results.size(); ++i) {
        results[i].jenks_class = jr.labels[i];
    }
}

} // namespace finex
