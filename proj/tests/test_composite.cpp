#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "finex/composite.hpp"

using namespace finex;

namespace {

// Exhaustive optimal-partition oracle for small n: tries every way to cut the
// sorted values into k contiguous classes. Interval SSD uses the same prefix
// formula as production so exact ties resolve identically.
struct BruteJenks {
    double ssd = 0.0;
    std::vector<std::size_t> bounds; // index of last element per class
};

double interval_ssd(const std::vector<double>& v, std::size_t i, std::size_t j) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t t = i; t <= j; ++t) {
        s += v[t];
        s2 += v[t] * v[t];
    }
    return s2 - s * s / static_cast<double>(j - i + 1);
}

void enumerate(const std::vector<double>& v, std::size_t start, int classes_left, double acc,
               std::vector<std::size_t>& bounds, BruteJenks& best) {
    const std::size_t n = v.size();
    if (classes_left == 1) {
        const double total = acc + interval_ssd(v, start, n - 1);
        auto cand = bounds;
        cand.push_back(n - 1);
        if (total < best.ssd || (total == best.ssd && cand < best.bounds)) {
            best = {total, cand};
        }
        return;
    }
    for (std::size_t j = start; j + classes_left - 1 < n; ++j) {
        bounds.push_back(j);
        enumerate(v, j + 1, classes_left - 1, acc + interval_ssd(v, start, j), bounds, best);
        bounds.pop_back();
    }
}

BruteJenks brute_jenks(std::vector<double> values, int k) {
    std::sort(values.begin(), values.end());
    BruteJenks best;
    best.ssd = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> bounds;
    enumerate(values, 0, k, 0.0, bounds, best);
    return best;
}

double impl_ssd_of_partition(std::vector<double> values, const JenksResult& r) {
    // Recompute from the labels so the comparison is about the partition.
    std::sort(values.begin(), values.end());
    std::vector<int> labels = r.labels;
    std::sort(labels.begin(), labels.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < labels.size()) {
        std::size_t j = i;
        while (j + 1 < labels.size() && labels[j + 1] == labels[i]) ++j;
        total += interval_ssd(values, i, j);
        i = j + 1;
    }
    return total;
}

} // namespace

TEST_CASE("default weights echo the published percentages") {
    const WeightScheme w;
    CHECK_NOTHROW(w.validate());
    auto pct = [](double v) { return std::round(10000.0 * v) / 100.0; };
    CHECK(pct(w.avcash) == 26.67);
    CHECK(pct(w.loneliness) == 6.67);
    CHECK(pct(w.claimant) == 9.52);
    CHECK(pct(w.income) == 9.52);
    CHECK(pct(w.housing) == 9.52);
    CHECK(pct(w.lone_parents) == 4.76);
    CHECK(pct(w.iuc) == 16.67);
    CHECK(pct(w.car_access) == 16.67);
    const double total = w.avcash + w.loneliness + w.claimant + w.income + w.housing +
                         w.lone_parents + w.iuc + w.car_access;
    CHECK(std::abs(total - 1.0) <= 1e-9);
    CHECK(w.supply == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("invalid weights fail before any area is scored") {
    WeightScheme w;
    w.avcash = 0.5; // breaks both the total and the supply-domain sum
    ComponentArray c{};
    CHECK_THROWS_AS(aggregate(c, w), Error);
    try {
        aggregate(c, w);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidConfig);
    }
    WeightScheme bad_domain;
    bad_domain.supply = 0.4; // sub-weights no longer match the domain
    CHECK_THROWS_AS(aggregate(c, bad_domain), Error);
}

TEST_CASE("aggregate endpoints and the mid-weight example") {
    const WeightScheme w;
    ComponentArray ones{};
    ones.fill(1.0);
    CHECK(aggregate(ones, w) == doctest::Approx(100.0).epsilon(1e-12));
    ComponentArray zeros{};
    CHECK(aggregate(zeros, w) == 0.0);

    // Everything at 0.5 except loneliness at 1:
    // 100 * (0.5 * 14/15 + 1/15) = 800/15.
    ComponentArray mid{};
    mid.fill(0.5);
    mid[static_cast<std::size_t>(Component::Loneliness)] = 1.0;
    CHECK(aggregate(mid, w) == doctest::Approx(800.0 / 15.0).epsilon(1e-9));
    // The same figure from two-decimal rounded weights is 53.3335.
    CHECK(std::abs(aggregate(mid, w) - 53.3335) < 2e-4);
}

TEST_CASE("rescaled-and-renormalized weights leave scores unchanged") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    const WeightScheme base;
    for (const double c : {0.5, 2.0, 7.25}) {
        WeightScheme scaled = base;
        double* subs[] = {&scaled.avcash, &scaled.loneliness, &scaled.claimant, &scaled.income,
                          &scaled.housing, &scaled.lone_parents, &scaled.iuc, &scaled.car_access};
        double total = 0.0;
        for (double* s : subs) {
            *s *= c;
            total += *s;
        }
        for (double* s : subs) *s /= total;
        scaled.supply = scaled.avcash + scaled.loneliness;
        scaled.demand = scaled.claimant + scaled.income + scaled.housing + scaled.lone_parents;
        scaled.alternatives = scaled.iuc + scaled.car_access;

        for (int trial = 0; trial < 20; ++trial) {
            ComponentArray v{};
            for (auto& x : v) x = d(rng);
            CHECK(aggregate(v, scaled) == doctest::Approx(aggregate(v, base)).epsilon(1e-12));
        }
    }
}

TEST_CASE("a constant shift of one component shifts every score equally") {
    const WeightScheme w;
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<ComponentArray> areas(10);
    for (auto& a : areas) {
        for (auto& x : a) x = d(rng);
    }
    const double shift = 0.125;
    std::vector<double> before, after;
    for (const auto& a : areas) {
        before.push_back(aggregate(a, w));
        ComponentArray s = a;
        s[static_cast<std::size_t>(Component::Iuc)] += shift;
        after.push_back(aggregate(s, w));
    }
    const double delta = after[0] - before[0];
    for (std::size_t i = 1; i < areas.size(); ++i) {
        CHECK(after[i] - before[i] == doctest::Approx(delta).epsilon(1e-9));
    }
}

TEST_CASE("aggregate is strictly monotone in every component") {
    const WeightScheme w;
    ComponentArray v{};
    v.fill(0.3);
    const double base = aggregate(v, w);
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        ComponentArray up = v;
        up[c] += 0.05;
        CHECK(aggregate(up, w) > base);
    }
}

TEST_CASE("jenks splits at the dominant gap") {
    const JenksResult r = jenks_breaks({1, 2, 3, 10, 11, 12}, 2);
    CHECK(r.labels == std::vector<int>{1, 1, 1, 2, 2, 2});
    CHECK(r.class_max[0] == 3.0);
    CHECK(r.class_min[1] == 10.0);

    const JenksResult s = jenks_breaks({4, 5, 9, 10}, 2);
    CHECK(s.labels == std::vector<int>{1, 1, 2, 2});
}

TEST_CASE("jenks matches the exhaustive oracle on random instances") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> d(0.0, 100.0);
    std::uniform_int_distribution<int> nd(5, 12);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = nd(rng);
        std::uniform_int_distribution<int> kd(1, std::min(5, n));
        const int k = kd(rng);
        std::vector<double> values(n);
        for (auto& v : values) v = d(rng);
        const JenksResult r = jenks_breaks(values, k);
        const BruteJenks oracle = brute_jenks(values, k);
        CHECK(impl_ssd_of_partition(values, r) == oracle.ssd);
    }
}

TEST_CASE("jenks edge cases") {
    CHECK_THROWS_AS(jenks_breaks({1, 1, 1}, 2), Error); // fewer distinct values than classes
    try {
        jenks_breaks({1, 1, 1}, 2);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InfeasibleClassing);
    }
    CHECK_THROWS_AS(jenks_breaks({1, 2}, 3), Error);
    CHECK_THROWS_AS(jenks_breaks({1, 2, 3}, 0), Error);

    // k equal to the number of distinct values: singleton classes, zero SSD.
    const JenksResult r = jenks_breaks({5, 1, 9, 3}, 4);
    CHECK(r.within_ssd == 0.0);
    CHECK(r.labels == std::vector<int>{3, 1, 4, 2});

    const JenksResult one = jenks_breaks({2, 4, 8}, 1);
    CHECK(one.labels == std::vector<int>{1, 1, 1});
}

TEST_CASE("jenks labels are monotone in value") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> d(0.0, 50.0);
    std::vector<double> values(60);
    for (auto& v : values) v = d(rng);
    const JenksResult r = jenks_breaks(values, 5);
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (values[i] <= values[j]) CHECK(r.labels[i] <= r.labels[j]);
        }
    }
}

TEST_CASE("classify labels results by score") {
    std::vector<IndexResult> results;
    for (const double s : {10.0, 11.0, 12.0, 50.0, 51.0, 90.0}) {
        IndexResult r;
        r.area_id = "A" + std::to_string(results.size());
        r.score = s;
        results.push_back(r);
    }
    classify(results, 3);
    std::vector<int> labels;
    for (const auto& r : results) labels.push_back(r.jenks_class);
    CHECK(labels == std::vector<int>{1, 1, 1, 2, 2, 3});
}

TEST_CASE("classify handles uniform scores with one class") {
    std::vector<IndexResult> results(4);
    for (std::size_t i = 0; i < results.size(); ++i) {
        results[i].area_id = "A" + std::to_string(i);
        results[i].score = 42.0;
    }
    classify(results, 1);
    for (const auto& r : results) CHECK(r.jenks_class == 1);
}

TEST_CASE("classify at survey scale stays contiguous and monotone") {
    std::mt19937 rng(31);
    std::normal_distribution<double> d(50.0, 18.0);
    std::vector<IndexResult> results(182);
    for (std::size_t i = 0; i < results.size(); ++i) {
        results[i].area_id = "E" + std::to_string(i);
        results[i].score = std::clamp(d(rng), 0.0, 100.0);
    }
    classify(results, 5);

    std::vector<std::pair<double, int>> by_score;
    for (const auto& r : results) by_score.emplace_back(r.score, r.jenks_class);
    std::sort(by_score.begin(), by_score.end());
    CHECK(by_score.front().second == 1);
    CHECK(by_score.back().second == 5);
    for (std::size_t i = 1; i < by_score.size(); ++i) {
        CHECK(by_score[i].second >= by_score[i - 1].second);
        CHECK(by_score[i].second - by_score[i - 1].second <= 1);
    }

    // Reduced sub-sample against the exhaustive oracle.
    std::vector<double> sub;
    for (std::size_t i = 0; i < results.size(); i += 16) sub.push_back(results[i].score);
    const JenksResult r = jenks_breaks(sub, 5);
    const BruteJenks oracle = brute_jenks(sub, 5);
    CHECK(impl_ssd_of_partition(sub, r) == oracle.ssd);
}
