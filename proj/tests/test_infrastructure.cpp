#include <doctest.h>

#include <cmath>

#include "finex/infrastructure.hpp"
#include "support.hpp"

using namespace finex;
using finex::test::random_points;

namespace {

InfrastructurePoint make_point(std::string id, InfraKind kind, double x, double y) {
    InfrastructurePoint p;
    p.id = std::move(id);
    p.kind = kind;
    p.location = {x, y};
    return p;
}

int count_of(const KindCounts& counts, InfraKind k) {
    return counts[static_cast<std::size_t>(k)];
}

} // namespace

TEST_CASE("score table defaults") {
    const ScoreTable t;
    CHECK(t.at(InfraKind::FreeAtm) == 3.0);
    CHECK(t.at(InfraKind::PostOffice) == 2.0);
    CHECK(t.at(InfraKind::Branch) == 1.0);
    CHECK(t.at(InfraKind::Cashback) == 0.5);
    CHECK(t.at(InfraKind::ChargingAtm) == -0.5);
    CHECK(t.at(InfraKind::PayPoint) == 0.0);
    CHECK(t.at(InfraKind::Recycler) == 4.0);
    ScoreTable u;
    CHECK_THROWS_AS(u.set(InfraKind::FreeAtm, std::nan("")), Error);
}

TEST_CASE("catchment membership follows distances") {
    const std::vector<InfrastructurePoint> pts = {
        make_point("a", InfraKind::FreeAtm, 100, 0),
        make_point("b", InfraKind::Cashback, 499, 0),
        make_point("c", InfraKind::ChargingAtm, 0, 200),
        make_point("d", InfraKind::Branch, 600, 0),
    };
    const KindCounts counts = catchment_counts({0, 0}, 500, pts);
    CHECK(count_of(counts, InfraKind::FreeAtm) == 1);
    CHECK(count_of(counts, InfraKind::Cashback) == 1);
    CHECK(count_of(counts, InfraKind::ChargingAtm) == 1);
    CHECK(count_of(counts, InfraKind::Branch) == 0);
}

TEST_CASE("catchment with no points is all zero") {
    const KindCounts counts = catchment_counts({0, 0}, 500, {});
    for (const InfraKind k : kAllKinds) CHECK(count_of(counts, k) == 0);
}

TEST_CASE("co-located units each count") {
    const std::vector<InfrastructurePoint> pts = {
        make_point("a", InfraKind::FreeAtm, 10, 10),
        make_point("b", InfraKind::FreeAtm, 10, 10),
    };
    CHECK(count_of(catchment_counts({0, 0}, 500, pts), InfraKind::FreeAtm) == 2);
}

TEST_CASE("catchment counts match a per-kind radius scan") {
    std::mt19937 rng(42);
    const auto xy = random_points(rng, 50, -800, 800);
    std::vector<InfrastructurePoint> pts;
    for (std::size_t i = 0; i < xy.size(); ++i) {
        pts.push_back(make_point(std::to_string(i), kAllKinds[i % kKindCount], xy[i].x, xy[i].y));
    }
    const KindCounts counts = catchment_counts({0, 0}, 500, pts);
    for (const InfraKind k : kAllKinds) {
        int expected = 0;
        for (const auto& p : pts) {
            if (p.kind == k && std::hypot(p.location.x, p.location.y) <= 500.0) ++expected;
        }
        CHECK(count_of(counts, k) == expected);
    }
}

TEST_CASE("avcash reproduces the published example rows") {
    const ScoreTable t;
    KindCounts a{};
    a[static_cast<std::size_t>(InfraKind::FreeAtm)] = 1;
    a[static_cast<std::size_t>(InfraKind::Cashback)] = 1;
    a[static_cast<std::size_t>(InfraKind::ChargingAtm)] = 1;
    CHECK(avcash(a, t) == 3.0);

    KindCounts b{};
    b[static_cast<std::size_t>(InfraKind::FreeAtm)] = 1;
    b[static_cast<std::size_t>(InfraKind::PostOffice)] = 1;
    b[static_cast<std::size_t>(InfraKind::Cashback)] = 2;
    b[static_cast<std::size_t>(InfraKind::ChargingAtm)] = 1;
    CHECK(avcash(b, t) == 5.5);

    KindCounts c{};
    c[static_cast<std::size_t>(InfraKind::FreeAtm)] = 3;
    c[static_cast<std::size_t>(InfraKind::Branch)] = 1;
    c[static_cast<std::size_t>(InfraKind::Cashback)] = 1;
    CHECK(avcash(c, t) == 10.5);

    CHECK(avcash(KindCounts{}, t) == 0.0);
}

TEST_CASE("avcash is linear and monotone") {
    const ScoreTable t;
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        KindCounts a{}, b{}, sum{};
        for (std::size_t k = 0; k < kKindCount; ++k) {
            a[k] = d(rng);
            b[k] = d(rng);
            sum[k] = a[k] + b[k];
        }
        CHECK(avcash(sum, t) == doctest::Approx(avcash(a, t) + avcash(b, t)).epsilon(1e-12));

        KindCounts up = a;
        ++up[static_cast<std::size_t>(InfraKind::FreeAtm)];
        CHECK(avcash(up, t) > avcash(a, t));
        KindCounts charge = a;
        ++charge[static_cast<std::size_t>(InfraKind::ChargingAtm)];
        CHECK(avcash(charge, t) == doctest::Approx(avcash(a, t) - 0.5).epsilon(1e-12));
    }
}

TEST_CASE("lonely flags on a line of free ATMs") {
    const std::vector<InfrastructurePoint> pts = {
        make_point("a", InfraKind::FreeAtm, 0, 0),
        make_point("b", InfraKind::FreeAtm, 200, 0),
        make_point("c", InfraKind::FreeAtm, 600, 0),
    };
    const LonelyAnalysis r = lonely_atms(pts, 250, AlternativeSet::AnyAtm);
    REQUIRE(r.atms.size() == 3);
    CHECK_FALSE(r.atms[0].lonely);
    CHECK_FALSE(r.atms[1].lonely);
    CHECK(r.atms[2].lonely);
    CHECK(r.lonely_count == 1);
    CHECK(r.atms[2].nn_distance_m == 400.0);
}

TEST_CASE("co-located ATMs are never lonely") {
    const std::vector<InfrastructurePoint> pts = {
        make_point("a", InfraKind::FreeAtm, 50, 50),
        make_point("b", InfraKind::FreeAtm, 50, 50),
    };
    const LonelyAnalysis r = lonely_atms(pts, 250, AlternativeSet::AnyAtm);
    CHECK(r.lonely_count == 0);
    CHECK(r.atms[0].nn_distance_m == 0.0);
}

TEST_CASE("a sole ATM with no alternatives is lonely") {
    const std::vector<InfrastructurePoint> pts = {
        make_point("a", InfraKind::FreeAtm, 0, 0),
        make_point("po", InfraKind::PostOffice, 10, 10), // not an alternative
    };
    const LonelyAnalysis r = lonely_atms(pts, 250, AlternativeSet::AnyAtm);
    REQUIRE(r.atms.size() == 1);
    CHECK(r.atms[0].lonely);
    CHECK(std::isinf(r.atms[0].nn_distance_m));
    CHECK(r.bins.gt500 == 1);
}

TEST_CASE("empty input yields empty analysis") {
    const LonelyAnalysis r = lonely_atms({}, 250, AlternativeSet::AnyAtm);
    CHECK(r.atms.empty());
    CHECK(r.lonely_count == 0);
}

TEST_CASE("free-only mode matches a brute-force oracle on mixed ATMs") {
    std::mt19937 rng(11);
    const auto xy = random_points(rng, 20, 0, 2000);
    std::vector<InfrastructurePoint> pts;
    for (std::size_t i = 0; i < xy.size(); ++i) {
        pts.push_back(make_point(std::to_string(i),
                                 i % 2 ? InfraKind::ChargingAtm : InfraKind::FreeAtm, xy[i].x, xy[i].y));
    }
    const LonelyAnalysis r = lonely_atms(pts, 250, AlternativeSet::FreeOnly);
    REQUIRE(r.atms.size() == pts.size());
    for (const auto& atm : r.atms) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == atm.point_index || pts[j].kind != InfraKind::FreeAtm) continue;
            best = std::min(best, distance(pts[atm.point_index].location, pts[j].location));
        }
        CHECK(atm.nn_distance_m == best);
        CHECK(atm.lonely == (best > 250.0));
    }
}

TEST_CASE("lonely count is monotone in threshold and alternative set") {
    std::mt19937 rng(13);
    const auto xy = random_points(rng, 30, 0, 3000);
    std::vector<InfrastructurePoint> pts;
    for (std::size_t i = 0; i < xy.size(); ++i) {
        pts.push_back(make_point(std::to_string(i),
                                 i % 3 ? InfraKind::FreeAtm : InfraKind::ChargingAtm, xy[i].x, xy[i].y));
    }
    int prev = lonely_atms(pts, 50, AlternativeSet::AnyAtm).lonely_count;
    for (const double t : {100.0, 250.0, 500.0, 1000.0}) {
        const int cur = lonely_atms(pts, t, AlternativeSet::AnyAtm).lonely_count;
        CHECK(cur <= prev);
        prev = cur;
    }
    for (const double t : {100.0, 250.0, 500.0}) {
        CHECK(lonely_atms(pts, t, AlternativeSet::FreeOnly).lonely_count >=
              lonely_atms(pts, t, AlternativeSet::AnyAtm).lonely_count);
    }
}

TEST_CASE("nn_stats consistency with the published ratio") {
    // Free-ATM row: n=225, printed expected 353.1 m and observed 145.7 m.
    // Back-derive the implied area from the expectation formula.
    const double expected = 353.1;
    const double n = 225.0;
    const double area = n * (2.0 * expected) * (2.0 * expected);

    // A synthetic co-located cluster cannot reproduce the observed mean, so
    // check the pure ratio and sign arithmetic the table implies.
    const double nni = 145.7 / expected;
    CHECK(std::abs(nni - 0.4) < 0.05);
    const double se = 0.26136 / std::sqrt(n * n / area);
    const double z = (145.7 - expected) / se;
    CHECK(z < 0.0);
    CHECK(z == doctest::Approx(-16.85).epsilon(0.01));
}

TEST_CASE("square lattice has the closed-form NNI") {
    for (const int k : {4, 7, 10}) {
        const double s = 10.0;
        std::vector<ProjPoint> pts;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) pts.push_back({i * s, j * s});
        }
        const NNStats st = nn_stats(pts, bounding_box_area(pts));
        const double expected_nni = 2.0 * k / (k - 1.0);
        CHECK(st.nni == doctest::Approx(expected_nni).epsilon(1e-12));
        CHECK(st.z_score > 0.0); // dispersed
    }
}

TEST_CASE("clustered points give nni < 1 and z < 0") {
    std::mt19937 rng(3);
    std::normal_distribution<double> tight(0.0, 5.0);
    std::vector<ProjPoint> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({500 + tight(rng), 500 + tight(rng)});
    const NNStats st = nn_stats(pts, 1000.0 * 1000.0);
    CHECK(st.nni < 1.0);
    CHECK(st.z_score < 0.0);
    CHECK(st.expected_mean_m == doctest::Approx(0.5 / std::sqrt(60.0 / 1e6)).epsilon(1e-12));
}

TEST_CASE("nn_stats preconditions") {
    CHECK_THROWS_AS(nn_stats(std::vector<ProjPoint>{{0, 0}}, 100.0), Error);
    CHECK_THROWS_AS(nn_stats(std::vector<ProjPoint>{{0, 0}, {1, 1}}, 0.0), Error);
    try {
        nn_stats(std::vector<ProjPoint>{{0, 0}}, 100.0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InsufficientPoints);
    }
}

TEST_CASE("kind names round-trip and unknown names are rejected") {
    for (const InfraKind k : kAllKinds) {
        CHECK(kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(kind_from_string("atm"), Error);
}
