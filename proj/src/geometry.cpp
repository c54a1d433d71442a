#include "finex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace finex {

double distance(const ProjPoint& a, const ProjPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<std::size_t> points_within(const ProjPoint& center, double radius,
                                       const std::vector<ProjPoint>& points) {
    if (!(radius > 0.0)) {
        fail(Errc::InvalidParameter, "points_within: radius must be > 0");
    }
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (distance(center, points[i]) <= radius) {
            hits.push_back(i);
        }
    }
    return hits;
}

NearestHit nearest_neighbor(std::size_t query, const std::vector<ProjPoint>& points) {
    if (points.size() < 2) {
        fail(Errc::InsufficientPoints, "nearest_neighbor: need at least 2 points");
    }
    if (query >= points.size()) {
        fail(Errc::InvalidParameter, "nearest_neighbor: query index out of range");
    }
    NearestHit best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i == query) continue;
        const double d = distance(points[query], points[i]);
        if (d < best.distance_m) {
            best = {i, d};
        }
    }
    return best;
}

double bounding_box_area(const std::vector<ProjPoint>& points) {
    if (points.size() < 2) return 0.0;
    double lox = points[0].x, hix = points[0].x;
    double loy = points[0].y, hiy = points[0].y;
    for (const auto& p : points) {
        lox = std::min(lox, p.x);
        hix = std::max(hix, p.x);
        loy = std::min(loy, p.y);
        hiy = std::max(hiy, p.y);
    }
    return (hix - lox) * (hiy - loy);
}

namespace {

int orientation(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(const ProjPoint& a, const ProjPoint& b, const ProjPoint& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const ProjPoint& p1, const ProjPoint& p2,
                        const ProjPoint& q1, const ProjPoint& q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

double shoelace(const std::vector<ProjPoint>& ring) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        s += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    }
    return std::abs(s) / 2.0;
}

} // namespace

StudyArea::StudyArea(std::vector<ProjPoint> ring) : ring_(std::move(ring)) {
    if (ring_.size() < 4) {
        fail(Errc::InvalidParameter, "StudyArea: ring needs at least 3 vertices plus closure");
    }
    for (const auto& p : ring_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            fail(Errc::InvalidParameter, "StudyArea: non-finite ring coordinate");
        }
    }
    if (!(ring_.front() == ring_.back())) {
        fail(Errc::InvalidParameter, "StudyArea: ring is not closed (first vertex must repeat last)");
    }
    const std::size_t n = ring_.size() - 1; // edges
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // closing edge shares the first vertex
            if (segments_intersect(ring_[i], ring_[i + 1], ring_[j], ring_[j + 1])) {
                fail(Errc::InvalidParameter, "StudyArea: ring is self-intersecting");
            }
        }
    }
    area_m2_ = shoelace(ring_);
    if (!(area_m2_ > 0.0)) {
        fail(Errc::InvalidParameter, "StudyArea: polygon area must be > 0");
    }
}

SpatialGrid::SpatialGrid(std::vector<ProjPoint> points) : points_(std::move(points)) {
    if (points_.empty()) {
        cells_.resize(1);
        return;
    }
    double max_x = points_[0].x, max_y = points_[0].y;
    min_x_ = points_[0].x;
    min_y_ = points_[0].y;
    for (const auto& p : points_) {
        min_x_ = std::min(min_x_, p.x);
        max_x = std::max(max_x, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_y = std::max(max_y, p.y);
    }
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(points_.size()))));
    nx_ = std::max<std::size_t>(1, side);
    ny_ = nx_;
    cell_w_ = std::max((max_x - min_x_) / static_cast<double>(nx_), 1e-9);
    cell_h_ = std::max((max_y - min_y_) / static_cast<double>(ny_), 1e-9);
    cells_.resize(nx_ * ny_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        cells_[cell_of(points_[i].x, points_[i].y)].push_back(i);
    }
}

std::size_t SpatialGrid::cell_of(double x, double y) const {
    auto clamp_idx = [](double v, std::size_t n) {
        if (v < 0.0) return std::size_t{0};
        const auto i = static_cast<std::size_t>(v);
        return i >= n ? n - 1 : i;
    };
    const std::size_t cx = clamp_idx((x - min_x_) / cell_w_, nx_);
    const std::size_t cy = clamp_idx((y - min_y_) / cell_h_, ny_);
    return cy * nx_ + cx;
}

std::vector<std::size_t> SpatialGrid::within(const ProjPoint& center, double radius) const {
    if (!(radius > 0.0)) {
        fail(Errc::InvalidParameter, "SpatialGrid::within: radius must be > 0");
    }
    std::vector<std::size_t> hits;
    if (points_.empty()) return hits;

    const auto ix0 = static_cast<long long>(std::floor((center.x - radius - min_x_) / cell_w_));
    const auto ix1 = static_cast<long long>(std::floor((center.x + radius - min_x_) / cell_w_));
    const auto iy0 = static_cast<long long>(std::floor((center.y - radius - min_y_) / cell_h_));
    const auto iy1 = static_cast<long long>(std::floor((center.y + radius - min_y_) / cell_h_));
    const auto cx0 = static_cast<std::size_t>(std::clamp<long long>(ix0, 0, static_cast<long long>(nx_) - 1));
    const auto cx1 = static_cast<std::size_t>(std::clamp<long long>(ix1, 0, static_cast<long long>(nx_) - 1));
    const auto cy0 = static_cast<std::size_t>(std::clamp<long long>(iy0, 0, static_cast<long long>(ny_) - 1));
    const auto cy1 = static_cast<std::size_t>(std::clamp<long long>(iy1, 0, static_cast<long long>(ny_) - 1));

    for (std::size_t cy = cy0; cy <= cy1; ++cy) {
        for (std::size_t cx = cx0; cx <= cx1; ++cx) {
            for (const std::size_t i : cells_[cy * nx_ + cx]) {
                if (distance(center, points_[i]) <= radius) {
                    hits.push_back(i);
                }
            }
        }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

NearestHit SpatialGrid::nearest(std::size_t query) const {
    if (points_.size() < 2) {
        fail(Errc::InsufficientPoints, "SpatialGrid::nearest: need at least 2 points");
    }
    if (query >= points_.size()) {
        fail(Errc::InvalidParameter, "SpatialGrid::nearest: query index out of range");
    }
    const ProjPoint q = points_[query];
    const long long qcx = static_cast<long long>(cell_of(q.x, q.y) % nx_);
    const long long qcy = static_cast<long long>(cell_of(q.x, q.y) / nx_);

    NearestHit best{points_.size(), std::numeric_limits<double>::infinity()};
    const long long max_ring = static_cast<long long>(std::max(nx_, ny_));

    for (long long ring = 0; ring <= max_ring; ++ring) {
        // Once every cell in this ring is farther than the current best, stop.
        if (best.distance_m < std::numeric_limits<double>::infinity() && ring > 0) {
            const double ring_min = (static_cast<double>(ring) - 1.0) * std::min(cell_w_, cell_h_);
            if (ring_min > best.distance_m) break;
        }
        for (long long cy = qcy - ring; cy <= qcy + ring; ++cy) {
            if (cy < 0 || cy >= static_cast<long long>(ny_)) continue;
            for (long long cx = qcx - ring; cx <= qcx + ring; ++cx) {
                if (cx < 0 || cx >= static_cast<long long>(nx_)) continue;
                if (std::max(std::abs(cx - qcx), std::abs(cy - qcy)) != ring) continue;
                for (const std::size_t i : cells_[static_cast<std::size_t>(cy) * nx_ + static_cast<std::size_t>(cx)]) {
                    if (i == query) continue;
                    const double d = distance(q, points_[i]);
                    if (d < best.distance_m || (d == best.distance_m && i < best.index)) {
                        best = {i, d};
                    }
                }
            }
        }
    }
    return best;
}

} // namespace finex
