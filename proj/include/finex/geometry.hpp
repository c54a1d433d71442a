#pragma once

#include <cstddef>
#include <vector>

#include "finex/error.hpp"

namespace finex {

/// A point on the shared projected grid, in meters. All inputs of one run
/// must use the same projected CRS; nothing here reprojects.
struct ProjPoint {
    double x = 0.0; // meters east
    double y = 0.0; // meters north

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
};

double distance(const ProjPoint& a, const ProjPoint& b);

/// Indices of points with distance(center, p) <= radius, ascending.
/// A point exactly at radius distance is inside.
std::vector<std::size_t> points_within(const ProjPoint& center, double radius,
                                       const std::vector<ProjPoint>& points);

struct NearestHit {
    std::size_t index = 0;
    double distance_m = 0.0;
};

/// Closest point other than the query itself; ties go to the lowest index.
/// Requires at least two points.
NearestHit nearest_neighbor(std::size_t query, const std::vector<ProjPoint>& points);

/// Axis-aligned bounding-box area of a point set (0 for n < 2 or collinear).
double bounding_box_area(const std::vector<ProjPoint>& points);

/// Closed, non-self-intersecting polygon ring with its shoelace area.
class StudyArea {
public:
    /// `ring` must be closed (first == last), have at least three distinct
    /// vertices, finite coordinates, no self-intersection, and positive area.
    explicit StudyArea(std::vector<ProjPoint> ring);

    const std::vector<ProjPoint>& ring() const noexcept { return ring_; }
    double area_m2() const noexcept { return area_m2_; }

private:
    std::vector<ProjPoint> ring_;
    double area_m2_ = 0.0;
};

/// Uniform-grid accelerator for radius and nearest-neighbour queries.
/// Contract: results are bit-identical to the brute-force scans above.
class SpatialGrid {
public:
    explicit SpatialGrid(std::vector<ProjPoint> points);

    std::vector<std::size_t> within(const ProjPoint& center, double radius) const;
    NearestHit nearest(std::size_t query) const;

    const std::vector<ProjPoint>& points() const noexcept { return points_; }

private:
    std::size_t cell_of(double x, double y) const;

    std::vector<ProjPoint> points_;
    std::vector<std::vector<std::size_t>> cells_;
    std::size_t nx_ = 1, ny_ = 1;
    double min_x_ = 0.0, min_y_ = 0.0, cell_w_ = 1.0, cell_h_ = 1.0;
};

} // namespace finex
