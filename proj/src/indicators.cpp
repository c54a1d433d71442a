#include "finex/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace finex {

namespace {

void check_pct(double v, const char* name, const std::string& area) {
    if (!(v >= 0.0 && v <= 100.0)) {
        fail(Errc::SchemaViolation,
             "indicator " + std::string(name) + " out of [0,100] for area '" + area + "'");
    }
}

} // namespace

void validate(const IndicatorVector& v) {
    check_pct(v.claimant_pct, "claimant_pct", v.area_id);
    check_pct(v.rented_or_shared_pct, "rented_or_shared_pct", v.area_id);
    check_pct(v.lone_parent_pct, "lone_parent_pct", v.area_id);
    check_pct(v.car_access_pct, "car_access_pct", v.area_id);
    if (v.iuc_score < 1 || v.iuc_score > 10) {
        fail(Errc::SchemaViolation, "iuc_score out of 1..10 for area '" + v.area_id + "'");
    }
    if (!(v.median_income >= 0.0)) {
        fail(Errc::SchemaViolation, "median_income must be >= 0 for area '" + v.area_id + "'");
    }
    if (v.lonely_count < 0) {
        fail(Errc::SchemaViolation, "lonely_count must be >= 0 for area '" + v.area_id + "'");
    }
}

ComponentArray align_polarity(const IndicatorVector& v) {
    ComponentArray out{};
    out[static_cast<std::size_t>(Component::Avcash)] = v.avcash_raw;
    out[static_cast<std::size_t>(Component::CarAccess)] = v.car_access_pct;
    out[static_cast<std::size_t>(Component::Claimant)] = 100.0 - v.claimant_pct;
    out[static_cast<std::size_t>(Component::Housing)] = 100.0 - v.rented_or_shared_pct;
    out[static_cast<std::size_t>(Component::Income)] = v.median_income;
    out[static_cast<std::size_t>(Component::Iuc)] = 11.0 - static_cast<double>(v.iuc_score);
    out[static_cast<std::size_t>(Component::LoneParents)] = 100.0 - v.lone_parent_pct;
    out[static_cast<std::size_t>(Component::Loneliness)] = -static_cast<double>(v.lonely_count);
    return out;
}

NormalizationBounds NormalizationBounds::fit(std::span<const ComponentArray> rows) {
    if (rows.empty()) {
        fail(Errc::InvalidParameter, "NormalizationBounds::fit: no rows");
    }
    NormalizationBounds b;
    b.min = rows[0];
    b.max = rows[0];
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < kComponentCount; ++c) {
            b.min[c] = std::min(b.min[c], r[c]);
            b.max[c] = std::max(b.max[c], r[c]);
        }
    }
    return b;
}

MinmaxResult minmax(std::span<const double> values, double min_value, double max_value) {
    if (!(min_value <= max_value)) {
        fail(Errc::InvalidParameter, "minmax: min must be <= max");
    }
    MinmaxResult out;
    out.values.reserve(values.size());
    if (max_value == min_value) {
        out.degenerate = true;
        out.values.assign(values.size(), 0.0);
        return out;
    }
    const double span = max_value - min_value;
    for (const double v : values) {
        out.values.push_back((v - min_value) / span);
    }
    return out;
}

ComponentArray normalize_components(const ComponentArray& oriented, const NormalizationBounds& bounds,
                                    bool clamp, std::array<bool, kComponentCount>* degenerate_mask) {
    ComponentArray out{};
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        if (bounds.max[c] == bounds.min[c]) {
            out[c] = 0.0;
            if (degenerate_mask) (*degenerate_mask)[c] = true;
            continue;
        }
        double x = (oriented[c] - bounds.min[c]) / (bounds.max[c] - bounds.min[c]);
        if (clamp) x = std::clamp(x, 0.0, 1.0);
        out[c] = x;
    }
    return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return sxy / std::sqrt(sxx * syy);
}

CorrelationReport correlation_screen(std::span<const ComponentArray> rows, double threshold) {
    if (rows.size() < 3) {
        fail(Errc::InsufficientPoints, "correlation_screen: need at least 3 areas");
    }
    CorrelationReport report;
    report.threshold = threshold;

    std::array<std::vector<double>, kComponentCount> cols;
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        cols[c].reserve(rows.size());
        for (const auto& r : rows) cols[c].push_back(r[c]);
    }
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        const double r = pearson(cols[c], cols[c]);
        if (std::isnan(r)) report.degenerate.push_back(static_cast<Component>(c));
    }
    for (std::size_t i = 0; i < kComponentCount; ++i) {
        for (std::size_t j = 0; j < kComponentCount; ++j) {
            if (i == j) {
                const bool deg = std::isnan(pearson(cols[i], cols[i]));
                report.matrix[i][j] = deg ? std::numeric_limits<double>::quiet_NaN() : 1.0;
                continue;
            }
            report.matrix[i][j] = pearson(cols[i], cols[j]);
        }
    }
    for (std::size_t i = 0; i < kComponentCount; ++i) {
        for (std::size_t j = i + 1; j < kComponentCount; ++j) {
            const double r = report.matrix[i][j];
            if (!std::isnan(r) && std::abs(r) > threshold) {
                report.flagged.push_back({static_cast<Component>(i), static_cast<Component>(j), r});
            }
        }
    }
    return report;
}

} // namespace finex
