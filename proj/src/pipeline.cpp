#include "finex/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "finex/csv.hpp"

namespace finex {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// configuration

ScoreTable RunConfig::effective_scores() const {
    ScoreTable table;
    for (const auto& [name, score] : score_overrides) {
        table.set(kind_from_string(name), score);
    }
    return table;
}

ScoringParams RunConfig::scoring_params() const {
    return {catchment_radius_m, lonely_threshold_m, alternative_set};
}

std::string RunConfig::resolve_input(const std::string& path) const {
    if (path.empty() || base_dir.empty()) return path;
    const fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_dir) / p).string();
}

namespace {

AlternativeSet alternative_set_from_string(const std::string& name) {
    if (name == "any_atm") return AlternativeSet::AnyAtm;
    if (name == "free_only") return AlternativeSet::FreeOnly;
    fail(Errc::InvalidConfig, "unknown alternative_set '" + name + "' (any_atm|free_only)");
}

std::string_view to_string(AlternativeSet s) {
    return s == AlternativeSet::AnyAtm ? "any_atm" : "free_only";
}

BoundsPolicy bounds_policy_from_string(const std::string& name) {
    if (name == "frozen_baseline") return BoundsPolicy::FrozenBaseline;
    if (name == "recompute") return BoundsPolicy::Recompute;
    fail(Errc::InvalidConfig, "unknown bounds_policy '" + name + "' (frozen_baseline|recompute)");
}

std::string_view to_string(BoundsPolicy p) {
    return p == BoundsPolicy::FrozenBaseline ? "frozen_baseline" : "recompute";
}

std::string_view to_string(NniAreaMode m) {
    return m == NniAreaMode::StudyArea ? "study_area" : "bounding_box";
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(Errc::IoFailure, "cannot open config '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail(Errc::InvalidConfig, "config '" + path + "': " + e.what());
    }

    RunConfig c;
    c.base_dir = fs::path(path).parent_path().string();
    try {
        c.catchment_radius_m = doc.value("catchment_radius_m", c.catchment_radius_m);
        c.lonely_threshold_m = doc.value("lonely_threshold_m", c.lonely_threshold_m);
        if (doc.contains("alternative_set")) {
            c.alternative_set = alternative_set_from_string(doc["alternative_set"].get<std::string>());
        }
        c.dedup_supermarket_cashback = doc.value("dedup_supermarket_cashback", c.dedup_supermarket_cashback);
        c.impute_missing = doc.value("impute_missing", c.impute_missing);
        if (doc.contains("nni_area")) {
            const auto mode = doc["nni_area"].get<std::string>();
            if (mode == "study_area") {
                c.nni_area = NniAreaMode::StudyArea;
            } else if (mode == "bounding_box") {
                c.nni_area = NniAreaMode::BoundingBox;
            } else {
                fail(Errc::InvalidConfig, "unknown nni_area '" + mode + "' (study_area|bounding_box)");
            }
        }
        c.jenks_k = doc.value("jenks_k", c.jenks_k);
        if (doc.contains("bounds_policy")) {
            c.bounds_policy = bounds_policy_from_string(doc["bounds_policy"].get<std::string>());
        }
        c.full_precision = doc.value("full_precision", c.full_precision);
        if (doc.contains("score_table")) {
            for (const auto& [kind, score] : doc["score_table"].items()) {
                kind_from_string(kind); // validate the name now
                c.score_overrides[kind] = score.get<double>();
            }
        }
        if (doc.contains("weights") && !doc["weights"].empty()) {
            const json& w = doc["weights"];
            c.weights.avcash = w.value("avcash", c.weights.avcash);
            c.weights.loneliness = w.value("loneliness", c.weights.loneliness);
            c.weights.claimant = w.value("claimant", c.weights.claimant);
            c.weights.income = w.value("income", c.weights.income);
            c.weights.housing = w.value("housing", c.weights.housing);
            c.weights.lone_parents = w.value("lone_parents", c.weights.lone_parents);
            c.weights.iuc = w.value("iuc", c.weights.iuc);
            c.weights.car_access = w.value("car_access", c.weights.car_access);
            c.weights.supply = w.value("supply", c.weights.avcash + c.weights.loneliness);
            c.weights.demand = w.value("demand", c.weights.claimant + c.weights.income +
                                                     c.weights.housing + c.weights.lone_parents);
            c.weights.alternatives = w.value("alternatives", c.weights.iuc + c.weights.car_access);
        }
        if (doc.contains("scenario") && !doc["scenario"].is_null()) {
            const json& s = doc["scenario"];
            ScenarioSpec spec;
            for (const auto& name : s.value("interventions", std::vector<std::string>{})) {
                spec.interventions.push_back(intervention_from_string(name));
            }
            spec.recycler_lonely_threshold_m =
                s.value("recycler_lonely_threshold_m", spec.recycler_lonely_threshold_m);
            spec.digital_from = s.value("digital_from", spec.digital_from);
            spec.digital_to = s.value("digital_to", spec.digital_to);
            spec.bounds_policy = c.bounds_policy;
            spec.validate();
            c.scenario = std::move(spec);
        }
        if (doc.contains("inputs")) {
            const json& i = doc["inputs"];
            c.inputs.areas = i.value("areas", "");
            c.inputs.infrastructure = i.value("infrastructure", "");
            c.inputs.study_area = i.value("study_area", "");
            c.inputs.area_polygons = i.value("area_polygons", "");
            c.inputs.ward_lookup = i.value("ward_lookup", "");
            c.inputs.historical_ranks = i.value("historical_ranks", "");
        }
        c.output_dir = doc.value("output_dir", c.output_dir);
    } catch (const json::exception& e) {
        fail(Errc::InvalidConfig, "config '" + path + "': " + e.what());
    }

    if (c.inputs.areas.empty() || c.inputs.infrastructure.empty() || c.inputs.study_area.empty()) {
        fail(Errc::InvalidConfig,
             "config '" + path + "': inputs.areas, inputs.infrastructure and inputs.study_area are required");
    }
    if (!(c.catchment_radius_m > 0.0)) {
        fail(Errc::InvalidConfig, "config: catchment_radius_m must be > 0");
    }
    if (!(c.lonely_threshold_m > 0.0)) {
        fail(Errc::InvalidConfig, "config: lonely_threshold_m must be > 0");
    }
    if (c.jenks_k < 1) {
        fail(Errc::InvalidConfig, "config: jenks_k must be >= 1");
    }
    c.weights.validate();
    return c;
}

std::string config_fingerprint(const RunConfig& config) {
    std::ostringstream canon;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        canon << buf;
    };
    canon << "radius=";
    num(config.catchment_radius_m);
    canon << ";lonely=";
    num(config.lonely_threshold_m);
    canon << ";alt=" << to_string(config.alternative_set) << ";dedup=" << config.dedup_supermarket_cashback
          << ";scores=";
    const ScoreTable table = config.effective_scores();
    for (const InfraKind k : kAllKinds) {
        canon << finex::to_string(k) << ":";
        num(table.at(k));
        canon << ",";
    }
    canon << ";weights=";
    for (const double w : config.weights.as_components()) {
        num(w);
        canon << ",";
    }
    canon << ";k=" << config.jenks_k << ";bounds=" << to_string(config.bounds_policy) << ";scenario=";
    if (config.scenario) {
        for (const Intervention i : config.scenario->interventions) {
            canon << finex::to_string(i) << "+";
        }
        canon << ",rl=";
        num(config.scenario->recycler_lonely_threshold_m);
        canon << ",df=" << config.scenario->digital_from << ",dt=" << config.scenario->digital_to;
    } else {
        canon << "none";
    }

    std::uint64_t h = 1469598103934665603ULL;
    for (const char ch : canon.str()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// ingest

namespace {

std::string row_context(const CsvTable& t, std::size_t row) {
    return t.path + ":" + std::to_string(t.line_numbers[row]);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(Errc::IoFailure, "cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(Errc::SchemaViolation, path + ": " + e.what());
    }
}

std::string checked_crs_name(const json& doc, const std::string& path) {
    if (!doc.contains("crs")) {
        fail(Errc::SchemaViolation,
             path + ": missing top-level 'crs' member; inputs must declare a projected CRS in meters");
    }
    std::string name;
    try {
        name = doc.at("crs").at("properties").at("name").get<std::string>();
    } catch (const json::exception&) {
        fail(Errc::SchemaViolation, path + ": 'crs' must be {type, properties:{name}}");
    }
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.find("4326") != std::string::npos || lower.find("crs84") != std::string::npos) {
        fail(Errc::SchemaViolation,
             path + ": CRS '" + name + "' is geographic lon/lat; this pipeline measures meters on a projected grid");
    }
    return name;
}

std::vector<ProjPoint> parse_polygon_ring(const json& geometry, const std::string& path) {
    if (geometry.value("type", "") != "Polygon") {
        fail(Errc::SchemaViolation, path + ": geometry must be a Polygon");
    }
    const json& coords = geometry.at("coordinates");
    if (!coords.is_array() || coords.empty()) {
        fail(Errc::SchemaViolation, path + ": polygon has no rings");
    }
    if (coords.size() > 1) {
        fail(Errc::SchemaViolation, path + ": polygons with interior rings are not supported");
    }
    std::vector<ProjPoint> ring;
    for (const json& pt : coords[0]) {
        if (!pt.is_array() || pt.size() < 2) {
            fail(Errc::SchemaViolation, path + ": malformed ring coordinate");
        }
        ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    return ring;
}

struct IndicatorColumns {
    std::size_t claimant, income, rented, lone, iuc, car;
};

double column_median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    return (m % 2 == 1) ? values[m / 2] : (values[m / 2 - 1] + values[m / 2]) / 2.0;
}

} // namespace

IngestResult ingest(const RunConfig& config) {
    // --- study area ---
    const std::string sa_path = config.resolve_input(config.inputs.study_area);
    json sa_doc = load_json_file(sa_path);
    const std::string crs_name = checked_crs_name(sa_doc, sa_path);
    const json& sa_geom = sa_doc.contains("geometry") ? sa_doc.at("geometry") : sa_doc;
    StudyArea study_area{parse_polygon_ring(sa_geom, sa_path)};

    // --- areas ---
    const std::string areas_path = config.resolve_input(config.inputs.areas);
    const CsvTable areas_csv = read_csv(areas_path);
    const std::size_t c_id = areas_csv.column("area_id");
    const std::size_t c_x = areas_csv.column("centroid_x");
    const std::size_t c_y = areas_csv.column("centroid_y");
    const IndicatorColumns ic{
        areas_csv.column("claimant_pct"),    areas_csv.column("median_income"),
        areas_csv.column("rented_or_shared_pct"), areas_csv.column("lone_parent_pct"),
        areas_csv.column("iuc_score"),       areas_csv.column("car_access_pct"),
    };
    const bool has_oac = areas_csv.has_column("oac_group");

    IngestResult out{.dataset = {}, .study_area = std::move(study_area)};
    out.crs_name = crs_name;

    const std::array<std::size_t, 6> ind_cols = {ic.claimant, ic.income, ic.rented, ic.lone, ic.iuc, ic.car};
    std::array<std::vector<double>, 6> present; // for median imputation
    if (config.impute_missing) {
        for (std::size_t r = 0; r < areas_csv.rows.size(); ++r) {
            for (std::size_t c = 0; c < ind_cols.size(); ++c) {
                if (!areas_csv.at(r, ind_cols[c]).empty()) {
                    present[c].push_back(parse_double(areas_csv, r, ind_cols[c]));
                }
            }
        }
    }

    std::set<std::string> seen_areas;
    for (std::size_t r = 0; r < areas_csv.rows.size(); ++r) {
        AreaInput area;
        area.area_id = areas_csv.at(r, c_id);
        if (area.area_id.empty()) {
            fail(Errc::SchemaViolation, row_context(areas_csv, r) + ": empty area_id");
        }
        if (!seen_areas.insert(area.area_id).second) {
            fail(Errc::SchemaViolation,
                 row_context(areas_csv, r) + ": duplicate area_id '" + area.area_id + "'");
        }
        area.centroid = {parse_double(areas_csv, r, c_x), parse_double(areas_csv, r, c_y)};

        auto value_or_impute = [&](std::size_t slot) -> double {
            const std::size_t col = ind_cols[slot];
            if (!areas_csv.at(r, col).empty()) {
                return parse_double(areas_csv, r, col);
            }
            if (!config.impute_missing) {
                fail(Errc::MissingValue, row_context(areas_csv, r) + ": missing value in column '" +
                                             areas_csv.header[col] + "' for area '" + area.area_id +
                                             "' (enable impute_missing to fill with the dataset median)");
            }
            if (present[slot].empty()) {
                fail(Errc::MissingValue, areas_csv.path + ": column '" + areas_csv.header[col] +
                                             "' has no values to impute from");
            }
            double v = column_median(present[slot]);
            if (slot == 4) v = std::floor(v); // IUC stays an integer level
            out.notes.push_back("imputed " + areas_csv.header[col] + "=" + format_double(v, true) +
                                " for area '" + area.area_id + "' (dataset median)");
            return v;
        };

        IndicatorVector& v = area.indicators;
        v.area_id = area.area_id;
        v.claimant_pct = value_or_impute(0);
        v.median_income = value_or_impute(1);
        v.rented_or_shared_pct = value_or_impute(2);
        v.lone_parent_pct = value_or_impute(3);
        const double iuc_raw = value_or_impute(4);
        if (iuc_raw != std::floor(iuc_raw)) {
            fail(Errc::SchemaViolation, row_context(areas_csv, r) + ": iuc_score must be an integer");
        }
        v.iuc_score = static_cast<int>(iuc_raw);
        v.car_access_pct = value_or_impute(5);
        try {
            validate(v);
        } catch (const Error& e) {
            fail(e.code(), row_context(areas_csv, r) + ": " + e.what());
        }

        if (has_oac) {
            const std::string& label = areas_csv.at(r, areas_csv.column("oac_group"));
            if (!label.empty()) out.oac_labels[area.area_id] = label;
        }
        out.dataset.areas.push_back(std::move(area));
    }
    std::sort(out.dataset.areas.begin(), out.dataset.areas.end(),
              [](const AreaInput& a, const AreaInput& b) { return a.area_id < b.area_id; });

    // --- infrastructure ---
    const std::string infra_path = config.resolve_input(config.inputs.infrastructure);
    const CsvTable infra_csv = read_csv(infra_path);
    const std::size_t p_id = infra_csv.column("id");
    const std::size_t p_kind = infra_csv.column("kind");
    const std::size_t p_x = infra_csv.column("x");
    const std::size_t p_y = infra_csv.column("y");
    const bool has_postcode = infra_csv.has_column("postcode");
    const std::size_t p_postcode = has_postcode ? infra_csv.column("postcode") : 0;
    const bool has_operator = infra_csv.has_column("operator_class");
    const std::size_t p_operator = has_operator ? infra_csv.column("operator_class") : 0;

    std::set<std::string> seen_points;
    for (std::size_t r = 0; r < infra_csv.rows.size(); ++r) {
        InfrastructurePoint p;
        p.id = infra_csv.at(r, p_id);
        if (p.id.empty()) {
            fail(Errc::SchemaViolation, row_context(infra_csv, r) + ": empty point id");
        }
        if (!seen_points.insert(p.id).second) {
            fail(Errc::SchemaViolation, row_context(infra_csv, r) + ": duplicate point id '" + p.id + "'");
        }
        try {
            p.kind = kind_from_string(infra_csv.at(r, p_kind));
        } catch (const Error& e) {
            fail(e.code(), row_context(infra_csv, r) + ": " + e.what());
        }
        p.location = {parse_double(infra_csv, r, p_x), parse_double(infra_csv, r, p_y)};
        if (has_postcode) p.postcode = infra_csv.at(r, p_postcode);
        if (has_operator) {
            const std::string& oc = infra_csv.at(r, p_operator);
            if (!oc.empty()) {
                try {
                    p.operator_class = operator_class_from_string(oc);
                } catch (const Error& e) {
                    fail(e.code(), row_context(infra_csv, r) + ": " + e.what());
                }
            }
        }
        out.dataset.points.push_back(std::move(p));
    }
    out.n_points_loaded = out.dataset.points.size();
    std::sort(out.dataset.points.begin(), out.dataset.points.end(),
              [](const InfrastructurePoint& a, const InfrastructurePoint& b) { return a.id < b.id; });

    // Major supermarkets do not offer cashback next to a free ATM: drop
    // cashback rows sharing a postcode with one.
    if (config.dedup_supermarket_cashback) {
        std::set<std::string> free_postcodes;
        for (const auto& p : out.dataset.points) {
            if (p.kind == InfraKind::FreeAtm && !p.postcode.empty()) {
                free_postcodes.insert(p.postcode);
            }
        }
        std::vector<InfrastructurePoint> kept;
        kept.reserve(out.dataset.points.size());
        for (auto& p : out.dataset.points) {
            if (p.kind == InfraKind::Cashback && free_postcodes.count(p.postcode)) {
                out.dropped_cashback_ids.push_back(p.id);
            } else {
                kept.push_back(std::move(p));
            }
        }
        out.dataset.points = std::move(kept);
    }

    out.dataset.scores = config.effective_scores();

    // --- optional area polygons ---
    if (!config.inputs.area_polygons.empty()) {
        const std::string poly_path = config.resolve_input(config.inputs.area_polygons);
        const json doc = load_json_file(poly_path);
        checked_crs_name(doc, poly_path);
        if (doc.value("type", "") != "FeatureCollection") {
            fail(Errc::SchemaViolation, poly_path + ": expected a FeatureCollection");
        }
        for (const json& feature : doc.at("features")) {
            std::string area_id;
            try {
                area_id = feature.at("properties").at("area_id").get<std::string>();
            } catch (const json::exception&) {
                fail(Errc::SchemaViolation, poly_path + ": every feature needs properties.area_id");
            }
            out.area_polygons[area_id] = parse_polygon_ring(feature.at("geometry"), poly_path);
        }
    }

    // --- optional ward inputs ---
    if (!config.inputs.ward_lookup.empty()) {
        const std::string ward_path = config.resolve_input(config.inputs.ward_lookup);
        const CsvTable ward_csv = read_csv(ward_path);
        const std::size_t w_area = ward_csv.column("area_id");
        const std::size_t w_id = ward_csv.column("ward_id");
        const bool has_name = ward_csv.has_column("ward_name");
        WardLookup lookup;
        for (std::size_t r = 0; r < ward_csv.rows.size(); ++r) {
            const std::string& area = ward_csv.at(r, w_area);
            const std::string& ward = ward_csv.at(r, w_id);
            if (area.empty() || ward.empty()) {
                fail(Errc::SchemaViolation, row_context(ward_csv, r) + ": empty area_id or ward_id");
            }
            if (lookup.area_to_ward.count(area)) {
                fail(Errc::SchemaViolation,
                     row_context(ward_csv, r) + ": duplicate lookup entry for area '" + area + "'");
            }
            lookup.area_to_ward[area] = ward;
            if (has_name) {
                lookup.ward_names[ward] = ward_csv.at(r, ward_csv.column("ward_name"));
            }
        }
        out.wards = std::move(lookup);
    }
    if (!config.inputs.historical_ranks.empty()) {
        const std::string hist_path = config.resolve_input(config.inputs.historical_ranks);
        const CsvTable hist_csv = read_csv(hist_path);
        const std::size_t h_ward = hist_csv.column("ward_id");
        const std::size_t h_rank = hist_csv.column("rank");
        for (std::size_t r = 0; r < hist_csv.rows.size(); ++r) {
            const std::string& ward = hist_csv.at(r, h_ward);
            if (out.historical_ranks.count(ward)) {
                fail(Errc::SchemaViolation,
                     row_context(hist_csv, r) + ": duplicate historical rank for ward '" + ward + "'");
            }
            out.historical_ranks[ward] = parse_double(hist_csv, r, h_rank);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// artifact writers

namespace {

class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

    std::string write(const std::string& name, const std::string& content) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail(Errc::IoFailure, "cannot write '" + path.string() + "'");
        }
        out << content;
        out.close();
        written_.push_back(path.string());
        return path.string();
    }

    void discard_all() noexcept {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

    const std::vector<std::string>& written() const noexcept { return written_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

std::string rank_field(double rank) {
    if (rank == std::floor(rank)) {
        return format_int(static_cast<long long>(rank));
    }
    return format_double(rank, false);
}

std::string catchments_csv(const std::vector<CatchmentProfile>& profiles, bool full) {
    std::vector<std::string> header = {"area_id"};
    for (const InfraKind k : kAllKinds) header.emplace_back(to_string(k));
    header.emplace_back("avcash_raw");
    header.emplace_back("lonely_free_atms");
    std::string out = csv_row(header);
    for (const auto& p : profiles) {
        std::vector<std::string> row = {p.area_id};
        for (const InfraKind k : kAllKinds) {
            row.push_back(format_int(p.counts[static_cast<std::size_t>(k)]));
        }
        row.push_back(format_double(p.avcash_raw, full));
        row.push_back(format_int(p.lonely_free_atms));
        out += csv_row(row);
    }
    return out;
}

std::string nnstats_csv(const std::vector<std::pair<InfraKind, NNStats>>& stats, bool full) {
    std::string out =
        csv_row({"kind", "n_points", "expected_mean_m", "observed_mean_m", "nni", "z_score"});
    for (const auto& [kind, s] : stats) {
        out += csv_row({std::string(to_string(kind)), format_int(s.n_points),
                        format_double(s.expected_mean_m, full), format_double(s.observed_mean_m, full),
                        format_double(s.nni, full), format_double(s.z_score, full)});
    }
    return out;
}

constexpr std::array<Component, kComponentCount> kDisplayOrder = {
    Component::Avcash, Component::Loneliness, Component::Claimant,  Component::Income,
    Component::Housing, Component::LoneParents, Component::Iuc,     Component::CarAccess,
};

std::string index_csv(const std::vector<IndexResult>& results, bool full) {
    std::vector<std::string> header = {"area_id"};
    for (const Component c : kDisplayOrder) {
        header.push_back("comp_" + std::string(kComponentNames[static_cast<std::size_t>(c)]));
    }
    header.emplace_back("score");
    header.emplace_back("jenks_class");
    header.emplace_back("config_fingerprint");
    std::string out = csv_row(header);
    for (const auto& r : results) {
        std::vector<std::string> row = {r.area_id};
        for (const Component c : kDisplayOrder) {
            row.push_back(format_double(r.components[static_cast<std::size_t>(c)], full));
        }
        row.push_back(format_double(r.score, full));
        row.push_back(format_int(r.jenks_class));
        row.push_back(r.config_fingerprint);
        out += csv_row(row);
    }
    return out;
}

json ring_coordinates(const std::vector<ProjPoint>& ring) {
    json coords = json::array();
    for (const auto& p : ring) coords.push_back(json::array({p.x, p.y}));
    return json::array({coords});
}

json crs_member(const std::string& name) {
    return json{{"type", "name"}, {"properties", json{{"name", name}}}};
}

std::string index_geojson(const std::vector<IndexResult>& results, const IngestResult& ing,
                          const std::string& fingerprint) {
    json features = json::array();
    for (const auto& r : results) {
        json props;
        props["finex:area_id"] = r.area_id;
        props["finex:score"] = r.score;
        props["finex:class"] = r.jenks_class;
        for (const Component c : kDisplayOrder) {
            const auto i = static_cast<std::size_t>(c);
            props["finex:comp_" + std::string(kComponentNames[i])] = r.components[i];
        }
        const auto oac = ing.oac_labels.find(r.area_id);
        if (oac != ing.oac_labels.end()) props["finex:oac"] = oac->second;

        json geometry;
        const auto poly = ing.area_polygons.find(r.area_id);
        if (poly != ing.area_polygons.end()) {
            geometry = {{"type", "Polygon"}, {"coordinates", ring_coordinates(poly->second)}};
        } else {
            const auto area = std::find_if(ing.dataset.areas.begin(), ing.dataset.areas.end(),
                                           [&](const AreaInput& a) { return a.area_id == r.area_id; });
            geometry = {{"type", "Point"},
                        {"coordinates", json::array({area->centroid.x, area->centroid.y})}};
        }
        features.push_back(
            json{{"type", "Feature"}, {"properties", props}, {"geometry", geometry}});
    }
    const json doc{{"type", "FeatureCollection"},
                   {"crs", crs_member(ing.crs_name)},
                   {"finex:config_fingerprint", fingerprint},
                   {"features", features}};
    return doc.dump(2) + "\n";
}

std::string validation_csv(const RankComparison& cmp, const WardLookup& lookup, bool full) {
    std::string out =
        csv_row({"ward_id", "ward_name", "median_score", "rank_now", "rank_then", "delta"});
    for (const auto& row : cmp.rows) {
        const auto name = lookup.ward_names.find(row.ward_id);
        out += csv_row({row.ward_id, name != lookup.ward_names.end() ? name->second : "",
                        format_double(row.median_score, full), rank_field(row.rank_now),
                        rank_field(row.rank_then), rank_field(row.delta)});
    }
    return out;
}

std::string scenario_csv(const ScenarioReport& report, bool full) {
    std::string out = csv_row({"area_id", "baseline_score", "scenario_score", "delta"});
    for (const auto& row : report.rows) {
        out += csv_row({row.area_id, format_double(row.baseline_score, full),
                        format_double(row.scenario_score, full), format_double(row.delta, full)});
    }
    return out;
}

std::string scenario_geojson(const ScenarioReport& report, const IngestResult& ing,
                             const std::string& fingerprint) {
    json features = json::array();
    for (const auto& row : report.rows) {
        json props;
        props["finex:area_id"] = row.area_id;
        props["finex:baseline_score"] = row.baseline_score;
        props["finex:scenario_score"] = row.scenario_score;
        props["finex:delta"] = row.delta;
        json geometry;
        const auto poly = ing.area_polygons.find(row.area_id);
        if (poly != ing.area_polygons.end()) {
            geometry = {{"type", "Polygon"}, {"coordinates", ring_coordinates(poly->second)}};
        } else {
            const auto area = std::find_if(ing.dataset.areas.begin(), ing.dataset.areas.end(),
                                           [&](const AreaInput& a) { return a.area_id == row.area_id; });
            geometry = {{"type", "Point"},
                        {"coordinates", json::array({area->centroid.x, area->centroid.y})}};
        }
        features.push_back(
            json{{"type", "Feature"}, {"properties", props}, {"geometry", geometry}});
    }
    const json doc{{"type", "FeatureCollection"},
                   {"crs", crs_member(ing.crs_name)},
                   {"finex:config_fingerprint", fingerprint},
                   {"features", features}};
    return doc.dump(2) + "\n";
}

json config_echo(const RunConfig& c) {
    json scores;
    const ScoreTable table = c.effective_scores();
    for (const InfraKind k : kAllKinds) scores[std::string(to_string(k))] = table.at(k);
    json weights{{"avcash", c.weights.avcash},       {"loneliness", c.weights.loneliness},
                 {"claimant", c.weights.claimant},   {"income", c.weights.income},
                 {"housing", c.weights.housing},     {"lone_parents", c.weights.lone_parents},
                 {"iuc", c.weights.iuc},             {"car_access", c.weights.car_access},
                 {"supply", c.weights.supply},       {"demand", c.weights.demand},
                 {"alternatives", c.weights.alternatives}};
    json echo{{"catchment_radius_m", c.catchment_radius_m},
              {"lonely_threshold_m", c.lonely_threshold_m},
              {"alternative_set", std::string(to_string(c.alternative_set))},
              {"dedup_supermarket_cashback", c.dedup_supermarket_cashback},
              {"impute_missing", c.impute_missing},
              {"nni_area", std::string(to_string(c.nni_area))},
              {"jenks_k", c.jenks_k},
              {"bounds_policy", std::string(to_string(c.bounds_policy))},
              {"full_precision", c.full_precision},
              {"score_table", scores},
              {"weights", weights}};
    if (c.scenario) {
        json names = json::array();
        for (const Intervention i : c.scenario->interventions) names.push_back(std::string(to_string(i)));
        echo["scenario"] = json{{"interventions", names},
                                {"recycler_lonely_threshold_m", c.scenario->recycler_lonely_threshold_m},
                                {"digital_from", c.scenario->digital_from},
                                {"digital_to", c.scenario->digital_to}};
    }
    return echo;
}

double round2(double v) {
    return std::round(v * 100.0) / 100.0;
}

json bins_json(const LonelyBins& b) {
    return json{{"le100", b.le100}, {"le250", b.le250}, {"le500", b.le500}, {"gt500", b.gt500}};
}

} // namespace

// ---------------------------------------------------------------------------
// orchestration

RunArtifacts run_stages(const RunConfig& config, const Stages& stages, bool require_optional) {
    config.weights.validate();
    const std::string fingerprint = config_fingerprint(config);

    auto stage_tag = [](const std::string& stage, const Error& e) -> Error {
        return Error(e.code(), "[" + stage + "] " + e.what());
    };

    IngestResult ing = [&] {
        try {
            return ingest(config);
        } catch (const Error& e) {
            throw stage_tag("ingest", e);
        }
    }();

    ArtifactWriter writer{fs::path(config.output_dir)};
    RunArtifacts artifacts;
    json report;
    report["config"] = config_echo(config);
    report["config_fingerprint"] = fingerprint;
    report["notes"]["boundary_rule"] =
        "a point exactly at the catchment radius is inside the catchment (<=)";
    report["notes"]["z_score_formula"] =
        "Clark-Evans: z = (observed - expected) / (0.26136 / sqrt(n^2 / A))";
    json operator_mix;
    {
        std::map<std::string, std::map<std::string, int>> mix;
        for (const auto& p : ing.dataset.points) {
            const std::string cls =
                p.operator_class ? std::string(to_string(*p.operator_class)) : "unknown";
            ++mix[std::string(to_string(p.kind))][cls];
        }
        for (const auto& [kind, classes] : mix) operator_mix[kind] = classes;
    }
    report["ingest"] = json{{"n_areas", ing.dataset.areas.size()},
                            {"n_points_loaded", ing.n_points_loaded},
                            {"n_points_after_dedup", ing.dataset.points.size()},
                            {"dropped_cashback_ids", ing.dropped_cashback_ids},
                            {"operator_mix", operator_mix},
                            {"crs", ing.crs_name},
                            {"notes", ing.notes}};
    json weights_pct;
    {
        const ComponentArray w = config.weights.as_components();
        for (std::size_t c = 0; c < kComponentCount; ++c) {
            weights_pct[std::string(kComponentNames[c])] = round2(100.0 * w[c]);
        }
    }
    report["weights_echo_pct"] = weights_pct;

    const bool need_scoring = stages.catchments || stages.index || stages.validate || stages.scenario;

    try {
        std::optional<ScoredDataset> scored;
        if (need_scoring) {
            try {
                scored = score_dataset(ing.dataset, config.scoring_params(), config.weights);
                for (auto& r : scored->results) r.config_fingerprint = fingerprint;
            } catch (const Error& e) {
                throw stage_tag("score", e);
            }
        }

        if (stages.catchments) {
            try {
                writer.write("catchments.csv", catchments_csv(scored->catchments, config.full_precision));
            } catch (const Error& e) {
                throw stage_tag("catchment", e);
            }
        }

        if (stages.nni) {
            try {
                std::vector<std::pair<InfraKind, NNStats>> stats;
                for (const InfraKind kind : kAllKinds) {
                    std::vector<ProjPoint> pts;
                    for (const auto& p : ing.dataset.points) {
                        if (p.kind == kind) pts.push_back(p.location);
                    }
                    if (pts.size() < 2) continue;
                    const double area = config.nni_area == NniAreaMode::StudyArea
                                            ? ing.study_area.area_m2()
                                            : bounding_box_area(pts);
                    stats.emplace_back(kind, nn_stats(pts, area));
                }
                writer.write("nnstats.csv", nnstats_csv(stats, config.full_precision));
                report["nni"] = json{{"area_mode", std::string(to_string(config.nni_area))},
                                     {"study_area_m2", ing.study_area.area_m2()},
                                     {"kinds_reported", stats.size()}};
            } catch (const Error& e) {
                throw stage_tag("nni", e);
            }
        }

        if (stages.index) {
            try {
                classify(scored->results, config.jenks_k);
                writer.write("index.csv", index_csv(scored->results, config.full_precision));
                writer.write("index.geojson", index_geojson(scored->results, ing, fingerprint));

                json bounds;
                for (std::size_t c = 0; c < kComponentCount; ++c) {
                    bounds[std::string(kComponentNames[c])] =
                        json{{"min", scored->bounds.min[c]}, {"max", scored->bounds.max[c]}};
                }
                report["normalization_bounds"] = bounds;
                report["degenerate_components"] = scored->degenerate_components;

                if (ing.dataset.areas.size() >= 3) {
                    const CorrelationReport screen = correlation_screen(scored->oriented);
                    json names = json::array();
                    for (const auto& n : kComponentNames) names.push_back(std::string(n));
                    json matrix = json::array();
                    for (const auto& row : screen.matrix) {
                        json r = json::array();
                        for (const double v : row) r.push_back(v);
                        matrix.push_back(r);
                    }
                    json flagged = json::array();
                    for (const auto& f : screen.flagged) {
                        flagged.push_back(
                            json{{"a", std::string(kComponentNames[static_cast<std::size_t>(f.a)])},
                                 {"b", std::string(kComponentNames[static_cast<std::size_t>(f.b)])},
                                 {"r", f.r}});
                    }
                    report["correlation_screen"] = json{{"threshold", screen.threshold},
                                                        {"components", names},
                                                        {"matrix", matrix},
                                                        {"flagged", flagged}};
                } else {
                    report["warnings"].push_back("correlation screen skipped: fewer than 3 areas");
                }

                const LonelyAnalysis any =
                    lonely_atms(ing.dataset.points, config.lonely_threshold_m, AlternativeSet::AnyAtm);
                const LonelyAnalysis free_only =
                    lonely_atms(ing.dataset.points, config.lonely_threshold_m, AlternativeSet::FreeOnly);
                report["lonely_analysis"] =
                    json{{"threshold_m", config.lonely_threshold_m},
                         {"n_atms", any.atms.size()},
                         {"any_atm", json{{"bins", bins_json(any.bins)}, {"lonely_count", any.lonely_count}}},
                         {"free_only", json{{"bins", bins_json(free_only.bins)},
                                            {"lonely_count", free_only.lonely_count}}}};
            } catch (const Error& e) {
                throw stage_tag("index", e);
            }
        }

        if (stages.validate) {
            const bool have_inputs = ing.wards.has_value() && !ing.historical_ranks.empty();
            if (!have_inputs && require_optional) {
                throw stage_tag("validate", Error(Errc::InvalidConfig,
                                                  "ward_lookup and historical_ranks inputs are required"));
            }
            if (have_inputs) {
                try {
                    const auto medians = ward_medians(scored->results, *ing.wards);
                    const RankComparison cmp = rank_and_compare(medians, ing.historical_ranks);
                    writer.write("validation.csv",
                                 validation_csv(cmp, *ing.wards, config.full_precision));
                    report["validation"] = json{{"spearman", cmp.spearman},
                                                {"pearson_medians", cmp.pearson_medians},
                                                {"n_wards", cmp.rows.size()}};
                    artifacts.validation = cmp;
                } catch (const Error& e) {
                    throw stage_tag("validate", e);
                }
            }
        }

        if (stages.scenario) {
            if (!config.scenario && require_optional) {
                throw stage_tag("scenario",
                                Error(Errc::InvalidConfig, "no scenario block in the configuration"));
            }
            if (config.scenario) {
                try {
                    BaselineIndex baseline{scored->results, scored->bounds};
                    const ScenarioReport sr = run_scenario(*config.scenario, ing.dataset,
                                                           config.scoring_params(), config.weights,
                                                           baseline);
                    writer.write("scenario_delta.csv", scenario_csv(sr, config.full_precision));
                    writer.write("scenario_delta.geojson", scenario_geojson(sr, ing, fingerprint));
                    report["scenario"] = json{{"max_delta", sr.max_delta},
                                              {"mean_delta", sr.mean_delta},
                                              {"areas_affected", sr.areas_affected},
                                              {"recycler_conversions", sr.recycler_conversions}};
                    artifacts.scenario = sr;
                } catch (const Error& e) {
                    throw stage_tag("scenario", e);
                }
            }
        }

        if (!writer.written().empty()) {
            try {
                if (!report.contains("warnings")) report["warnings"] = json::array();
                writer.write("run_report.json", report.dump(2) + "\n");
            } catch (const Error& e) {
                throw stage_tag("report", e);
            }
        }

        if (scored) artifacts.results = std::move(scored->results);
    } catch (...) {
        writer.discard_all();
        throw;
    }

    artifacts.files = writer.written();
    return artifacts;
}

RunArtifacts run_all(const RunConfig& config) {
    return run_stages(config, Stages::all());
}

} // namespace finex

