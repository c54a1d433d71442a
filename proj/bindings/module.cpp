#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "finex/pipeline.hpp"

namespace py = pybind11;
using namespace finex;

namespace {

ProjPoint as_point(const std::pair<double, double>& xy) {
    return {xy.first, xy.second};
}

std::vector<ProjPoint> as_points(const std::vector<std::pair<double, double>>& xys) {
    std::vector<ProjPoint> pts;
    pts.reserve(xys.size());
    for (const auto& xy : xys) pts.push_back(as_point(xy));
    return pts;
}

KindCounts counts_from_dict(const py::dict& d) {
    KindCounts counts{};
    for (const auto& item : d) {
        const InfraKind k = kind_from_string(item.first.cast<std::string>());
        counts[static_cast<std::size_t>(k)] = item.second.cast<int>();
    }
    return counts;
}

ScoreTable table_from_dict(const py::object& obj) {
    ScoreTable table;
    if (!obj.is_none()) {
        for (const auto& item : obj.cast<py::dict>()) {
            table.set(kind_from_string(item.first.cast<std::string>()), item.second.cast<double>());
        }
    }
    return table;
}

WeightScheme weights_from_dict(const py::object& obj) {
    WeightScheme w;
    if (!obj.is_none()) {
        const py::dict d = obj.cast<py::dict>();
        auto get = [&](const char* name, double fallback) {
            return d.contains(name) ? d[name].cast<double>() : fallback;
        };
        w.avcash = get("avcash", w.avcash);
        w.loneliness = get("loneliness", w.loneliness);
        w.claimant = get("claimant", w.claimant);
        w.income = get("income", w.income);
        w.housing = get("housing", w.housing);
        w.lone_parents = get("lone_parents", w.lone_parents);
        w.iuc = get("iuc", w.iuc);
        w.car_access = get("car_access", w.car_access);
        w.supply = w.avcash + w.loneliness;
        w.demand = w.claimant + w.income + w.housing + w.lone_parents;
        w.alternatives = w.iuc + w.car_access;
    }
    return w;
}

ComponentArray components_from_dict(const py::dict& d) {
    ComponentArray arr{};
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        const std::string name(kComponentNames[c]);
        if (!d.contains(name.c_str())) {
            throw py::key_error("missing component '" + name + "'");
        }
        arr[c] = d[name.c_str()].cast<double>();
    }
    return arr;
}

py::dict components_to_dict(const ComponentArray& arr) {
    py::dict d;
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        d[std::string(kComponentNames[c]).c_str()] = arr[c];
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cash-access and financial-exclusion index kernels";

    py::register_exception<Error>(m, "FinexError");

    m.def(
        "distance",
        [](std::pair<double, double> a, std::pair<double, double> b) {
            return distance(as_point(a), as_point(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "points_within",
        [](std::pair<double, double> center, double radius,
           const std::vector<std::pair<double, double>>& points) {
            return points_within(as_point(center), radius, as_points(points));
        },
        py::arg("center"), py::arg("radius"), py::arg("points"));

    m.def(
        "nearest_neighbor",
        [](std::size_t query, const std::vector<std::pair<double, double>>& points) {
            const NearestHit hit = nearest_neighbor(query, as_points(points));
            return std::make_pair(hit.index, hit.distance_m);
        },
        py::arg("query"), py::arg("points"));

    m.def("default_score_table", [] {
        py::dict d;
        const ScoreTable table;
        for (const InfraKind k : kAllKinds) {
            d[std::string(to_string(k)).c_str()] = table.at(k);
        }
        return d;
    });

    m.def(
        "avcash",
        [](const py::dict& counts, const py::object& table) {
            return avcash(counts_from_dict(counts), table_from_dict(table));
        },
        py::arg("counts"), py::arg("table") = py::none());

    m.def(
        "lonely_atms",
        [](const std::vector<std::tuple<std::string, double, double>>& atms, double threshold,
           const std::string& alternatives) {
            std::vector<InfrastructurePoint> pts;
            for (std::size_t i = 0; i < atms.size(); ++i) {
                InfrastructurePoint p;
                p.id = std::to_string(i);
                p.kind = kind_from_string(std::get<0>(atms[i]));
                p.location = {std::get<1>(atms[i]), std::get<2>(atms[i])};
                pts.push_back(std::move(p));
            }
            const AlternativeSet alt = alternatives == "free_only" ? AlternativeSet::FreeOnly
                                                                   : AlternativeSet::AnyAtm;
            const LonelyAnalysis analysis = lonely_atms(pts, threshold, alt);
            py::list out;
            for (const AtmNeighbor& atm : analysis.atms) {
                py::dict d;
                d["index"] = atm.point_index;
                d["nn_distance_m"] = atm.nn_distance_m;
                d["lonely"] = atm.lonely;
                out.append(d);
            }
            return out;
        },
        py::arg("atms"), py::arg("threshold") = 250.0, py::arg("alternatives") = "any_atm");

    m.def(
        "nn_stats",
        [](const std::vector<std::pair<double, double>>& points, double area_m2) {
            const NNStats s = nn_stats(as_points(points), area_m2);
            py::dict d;
            d["n_points"] = s.n_points;
            d["area_m2"] = s.area_m2;
            d["observed_mean_m"] = s.observed_mean_m;
            d["expected_mean_m"] = s.expected_mean_m;
            d["nni"] = s.nni;
            d["z_score"] = s.z_score;
            return d;
        },
        py::arg("points"), py::arg("area_m2"));

    m.def(
        "align_polarity",
        [](const py::dict& indicators) {
            IndicatorVector v;
            v.claimant_pct = indicators["claimant_pct"].cast<double>();
            v.median_income = indicators["median_income"].cast<double>();
            v.rented_or_shared_pct = indicators["rented_or_shared_pct"].cast<double>();
            v.lone_parent_pct = indicators["lone_parent_pct"].cast<double>();
            v.iuc_score = indicators["iuc_score"].cast<int>();
            v.car_access_pct = indicators["car_access_pct"].cast<double>();
            v.avcash_raw = indicators.contains("avcash_raw") ? indicators["avcash_raw"].cast<double>() : 0.0;
            v.lonely_count = indicators.contains("lonely_count") ? indicators["lonely_count"].cast<int>() : 0;
            return components_to_dict(align_polarity(v));
        },
        py::arg("indicators"));

    m.def(
        "minmax",
        [](const std::vector<double>& values, double min_value, double max_value) {
            const MinmaxResult r = minmax(values, min_value, max_value);
            return std::make_pair(r.values, r.degenerate);
        },
        py::arg("values"), py::arg("min_value"), py::arg("max_value"));

    m.def(
        "pearson",
        [](const std::vector<double>& xs, const std::vector<double>& ys) { return pearson(xs, ys); },
        py::arg("xs"), py::arg("ys"));

    m.def("default_weights", [] {
        py::dict d;
        const WeightScheme w;
        const ComponentArray arr = w.as_components();
        for (std::size_t c = 0; c < kComponentCount; ++c) {
            d[std::string(kComponentNames[c]).c_str()] = arr[c];
        }
        return d;
    });

    m.def(
        "aggregate",
        [](const py::dict& components, const py::object& weights) {
            return aggregate(components_from_dict(components), weights_from_dict(weights));
        },
        py::arg("components"), py::arg("weights") = py::none());

    m.def(
        "jenks_breaks",
        [](const std::vector<double>& values, int k) {
            const JenksResult r = jenks_breaks(values, k);
            py::dict d;
            d["class_min"] = r.class_min;
            d["class_max"] = r.class_max;
            d["labels"] = r.labels;
            d["within_ssd"] = r.within_ssd;
            return d;
        },
        py::arg("values"), py::arg("k"));

    m.def(
        "rank_and_compare",
        [](const std::map<std::string, double>& medians,
           const std::map<std::string, double>& historical) {
            const RankComparison cmp = rank_and_compare(medians, historical);
            py::dict d;
            py::list rows;
            for (const WardRank& r : cmp.rows) {
                py::dict row;
                row["ward_id"] = r.ward_id;
                row["median_score"] = r.median_score;
                row["rank_now"] = r.rank_now;
                row["rank_then"] = r.rank_then;
                row["delta"] = r.delta;
                rows.append(row);
            }
            d["rows"] = rows;
            d["spearman"] = cmp.spearman;
            d["pearson_medians"] = cmp.pearson_medians;
            return d;
        },
        py::arg("medians"), py::arg("historical"));

    m.def(
        "run_pipeline",
        [](const std::string& config_path, const py::object& out_dir, bool full_precision) {
            RunConfig config = load_config(config_path);
            if (!out_dir.is_none()) config.output_dir = out_dir.cast<std::string>();
            if (full_precision) config.full_precision = true;
            const RunArtifacts artifacts = run_all(config);
            py::dict d;
            d["files"] = artifacts.files;
            d["n_areas"] = artifacts.results.size();
            d["config_fingerprint"] =
                artifacts.results.empty() ? std::string() : artifacts.results.front().config_fingerprint;
            py::dict scores;
            for (const IndexResult& r : artifacts.results) {
                py::dict row;
                row["score"] = r.score;
                row["jenks_class"] = r.jenks_class;
                scores[r.area_id.c_str()] = row;
            }
            d["areas"] = scores;
            return d;
        },
        py::arg("config_path"), py::arg("out_dir") = py::none(), py::arg("full_precision") = false);
}
