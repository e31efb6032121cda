#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "popanchor/apportion.hpp"
#include "popanchor/core_model.hpp"
#include "popanchor/error.hpp"
#include "popanchor/ingest.hpp"
#include "popanchor/lastmile_assign.hpp"
#include "popanchor/pipeline.hpp"
#include "popanchor/report.hpp"
#include "popanchor/residence_assign.hpp"
#include "popanchor/scenario.hpp"
#include "popanchor/subzone_assign.hpp"

#include <memory>
#include <numeric>

namespace py = pybind11;
using namespace popanchor;

namespace {

using ScenarioPtr = std::shared_ptr<Scenario>;

const District& district_of(const Scenario& scn, const std::string& id) {
    return scn.districts[static_cast<std::size_t>(scn.require_district(id))];
}

py::dict cells_to_dict(const Scenario& scn, const District& d,
                       const std::vector<double>& values) {
    py::dict out;
    for (std::size_t i = 0; i < d.cells.size(); ++i)
        out[py::str(scn.grid.cells[static_cast<std::size_t>(d.cells[i])].id)] = values[i];
    return out;
}

py::dict run_py(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                std::optional<std::uint64_t> seed, std::optional<std::string> stage,
                std::optional<std::filesystem::path> resume, int threads,
                std::optional<bool> gravity_mask, std::optional<double> distance_exponent) {
    pipeline::Options opt;
    opt.config_path = config;
    opt.out_dir = out_dir;
    opt.seed_override = seed;
    if (stage) {
        opt.stop_after = pipeline::stage_from_name(*stage);
        if (!opt.stop_after)
            throw ConfigError("unknown stage '" + *stage + "'");
    }
    opt.resume_dir = resume;
    opt.threads = threads;
    opt.gravity_mask_override = gravity_mask;
    opt.distance_exponent_override = distance_exponent;
    auto result = pipeline::run(opt);

    py::dict out;
    out["completed_stage"] = pipeline::stage_name(result.completed);
    out["population"] = result.population;
    out["workers"] = result.workers;
    out["escalations"] = result.escalation_count;
    out["seed"] = result.seed;
    out["config_hash"] = result.config_hash;
    out["out_dir"] = result.out_dir.string();
    py::dict timings;
    for (const auto& [name, ms] : result.timings_ms) timings[py::str(name)] = ms;
    out["stage_timings_ms"] = timings;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spatial anchor-point assignment for synthetic populations";

    py::register_exception<Error>(m, "PipelineError");

    py::class_<Scenario, ScenarioPtr>(m, "Scenario")
        .def_static(
            "load",
            [](const std::filesystem::path& config) {
                return std::make_shared<Scenario>(ingest::load_scenario(config));
            },
            py::arg("config"), "Load and cross-validate a scenario from a config file.")
        .def_property_readonly("cell_size",
                               [](const Scenario& s) { return s.grid.cell_size; })
        .def_property_readonly("num_persons",
                               [](const Scenario& s) { return s.persons.size(); })
        .def_property_readonly("district_ids",
                               [](const Scenario& s) {
                                   std::vector<std::string> ids;
                                   for (const District& d : s.districts) ids.push_back(d.id);
                                   return ids;
                               })
        .def_property_readonly("cell_ids",
                               [](const Scenario& s) {
                                   std::vector<std::string> ids;
                                   for (const Cell& c : s.grid.cells) ids.push_back(c.id);
                                   return ids;
                               })
        .def_property_readonly("class_labels",
                               [](const Scenario& s) { return s.classes.labels(); })
        .def_property_readonly("nace_codes",
                               [](const Scenario& s) { return s.nace.codes; })
        .def("__repr__", [](const Scenario& s) {
            return "<Scenario: " + std::to_string(s.persons.size()) + " persons, " +
                   std::to_string(s.grid.cells.size()) + " cells, " +
                   std::to_string(s.districts.size()) + " districts>";
        });

    m.def("run", &run_py, py::arg("config"), py::arg("out_dir"),
          py::arg("seed") = py::none(), py::arg("stage") = py::none(),
          py::arg("resume") = py::none(), py::arg("threads") = 1,
          py::arg("gravity_mask") = py::none(), py::arg("distance_exponent") = py::none(),
          "Run the assignment pipeline and return the run summary.");

    m.def(
        "cell_distance",
        [](const Scenario& s, const std::string& a, const std::string& b) {
            return cell_distance(s.grid, s.grid.require(a), s.grid.require(b));
        },
        py::arg("scenario"), py::arg("cell_a"), py::arg("cell_b"),
        "Euclidean centroid distance, floored at half a cell size.");

    m.def(
        "cell_to_district_distance",
        [](const Scenario& s, const std::string& cell, const std::string& district) {
            return cell_to_district_distance(s.grid, s.grid.require(cell),
                                             district_of(s, district));
        },
        py::arg("scenario"), py::arg("cell"), py::arg("district"),
        "Mean distance from a cell to every cell of a district.");

    m.def(
        "normalized_cell_weights",
        [](const Scenario& s, const std::string& district) {
            const District& d = district_of(s, district);
            return cells_to_dict(s, d, normalized_cell_weights(s.grid, d, s.weights_work));
        },
        py::arg("scenario"), py::arg("district"),
        "Per-cell work weights normalized within the district.");

    m.def(
        "residence_cell_weights",
        [](const Scenario& s, const std::string& district) {
            const District& d = district_of(s, district);
            auto w = residence::residence_cell_weights(s, d);
            double sum = std::accumulate(w.begin(), w.end(), 0.0);
            for (double& v : w) v /= sum;
            return cells_to_dict(s, d, w);
        },
        py::arg("scenario"), py::arg("district"),
        "Normalized residence weights (floor-area or class mode).");

    m.def(
        "expected_workplaces",
        [](const Scenario& s, const std::string& district) {
            const District& d = district_of(s, district);
            return cells_to_dict(s, d, expected_workplaces(s.grid, d, s.weights_work));
        },
        py::arg("scenario"), py::arg("district"),
        "Fractional workplaces per cell from register totals.");

    m.def(
        "gravity_probabilities",
        [](const Scenario& s, const std::string& cell,
           const std::map<std::string, double>& weights) {
            std::vector<double> w(s.districts.size(), 0.0);
            for (const auto& [id, v] : weights)
                w[static_cast<std::size_t>(s.require_district(id))] = v;
            auto p = subzone::gravity_probabilities(s, s.grid.require(cell), w);
            py::dict out;
            for (std::size_t d = 0; d < p.size(); ++d)
                out[py::str(s.districts[d].id)] = p[d];
            return out;
        },
        py::arg("scenario"), py::arg("residence_cell"), py::arg("district_weights"),
        "District-choice probabilities proportional to weight over distance.");

    m.def(
        "class_probabilities",
        [](const Scenario& s, const std::string& district) {
            auto p = lastmile::class_probabilities(s, district_of(s, district));
            py::dict out;
            for (int c = 0; c < s.classes.size(); ++c)
                if (p[static_cast<std::size_t>(c)] > 0.0)
                    out[py::str(s.classes.label(c))] = p[static_cast<std::size_t>(c)];
            return out;
        },
        py::arg("scenario"), py::arg("district"),
        "Work-cell class distribution within a district.");

    m.def(
        "work_cell_probabilities",
        [](const Scenario& s, const std::string& residence_cell, const std::string& district,
           const std::string& cell_class) {
            int cls = s.classes.index_of(cell_class);
            if (cls < 0) throw ConfigError("unknown cell class '" + cell_class + "'");
            auto choice = lastmile::cell_probabilities(s, s.grid.require(residence_cell),
                                                       district_of(s, district), cls);
            py::dict out;
            for (std::size_t i = 0; i < choice.cells.size(); ++i)
                out[py::str(s.grid.cells[static_cast<std::size_t>(choice.cells[i])].id)] =
                    choice.probs[i];
            return out;
        },
        py::arg("scenario"), py::arg("residence_cell"), py::arg("district"),
        py::arg("cell_class"), "Inverse-distance work-cell distribution within a class.");

    m.def(
        "largest_remainder",
        [](const std::vector<double>& expected, long long total) {
            return largest_remainder(expected, total);
        },
        py::arg("expected"), py::arg("total"),
        "Round fractional allocations to integers preserving the total.");

    m.def(
        "apportion",
        [](const std::vector<double>& weights, long long total) {
            return apportion_by_weights(weights, total);
        },
        py::arg("weights"), py::arg("total"),
        "Apportion an integer total proportionally to weights.");

    m.def("age_band", &age_band_label, py::arg("age"), py::arg("width") = 5,
          "Age band label, e.g. age_band(32, 5) == '30-34'.");

    m.def(
        "load_od_csv",
        [](const std::filesystem::path& path) {
            auto od = report::load_od_csv(path);
            return py::make_tuple(od.districts, od.shares);
        },
        py::arg("path"), "Load a long-format OD share table: (districts, shares).");

    m.def(
        "delta_matrix",
        [](const std::vector<std::string>& districts,
           const std::vector<std::vector<double>>& a,
           const std::vector<std::vector<double>>& b) {
            return report::delta_matrix(report::od_from_shares(districts, a),
                                        report::od_from_shares(districts, b));
        },
        py::arg("districts"), py::arg("a"), py::arg("b"),
        "Elementwise difference of two OD share matrices.");
}
