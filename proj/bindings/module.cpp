// pybind11 surface: scenario catalog, solving, metrics and the finite
// population check. JSON-shaped results cross as text and are parsed on the
// python side, so the wire format matches the CLI artifacts exactly.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfgepi/metrics.hpp"
#include "mfgepi/output.hpp"
#include "mfgepi/scenario.hpp"
#include "mfgepi/solver.hpp"
#include "mfgepi/types.hpp"
#include "mfgepi/validator.hpp"

namespace py = pybind11;

namespace {

using namespace mfgepi;

Compartment parse_compartment(const std::string& name) {
    if (name == "S") return Compartment::S;
    if (name == "I") return Compartment::I;
    if (name == "R") return Compartment::R;
    if (name == "D") return Compartment::D;
    throw std::invalid_argument("unknown compartment '" + name + "' (expected S, I, R or D)");
}

Integrator parse_integrator(const std::string& name) {
    if (name == "euler") return Integrator::ExplicitEuler;
    if (name == "rk4") return Integrator::RK4;
    throw std::invalid_argument("unknown integrator '" + name + "' (expected euler or rk4)");
}

int resolve_group(const EquilibriumSolution& s, const py::object& group) {
    if (py::isinstance<py::str>(group)) {
        const auto label = group.cast<std::string>();
        for (int k = 0; k < s.n_groups(); ++k)
            if (s.group_labels[k] == label) return k;
        throw std::invalid_argument("unknown group label '" + label + "'");
    }
    const int k = group.cast<int>();
    if (k < 0 || k >= s.n_groups()) throw std::out_of_range("group index out of range");
    return k;
}

std::vector<double> node_times(const TimeGrid& grid) {
    std::vector<double> ts(static_cast<size_t>(grid.n_nodes()));
    for (int i = 0; i < grid.n_nodes(); ++i) ts[static_cast<size_t>(i)] = grid.time(i);
    return ts;
}

std::vector<double> table_series(const StateTable& table, int group, Compartment e) {
    std::vector<double> out(static_cast<size_t>(table.n_nodes()));
    for (int i = 0; i < table.n_nodes(); ++i) out[static_cast<size_t>(i)] = table(i, group, e);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mean field game solver for epidemic behavior under policy guidelines";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("name", [](const Scenario& s) { return s.name; })
        .def_property_readonly("variant",
                               [](const Scenario& s) { return std::string(variant_name(s.variant)); })
        .def_property_readonly("group_labels",
                               [](const Scenario& s) {
                                   std::vector<std::string> labels;
                                   for (const auto& g : s.groups) labels.push_back(g.id.label);
                                   return labels;
                               })
        .def_property_readonly("n_groups", &Scenario::n_groups)
        .def_property(
            "horizon", [](const Scenario& s) { return s.solver.grid.horizon; },
            [](Scenario& s, double h) { s.solver.grid = TimeGrid(h, s.solver.grid.dt); })
        .def_property(
            "dt", [](const Scenario& s) { return s.solver.grid.dt; },
            [](Scenario& s, double dt) { s.solver.grid = TimeGrid(s.solver.grid.horizon, dt); })
        .def_property(
            "epsilon", [](const Scenario& s) { return s.solver.epsilon; },
            [](Scenario& s, double eps) { s.solver.epsilon = eps; })
        .def_property(
            "damping", [](const Scenario& s) { return s.solver.damping; },
            [](Scenario& s, double d) { s.solver.damping = d; })
        .def_property(
            "max_iterations", [](const Scenario& s) { return s.solver.max_iters; },
            [](Scenario& s, int n) { s.solver.max_iters = n; })
        .def_property(
            "patch_length",
            [](const Scenario& s) { return s.solver.patch_length; },
            [](Scenario& s, std::optional<double> tau) { s.solver.patch_length = tau; })
        .def_property(
            "integrator",
            [](const Scenario& s) { return std::string(integrator_name(s.solver.integrator)); },
            [](Scenario& s, const std::string& name) {
                s.solver.integrator = parse_integrator(name);
            })
        .def("group_index", &Scenario::group_index, py::arg("label"))
        .def("to_json", [](const Scenario& s) { return scenario_to_json_text(s); })
        .def("__repr__", [](const Scenario& s) {
            return "<Scenario '" + s.name + "' (" + variant_name(s.variant) + ", " +
                   std::to_string(s.n_groups()) + " groups, T=" +
                   std::to_string(s.solver.grid.horizon) + ")>";
        });

    py::class_<ScenarioPair>(m, "ScenarioPair")
        .def_property_readonly("name", [](const ScenarioPair& p) { return p.name; })
        .def_readonly("baseline", &ScenarioPair::baseline)
        .def_readonly("treatment", &ScenarioPair::treatment)
        .def_readonly("group_map", &ScenarioPair::group_map)
        .def("__repr__", [](const ScenarioPair& p) { return "<ScenarioPair '" + p.name + "'>"; });

    py::class_<EquilibriumSolution>(m, "Solution")
        .def_readonly("converged", &EquilibriumSolution::converged)
        .def_readonly("iterations", &EquilibriumSolution::iterations)
        .def_readonly("group_labels", &EquilibriumSolution::group_labels)
        .def_readonly("residual_history", &EquilibriumSolution::residual_history)
        .def_readonly("clip_events", &EquilibriumSolution::clip_events)
        .def_readonly("max_simplex_drift", &EquilibriumSolution::max_simplex_drift)
        .def_readonly("note", &EquilibriumSolution::note)
        .def_property_readonly(
            "variant",
            [](const EquilibriumSolution& s) { return std::string(variant_name(s.variant)); })
        .def_property_readonly("n_groups", &EquilibriumSolution::n_groups)
        .def_property_readonly("n_nodes",
                               [](const EquilibriumSolution& s) { return s.grid.n_nodes(); })
        .def_property_readonly("dt", [](const EquilibriumSolution& s) { return s.grid.dt; })
        .def("times", [](const EquilibriumSolution& s) { return node_times(s.grid); })
        .def(
            "infected",
            [](const EquilibriumSolution& s, const py::object& group) {
                return quantity_series(s, resolve_group(s, group), Quantity::InfectedProportion);
            },
            py::arg("group"), "Infected proportion path of a group (index or label).")
        .def(
            "socialization",
            [](const EquilibriumSolution& s, const py::object& group) {
                return quantity_series(s, resolve_group(s, group), Quantity::SocializationS);
            },
            py::arg("group"), "Susceptible-state socialization path of a group.")
        .def(
            "vaccination",
            [](const EquilibriumSolution& s, const py::object& group) {
                return quantity_series(s, resolve_group(s, group), Quantity::Vaccination);
            },
            py::arg("group"), "Vaccination effort path of a group.")
        .def(
            "proportion",
            [](const EquilibriumSolution& s, const py::object& group,
               const std::string& compartment) {
                return table_series(s.distributions, resolve_group(s, group),
                                    parse_compartment(compartment));
            },
            py::arg("group"), py::arg("compartment"),
            "Population share path of one (group, compartment).")
        .def(
            "value",
            [](const EquilibriumSolution& s, const py::object& group,
               const std::string& compartment) {
                return table_series(s.values, resolve_group(s, group),
                                    parse_compartment(compartment));
            },
            py::arg("group"), py::arg("compartment"),
            "Expected remaining cost path of one (group, compartment).")
        .def(
            "exposure",
            [](const EquilibriumSolution& s, const py::object& group) {
                const int k = resolve_group(s, group);
                std::vector<double> out(static_cast<size_t>(s.grid.n_nodes()));
                for (int i = 0; i < s.grid.n_nodes(); ++i)
                    out[static_cast<size_t>(i)] = s.aggregates(i, k);
                return out;
            },
            py::arg("group"), "Weighted infectious contact exposure path of a group.")
        .def("__repr__", [](const EquilibriumSolution& s) {
            return std::string("<Solution ") + (s.converged ? "converged" : "NOT converged") +
                   " after " + std::to_string(s.iterations) + " iterations>";
        });

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("n_agents", &SimReport::n_agents)
        .def_readonly("n_replicas", &SimReport::n_replicas)
        .def_readonly("seed", &SimReport::seed)
        .def_readonly("rng_algorithm", &SimReport::rng_algorithm)
        .def_readonly("group_sizes", &SimReport::group_sizes)
        .def_readonly("sup_deviation", &SimReport::sup_deviation)
        .def_readonly("replica_sup_deviation", &SimReport::replica_sup_deviation)
        .def_readonly("total_events", &SimReport::total_events)
        .def_readonly("thinning_rejections", &SimReport::thinning_rejections)
        .def_readonly("majorant_violations", &SimReport::majorant_violations)
        .def("__repr__", [](const SimReport& r) {
            return "<SimReport N=" + std::to_string(r.n_agents) + " x " +
                   std::to_string(r.n_replicas) + ", sup deviation " +
                   format_number(r.sup_deviation) + ">";
        });

    m.def("catalog_scenario_names", &catalog_scenario_names);
    m.def("catalog_pair_names", &catalog_pair_names);
    m.def("builtin_scenario", &builtin_scenario, py::arg("name"));
    m.def("builtin_pair", &builtin_pair, py::arg("name"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("scenario_from_json", &scenario_from_json_text, py::arg("text"),
          py::arg("origin") = "<string>");

    m.def(
        "solve", [](const Scenario& s) { return solve(s); }, py::arg("scenario"),
        py::call_guard<py::gil_scoped_release>(),
        "Computes the population equilibrium with the scenario's solver settings.");

    m.def(
        "run_metrics_json",
        [](const Scenario& scenario, const EquilibriumSolution& solution) {
            return run_metrics(scenario, solution).dump();
        },
        py::arg("scenario"), py::arg("solution"));
    m.def(
        "comparison_report_json",
        [](const ScenarioPair& pair, const EquilibriumSolution& baseline,
           const EquilibriumSolution& treatment) {
            return comparison_report(pair, baseline, treatment).dump();
        },
        py::arg("pair"), py::arg("baseline"), py::arg("treatment"));

    m.def(
        "write_run_artifacts",
        [](const std::string& out_dir, const Scenario& scenario,
           const EquilibriumSolution& solution, const std::string& command_line) {
            return write_run_artifacts(out_dir, scenario, solution, command_line);
        },
        py::arg("out_dir"), py::arg("scenario"), py::arg("solution"),
        py::arg("command_line") = "python",
        "Emits trajectories.csv, metrics.json, manifest.json and the SVG plots.");

    m.def("simulate_finite_n", &simulate_finite_n, py::arg("solution"), py::arg("scenario"),
          py::arg("n_agents"), py::arg("n_replicas"), py::arg("seed"), py::arg("max_threads") = 0,
          py::call_guard<py::gil_scoped_release>(),
          "Finite population check: N-agent jump process against the mean field paths.");
}
