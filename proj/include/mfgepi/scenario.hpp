#pragma once

#include <string>
#include <vector>

#include "mfgepi/types.hpp"

namespace mfgepi {

// A fully resolved experiment: population structure, interaction weights,
// guideline schedule, epidemic variant, initial distribution and solver
// settings. Instances are immutable once validated.
struct Scenario {
    std::string name;
    Variant variant = Variant::SIR;
    std::vector<GroupSpec> groups;
    ContactMatrix contacts;
    PolicySchedule policy;
    std::vector<std::array<double, 4>> initial;  // per group: S, I, R, D
    SolverConfig solver;
    double vacc_cap = 10.0;

    int n_groups() const { return static_cast<int>(groups.size()); }
    const TimeGrid& grid() const { return solver.grid; }
    int group_index(const std::string& label) const;

    // Throws on inconsistent data; renormalizes proportions and initial
    // distributions that are within tolerance of a simplex.
    void validate_and_normalize();
};

// Baseline/treatment comparison with an explicit label mapping used when the
// two sides have different group structures.
struct ScenarioPair {
    std::string name;
    Scenario baseline;
    Scenario treatment;
    std::vector<std::pair<std::string, std::string>> group_map;
};

std::vector<std::string> catalog_scenario_names();
std::vector<std::string> catalog_pair_names();

bool is_builtin_scenario(const std::string& name);
bool is_builtin_pair(const std::string& name);

// Throws ConfigError listing the catalog for unknown names.
Scenario builtin_scenario(const std::string& name);
ScenarioPair builtin_pair(const std::string& name);

// JSON scenario files; schema in docs/scenario_format.md. Unknown keys are
// rejected.
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text, const std::string& origin = "<string>");
std::string scenario_to_json_text(const Scenario& scenario);

// Resolves --scenario arguments: builtin name or path to a JSON file.
Scenario resolve_scenario(const std::string& ref);

}  // namespace mfgepi
