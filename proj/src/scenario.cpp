#include "mfgepi/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mfgepi {

using nlohmann::json;

int Scenario::group_index(const std::string& label) const {
    for (int k = 0; k < n_groups(); ++k)
        if (groups[k].id.label == label) return k;
    throw ConfigError("unknown group label '" + label + "'");
}

void Scenario::validate_and_normalize() {
    if (groups.empty()) throw ConfigError("scenario needs at least one group");
    std::set<std::string> labels;
    for (int k = 0; k < n_groups(); ++k) {
        auto& g = groups[k];
        g.id.index = k;
        if (g.id.label.empty()) throw ConfigError("group labels must be non-empty");
        if (!labels.insert(g.id.label).second)
            throw ConfigError("duplicate group label '" + g.id.label + "'");
        g.epi.validate(variant);
        g.cost.validate(g.kind, variant);
    }

    double mass = 0.0;
    for (const auto& g : groups) {
        if (!(g.proportion > 0.0))
            throw ConfigError("group 'proportion' entries must be > 0");
        mass += g.proportion;
    }
    if (std::abs(mass - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "group 'proportion' entries must sum to 1 (got " << mass << ")";
        throw ConfigError(os.str());
    }
    for (auto& g : groups) g.proportion /= mass;

    if (contacts.n_groups() != n_groups())
        throw ConfigError("'contacts' size does not match the number of groups");
    contacts.validate();
    if (policy.n_groups() != n_groups())
        throw ConfigError("'policy' group count does not match the number of groups");
    policy.validate();

    if (static_cast<int>(initial.size()) != n_groups())
        throw ConfigError("'initial' must provide one distribution per group");
    for (int k = 0; k < n_groups(); ++k) {
        double sum = 0.0;
        for (double v : initial[k]) {
            if (!(v >= 0.0)) throw ConfigError("'initial' proportions must be >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw ConfigError("'initial' proportions of group '" + groups[k].id.label +
                              "' must sum to 1");
        for (double& v : initial[k]) v /= sum;
        if (variant == Variant::SIR && initial[k][3] != 0.0)
            throw ConfigError("'initial' state D must be 0 for the SIR variant");
    }

    TimeGrid check(solver.grid.horizon, solver.grid.dt);
    if (check.n_steps != solver.grid.n_steps)
        throw ConfigError("'grid' is inconsistent: n_steps does not match horizon / dt");
    solver.validate();
    if (!(vacc_cap > 0.0) || !std::isfinite(vacc_cap))
        throw ConfigError("'vaccination_cap' must be finite and > 0");
}

namespace {

constexpr int kMixedGroups = 6;
const char* const kMixedLabels[kMixedGroups] = {"LF", "LI", "MF", "MI", "HF", "HI"};
constexpr AuthorityKind kMixedKinds[kMixedGroups] = {
    AuthorityKind::Follower,    AuthorityKind::Indifferent, AuthorityKind::Follower,
    AuthorityKind::Indifferent, AuthorityKind::Follower,    AuthorityKind::Indifferent};

// Survey shares in percent; normalized to exact proportions below.
constexpr double kPercent[kMixedGroups] = {14.7, 17.5, 15.1, 16.6, 18.6, 17.5};
constexpr double kBeta[kMixedGroups] = {0.4, 0.4, 0.35, 0.35, 0.3, 0.3};
constexpr double kCInfection[kMixedGroups] = {1.05, 1.05, 1.0, 1.0, 0.8, 0.8};
constexpr double kCVacc[kMixedGroups] = {1.4, 1.6, 1.2, 1.4, 0.8, 1.0};
constexpr double kGamma = 0.143;
constexpr double kEta = 0.004;
constexpr double kKappa = 0.03;
constexpr double kXi = 0.97;
constexpr double kInitialInfected = 0.01;

// Estimated interaction weights; 1 on the diagonal, 0.95 when income or
// authority attitude match, 0.9 otherwise.
constexpr double kContacts[kMixedGroups][kMixedGroups] = {
    {1.00, 0.95, 0.95, 0.90, 0.95, 0.90}, {0.95, 1.00, 0.90, 0.95, 0.90, 0.95},
    {0.95, 0.90, 1.00, 0.95, 0.95, 0.90}, {0.90, 0.95, 0.95, 1.00, 0.90, 0.95},
    {0.95, 0.90, 0.95, 0.90, 1.00, 0.95}, {0.90, 0.95, 0.90, 0.95, 0.95, 1.00}};

Scenario mixed_base(const std::string& name, double level_s, double level_i, double level_r) {
    Scenario s;
    s.name = name;
    s.variant = Variant::SIR;
    double total = 0.0;
    for (double p : kPercent) total += p;
    for (int k = 0; k < kMixedGroups; ++k) {
        GroupSpec g;
        g.id = {k, kMixedLabels[k]};
        g.kind = kMixedKinds[k];
        g.proportion = kPercent[k] / total;
        g.epi = {kBeta[k], kGamma, kEta, kKappa, 0.0};
        g.cost.c_lambda = 1.0;
        g.cost.c_nu = kCVacc[k];
        g.cost.c_infection = kCInfection[k];
        g.cost.xi_infected = kXi;
        s.groups.push_back(g);
    }
    std::vector<double> w;
    for (const auto& row : kContacts)
        for (double v : row) w.push_back(v);
    s.contacts = ContactMatrix(kMixedGroups, std::move(w));
    s.policy = PolicySchedule::uniform(kMixedGroups, level_s, level_i, level_r);
    s.initial.assign(kMixedGroups, {1.0 - kInitialInfected, kInitialInfected, 0.0, 0.0});
    s.solver.grid = TimeGrid(100.0, 0.1);
    s.validate_and_normalize();
    return s;
}

void to_sird(Scenario& s, double rho, double death_cost) {
    s.variant = Variant::SIRD;
    for (auto& g : s.groups) {
        g.epi.rho = rho;
        g.cost.death_cost = death_cost;
    }
}

// Collapses the six mixed-perception groups into three all-follower income
// groups: proportions add up, perception-dependent parameters (c_nu and the
// contact weights) are averaged over the perception pairs.
Scenario all_follower_scenario() {
    Scenario mixed = mixed_base("all-follower", 0.9, 0.9, 0.9);
    Scenario s;
    s.name = "all-follower";
    s.variant = Variant::SIR;
    const char* labels[3] = {"L", "M", "H"};
    for (int a = 0; a < 3; ++a) {
        const GroupSpec& f = mixed.groups[2 * a];
        const GroupSpec& i = mixed.groups[2 * a + 1];
        GroupSpec g;
        g.id = {a, labels[a]};
        g.kind = AuthorityKind::Follower;
        g.proportion = f.proportion + i.proportion;
        g.epi = f.epi;
        g.cost.c_lambda = 1.0;
        g.cost.c_nu = 0.5 * (f.cost.c_nu + i.cost.c_nu);
        g.cost.c_infection = f.cost.c_infection;
        s.groups.push_back(g);
    }
    ContactMatrix w(3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double sum = 0.0;
            for (int da = 0; da < 2; ++da)
                for (int db = 0; db < 2; ++db) sum += mixed.contacts(2 * a + da, 2 * b + db);
            w(a, b) = sum / 4.0;
        }
    s.contacts = w;
    s.policy = PolicySchedule::uniform(3, 0.9, 0.9, 0.9);
    s.initial.assign(3, {1.0 - kInitialInfected, kInitialInfected, 0.0, 0.0});
    s.solver.grid = TimeGrid(100.0, 0.1);
    s.validate_and_normalize();
    return s;
}

Scenario build_builtin(const std::string& name) {
    if (name == "permissive") return mixed_base(name, 0.9, 0.9, 0.9);
    if (name == "adaptive") return mixed_base(name, 0.9, 0.6, 0.9);
    if (name == "strict") return mixed_base(name, 0.6, 0.6, 0.6);
    if (name == "vacc-cost-low") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        for (auto& g : s.groups) g.cost.c_nu = 0.8;
        return s;
    }
    if (name == "all-follower") return all_follower_scenario();
    if (name == "xi-low") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        for (auto& g : s.groups) g.cost.xi_infected = 0.9;
        return s;
    }
    if (name == "kappa-high") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        for (auto& g : s.groups) g.epi.kappa = 0.1;
        return s;
    }
    if (name == "ci-low") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        for (auto& g : s.groups) g.cost.c_infection = 0.8;
        return s;
    }
    if (name == "eta-high") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        for (auto& g : s.groups) g.epi.eta = 0.01;
        return s;
    }
    if (name == "sird-baseline") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        to_sird(s, 0.005, 80.0);
        return s;
    }
    if (name == "sird-adaptive") {
        Scenario s = mixed_base(name, 0.9, 0.6, 0.9);
        to_sird(s, 0.005, 80.0);
        return s;
    }
    if (name == "sird-strict") {
        Scenario s = mixed_base(name, 0.6, 0.6, 0.6);
        to_sird(s, 0.005, 80.0);
        return s;
    }
    if (name == "sird-rho-low") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        to_sird(s, 0.002, 80.0);
        return s;
    }
    if (name == "sird-dcost-zero") {
        Scenario s = mixed_base(name, 0.9, 0.9, 0.9);
        to_sird(s, 0.005, 0.0);
        return s;
    }
    return {};
}

struct PairDef {
    const char* baseline;
    const char* treatment;
};

const std::map<std::string, PairDef>& pair_defs() {
    static const std::map<std::string, PairDef> defs = {
        {"permissive-vs-adaptive", {"permissive", "adaptive"}},
        {"permissive-vs-strict", {"permissive", "strict"}},
        {"adaptive-vs-strict", {"adaptive", "strict"}},
        {"vacc-cost-pair", {"permissive", "vacc-cost-low"}},
        {"mixed-vs-all-follower", {"permissive", "all-follower"}},
        {"xi-pair", {"permissive", "xi-low"}},
        {"kappa-pair", {"permissive", "kappa-high"}},
        {"ci-pair", {"permissive", "ci-low"}},
        {"eta-pair", {"permissive", "eta-high"}},
        {"sird-permissive-vs-adaptive", {"sird-baseline", "sird-adaptive"}},
        {"sird-permissive-vs-strict", {"sird-baseline", "sird-strict"}},
        {"sird-rho-pair", {"sird-baseline", "sird-rho-low"}},
        {"sird-dcost-pair", {"sird-baseline", "sird-dcost-zero"}},
    };
    return defs;
}

std::string catalog_help() {
    std::ostringstream os;
    os << "known scenarios:";
    for (const auto& n : catalog_scenario_names()) os << " " << n;
    os << "; known pairs:";
    for (const auto& n : catalog_pair_names()) os << " " << n;
    return os.str();
}

}  // namespace

std::vector<std::string> catalog_scenario_names() {
    return {"permissive", "adaptive",   "strict",        "vacc-cost-low", "all-follower",
            "xi-low",     "kappa-high", "ci-low",        "eta-high",      "sird-baseline",
            "sird-adaptive", "sird-strict", "sird-rho-low", "sird-dcost-zero"};
}

std::vector<std::string> catalog_pair_names() {
    std::vector<std::string> names;
    for (const auto& [name, def] : pair_defs()) names.push_back(name);
    return names;
}

bool is_builtin_scenario(const std::string& name) {
    auto names = catalog_scenario_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

bool is_builtin_pair(const std::string& name) { return pair_defs().count(name) > 0; }

Scenario builtin_scenario(const std::string& name) {
    if (!is_builtin_scenario(name))
        throw ConfigError("unknown scenario '" + name + "'; " + catalog_help());
    return build_builtin(name);
}

ScenarioPair builtin_pair(const std::string& name) {
    auto it = pair_defs().find(name);
    if (it == pair_defs().end())
        throw ConfigError("unknown scenario pair '" + name + "'; " + catalog_help());
    ScenarioPair pair;
    pair.name = name;
    pair.baseline = builtin_scenario(it->second.baseline);
    pair.treatment = builtin_scenario(it->second.treatment);
    if (name == "mixed-vs-all-follower") {
        pair.group_map = {{"LF", "L"}, {"MF", "M"}, {"HF", "H"}};
    } else {
        for (const auto& g : pair.baseline.groups)
            pair.group_map.emplace_back(g.id.label, g.id.label);
    }
    return pair;
}

// --- JSON loading -----------------------------------------------------------

namespace {

// Fail-closed view over a JSON object: every key must be consumed.
class KeyGuard {
public:
    KeyGuard(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    const json& require(const std::string& key) {
        const json* j = find(key);
        if (!j) throw ConfigError(path_ + ": missing required key '" + key + "'");
        return *j;
    }

    void finish() {
        for (const auto& [key, value] : obj_.items())
            if (!seen_.count(key))
                throw ConfigError(path_ + ": unknown key '" + key + "'");
    }

    const std::string& path() const { return path_; }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

double number_or(KeyGuard& guard, const std::string& key, double fallback) {
    const json* j = guard.find(key);
    return j ? as_number(*j, guard.path() + "." + key) : fallback;
}

PiecewiseConstant parse_level(const json& j, const std::string& path) {
    if (j.is_number()) return PiecewiseConstant(j.get<double>());
    if (!j.is_array()) throw ConfigError(path + ": expected a number or [[t, level], ...]");
    std::vector<std::pair<double, double>> points;
    for (size_t i = 0; i < j.size(); ++i) {
        const json& p = j[i];
        if (!p.is_array() || p.size() != 2)
            throw ConfigError(path + "[" + std::to_string(i) + "]: expected a [t, level] pair");
        points.emplace_back(as_number(p[0], path), as_number(p[1], path));
    }
    try {
        return PiecewiseConstant(std::move(points));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::array<PiecewiseConstant, 3> parse_guideline(const json& j, const std::string& path) {
    KeyGuard guard(j, path);
    std::array<PiecewiseConstant, 3> levels;
    const char* keys[3] = {"S", "I", "R"};
    for (int e = 0; e < 3; ++e)
        levels[e] = parse_level(guard.require(keys[e]), path + "." + keys[e]);
    guard.finish();
    return levels;
}

Variant parse_variant(const json& j, const std::string& path) {
    if (j.is_string()) {
        std::string v = j.get<std::string>();
        if (v == "sir") return Variant::SIR;
        if (v == "sird") return Variant::SIRD;
    }
    throw ConfigError(path + ": expected \"sir\" or \"sird\"");
}

GroupSpec parse_group(const json& j, const std::string& path, Variant variant) {
    KeyGuard guard(j, path);
    GroupSpec g;
    const json& label = guard.require("label");
    if (!label.is_string()) throw ConfigError(path + ".label: expected a string");
    g.id.label = label.get<std::string>();

    const json& kind = guard.require("kind");
    if (kind.is_string() && kind.get<std::string>() == "follower")
        g.kind = AuthorityKind::Follower;
    else if (kind.is_string() && kind.get<std::string>() == "indifferent")
        g.kind = AuthorityKind::Indifferent;
    else
        throw ConfigError(path + ".kind: expected \"follower\" or \"indifferent\"");

    g.proportion = as_number(guard.require("proportion"), path + ".proportion");

    KeyGuard epi(guard.require("epidemic"), path + ".epidemic");
    g.epi.beta = as_number(epi.require("beta"), path + ".epidemic.beta");
    g.epi.gamma = as_number(epi.require("gamma"), path + ".epidemic.gamma");
    g.epi.eta = as_number(epi.require("eta"), path + ".epidemic.eta");
    g.epi.kappa = as_number(epi.require("kappa"), path + ".epidemic.kappa");
    g.epi.rho = number_or(epi, "rho", 0.0);
    epi.finish();

    KeyGuard cost(guard.require("cost"), path + ".cost");
    g.cost.c_lambda = as_number(cost.require("c_lambda"), path + ".cost.c_lambda");
    g.cost.c_nu = as_number(cost.require("c_nu"), path + ".cost.c_nu");
    g.cost.c_infection = as_number(cost.require("c_infection"), path + ".cost.c_infection");
    g.cost.xi_infected = number_or(cost, "xi", 1.0);
    g.cost.death_cost = number_or(cost, "death_cost", 0.0);
    cost.finish();

    if (variant == Variant::SIR && g.epi.rho != 0.0)
        throw ConfigError(path + ".epidemic.rho: must be 0 for variant \"sir\"");

    guard.finish();
    return g;
}

std::array<double, 4> parse_initial(const json& j, const std::string& path) {
    KeyGuard guard(j, path);
    std::array<double, 4> p{};
    p[0] = as_number(guard.require("S"), path + ".S");
    p[1] = as_number(guard.require("I"), path + ".I");
    p[2] = number_or(guard, "R", 0.0);
    p[3] = number_or(guard, "D", 0.0);
    guard.finish();
    return p;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    KeyGuard root(doc, origin);
    Scenario s;
    const json& name = root.require("name");
    if (!name.is_string()) throw ConfigError(origin + ".name: expected a string");
    s.name = name.get<std::string>();
    s.variant = parse_variant(root.require("variant"), origin + ".variant");
    s.vacc_cap = number_or(root, "vaccination_cap", 10.0);

    const json& groups = root.require("groups");
    if (!groups.is_array() || groups.empty())
        throw ConfigError(origin + ".groups: expected a non-empty array");
    for (size_t k = 0; k < groups.size(); ++k)
        s.groups.push_back(
            parse_group(groups[k], origin + ".groups[" + std::to_string(k) + "]", s.variant));
    const int n = s.n_groups();

    const json& contacts = root.require("contacts");
    if (!contacts.is_array() || static_cast<int>(contacts.size()) != n)
        throw ConfigError(origin + ".contacts: expected " + std::to_string(n) + " rows");
    std::vector<double> w;
    for (int k = 0; k < n; ++k) {
        const json& row = contacts[k];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ConfigError(origin + ".contacts[" + std::to_string(k) + "]: expected " +
                              std::to_string(n) + " entries");
        for (int l = 0; l < n; ++l)
            w.push_back(as_number(row[l], origin + ".contacts[" + std::to_string(k) + "]"));
    }
    s.contacts = ContactMatrix(n, std::move(w));

    KeyGuard policy(root.require("policy"), origin + ".policy");
    double lambda_bar = number_or(policy, "lambda_bar", 1.0);
    s.policy = PolicySchedule(n, lambda_bar);
    KeyGuard guidelines(policy.require("guidelines"), origin + ".policy.guidelines");
    const json* fallback = guidelines.find("default");
    std::array<PiecewiseConstant, 3> default_levels;
    if (fallback)
        default_levels = parse_guideline(*fallback, origin + ".policy.guidelines.default");
    for (int k = 0; k < n; ++k) {
        const std::string& label = s.groups[k].id.label;
        const json* entry = guidelines.find(label);
        std::array<PiecewiseConstant, 3> levels;
        if (entry)
            levels = parse_guideline(*entry, origin + ".policy.guidelines." + label);
        else if (fallback)
            levels = default_levels;
        else
            throw ConfigError(origin + ".policy.guidelines: no entry for group '" + label +
                              "' and no 'default'");
        s.policy.set(k, Compartment::S, levels[0]);
        s.policy.set(k, Compartment::I, levels[1]);
        s.policy.set(k, Compartment::R, levels[2]);
    }
    guidelines.finish();
    policy.finish();

    const json& initial = root.require("initial");
    if (!initial.is_array() || static_cast<int>(initial.size()) != n)
        throw ConfigError(origin + ".initial: expected one entry per group");
    for (int k = 0; k < n; ++k)
        s.initial.push_back(
            parse_initial(initial[k], origin + ".initial[" + std::to_string(k) + "]"));

    KeyGuard grid(root.require("grid"), origin + ".grid");
    double horizon = as_number(grid.require("horizon"), origin + ".grid.horizon");
    double dt = as_number(grid.require("dt"), origin + ".grid.dt");
    grid.finish();
    try {
        s.solver.grid = TimeGrid(horizon, dt);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ".grid: " + e.what());
    }

    if (const json* sv = root.find("solver")) {
        KeyGuard solver(*sv, origin + ".solver");
        s.solver.epsilon = number_or(solver, "epsilon", s.solver.epsilon);
        if (const json* mi = solver.find("max_iterations")) {
            if (!mi->is_number_integer())
                throw ConfigError(origin + ".solver.max_iterations: expected an integer");
            s.solver.max_iters = mi->get<int>();
        }
        s.solver.damping = number_or(solver, "damping", s.solver.damping);
        if (const json* integ = solver.find("integrator")) {
            if (integ->is_string() && integ->get<std::string>() == "euler")
                s.solver.integrator = Integrator::ExplicitEuler;
            else if (integ->is_string() && integ->get<std::string>() == "rk4")
                s.solver.integrator = Integrator::RK4;
            else
                throw ConfigError(origin + ".solver.integrator: expected \"euler\" or \"rk4\"");
        }
        if (const json* patch = solver.find("patch_length")) {
            if (!patch->is_null())
                s.solver.patch_length = as_number(*patch, origin + ".solver.patch_length");
        }
        solver.finish();
    }

    root.finish();
    try {
        s.validate_and_normalize();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str(), path);
}

std::string scenario_to_json_text(const Scenario& scenario) {
    json doc;
    doc["name"] = scenario.name;
    doc["variant"] = variant_name(scenario.variant);
    doc["vaccination_cap"] = scenario.vacc_cap;

    json groups = json::array();
    for (const auto& g : scenario.groups) {
        json jg;
        jg["label"] = g.id.label;
        jg["kind"] = authority_kind_name(g.kind);
        jg["proportion"] = g.proportion;
        jg["epidemic"] = {{"beta", g.epi.beta},
                          {"gamma", g.epi.gamma},
                          {"eta", g.epi.eta},
                          {"kappa", g.epi.kappa},
                          {"rho", g.epi.rho}};
        jg["cost"] = {{"c_lambda", g.cost.c_lambda},
                      {"c_nu", g.cost.c_nu},
                      {"c_infection", g.cost.c_infection},
                      {"xi", g.cost.xi_infected},
                      {"death_cost", g.cost.death_cost}};
        groups.push_back(jg);
    }
    doc["groups"] = groups;

    json contacts = json::array();
    for (int k = 0; k < scenario.n_groups(); ++k) {
        json row = json::array();
        for (int l = 0; l < scenario.n_groups(); ++l) row.push_back(scenario.contacts(k, l));
        contacts.push_back(row);
    }
    doc["contacts"] = contacts;

    json guidelines;
    for (int k = 0; k < scenario.n_groups(); ++k) {
        json entry;
        const Compartment states[3] = {Compartment::S, Compartment::I, Compartment::R};
        for (Compartment e : states) {
            json level = json::array();
            for (const auto& [t, v] : scenario.policy.segment(k, e).breakpoints())
                level.push_back({t, v});
            entry[compartment_name(e)] = level;
        }
        guidelines[scenario.groups[k].id.label] = entry;
    }
    doc["policy"] = {{"lambda_bar", scenario.policy.lambda_bar()}, {"guidelines", guidelines}};

    json initial = json::array();
    for (const auto& p : scenario.initial)
        initial.push_back({{"S", p[0]}, {"I", p[1]}, {"R", p[2]}, {"D", p[3]}});
    doc["initial"] = initial;

    doc["grid"] = {{"horizon", scenario.grid().horizon}, {"dt", scenario.grid().dt}};
    json solver = {{"epsilon", scenario.solver.epsilon},
                   {"max_iterations", scenario.solver.max_iters},
                   {"damping", scenario.solver.damping},
                   {"integrator", integrator_name(scenario.solver.integrator)}};
    solver["patch_length"] =
        scenario.solver.patch_length ? json(*scenario.solver.patch_length) : json(nullptr);
    doc["solver"] = solver;

    return doc.dump(2) + "\n";
}

Scenario resolve_scenario(const std::string& ref) {
    if (is_builtin_scenario(ref)) return builtin_scenario(ref);
    if (std::filesystem::exists(ref)) return load_scenario(ref);
    throw ConfigError("'" + ref + "' is neither a built-in scenario nor a readable file; " +
                      catalog_help());
}

}  // namespace mfgepi
