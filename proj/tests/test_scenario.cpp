#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mfgepi/scenario.hpp"

using namespace mfgepi;

namespace {

// Minimal well-formed two-group config used by the JSON loader tests.
const char* kTinyConfig = R"({
  "name": "tiny",
  "variant": "sir",
  "groups": [
    {"label": "A", "kind": "follower", "proportion": 0.5,
     "epidemic": {"beta": 0.4, "gamma": 0.143, "eta": 0.004, "kappa": 0.03},
     "cost": {"c_lambda": 1.0, "c_nu": 1.4, "c_infection": 1.0}},
    {"label": "B", "kind": "indifferent", "proportion": 0.5,
     "epidemic": {"beta": 0.3, "gamma": 0.143, "eta": 0.004, "kappa": 0.03},
     "cost": {"c_lambda": 1.0, "c_nu": 1.0, "c_infection": 0.8, "xi": 0.97}}
  ],
  "contacts": [[1.0, 0.9], [0.9, 1.0]],
  "policy": {"guidelines": {"default": {"S": 0.9, "I": 0.9, "R": 0.9}}},
  "initial": [{"S": 0.99, "I": 0.01}, {"S": 0.99, "I": 0.01}],
  "grid": {"horizon": 100.0, "dt": 0.1}
})";

std::string patched(std::string text, const std::string& from, const std::string& to) {
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("catalog lists fourteen scenarios and thirteen pairs") {
    CHECK(catalog_scenario_names().size() == 14);
    CHECK(catalog_pair_names().size() == 13);
    for (const auto& name : catalog_scenario_names()) {
        CHECK(is_builtin_scenario(name));
        Scenario s = builtin_scenario(name);
        CHECK(s.name == name);
    }
    for (const auto& name : catalog_pair_names()) {
        CHECK(is_builtin_pair(name));
        ScenarioPair p = builtin_pair(name);
        CHECK(p.baseline.n_groups() >= 3);
        CHECK(!p.group_map.empty());
    }
}

TEST_CASE("permissive scenario parameter table") {
    Scenario s = builtin_scenario("permissive");
    REQUIRE(s.n_groups() == 6);
    CHECK(s.variant == Variant::SIR);

    const char* labels[6] = {"LF", "LI", "MF", "MI", "HF", "HI"};
    const double beta[6] = {0.4, 0.4, 0.35, 0.35, 0.3, 0.3};
    const double c_i[6] = {1.05, 1.05, 1.0, 1.0, 0.8, 0.8};
    const double c_nu[6] = {1.4, 1.6, 1.2, 1.4, 0.8, 1.0};
    const double percent[6] = {14.7, 17.5, 15.1, 16.6, 18.6, 17.5};
    double total = 0.0;
    for (double p : percent) total += p;

    for (int k = 0; k < 6; ++k) {
        const GroupSpec& g = s.groups[k];
        CHECK(g.id.index == k);
        CHECK(g.id.label == labels[k]);
        CHECK(g.kind == (k % 2 == 0 ? AuthorityKind::Follower : AuthorityKind::Indifferent));
        CHECK(g.proportion == doctest::Approx(percent[k] / total).epsilon(1e-14));
        CHECK(g.epi.beta == beta[k]);
        CHECK(g.epi.gamma == 0.143);
        CHECK(g.epi.eta == 0.004);
        CHECK(g.epi.kappa == 0.03);
        CHECK(g.epi.rho == 0.0);
        CHECK(g.cost.c_lambda == 1.0);
        CHECK(g.cost.c_nu == c_nu[k]);
        CHECK(g.cost.c_infection == c_i[k]);
        CHECK(g.cost.xi_infected == 0.97);
        CHECK(g.cost.death_cost == 0.0);
        CHECK(s.initial[k][0] == doctest::Approx(0.99));
        CHECK(s.initial[k][1] == doctest::Approx(0.01));
        CHECK(s.initial[k][2] == 0.0);
        CHECK(s.initial[k][3] == 0.0);
        for (Compartment e : {Compartment::S, Compartment::I, Compartment::R})
            CHECK(s.policy(17.3, k, e) == 0.9);
    }

    double prop_sum = 0.0;
    for (const auto& g : s.groups) prop_sum += g.proportion;
    CHECK(prop_sum == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(s.grid().horizon == 100.0);
    CHECK(s.grid().dt == 0.1);
    CHECK(s.grid().n_steps == 1000);
    CHECK(s.vacc_cap == 10.0);
    CHECK(s.solver.epsilon == 1e-6);
    CHECK(s.solver.damping == 0.5);
    CHECK(s.solver.max_iters == 500);
    CHECK(!s.solver.patch_length.has_value());
}

TEST_CASE("contact weights follow the same-income same-attitude rule") {
    Scenario s = builtin_scenario("permissive");
    // income class 0,0,1,1,2,2; attitude alternates follower/indifferent
    for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) {
            double expect;
            if (k == l)
                expect = 1.0;
            else if (k / 2 == l / 2 || k % 2 == l % 2)
                expect = 0.95;
            else
                expect = 0.9;
            CHECK(s.contacts(k, l) == expect);
            CHECK(s.contacts(k, l) == s.contacts(l, k));
        }
}

TEST_CASE("policy variants adjust the guideline levels only") {
    Scenario adaptive = builtin_scenario("adaptive");
    Scenario strict = builtin_scenario("strict");
    Scenario permissive = builtin_scenario("permissive");

    for (int k = 0; k < 6; ++k) {
        CHECK(adaptive.policy(0.0, k, Compartment::S) == 0.9);
        CHECK(adaptive.policy(0.0, k, Compartment::I) == 0.6);
        CHECK(adaptive.policy(0.0, k, Compartment::R) == 0.9);
        CHECK(strict.policy(0.0, k, Compartment::S) == 0.6);
        CHECK(strict.policy(0.0, k, Compartment::I) == 0.6);
        CHECK(strict.policy(0.0, k, Compartment::R) == 0.6);
        CHECK(adaptive.groups[k].epi.beta == permissive.groups[k].epi.beta);
        CHECK(adaptive.groups[k].cost.c_nu == permissive.groups[k].cost.c_nu);
    }
}

TEST_CASE("single-knob scenarios change exactly that knob") {
    Scenario base = builtin_scenario("permissive");
    for (int k = 0; k < 6; ++k) {
        CHECK(builtin_scenario("vacc-cost-low").groups[k].cost.c_nu == 0.8);
        CHECK(builtin_scenario("xi-low").groups[k].cost.xi_infected == 0.9);
        CHECK(builtin_scenario("kappa-high").groups[k].epi.kappa == 0.1);
        CHECK(builtin_scenario("ci-low").groups[k].cost.c_infection == 0.8);
        CHECK(builtin_scenario("eta-high").groups[k].epi.eta == 0.01);
        CHECK(builtin_scenario("xi-low").groups[k].epi.beta == base.groups[k].epi.beta);
        CHECK(builtin_scenario("kappa-high").groups[k].cost.c_nu == base.groups[k].cost.c_nu);
    }
}

TEST_CASE("sird scenarios set mortality and terminal cost") {
    Scenario s = builtin_scenario("sird-baseline");
    CHECK(s.variant == Variant::SIRD);
    for (const auto& g : s.groups) {
        CHECK(g.epi.rho == 0.005);
        CHECK(g.cost.death_cost == 80.0);
    }
    for (const auto& g : builtin_scenario("sird-rho-low").groups) CHECK(g.epi.rho == 0.002);
    for (const auto& g : builtin_scenario("sird-dcost-zero").groups) {
        CHECK(g.epi.rho == 0.005);
        CHECK(g.cost.death_cost == 0.0);
    }
}

TEST_CASE("all-follower collapse recomputed independently") {
    Scenario mixed = builtin_scenario("permissive");
    Scenario af = builtin_scenario("all-follower");
    REQUIRE(af.n_groups() == 3);

    const char* labels[3] = {"L", "M", "H"};
    for (int a = 0; a < 3; ++a) {
        const GroupSpec& g = af.groups[a];
        const GroupSpec& f = mixed.groups[2 * a];
        const GroupSpec& i = mixed.groups[2 * a + 1];
        CHECK(g.id.label == labels[a]);
        CHECK(g.kind == AuthorityKind::Follower);
        CHECK(g.proportion == doctest::Approx(f.proportion + i.proportion).epsilon(1e-14));
        CHECK(g.epi.beta == f.epi.beta);
        CHECK(g.cost.c_nu == doctest::Approx(0.5 * (f.cost.c_nu + i.cost.c_nu)));
        CHECK(g.cost.c_infection == f.cost.c_infection);
    }
    CHECK(af.groups[0].cost.c_nu == doctest::Approx(1.5));
    CHECK(af.groups[1].cost.c_nu == doctest::Approx(1.3));
    CHECK(af.groups[2].cost.c_nu == doctest::Approx(0.9));

    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double sum = 0.0;
            for (int da = 0; da < 2; ++da)
                for (int db = 0; db < 2; ++db) sum += mixed.contacts(2 * a + da, 2 * b + db);
            CHECK(af.contacts(a, b) == doctest::Approx(sum / 4.0));
            CHECK(af.contacts(a, b) == (a == b ? 0.975 : 0.925));
        }
}

TEST_CASE("pair definitions and group maps") {
    ScenarioPair p = builtin_pair("permissive-vs-adaptive");
    CHECK(p.baseline.name == "permissive");
    CHECK(p.treatment.name == "adaptive");
    REQUIRE(p.group_map.size() == 6);
    for (const auto& [b, t] : p.group_map) CHECK(b == t);

    ScenarioPair af = builtin_pair("mixed-vs-all-follower");
    REQUIRE(af.group_map.size() == 3);
    CHECK(af.group_map[0] == std::pair<std::string, std::string>{"LF", "L"});
    CHECK(af.group_map[1] == std::pair<std::string, std::string>{"MF", "M"});
    CHECK(af.group_map[2] == std::pair<std::string, std::string>{"HF", "H"});

    CHECK(builtin_pair("sird-rho-pair").baseline.name == "sird-baseline");
    CHECK(builtin_pair("vacc-cost-pair").treatment.name == "vacc-cost-low");
}

TEST_CASE("unknown names list the catalog") {
    CHECK_THROWS_WITH_AS(builtin_scenario("nope"),
                         doctest::Contains("known scenarios: permissive"), ConfigError);
    CHECK_THROWS_AS(builtin_pair("nope"), ConfigError);
}

TEST_CASE("json round trip is byte stable") {
    for (const std::string& name : {"permissive", "sird-baseline", "all-follower"}) {
        Scenario s = builtin_scenario(name);
        std::string text = scenario_to_json_text(s);
        Scenario reloaded = scenario_from_json_text(text, "round-trip");
        CHECK(scenario_to_json_text(reloaded) == text);
        CHECK(reloaded.n_groups() == s.n_groups());
        CHECK(reloaded.variant == s.variant);
        for (int k = 0; k < s.n_groups(); ++k) {
            CHECK(reloaded.groups[k].id.label == s.groups[k].id.label);
            CHECK(reloaded.groups[k].proportion ==
                  doctest::Approx(s.groups[k].proportion).epsilon(1e-15));
            CHECK(reloaded.groups[k].epi.beta == s.groups[k].epi.beta);
            CHECK(reloaded.groups[k].cost.c_nu == s.groups[k].cost.c_nu);
        }
    }
}

TEST_CASE("json loader accepts the tiny config") {
    Scenario s = scenario_from_json_text(kTinyConfig, "tiny");
    CHECK(s.name == "tiny");
    CHECK(s.n_groups() == 2);
    CHECK(s.groups[1].kind == AuthorityKind::Indifferent);
    CHECK(s.contacts(0, 1) == 0.9);
    CHECK(s.grid().n_steps == 1000);
}

TEST_CASE("json loader is fail-closed on unknown keys") {
    std::string bad = patched(kTinyConfig, "\"variant\": \"sir\"",
                              "\"variant\": \"sir\", \"typo_key\": 1");
    CHECK_THROWS_WITH_AS(scenario_from_json_text(bad, "t"),
                         doctest::Contains("unknown key 'typo_key'"), ConfigError);

    std::string bad_group = patched(kTinyConfig, "\"kind\": \"follower\"",
                                    "\"kind\": \"follower\", \"extra\": true");
    CHECK_THROWS_WITH_AS(scenario_from_json_text(bad_group, "t"),
                         doctest::Contains("unknown key 'extra'"), ConfigError);
}

TEST_CASE("json loader validates content") {
    SUBCASE("proportions must sum to one") {
        std::string bad = patched(kTinyConfig, "\"proportion\": 0.5", "\"proportion\": 0.3");
        CHECK_THROWS_WITH_AS(scenario_from_json_text(bad, "t"),
                             doctest::Contains("proportion"), ConfigError);
    }
    SUBCASE("asymmetric contacts are rejected") {
        std::string bad = patched(kTinyConfig, "[[1.0, 0.9], [0.9, 1.0]]",
                                  "[[1.0, 0.9], [0.8, 1.0]]");
        CHECK_THROWS_AS(scenario_from_json_text(bad, "t"), ConfigError);
    }
    SUBCASE("negative rates are rejected") {
        std::string bad = patched(kTinyConfig, "\"beta\": 0.4", "\"beta\": -0.4");
        CHECK_THROWS_AS(scenario_from_json_text(bad, "t"), ConfigError);
    }
    SUBCASE("bad initial mass is rejected") {
        std::string bad = patched(kTinyConfig, "{\"S\": 0.99, \"I\": 0.01}, ",
                                  "{\"S\": 0.5, \"I\": 0.01}, ");
        CHECK_THROWS_AS(scenario_from_json_text(bad, "t"), ConfigError);
    }
    SUBCASE("grid must divide evenly") {
        std::string bad = patched(kTinyConfig, "\"dt\": 0.1", "\"dt\": 0.3");
        CHECK_THROWS_AS(scenario_from_json_text(bad, "t"), ConfigError);
    }
}

TEST_CASE("grid overrides reshape the node count") {
    std::string text = patched(kTinyConfig, "\"horizon\": 100.0, \"dt\": 0.1",
                               "\"horizon\": 60.0, \"dt\": 0.05");
    Scenario s = scenario_from_json_text(text, "t");
    CHECK(s.grid().n_steps == 1200);
    CHECK(s.grid().n_nodes() == 1201);
}

TEST_CASE("time-varying guideline breakpoints are right-continuous") {
    std::string text = patched(kTinyConfig, "{\"S\": 0.9, \"I\": 0.9, \"R\": 0.9}",
                               "{\"S\": [[0.0, 0.9], [30.0, 0.6]], \"I\": 0.9, \"R\": 0.9}");
    Scenario s = scenario_from_json_text(text, "t");
    CHECK(s.policy(29.999, 0, Compartment::S) == 0.9);
    CHECK(s.policy(30.0, 0, Compartment::S) == 0.6);
    CHECK(s.policy(99.0, 0, Compartment::S) == 0.6);
}

TEST_CASE("file loading and path resolution") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "mfgepi-scenario-test";
    fs::create_directories(dir);
    fs::path file = dir / "tiny.json";
    {
        std::ofstream out(file);
        out << kTinyConfig;
    }
    Scenario from_file = load_scenario(file.string());
    CHECK(from_file.name == "tiny");

    Scenario by_name = resolve_scenario("permissive");
    CHECK(by_name.name == "permissive");
    Scenario by_path = resolve_scenario(file.string());
    CHECK(by_path.name == "tiny");
    CHECK_THROWS_AS(resolve_scenario("no-such-scenario"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("group labels must be unique and resolvable") {
    Scenario s = builtin_scenario("permissive");
    CHECK(s.group_index("HF") == 4);
    CHECK_THROWS_AS(s.group_index("ZZ"), ConfigError);

    std::string bad = patched(kTinyConfig, "\"label\": \"B\"", "\"label\": \"A\"");
    CHECK_THROWS_AS(scenario_from_json_text(bad, "t"), ConfigError);
}
