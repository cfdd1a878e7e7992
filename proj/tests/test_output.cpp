#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mfgepi/metrics.hpp"
#include "mfgepi/output.hpp"
#include "mfgepi/scenario.hpp"
#include "mfgepi/solver.hpp"

using namespace mfgepi;
namespace fs = std::filesystem;

namespace {

Scenario short_scenario(const std::string& name) {
    Scenario s = builtin_scenario(name);
    s.solver.grid = TimeGrid(20.0, 0.1);
    s.validate_and_normalize();
    return s;
}

const EquilibriumSolution& cached_solution() {
    static Scenario s = short_scenario("permissive");
    static EquilibriumSolution sol = solve(s);
    return sol;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

size_t count_lines(const std::string& text) {
    size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("sha256 matches published vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // block-boundary padding: 64 a's need a second padding block
    CHECK(sha256_hex(std::string(64, 'a')) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST_CASE("number rendering is stable and compact") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(0.123456789123) == "0.123456789");
    CHECK(format_number(-3.25e-7) == "-3.25e-07");
    CHECK(format_number(100.0) == "100");
}

TEST_CASE("trajectory table layout") {
    Scenario s = short_scenario("permissive");
    const EquilibriumSolution& sol = cached_solution();
    std::string csv = trajectories_csv(s, sol);

    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,group,compartment,p,u,alpha_S,alpha_I,alpha_R,nu,Z");
    // 201 nodes x 6 groups x 3 live compartments
    CHECK(count_lines(csv) == 1 + 201u * 6u * 3u);

    std::string first;
    std::getline(in, first);
    CHECK(first.substr(0, 7) == "0,LF,S,");

    SUBCASE("emission is byte deterministic") {
        CHECK(trajectories_csv(s, sol) == csv);
    }
    SUBCASE("mortality rows appear only for the four-state variant") {
        CHECK(csv.find(",D,") == std::string::npos);
        Scenario sird = short_scenario("sird-baseline");
        EquilibriumSolution dsol = solve(sird);
        std::string dcsv = trajectories_csv(sird, dsol);
        CHECK(dcsv.find(",D,") != std::string::npos);
        CHECK(count_lines(dcsv) == 1 + 201u * 6u * 4u);
    }
}

TEST_CASE("simulation table carries averaged and per-replica paths") {
    Scenario s = short_scenario("permissive");
    const EquilibriumSolution& sol = cached_solution();
    SimReport sim = simulate_finite_n(sol, s, 300, 3, 5, 1);

    std::string csv = sim_report_csv(s, sim);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,group,series,proportion");
    // 201 nodes x 6 groups x (3 averaged compartments + 3 replica infected paths)
    CHECK(count_lines(csv) == 1 + 201u * 6u * 6u);

    std::string first;
    std::getline(in, first);
    CHECK(first == "0,LF,avg_S," + format_number(sim.averaged[0][0][0]));
    CHECK(csv.find(",rep003_I,") != std::string::npos);
    CHECK(csv.find(",rep004_I,") == std::string::npos);

    SUBCASE("emission is byte deterministic") {
        SimReport again = simulate_finite_n(sol, s, 300, 3, 5, 1);
        CHECK(sim_report_csv(s, again) == csv);
    }
    SUBCASE("paths off the scenario grid are rejected") {
        SimReport empty;
        CHECK_THROWS_AS(sim_report_csv(s, empty), std::invalid_argument);
    }
}

TEST_CASE("metrics document carries peaks and disparities") {
    Scenario s = short_scenario("permissive");
    const EquilibriumSolution& sol = cached_solution();
    nlohmann::json m = run_metrics(s, sol);

    CHECK(m["scenario"] == "permissive");
    CHECK(m["variant"] == "sir");
    CHECK(m["converged"] == true);
    CHECK(m["iterations"].get<int>() > 0);
    for (const auto& g : s.groups) {
        const auto& entry = m["groups"][g.id.label];
        double peak = entry["infected"]["peak"].get<double>();
        double t_peak = entry["infected"]["time"].get<double>();
        int node = static_cast<int>(std::lround(t_peak / sol.grid.dt));
        CHECK(peak == sol.distributions(node, g.id.index, Compartment::I));
        CHECK(entry["socialization"].contains("peak"));
        CHECK(entry["vaccination"].contains("peak"));
    }
    CHECK(m["disparities"]["infected"].contains("LI-HF"));
    double d = m["disparities"]["infected"]["LI-HF"].get<double>();
    CHECK(d == group_disparity(sol, s.group_index("LI"), s.group_index("HF"),
                               Quantity::InfectedProportion));
    CHECK(m["peak_time_span"]["infected"].get<double>() >= 0.0);
}

TEST_CASE("manifest records the content hash of the resolved scenario") {
    Scenario s = short_scenario("permissive");
    const EquilibriumSolution& sol = cached_solution();
    nlohmann::json man = run_manifest(s, sol, "mfgepi run --scenario permissive",
                                      {"trajectories.csv"});
    CHECK(man["command_line"] == "mfgepi run --scenario permissive");
    std::string expect = "sha256:" + sha256_hex(scenario_to_json_text(s));
    CHECK(man["config_hash"] == expect);
    CHECK(man["scenario"]["name"] == "permissive");
    CHECK(man["solver_outcome"]["converged"] == true);
    CHECK(man["outputs"][0] == "trajectories.csv");
    CHECK(man.contains("created_utc"));
}

TEST_CASE("validation report aggregates the three checks") {
    Scenario s = short_scenario("permissive");
    const EquilibriumSolution& sol = cached_solution();

    StationarityReport st;
    st.max_interior_residual = 1e-9;
    st.max_boundary_violation = 0.0;
    SimReport sim;
    sim.n_agents = 100;
    sim.n_replicas = 2;
    sim.sup_deviation = 0.01;
    sim.replica_sup_deviation = {0.01, 0.012};
    std::vector<double> gaps = {0.001, 0.002, 0.001, 0.001, 0.002, 0.001};

    ValidationThresholds th;
    nlohmann::json rep = validation_report(s, sol, st, gaps, sim, th);
    CHECK(rep["passed"] == true);
    REQUIRE(rep["checks"].size() == 3);
    for (const auto& c : rep["checks"]) CHECK(c["passed"] == true);
    CHECK(rep["checks"][2]["replica_sup_deviation"].size() == 2);

    SUBCASE("any failing check fails the report") {
        st.max_interior_residual = 0.5;
        nlohmann::json bad = validation_report(s, sol, st, gaps, sim, th);
        CHECK(bad["passed"] == false);
        bool found = false;
        for (const auto& c : bad["checks"])
            if (c["name"] == "stationarity") {
                CHECK(c["passed"] == false);
                found = true;
            }
        CHECK(found);
    }
    SUBCASE("oracle gaps above the grid resolution fail") {
        gaps[3] = 0.02;
        nlohmann::json bad = validation_report(s, sol, st, gaps, sim, th);
        CHECK(bad["passed"] == false);
    }
    SUBCASE("simulation drift above the band fails") {
        sim.sup_deviation = 0.19;
        nlohmann::json bad = validation_report(s, sol, st, gaps, sim, th);
        CHECK(bad["passed"] == false);
    }
}

TEST_CASE("svg plots are well formed") {
    std::vector<PlotSeries> series;
    series.push_back({"A", {0.1, 0.4, 0.2, 0.05}, "#336699", ""});
    series.push_back({"B", {0.0, 0.2, 0.3, 0.1}, "#993344", "8,4"});
    std::string svg = line_plot_svg("Infected proportion", "share of group", 0.5, series);
    CHECK(svg.substr(0, 4) == "<svg");
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("Infected proportion") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("stroke-dasharray=\"8,4\"") != std::string::npos);
    CHECK(svg.find(">A<") != std::string::npos);
    CHECK(svg.find(">B<") != std::string::npos);
}

TEST_CASE("run artifacts land on disk and are listed in the manifest") {
    Scenario s = short_scenario("permissive");
    const EquilibriumSolution& sol = cached_solution();
    fs::path dir = fs::temp_directory_path() / "mfgepi_test_out" / "run";
    fs::remove_all(dir);
    auto files = write_run_artifacts(dir, s, sol, "unit test");
    for (const auto& f : files) CHECK(fs::exists(dir / f));
    CHECK(fs::exists(dir / "trajectories.csv"));
    CHECK(fs::exists(dir / "metrics.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "proportion_I.svg"));
    CHECK(fs::exists(dir / "socialization_S.svg"));
    CHECK(fs::exists(dir / "vaccination.svg"));
    CHECK(!fs::exists(dir / "proportion_D.svg"));

    auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
    for (const auto& f : files)
        if (f != "manifest.json") {
            bool listed = false;
            for (const auto& o : man["outputs"]) listed = listed || o == f;
            CHECK(listed);
        }

    SUBCASE("a second run reproduces every data byte") {
        fs::path dir2 = fs::temp_directory_path() / "mfgepi_test_out" / "run2";
        fs::remove_all(dir2);
        write_run_artifacts(dir2, s, sol, "unit test");
        CHECK(slurp(dir / "trajectories.csv") == slurp(dir2 / "trajectories.csv"));
        CHECK(slurp(dir / "metrics.json") == slurp(dir2 / "metrics.json"));
        CHECK(slurp(dir / "proportion_I.svg") == slurp(dir2 / "proportion_I.svg"));
    }
}

TEST_CASE("comparison artifacts overlay the mapped groups") {
    ScenarioPair pair = builtin_pair("permissive-vs-strict");
    pair.baseline.solver.grid = TimeGrid(20.0, 0.1);
    pair.baseline.validate_and_normalize();
    pair.treatment.solver.grid = TimeGrid(20.0, 0.1);
    pair.treatment.validate_and_normalize();
    EquilibriumSolution base = solve(pair.baseline);
    EquilibriumSolution treat = solve(pair.treatment);
    REQUIRE(base.converged);
    REQUIRE(treat.converged);

    nlohmann::json rep = comparison_report(pair, base, treat);
    CHECK(rep["pair"] == "permissive-vs-strict");
    CHECK(rep["baseline"]["scenario"] == "permissive");
    CHECK(rep["treatment"]["scenario"] == "strict");
    CHECK(rep["peak_differences"]["infected"].contains("LF"));
    CHECK(rep["peak_time_span"]["baseline"].get<double>() >= 0.0);

    fs::path dir = fs::temp_directory_path() / "mfgepi_test_out" / "cmp";
    fs::remove_all(dir);
    auto files = write_comparison_artifacts(dir, pair, base, treat, "unit test");
    CHECK(fs::exists(dir / "comparison.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "proportion_I.svg"));
    std::string svg = slurp(dir / "proportion_I.svg");
    CHECK(svg.find("LF (alt)") != std::string::npos);
    for (const auto& f : files) CHECK(fs::exists(dir / f));
}
