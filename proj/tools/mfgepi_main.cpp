#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfgepi/metrics.hpp"
#include "mfgepi/output.hpp"
#include "mfgepi/scenario.hpp"
#include "mfgepi/solver.hpp"
#include "mfgepi/validator.hpp"

namespace fs = std::filesystem;
using namespace mfgepi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitValidationFailed = 3;

struct Overrides {
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<double> epsilon;
    std::optional<double> damping;
    std::optional<double> patch;
    std::string integrator;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--dt", ov.dt, "Time step override");
    cmd->add_option("--horizon", ov.horizon, "Horizon override");
    cmd->add_option("--epsilon", ov.epsilon, "Fixed-point tolerance override");
    cmd->add_option("--damping", ov.damping, "Fixed-point damping override");
    cmd->add_option("--patch", ov.patch, "Patch length; enables the patched solver");
    cmd->add_option("--integrator", ov.integrator, "Integrator: euler or rk4")
        ->check(CLI::IsMember({"euler", "rk4"}));
}

void apply_overrides(Scenario& scenario, const Overrides& ov) {
    if (ov.dt || ov.horizon)
        scenario.solver.grid = TimeGrid(ov.horizon.value_or(scenario.solver.grid.horizon),
                                        ov.dt.value_or(scenario.solver.grid.dt));
    if (ov.epsilon) scenario.solver.epsilon = *ov.epsilon;
    if (ov.damping) scenario.solver.damping = *ov.damping;
    if (ov.patch) scenario.solver.patch_length = *ov.patch;
    if (ov.integrator == "euler") scenario.solver.integrator = Integrator::ExplicitEuler;
    if (ov.integrator == "rk4") scenario.solver.integrator = Integrator::RK4;
    scenario.solver.validate();
}

int thread_cap() {
    const char* env = std::getenv("MFG_EPI_THREADS");
    if (!env || !*env) return 0;
    int v = std::atoi(env);
    return v > 0 ? v : 1;
}

std::string quote_if_needed(const std::string& arg) {
    if (arg.find_first_of(" \t\"") == std::string::npos) return arg;
    std::string quoted = "\"";
    for (char c : arg) {
        if (c == '"') quoted += '\\';
        quoted += c;
    }
    return quoted + "\"";
}

std::string joined_command_line(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i) line += ' ';
        line += quote_if_needed(argv[i]);
    }
    return line;
}

fs::path output_dir(const std::string& out, const std::string& fallback_name) {
    if (!out.empty()) return fs::path(out);
    return fs::path("out") / fallback_name;
}

int finish_solution(const EquilibriumSolution& solution, bool allow_nonconverged,
                    const std::string& what) {
    if (solution.converged) return kExitOk;
    std::fprintf(stderr, "%s did not converge after %d iterations%s%s\n", what.c_str(),
                 solution.iterations, solution.note.empty() ? "" : ": ",
                 solution.note.c_str());
    return allow_nonconverged ? kExitOk : kExitNotConverged;
}

int cmd_run(const std::string& ref, const Overrides& ov, const std::string& out,
            bool allow_nonconverged, const std::string& command_line) {
    Scenario scenario = resolve_scenario(ref);
    apply_overrides(scenario, ov);
    EquilibriumSolution solution = solve(scenario);

    fs::path dir = output_dir(out, scenario.name);
    write_run_artifacts(dir, scenario, solution, command_line);
    std::printf("%s: %s in %d iterations, artifacts in %s\n", scenario.name.c_str(),
                solution.converged ? "converged" : "NOT converged", solution.iterations,
                dir.string().c_str());
    return finish_solution(solution, allow_nonconverged, "scenario " + scenario.name);
}

int cmd_compare(const std::string& ref, const Overrides& ov, const std::string& out,
                bool allow_nonconverged, const std::string& command_line) {
    ScenarioPair pair = builtin_pair(ref);
    apply_overrides(pair.baseline, ov);
    apply_overrides(pair.treatment, ov);

    EquilibriumSolution base_solution, treat_solution;
    int cap = thread_cap();
    if (cap == 1) {
        base_solution = solve(pair.baseline);
        treat_solution = solve(pair.treatment);
    } else {
        auto base_future = std::async(std::launch::async,
                                      [&pair] { return solve(pair.baseline); });
        treat_solution = solve(pair.treatment);
        base_solution = base_future.get();
    }

    fs::path dir = output_dir(out, pair.name);
    write_comparison_artifacts(dir, pair, base_solution, treat_solution, command_line);
    std::printf("%s: baseline %s (%d iters), treatment %s (%d iters), artifacts in %s\n",
                pair.name.c_str(), base_solution.converged ? "converged" : "NOT converged",
                base_solution.iterations,
                treat_solution.converged ? "converged" : "NOT converged",
                treat_solution.iterations, dir.string().c_str());

    int rc = finish_solution(base_solution, allow_nonconverged, "baseline " + pair.baseline.name);
    if (rc != kExitOk) return rc;
    return finish_solution(treat_solution, allow_nonconverged,
                           "treatment " + pair.treatment.name);
}

int cmd_validate(const std::string& ref, const Overrides& ov, const std::string& out,
                 int agents, int replicas, std::uint64_t seed, bool allow_nonconverged,
                 bool inject_perturbation, const std::string& command_line) {
    Scenario scenario = resolve_scenario(ref);
    apply_overrides(scenario, ov);
    EquilibriumSolution solution = solve(scenario);
    if (!solution.converged) {
        int rc = finish_solution(solution, allow_nonconverged, "scenario " + scenario.name);
        if (rc != kExitOk) return rc;
    }

    if (inject_perturbation) {
        // test hook: break the equilibrium controls so the checks must fail
        for (int node = 0; node < solution.grid.n_nodes(); ++node)
            for (int k = 0; k < scenario.n_groups(); ++k) {
                double& a = solution.controls.socialization(node, k, Compartment::S);
                a = std::clamp(a + 0.1, 0.0, 1.0);
            }
    }

    StationarityReport stationarity = stationarity_check(solution, scenario);

    std::vector<double> oracle_gaps;
    for (int k = 0; k < scenario.n_groups(); ++k) {
        ControlPath oracle = best_response_oracle(solution.aggregates, k, scenario);
        double gap = 0.0;
        for (int node = 0; node < solution.grid.n_nodes(); ++node) {
            for (Compartment e : {Compartment::S, Compartment::I, Compartment::R})
                gap = std::max(gap, std::abs(oracle.socialization(node, 0, e) -
                                             solution.controls.socialization(node, k, e)));
            gap = std::max(gap, std::abs(oracle.vaccination(node, 0) -
                                         solution.controls.vaccination(node, k)));
        }
        oracle_gaps.push_back(gap);
    }

    SimReport sim =
        simulate_finite_n(solution, scenario, agents, replicas, seed, thread_cap());

    ValidationThresholds thresholds;
    nlohmann::json report =
        validation_report(scenario, solution, stationarity, oracle_gaps, sim, thresholds);
    report["command_line"] = command_line;

    fs::path dir = output_dir(out, scenario.name);
    fs::create_directories(dir);
    write_text_file(dir / "simulation.csv", sim_report_csv(scenario, sim));
    write_text_file(dir / "validation.json", report.dump(2) + "\n");

    for (const auto& check : report["checks"])
        std::printf("%-20s %s\n", check["name"].get<std::string>().c_str(),
                    check["passed"].get<bool>() ? "PASS" : "FAIL");
    bool passed = report["passed"].get<bool>();
    std::printf("validation %s, report in %s\n", passed ? "passed" : "FAILED",
                (dir / "validation.json").string().c_str());
    return passed ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean field game solver for epidemic behavior scenarios"};
    app.require_subcommand(1);

    std::string scenario_ref, pair_ref, out;
    bool allow_nonconverged = false, inject_perturbation = false;
    int agents = 10000, replicas = 50;
    std::uint64_t seed = 1234;
    Overrides run_ov, compare_ov, validate_ov;

    CLI::App* run = app.add_subcommand("run", "Solve one scenario and write artifacts");
    run->add_option("--scenario", scenario_ref, "Catalog name or JSON file path")->required();
    run->add_option("--out", out, "Output directory (default out/<name>)");
    add_override_flags(run, run_ov);
    run->add_flag("--allow-nonconverged", allow_nonconverged,
                  "Exit 0 even when the solver does not converge");

    CLI::App* compare = app.add_subcommand("compare", "Solve a baseline/treatment pair");
    compare->add_option("--pair", pair_ref, "Catalog pair name")->required();
    compare->add_option("--out", out, "Output directory (default out/<name>)");
    add_override_flags(compare, compare_ov);
    compare->add_flag("--allow-nonconverged", allow_nonconverged,
                      "Exit 0 even when a solve does not converge");

    CLI::App* validate = app.add_subcommand("validate", "Solve and cross-check one scenario");
    validate->add_option("--scenario", scenario_ref, "Catalog name or JSON file path")
        ->required();
    validate->add_option("--out", out, "Output directory (default out/<name>)");
    validate->add_option("--agents", agents, "Finite population size")
        ->check(CLI::PositiveNumber);
    validate->add_option("--replicas", replicas, "Monte Carlo replicas")
        ->check(CLI::PositiveNumber);
    validate->add_option("--seed", seed, "Simulation seed");
    add_override_flags(validate, validate_ov);
    validate->add_flag("--allow-nonconverged", allow_nonconverged,
                       "Validate even when the solver does not converge");
    validate
        ->add_flag("--inject-control-perturbation", inject_perturbation,
                   "Perturb equilibrium controls before checking (must fail)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    std::string command_line = joined_command_line(argc, argv);
    try {
        if (run->parsed())
            return cmd_run(scenario_ref, run_ov, out, allow_nonconverged, command_line);
        if (compare->parsed())
            return cmd_compare(pair_ref, compare_ov, out, allow_nonconverged, command_line);
        if (validate->parsed())
            return cmd_validate(scenario_ref, validate_ov, out, agents, replicas, seed,
                                allow_nonconverged, inject_perturbation, command_line);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
