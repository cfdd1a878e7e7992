#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfgepi/scenario.hpp"
#include "mfgepi/solver.hpp"
#include "mfgepi/validator.hpp"

namespace mfgepi {

// Fixed 9-significant-digit decimal rendering used by every emitted file, so
// repeated runs produce byte-identical artifacts.
std::string format_number(double v);

std::string sha256_hex(std::string_view data);
std::string iso8601_utc_now();

void write_text_file(const std::filesystem::path& path, const std::string& content);

// trajectories.csv: one row per (node, group, live compartment) with the
// distribution, value and group-level controls and exposure. D rows only for
// the SIRD variant; proportions are clamped onto [0, 1].
std::string trajectories_csv(const Scenario& scenario, const EquilibriumSolution& solution);

// simulation.csv: long format, one row per (node, group, series); the series
// are the replica-averaged compartment proportions (avg_S, ...) followed by
// every replica's infected path (rep001_I, ...).
std::string sim_report_csv(const Scenario& scenario, const SimReport& sim);

nlohmann::json run_metrics(const Scenario& scenario, const EquilibriumSolution& solution);
nlohmann::json run_manifest(const Scenario& scenario, const EquilibriumSolution& solution,
                            const std::string& command_line,
                            const std::vector<std::string>& outputs);
nlohmann::json comparison_report(const ScenarioPair& pair, const EquilibriumSolution& baseline,
                                 const EquilibriumSolution& treatment);

struct ValidationThresholds {
    double stationarity = 1e-4;
    double oracle_gap = 0.005 + 1e-9;
    double sim_deviation = 0.02;
};

nlohmann::json validation_report(const Scenario& scenario, const EquilibriumSolution& solution,
                                 const StationarityReport& stationarity,
                                 const std::vector<double>& oracle_gaps, const SimReport& sim,
                                 const ValidationThresholds& thresholds);

struct PlotSeries {
    std::string label;
    std::vector<double> ys;
    std::string color;
    std::string dash;  // SVG stroke-dasharray, empty for solid
};

std::string line_plot_svg(const std::string& title, const std::string& y_label, double dt,
                          const std::vector<PlotSeries>& series);

// Emits trajectories.csv, metrics.json, manifest.json and the per-quantity
// SVG plots; returns the list of files written (relative names).
std::vector<std::string> write_run_artifacts(const std::filesystem::path& out_dir,
                                             const Scenario& scenario,
                                             const EquilibriumSolution& solution,
                                             const std::string& command_line);

std::vector<std::string> write_comparison_artifacts(const std::filesystem::path& out_dir,
                                                    const ScenarioPair& pair,
                                                    const EquilibriumSolution& baseline,
                                                    const EquilibriumSolution& treatment,
                                                    const std::string& command_line);

}  // namespace mfgepi
