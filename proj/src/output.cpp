#include "mfgepi/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "mfgepi/metrics.hpp"

namespace mfgepi {

using nlohmann::json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

// FIPS 180-4 SHA-256, enough for content-addressing the resolved config.
struct Sha256 {
    static constexpr std::uint32_t kRound[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};

    std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                          0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const unsigned char* p) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
        std::uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + s1 + ch + kRound[i] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
};

}  // namespace

std::string sha256_hex(std::string_view data) {
    Sha256 state;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    size_t n = data.size();
    size_t full = n / 64;
    for (size_t i = 0; i < full; ++i) state.block(bytes + 64 * i);

    unsigned char tail[128] = {0};
    size_t rest = n - 64 * full;
    std::memcpy(tail, bytes + 64 * full, rest);
    tail[rest] = 0x80;
    size_t tail_len = rest + 1 <= 56 ? 64 : 128;
    std::uint64_t bits = std::uint64_t(n) * 8;
    for (int i = 0; i < 8; ++i)
        tail[tail_len - 1 - i] = static_cast<unsigned char>(bits >> (8 * i));
    state.block(tail);
    if (tail_len == 128) state.block(tail + 64);

    char out[65];
    for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", state.h[i]);
    return std::string(out, 64);
}

std::string iso8601_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file " + path.string());
    out << content;
}

std::string trajectories_csv(const Scenario& scenario, const EquilibriumSolution& solution) {
    std::ostringstream csv;
    csv << "t,group,compartment,p,u,alpha_S,alpha_I,alpha_R,nu,Z\n";
    const int live = compartment_count(scenario.variant);
    for (int node = 0; node < solution.grid.n_nodes(); ++node) {
        std::string t = format_number(solution.grid.time(node));
        for (int k = 0; k < scenario.n_groups(); ++k) {
            std::string shared;
            {
                std::ostringstream row;
                row << format_number(
                           solution.controls.socialization(node, k, Compartment::S))
                    << ',' << format_number(
                                  solution.controls.socialization(node, k, Compartment::I))
                    << ',' << format_number(
                                  solution.controls.socialization(node, k, Compartment::R))
                    << ',' << format_number(solution.controls.vaccination(node, k)) << ','
                    << format_number(solution.aggregates(node, k));
                shared = row.str();
            }
            for (int e = 0; e < live; ++e) {
                double p = std::clamp(solution.distributions.at_raw(node, k, e), 0.0, 1.0);
                csv << t << ',' << scenario.groups[k].id.label << ','
                    << compartment_name(static_cast<Compartment>(e)) << ',' << format_number(p)
                    << ',' << format_number(solution.values.at_raw(node, k, e)) << ',' << shared
                    << '\n';
            }
        }
    }
    return csv.str();
}

std::string sim_report_csv(const Scenario& scenario, const SimReport& sim) {
    const TimeGrid& grid = scenario.grid();
    const int live = compartment_count(scenario.variant);
    if (sim.averaged.size() != static_cast<size_t>(scenario.n_groups()) || sim.averaged.empty() ||
        sim.averaged[0][0].size() != static_cast<size_t>(grid.n_nodes()))
        throw std::invalid_argument("simulation paths do not match the scenario grid");

    std::ostringstream csv;
    csv << "t,group,series,proportion\n";
    for (int node = 0; node < grid.n_nodes(); ++node) {
        std::string t = format_number(grid.time(node));
        for (int k = 0; k < scenario.n_groups(); ++k) {
            const std::string& label = scenario.groups[k].id.label;
            for (int e = 0; e < live; ++e)
                csv << t << ',' << label << ",avg_"
                    << compartment_name(static_cast<Compartment>(e)) << ','
                    << format_number(sim.averaged[k][e][node]) << '\n';
            for (int r = 0; r < sim.n_replicas; ++r) {
                char series[16];
                std::snprintf(series, sizeof series, "rep%03d_I", r + 1);
                csv << t << ',' << label << ',' << series << ','
                    << format_number(sim.replica_infected[r][k][node]) << '\n';
            }
        }
    }
    return csv.str();
}

namespace {

json group_peaks(const EquilibriumSolution& solution, int group) {
    json out;
    const Quantity quantities[3] = {Quantity::InfectedProportion, Quantity::SocializationS,
                                    Quantity::Vaccination};
    for (Quantity q : quantities) {
        auto series = quantity_series(solution, group, q);
        PeakInfo peak = peak_of(series, q);
        out[quantity_name(q)] = {{"peak", peak.value},
                                 {"time", solution.grid.time(peak.node)}};
    }
    return out;
}

json disparities(const EquilibriumSolution& solution) {
    json out;
    const Quantity quantities[3] = {Quantity::InfectedProportion, Quantity::SocializationS,
                                    Quantity::Vaccination};
    for (Quantity q : quantities) {
        json per;
        for (int k = 0; k < solution.n_groups(); ++k)
            for (int l = 0; l < solution.n_groups(); ++l) {
                if (k == l) continue;
                per[solution.group_labels[k] + "-" + solution.group_labels[l]] =
                    group_disparity(solution, k, l, q);
            }
        out[quantity_name(q)] = per;
    }
    return out;
}

}  // namespace

json run_metrics(const Scenario& scenario, const EquilibriumSolution& solution) {
    json doc;
    doc["scenario"] = scenario.name;
    doc["variant"] = variant_name(scenario.variant);
    doc["converged"] = solution.converged;
    doc["iterations"] = solution.iterations;
    doc["clip_events"] = solution.clip_events;
    doc["max_simplex_drift"] = solution.max_simplex_drift;
    doc["peak_time_span"] = {
        {"infected", peak_time_span(solution, Quantity::InfectedProportion)}};
    json groups;
    for (int k = 0; k < solution.n_groups(); ++k)
        groups[solution.group_labels[k]] = group_peaks(solution, k);
    doc["groups"] = groups;
    doc["disparities"] = disparities(solution);
    return doc;
}

json run_manifest(const Scenario& scenario, const EquilibriumSolution& solution,
                  const std::string& command_line, const std::vector<std::string>& outputs) {
    std::string config = scenario_to_json_text(scenario);
    json doc;
    doc["command_line"] = command_line;
    doc["created_utc"] = iso8601_utc_now();
    doc["config_hash"] = "sha256:" + sha256_hex(config);
    doc["scenario"] = json::parse(config);
    doc["solver_outcome"] = {{"converged", solution.converged},
                             {"iterations", solution.iterations},
                             {"clip_events", solution.clip_events},
                             {"max_simplex_drift", solution.max_simplex_drift},
                             {"note", solution.note}};
    if (!solution.residual_history.empty()) {
        auto [dp, du] = solution.residual_history.back();
        doc["solver_outcome"]["final_residuals"] = {{"distribution", dp}, {"value", du}};
    }
    doc["outputs"] = outputs;
    return doc;
}

json comparison_report(const ScenarioPair& pair, const EquilibriumSolution& baseline,
                       const EquilibriumSolution& treatment) {
    json doc;
    doc["pair"] = pair.name;
    doc["baseline"] = run_metrics(pair.baseline, baseline);
    doc["treatment"] = run_metrics(pair.treatment, treatment);
    json map = json::array();
    for (const auto& [b, t] : pair.group_map) map.push_back({b, t});
    doc["group_map"] = map;

    const Quantity quantities[3] = {Quantity::InfectedProportion, Quantity::SocializationS,
                                    Quantity::Vaccination};
    json diffs;
    for (Quantity q : quantities) {
        json per;
        for (const auto& [bl, tl] : pair.group_map) {
            auto a = quantity_series(baseline, pair.baseline.group_index(bl), q);
            auto b = quantity_series(treatment, pair.treatment.group_index(tl), q);
            per[bl] = peak_difference(a, b, q);
        }
        diffs[quantity_name(q)] = per;
    }
    doc["peak_differences"] = diffs;
    doc["peak_time_span"] = {
        {"baseline", peak_time_span(baseline, Quantity::InfectedProportion)},
        {"treatment", peak_time_span(treatment, Quantity::InfectedProportion)}};
    return doc;
}

json validation_report(const Scenario& scenario, const EquilibriumSolution& solution,
                       const StationarityReport& stationarity,
                       const std::vector<double>& oracle_gaps, const SimReport& sim,
                       const ValidationThresholds& thresholds) {
    json doc;
    doc["scenario"] = scenario.name;
    doc["converged"] = solution.converged;
    doc["seed"] = sim.seed;
    doc["agents"] = sim.n_agents;
    doc["replicas"] = sim.n_replicas;
    doc["rng"] = {{"algorithm", sim.rng_algorithm}, {"streams", sim.rng_streams}};
    doc["group_sizes"] = sim.group_sizes;

    json checks = json::array();
    bool all_passed = true;

    bool st_ok = stationarity.max_interior_residual < thresholds.stationarity &&
                 stationarity.max_boundary_violation < thresholds.stationarity;
    checks.push_back({{"name", "stationarity"},
                      {"passed", st_ok},
                      {"threshold", thresholds.stationarity},
                      {"max_interior_residual", stationarity.max_interior_residual},
                      {"max_boundary_violation", stationarity.max_boundary_violation},
                      {"interior_evaluations", stationarity.interior_evaluations},
                      {"boundary_evaluations", stationarity.boundary_evaluations}});
    all_passed = all_passed && st_ok;

    double max_gap = oracle_gaps.empty() ? 0.0
                                         : *std::max_element(oracle_gaps.begin(),
                                                             oracle_gaps.end());
    bool oracle_ok = max_gap <= thresholds.oracle_gap;
    json per_group;
    for (size_t k = 0; k < oracle_gaps.size(); ++k)
        per_group[scenario.groups[k].id.label] = oracle_gaps[k];
    checks.push_back({{"name", "best_response_oracle"},
                      {"passed", oracle_ok},
                      {"threshold", thresholds.oracle_gap},
                      {"max_gap", max_gap},
                      {"per_group", per_group}});
    all_passed = all_passed && oracle_ok;

    bool sim_ok = sim.sup_deviation < thresholds.sim_deviation;
    checks.push_back({{"name", "finite_population"},
                      {"passed", sim_ok},
                      {"threshold", thresholds.sim_deviation},
                      {"sup_deviation", sim.sup_deviation},
                      {"replica_sup_deviation", sim.replica_sup_deviation},
                      {"total_events", sim.total_events},
                      {"thinning_rejections", sim.thinning_rejections},
                      {"majorant_violations", sim.majorant_violations}});
    all_passed = all_passed && sim_ok;

    doc["checks"] = checks;
    doc["passed"] = all_passed;
    return doc;
}

namespace {

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                           "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& y_label, double dt,
                          const std::vector<PlotSeries>& series) {
    const double width = 760, height = 460;
    const double left = 70, right = 600, top = 44, bottom = 410;

    double y_min = 0.0, y_max = -1e300;
    double x_max = 0.0;
    for (const auto& s : series) {
        x_max = std::max(x_max, dt * (static_cast<double>(s.ys.size()) - 1.0));
        for (double v : s.ys) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (y_max <= y_min) y_max = y_min + 1.0;
    double pad = 0.05 * (y_max - y_min);
    y_max += pad;
    if (y_min < 0.0) y_min -= pad;

    auto x_px = [&](double t) { return left + (right - left) * (x_max > 0 ? t / x_max : 0.0); };
    auto y_px = [&](double v) {
        return bottom - (bottom - top) * (v - y_min) / (y_max - y_min);
    };
    auto px = [](double v) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (left + (right - left) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    for (int i = 0; i <= 5; ++i) {
        double frac = i / 5.0;
        double tx = frac * x_max;
        double ty = y_min + frac * (y_max - y_min);
        svg << "<line x1=\"" << px(x_px(tx)) << "\" y1=\"" << px(bottom) << "\" x2=\""
            << px(x_px(tx)) << "\" y2=\"" << px(bottom + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(x_px(tx)) << "\" y=\"" << px(bottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(tx) << "</text>\n";
        svg << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(y_px(ty)) << "\" x2=\""
            << px(left) << "\" y2=\"" << px(y_px(ty)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(left - 9) << "\" y=\"" << px(y_px(ty) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(ty) << "</text>\n";
    }
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left)
        << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(right)
        << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (left + (right - left) / 2) << "\" y=\"" << (bottom + 40)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">time</text>\n";
    svg << "<text x=\"20\" y=\"" << (top + (bottom - top) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << (top + (bottom - top) / 2) << ")\">" << y_label
        << "</text>\n";

    for (const auto& s : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
        if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << "\"";
        svg << " points=\"";
        for (size_t i = 0; i < s.ys.size(); ++i) {
            if (i) svg << ' ';
            svg << px(x_px(dt * static_cast<double>(i))) << ',' << px(y_px(s.ys[i]));
        }
        svg << "\"/>\n";
    }

    double ly = top + 8;
    for (const auto& s : series) {
        svg << "<line x1=\"" << px(right + 18) << "\" y1=\"" << px(ly) << "\" x2=\""
            << px(right + 52) << "\" y2=\"" << px(ly) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.6\"";
        if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << "\"";
        svg << "/>\n";
        svg << "<text x=\"" << px(right + 58) << "\" y=\"" << px(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        ly += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

std::string solid_or_dotted(AuthorityKind kind) {
    return kind == AuthorityKind::Follower ? "" : "2,3";
}

std::string dashed_variant(AuthorityKind kind) {
    return kind == AuthorityKind::Follower ? "8,4" : "8,3,2,3";
}

struct QuantityPlot {
    std::string file;
    std::string title;
    std::string y_label;
};

std::vector<double> plot_series(const EquilibriumSolution& sol, int k, const std::string& file) {
    if (file == "socialization_S.svg") return quantity_series(sol, k, Quantity::SocializationS);
    if (file == "vaccination.svg") return quantity_series(sol, k, Quantity::Vaccination);
    Compartment e = Compartment::S;
    if (file == "proportion_I.svg") e = Compartment::I;
    if (file == "proportion_R.svg") e = Compartment::R;
    if (file == "proportion_D.svg") e = Compartment::D;
    std::vector<double> ys(sol.grid.n_nodes());
    for (int node = 0; node < sol.grid.n_nodes(); ++node)
        ys[node] = std::clamp(sol.distributions(node, k, e), 0.0, 1.0);
    return ys;
}

std::vector<QuantityPlot> plot_set(Variant variant) {
    std::vector<QuantityPlot> plots = {
        {"proportion_S.svg", "Susceptible proportion", "p(S)"},
        {"proportion_I.svg", "Infected proportion", "p(I)"},
        {"proportion_R.svg", "Recovered proportion", "p(R)"},
        {"socialization_S.svg", "Susceptible socialization", "alpha(S)"},
        {"vaccination.svg", "Vaccination effort", "nu"},
    };
    if (variant == Variant::SIRD)
        plots.insert(plots.begin() + 3, {"proportion_D.svg", "Dead proportion", "p(D)"});
    return plots;
}

}  // namespace

std::vector<std::string> write_run_artifacts(const std::filesystem::path& out_dir,
                                             const Scenario& scenario,
                                             const EquilibriumSolution& solution,
                                             const std::string& command_line) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> outputs;

    write_text_file(out_dir / "trajectories.csv", trajectories_csv(scenario, solution));
    outputs.push_back("trajectories.csv");
    write_text_file(out_dir / "metrics.json", run_metrics(scenario, solution).dump(2) + "\n");
    outputs.push_back("metrics.json");

    for (const auto& plot : plot_set(scenario.variant)) {
        std::vector<PlotSeries> series;
        for (int k = 0; k < scenario.n_groups(); ++k)
            series.push_back({scenario.groups[k].id.label,
                              plot_series(solution, k, plot.file), kPalette[k % 8],
                              solid_or_dotted(scenario.groups[k].kind)});
        write_text_file(out_dir / plot.file,
                        line_plot_svg(plot.title + " (" + scenario.name + ")", plot.y_label,
                                      solution.grid.dt, series));
        outputs.push_back(plot.file);
    }

    outputs.push_back("manifest.json");
    write_text_file(out_dir / "manifest.json",
                    run_manifest(scenario, solution, command_line, outputs).dump(2) + "\n");
    return outputs;
}

std::vector<std::string> write_comparison_artifacts(const std::filesystem::path& out_dir,
                                                    const ScenarioPair& pair,
                                                    const EquilibriumSolution& baseline,
                                                    const EquilibriumSolution& treatment,
                                                    const std::string& command_line) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> outputs;

    write_text_file(out_dir / "comparison.json",
                    comparison_report(pair, baseline, treatment).dump(2) + "\n");
    outputs.push_back("comparison.json");

    Variant variant = pair.baseline.variant == Variant::SIRD || pair.treatment.variant == Variant::SIRD
                          ? Variant::SIRD
                          : Variant::SIR;
    for (const auto& plot : plot_set(variant)) {
        std::vector<PlotSeries> series;
        for (int k = 0; k < pair.baseline.n_groups(); ++k)
            series.push_back({pair.baseline.groups[k].id.label,
                              plot_series(baseline, k, plot.file), kPalette[k % 8],
                              solid_or_dotted(pair.baseline.groups[k].kind)});
        for (int k = 0; k < pair.treatment.n_groups(); ++k) {
            // keep the color of the mapped baseline group where a mapping exists
            int color_index = k;
            for (const auto& [bl, tl] : pair.group_map)
                if (tl == pair.treatment.groups[k].id.label)
                    color_index = pair.baseline.group_index(bl);
            series.push_back({pair.treatment.groups[k].id.label + " (alt)",
                              plot_series(treatment, k, plot.file), kPalette[color_index % 8],
                              dashed_variant(pair.treatment.groups[k].kind)});
        }
        write_text_file(out_dir / plot.file,
                        line_plot_svg(plot.title + " (" + pair.name + ")", plot.y_label,
                                      baseline.grid.dt, series));
        outputs.push_back(plot.file);
    }

    json manifest;
    manifest["command_line"] = command_line;
    manifest["created_utc"] = iso8601_utc_now();
    std::string base_cfg = scenario_to_json_text(pair.baseline);
    std::string treat_cfg = scenario_to_json_text(pair.treatment);
    manifest["pair"] = pair.name;
    manifest["baseline_config_hash"] = "sha256:" + sha256_hex(base_cfg);
    manifest["treatment_config_hash"] = "sha256:" + sha256_hex(treat_cfg);
    manifest["baseline_scenario"] = json::parse(base_cfg);
    manifest["treatment_scenario"] = json::parse(treat_cfg);
    manifest["solver_outcome"] = {
        {"baseline", {{"converged", baseline.converged}, {"iterations", baseline.iterations}}},
        {"treatment",
         {{"converged", treatment.converged}, {"iterations", treatment.iterations}}}};
    outputs.push_back("manifest.json");
    manifest["outputs"] = outputs;
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return outputs;
}

}  // namespace mfgepi
