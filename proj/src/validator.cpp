#include "mfgepi/validator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "mfgepi/model.hpp"
#include "mfgepi/rng.hpp"

namespace mfgepi {

std::vector<int> largest_remainder_allocation(const std::vector<double>& weights, int total) {
    const int n = static_cast<int>(weights.size());
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0)) throw std::invalid_argument("allocation weights must have positive sum");
    std::vector<int> counts(n, 0);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int i = 0; i < n; ++i) {
        double share = weights[i] / sum * total;
        counts[i] = static_cast<int>(std::floor(share));
        assigned += counts[i];
        remainders.emplace_back(share - counts[i], i);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int i = 0; i < total - assigned; ++i) ++counts[remainders[i].second];
    return counts;
}

namespace {

double lerp_path(const std::vector<double>& nodes, double x) {
    const int last = static_cast<int>(nodes.size()) - 1;
    if (x <= 0.0) return nodes[0];
    if (x >= last) return nodes[last];
    int i = static_cast<int>(x);
    double frac = x - i;
    return (1.0 - frac) * nodes[i] + frac * nodes[i + 1];
}

// Per-group control paths pulled out of the solution once, for cheap
// interpolation inside the event loop.
struct FrozenControls {
    std::vector<std::vector<double>> social_s;  // [group][node]
    std::vector<std::vector<double>> social_i;
    std::vector<std::vector<double>> vacc;
};

FrozenControls freeze_controls(const EquilibriumSolution& solution) {
    const int n = solution.n_groups();
    const int nodes = solution.grid.n_nodes();
    FrozenControls f;
    f.social_s.assign(n, std::vector<double>(nodes));
    f.social_i.assign(n, std::vector<double>(nodes));
    f.vacc.assign(n, std::vector<double>(nodes));
    for (int k = 0; k < n; ++k)
        for (int node = 0; node < nodes; ++node) {
            f.social_s[k][node] = solution.controls.socialization(node, k, Compartment::S);
            f.social_i[k][node] = solution.controls.socialization(node, k, Compartment::I);
            f.vacc[k][node] = solution.controls.vaccination(node, k);
        }
    return f;
}

struct ReplicaStats {
    long events = 0;
    long rejections = 0;
    long majorant_violations = 0;
};

// One replica of the jump process; counts[k][e] is the exact chain state.
void run_replica(const Scenario& scenario, const EquilibriumSolution& solution,
                 const FrozenControls& frozen, const std::vector<int>& group_sizes,
                 std::uint64_t seed, int replica,
                 std::vector<std::array<std::vector<double>, 4>>& proportions,
                 ReplicaStats& stats) {
    const int n = scenario.n_groups();
    const int n_agents = std::accumulate(group_sizes.begin(), group_sizes.end(), 0);
    const TimeGrid& grid = solution.grid;
    const bool sird = scenario.variant == Variant::SIRD;

    std::vector<std::array<long, 4>> counts(n);
    for (int k = 0; k < n; ++k) {
        std::vector<double> w(scenario.initial[k].begin(), scenario.initial[k].end());
        auto alloc = largest_remainder_allocation(w, group_sizes[k]);
        for (int e = 0; e < 4; ++e) counts[k][e] = alloc[e];
    }

    auto record = [&](int node) {
        for (int k = 0; k < n; ++k)
            for (int e = 0; e < 4; ++e)
                proportions[k][e][node] =
                    static_cast<double>(counts[k][e]) / static_cast<double>(group_sizes[k]);
    };
    record(0);

    Philox4x32 rng(seed, static_cast<std::uint64_t>(replica));

    // 5 transition channels per group: S->I, S->R, I->R, I->D, R->S
    std::vector<double> rates(static_cast<size_t>(n) * 5);
    auto fill_rates = [&](double x) {
        double total = 0.0;
        for (int k = 0; k < n; ++k) {
            const auto& epi = scenario.groups[k].epi;
            const double rho = sird ? epi.rho : 0.0;
            double z = 0.0;
            for (int l = 0; l < n; ++l)
                z += scenario.contacts(k, l) * lerp_path(frozen.social_i[l], x) * counts[l][1];
            z /= static_cast<double>(n_agents);
            double* r = &rates[static_cast<size_t>(k) * 5];
            r[0] = counts[k][0] * epi.beta * lerp_path(frozen.social_s[k], x) * z;
            r[1] = counts[k][0] * epi.kappa * lerp_path(frozen.vacc[k], x);
            r[2] = counts[k][1] * (1.0 - rho) * epi.gamma;
            r[3] = counts[k][1] * rho * epi.gamma;
            r[4] = counts[k][2] * epi.eta;
            total += r[0] + r[1] + r[2] + r[3] + r[4];
        }
        return total;
    };

    auto apply = [&](int channel) {
        int k = channel / 5;
        switch (channel % 5) {
            case 0: --counts[k][0]; ++counts[k][1]; break;
            case 1: --counts[k][0]; ++counts[k][2]; break;
            case 2: --counts[k][1]; ++counts[k][2]; break;
            case 3: --counts[k][1]; ++counts[k][3]; break;
            case 4: --counts[k][2]; ++counts[k][0]; break;
        }
    };

    for (int i = 0; i < grid.n_steps; ++i) {
        double x = static_cast<double>(i);
        const double x_end = x + 1.0;
        while (true) {
            double here = fill_rates(x);
            double there = fill_rates(x_end);
            double majorant = 1.1 * std::max(here, there);
            if (majorant <= 0.0) break;
            // fill_rates(x_end) clobbered the channel rates; time advances in
            // node units, dt converts the exponential clock.
            double step = rng.exponential(majorant) / grid.dt;
            x += step;
            if (x >= x_end) break;
            double lambda = fill_rates(x);
            if (lambda > majorant) ++stats.majorant_violations;
            if (rng.uniform() * majorant <= lambda) {
                double pick = rng.uniform() * lambda;
                double acc = 0.0;
                int channel = 0;
                for (; channel < n * 5 - 1; ++channel) {
                    acc += rates[channel];
                    if (pick <= acc) break;
                }
                apply(channel);
                ++stats.events;
            } else {
                ++stats.rejections;
            }
        }
        record(i + 1);
    }
}

}  // namespace

SimReport simulate_finite_n(const EquilibriumSolution& solution, const Scenario& scenario,
                            int n_agents, int n_replicas, std::uint64_t seed, int max_threads) {
    if (n_agents < 1) throw std::invalid_argument("n_agents must be >= 1");
    if (n_replicas < 1) throw std::invalid_argument("n_replicas must be >= 1");
    const int n = scenario.n_groups();
    const int nodes = solution.grid.n_nodes();

    SimReport report;
    report.n_agents = n_agents;
    report.n_replicas = n_replicas;
    report.seed = seed;
    report.rng_algorithm = Philox4x32::name();
    report.rng_streams = "one stream per replica, keyed (seed, replica index)";

    std::vector<double> weights;
    for (const auto& g : scenario.groups) weights.push_back(g.proportion);
    report.group_sizes = largest_remainder_allocation(weights, n_agents);
    for (int k = 0; k < n; ++k)
        if (report.group_sizes[k] < 1)
            throw std::invalid_argument("n_agents too small: group '" +
                                        scenario.groups[k].id.label + "' received no agents");

    FrozenControls frozen = freeze_controls(solution);

    std::vector<std::vector<std::array<std::vector<double>, 4>>> all(n_replicas);
    std::vector<ReplicaStats> stats(n_replicas);
    for (auto& rep : all) {
        rep.resize(n);
        for (auto& group : rep)
            for (auto& comp : group) comp.assign(nodes, 0.0);
    }

    int workers = max_threads > 0 ? max_threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n_replicas);

    std::atomic<int> next{0};
    auto work = [&]() {
        for (int r = next.fetch_add(1); r < n_replicas; r = next.fetch_add(1))
            run_replica(scenario, solution, frozen, report.group_sizes, seed, r, all[r],
                        stats[r]);
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (const auto& s : stats) {
        report.total_events += s.events;
        report.thinning_rejections += s.rejections;
        report.majorant_violations += s.majorant_violations;
    }

    report.averaged.resize(n);
    for (int k = 0; k < n; ++k)
        for (int e = 0; e < 4; ++e) {
            report.averaged[k][e].assign(nodes, 0.0);
            for (int r = 0; r < n_replicas; ++r)
                for (int node = 0; node < nodes; ++node)
                    report.averaged[k][e][node] += all[r][k][e][node];
            for (int node = 0; node < nodes; ++node) report.averaged[k][e][node] /= n_replicas;
        }

    report.replica_infected.resize(n_replicas);
    report.replica_sup_deviation.assign(n_replicas, 0.0);
    for (int r = 0; r < n_replicas; ++r) {
        report.replica_infected[r].resize(n);
        for (int k = 0; k < n; ++k) {
            report.replica_infected[r][k] = all[r][k][1];
            for (int node = 0; node < nodes; ++node) {
                double dev = std::abs(all[r][k][1][node] -
                                      solution.distributions(node, k, Compartment::I));
                report.replica_sup_deviation[r] = std::max(report.replica_sup_deviation[r], dev);
            }
        }
    }
    for (int k = 0; k < n; ++k)
        for (int node = 0; node < nodes; ++node) {
            double dev = std::abs(report.averaged[k][1][node] -
                                  solution.distributions(node, k, Compartment::I));
            report.sup_deviation = std::max(report.sup_deviation, dev);
        }
    return report;
}

ControlPath best_response_oracle(const AggregatePath& aggregates, int group,
                                 const Scenario& scenario, double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
    const GroupSpec& g = scenario.groups.at(group);
    const TimeGrid& grid = scenario.grid();
    if (aggregates.n_nodes() != grid.n_nodes())
        throw std::invalid_argument("aggregate path does not match the scenario grid");
    const double dt = grid.dt;

    const int n_social = static_cast<int>(std::llround(1.0 / resolution)) + 1;
    const int n_vacc = static_cast<int>(std::llround(scenario.vacc_cap / resolution)) + 1;
    auto social_level = [&](int m) { return std::min(m * resolution, 1.0); };
    auto vacc_level = [&](int m) { return std::min(m * resolution, scenario.vacc_cap); };

    // Scans one compartment's Hamiltonian over the social grid (and the vacc
    // grid for state S; the two channels separate additively).
    auto scan = [&](Compartment state, double t, double z, const std::array<double, 4>& u,
                    double* best_social, double* best_vacc) {
        double best = std::numeric_limits<double>::infinity();
        int best_m = 0;
        for (int m = 0; m < n_social; ++m) {
            double h = hamiltonian(g, state, t, z, social_level(m), 0.0, u, scenario.policy,
                                   scenario.variant);
            if (h < best - 1e-15) {
                best = h;
                best_m = m;
            }
        }
        *best_social = social_level(best_m);
        double total = best;
        if (state == Compartment::S) {
            // vacc part on top of the alpha-optimal Hamiltonian
            double best_v = std::numeric_limits<double>::infinity();
            int best_mv = 0;
            for (int m = 0; m < n_vacc; ++m) {
                double v = vacc_level(m);
                double extra = g.cost.c_nu * v * v +
                               g.epi.kappa * v * (u[2] - u[0]);
                if (extra < best_v - 1e-15) {
                    best_v = extra;
                    best_mv = m;
                }
            }
            if (best_vacc) *best_vacc = vacc_level(best_mv);
            total += best_v;
        } else if (best_vacc) {
            *best_vacc = 0.0;
        }
        return total;
    };

    std::vector<std::array<double, 4>> u(grid.n_nodes());
    u[grid.n_steps] = {0.0, 0.0, 0.0, g.cost.death_cost};
    for (int i = grid.n_steps - 1; i >= 0; --i) {
        const double t = grid.time(i + 1);
        const double z = aggregates(i + 1, group);
        const auto& next = u[i + 1];
        double s_dummy, v_dummy;
        u[i][0] = next[0] + dt * scan(Compartment::S, t, z, next, &s_dummy, &v_dummy);
        u[i][1] = next[1] + dt * scan(Compartment::I, t, z, next, &s_dummy, nullptr);
        u[i][2] = next[2] + dt * scan(Compartment::R, t, z, next, &s_dummy, nullptr);
        u[i][3] = next[3];
    }

    ControlPath controls(grid.n_nodes(), 1, scenario.vacc_cap);
    for (int node = 0; node < grid.n_nodes(); ++node) {
        const double t = grid.time(node);
        const double z = aggregates(node, group);
        double social, vacc;
        scan(Compartment::S, t, z, u[node], &social, &vacc);
        controls.socialization(node, 0, Compartment::S) = social;
        controls.vaccination(node, 0) = vacc;
        scan(Compartment::I, t, z, u[node], &social, nullptr);
        controls.socialization(node, 0, Compartment::I) = social;
        scan(Compartment::R, t, z, u[node], &social, nullptr);
        controls.socialization(node, 0, Compartment::R) = social;
    }
    return controls;
}

namespace {

struct Channel {
    Compartment state;
    bool is_vacc;
    double lower;
    double upper;
};

}  // namespace

StationarityReport stationarity_check(const EquilibriumSolution& solution,
                                      const Scenario& scenario, double fd_step) {
    StationarityReport report;
    report.fd_step = fd_step;
    const TimeGrid& grid = solution.grid;
    const double h = fd_step;

    const Channel channels[4] = {{Compartment::S, false, 0.0, 1.0},
                                 {Compartment::I, false, 0.0, 1.0},
                                 {Compartment::R, false, 0.0, 1.0},
                                 {Compartment::S, true, 0.0, scenario.vacc_cap}};

    for (int node = 0; node < grid.n_nodes(); ++node) {
        const double t = grid.time(node);
        for (int k = 0; k < scenario.n_groups(); ++k) {
            const GroupSpec& g = scenario.groups[k];
            const double z = solution.aggregates(node, k);
            std::array<double, 4> u;
            for (int e = 0; e < 4; ++e) u[e] = solution.values.at_raw(node, k, e);

            for (const Channel& ch : channels) {
                double social = solution.controls.socialization(node, k, ch.state);
                double vacc = ch.state == Compartment::S ? solution.controls.vaccination(node, k)
                                                         : 0.0;
                double center = ch.is_vacc ? vacc : social;
                auto eval = [&](double c) {
                    double s = ch.is_vacc ? social : c;
                    double v = ch.is_vacc ? c : vacc;
                    return hamiltonian(g, ch.state, t, z, s, v, u, scenario.policy,
                                       scenario.variant);
                };
                if (center > ch.lower + h && center < ch.upper - h) {
                    double d = (eval(center + h) - eval(center - h)) / (2.0 * h);
                    report.max_interior_residual =
                        std::max(report.max_interior_residual, std::abs(d));
                    ++report.interior_evaluations;
                } else {
                    double inward = center <= ch.lower + h ? h : -h;
                    double slope = (eval(center + inward) - eval(center)) / h;
                    report.max_boundary_violation =
                        std::max(report.max_boundary_violation, -slope);
                    ++report.boundary_evaluations;
                }
            }
        }
    }
    return report;
}

double single_agent_cost(const Scenario& scenario, int group, const AggregatePath& aggregates,
                         const std::vector<std::array<double, 3>>& social,
                         const std::vector<double>& vacc) {
    const TimeGrid& grid = scenario.grid();
    if (static_cast<int>(social.size()) != grid.n_nodes() ||
        static_cast<int>(vacc.size()) != grid.n_nodes())
        throw std::invalid_argument("single_agent_cost: control paths must cover every node");
    const GroupSpec& g = scenario.groups.at(group);
    const double dt = grid.dt;

    std::array<double, 4> occ = scenario.initial[group];
    double cost = 0.0;
    for (int i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        const Compartment live[3] = {Compartment::S, Compartment::I, Compartment::R};
        for (Compartment e : live) {
            double s = social[i][static_cast<int>(e)];
            double v = e == Compartment::S ? vacc[i] : 0.0;
            cost += dt * occ[static_cast<int>(e)] * running_cost(g, e, t, s, v, scenario.policy);
        }
        std::array<double, 4> flow{};
        for (Compartment e : live) {
            auto rates = transition_rates(g, e, social[i][static_cast<int>(e)],
                                          e == Compartment::S ? vacc[i] : 0.0,
                                          aggregates(i, group), scenario.variant);
            for (int to = 0; to < 4; ++to) flow[to] += rates[to] * occ[static_cast<int>(e)];
        }
        for (int e = 0; e < 4; ++e) occ[e] += dt * flow[e];
    }
    for (int e = 0; e < 4; ++e)
        cost += occ[e] * terminal_cost(g, static_cast<Compartment>(e));
    return cost;
}

}  // namespace mfgepi
