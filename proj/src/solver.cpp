#include "mfgepi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfgepi/model.hpp"

namespace mfgepi {

namespace {

constexpr double kDistributionBlowup = 2.0;
constexpr double kValueBlowup = 1e6;

double square(double x) { return x * x; }

// Cubic 4-point interpolation of a per-node quantity at fractional node
// position x. RK4 half-stages sample the coupled paths between nodes; linear
// interpolation there would cap the whole solve at second order.
template <class AtNode>
double interp_nodes(AtNode&& at, double x, int n_nodes) {
    if (x <= 0.0) return at(0);
    if (x >= n_nodes - 1) return at(n_nodes - 1);
    int i = static_cast<int>(x);
    double frac = x - i;
    if (frac == 0.0) return at(i);
    if (n_nodes < 4) return (1.0 - frac) * at(i) + frac * at(i + 1);
    int j0 = std::clamp(i - 1, 0, n_nodes - 4);
    double xx = x - j0;
    double w0 = -(xx - 1.0) * (xx - 2.0) * (xx - 3.0) / 6.0;
    double w1 = xx * (xx - 2.0) * (xx - 3.0) / 2.0;
    double w2 = -xx * (xx - 1.0) * (xx - 3.0) / 2.0;
    double w3 = xx * (xx - 1.0) * (xx - 2.0) / 6.0;
    return w0 * at(j0) + w1 * at(j0 + 1) + w2 * at(j0 + 2) + w3 * at(j0 + 3);
}

std::array<double, 4> balance_rhs(const GroupSpec& g, const std::array<double, 4>& p,
                                  double social_s, double vacc, double z, Variant variant) {
    const double rho = variant == Variant::SIRD ? g.epi.rho : 0.0;
    const double infect = g.epi.beta * social_s * z * p[0];
    const double vaccinate = g.epi.kappa * vacc * p[0];
    const double recover = (1.0 - rho) * g.epi.gamma * p[1];
    const double die = rho * g.epi.gamma * p[1];
    const double wane = g.epi.eta * p[2];
    return {-infect - vaccinate + wane, infect - recover - die, recover + vaccinate - wane, die};
}

struct ValueRhs {
    std::array<double, 4> dudt;
    int clips = 0;
};

// du/dt = -min_{social, vacc} H along the projected best response. The
// running cost collapses to c_infection in state I and to zero in state R
// because the optimal levels sit exactly on their anchors.
ValueRhs value_rhs(const GroupSpec& g, const PolicySchedule& policy, double t_abs, double z,
                   const std::array<double, 4>& u, Variant variant, double vacc_cap) {
    const bool follower = g.kind == AuthorityKind::Follower;
    const double rho = variant == Variant::SIRD ? g.epi.rho : 0.0;
    const int k = g.id.index;

    const double anchor_s = follower ? policy(t_abs, k, Compartment::S) : 1.0;
    double social_s = anchor_s + g.epi.beta * z * (u[0] - u[1]) / (2.0 * g.cost.c_lambda);
    double vacc = g.epi.kappa * (u[0] - u[2]) / (2.0 * g.cost.c_nu);

    ValueRhs out;
    double clipped = std::clamp(social_s, 0.0, 1.0);
    if (clipped != social_s) ++out.clips;
    social_s = clipped;
    clipped = std::clamp(vacc, 0.0, vacc_cap);
    if (clipped != vacc) ++out.clips;
    vacc = clipped;

    out.dudt[0] = g.epi.beta * social_s * z * (u[0] - u[1]) +
                  g.epi.kappa * vacc * (u[0] - u[2]) -
                  g.cost.c_lambda * square(anchor_s - social_s) - g.cost.c_nu * square(vacc);
    out.dudt[1] = (1.0 - rho) * g.epi.gamma * (u[1] - u[2]) +
                  rho * g.epi.gamma * (u[1] - u[3]) - g.cost.c_infection;
    out.dudt[2] = g.epi.eta * (u[2] - u[0]);
    out.dudt[3] = 0.0;
    return out;
}

std::vector<std::array<double, 4>> terminal_slice(const std::vector<GroupSpec>& groups) {
    std::vector<std::array<double, 4>> u(groups.size());
    for (size_t k = 0; k < groups.size(); ++k)
        u[k] = {0.0, 0.0, 0.0, groups[k].cost.death_cost};
    return u;
}

AggregatePath aggregates_from(const DistributionPath& p, const std::vector<GroupSpec>& groups,
                              const ContactMatrix& contacts, const PolicySchedule& policy,
                              const TimeGrid& grid, double t_offset) {
    const int n = static_cast<int>(groups.size());
    AggregatePath z(grid.n_nodes(), n);
    std::vector<double> infected_social(n);
    for (int node = 0; node < grid.n_nodes(); ++node) {
        const double t_abs = t_offset + grid.time(node);
        for (int k = 0; k < n; ++k)
            infected_social[k] = infected_socialization(groups[k], policy, t_abs);
        auto slice = compute_aggregate(node, p, infected_social, contacts, groups);
        for (int k = 0; k < n; ++k) z(node, k) = slice[k];
    }
    return z;
}

ControlPath controls_from(const ValuePath& u, const AggregatePath& z,
                          const std::vector<GroupSpec>& groups, const PolicySchedule& policy,
                          const TimeGrid& grid, double t_offset, double vacc_cap, long* clips) {
    const int n = static_cast<int>(groups.size());
    ControlPath controls(grid.n_nodes(), n, vacc_cap);
    std::vector<double> z_slice(n);
    for (int node = 0; node < grid.n_nodes(); ++node) {
        for (int k = 0; k < n; ++k) z_slice[k] = z(node, k);
        auto slice = best_response_controls(t_offset + grid.time(node), node, u, z_slice, groups,
                                            policy, vacc_cap);
        if (clips) *clips += slice.clip_events;
        for (int k = 0; k < n; ++k) {
            controls.socialization(node, k, Compartment::S) = slice.social[k][0];
            controls.socialization(node, k, Compartment::I) = slice.social[k][1];
            controls.socialization(node, k, Compartment::R) = slice.social[k][2];
            controls.vaccination(node, k) = slice.vacc[k];
        }
    }
    return controls;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

DistributionPath forward_sweep(const ControlPath& controls, const AggregatePath& aggregates,
                               const std::vector<std::array<double, 4>>& initial,
                               const std::vector<GroupSpec>& groups, const TimeGrid& grid,
                               Variant variant, Integrator integrator, double* max_drift) {
    const int n = static_cast<int>(groups.size());
    if (static_cast<int>(initial.size()) != n)
        throw std::invalid_argument("forward_sweep: one initial distribution per group required");
    if (controls.n_nodes() != grid.n_nodes() || aggregates.n_nodes() != grid.n_nodes())
        throw std::invalid_argument("forward_sweep: path lengths do not match the grid");

    DistributionPath path(grid.n_nodes(), n);
    for (int k = 0; k < n; ++k)
        for (int e = 0; e < 4; ++e) path.at_raw(0, k, e) = initial[k][e];

    double drift = 0.0;
    const double dt = grid.dt;
    for (int i = 0; i < grid.n_steps; ++i) {
        for (int k = 0; k < n; ++k) {
            const GroupSpec& g = groups[k];
            auto social_at = [&](int node) {
                return controls.socialization(node, k, Compartment::S);
            };
            auto vacc_at = [&](int node) { return controls.vaccination(node, k); };
            auto z_at = [&](int node) { return aggregates(node, k); };

            std::array<double, 4> p;
            for (int e = 0; e < 4; ++e) p[e] = path.at_raw(i, k, e);

            std::array<double, 4> next;
            if (integrator == Integrator::ExplicitEuler) {
                auto f = balance_rhs(g, p, social_at(i), vacc_at(i), z_at(i), variant);
                for (int e = 0; e < 4; ++e) next[e] = p[e] + dt * f[e];
            } else {
                auto rhs_at = [&](double x, const std::array<double, 4>& state) {
                    return balance_rhs(g, state, interp_nodes(social_at, x, grid.n_nodes()),
                                       interp_nodes(vacc_at, x, grid.n_nodes()),
                                       interp_nodes(z_at, x, grid.n_nodes()), variant);
                };
                auto k1 = rhs_at(i, p);
                std::array<double, 4> s;
                for (int e = 0; e < 4; ++e) s[e] = p[e] + 0.5 * dt * k1[e];
                auto k2 = rhs_at(i + 0.5, s);
                for (int e = 0; e < 4; ++e) s[e] = p[e] + 0.5 * dt * k2[e];
                auto k3 = rhs_at(i + 0.5, s);
                for (int e = 0; e < 4; ++e) s[e] = p[e] + dt * k3[e];
                auto k4 = rhs_at(i + 1.0, s);
                for (int e = 0; e < 4; ++e)
                    next[e] = p[e] + dt / 6.0 * (k1[e] + 2.0 * k2[e] + 2.0 * k3[e] + k4[e]);
            }

            double sum = next[0] + next[1] + next[2] + next[3];
            for (int e = 0; e < 4; ++e)
                if (!(std::abs(next[e]) <= kDistributionBlowup)) {
                    std::ostringstream os;
                    os << "forward sweep blow-up in group " << g.id.label << " at t="
                       << grid.time(i + 1);
                    throw BlowupError(os.str());
                }
            drift = std::max(drift, std::abs(sum - 1.0));
            for (int e = 0; e < 4; ++e) path.at_raw(i + 1, k, e) = next[e] / sum;
        }
    }
    if (max_drift) *max_drift = drift;
    return path;
}

std::pair<ValuePath, ControlPath> backward_sweep(
    const DistributionPath& distributions, const AggregatePath& aggregates,
    const std::vector<GroupSpec>& groups, const TimeGrid& grid, const PolicySchedule& policy,
    Variant variant, double vacc_cap, Integrator integrator,
    const std::vector<std::array<double, 4>>* terminal, double policy_time_offset) {
    const int n = static_cast<int>(groups.size());
    if (distributions.n_nodes() != grid.n_nodes() || aggregates.n_nodes() != grid.n_nodes())
        throw std::invalid_argument("backward_sweep: path lengths do not match the grid");

    ValuePath values(grid.n_nodes(), n);
    const auto base_terminal = terminal_slice(groups);
    const auto& u_term = terminal ? *terminal : base_terminal;
    if (static_cast<int>(u_term.size()) != n)
        throw std::invalid_argument("backward_sweep: one terminal value per group required");

    const int last = grid.n_steps;
    for (int k = 0; k < n; ++k)
        for (int e = 0; e < 4; ++e) values.at_raw(last, k, e) = u_term[k][e];

    const double dt = grid.dt;
    for (int i = last - 1; i >= 0; --i) {
        for (int k = 0; k < n; ++k) {
            const GroupSpec& g = groups[k];
            auto z_at = [&](int node) { return aggregates(node, k); };
            std::array<double, 4> u;
            for (int e = 0; e < 4; ++e) u[e] = values.at_raw(i + 1, k, e);

            std::array<double, 4> prev;
            if (integrator == Integrator::ExplicitEuler) {
                auto f = value_rhs(g, policy, policy_time_offset + grid.time(i + 1), z_at(i + 1),
                                   u, variant, vacc_cap);
                for (int e = 0; e < 4; ++e) prev[e] = u[e] - dt * f.dudt[e];
            } else {
                auto rhs_at = [&](double x, const std::array<double, 4>& state) {
                    return value_rhs(g, policy, policy_time_offset + x * dt,
                                     interp_nodes(z_at, x, grid.n_nodes()), state, variant,
                                     vacc_cap)
                        .dudt;
                };
                auto k1 = rhs_at(i + 1.0, u);
                std::array<double, 4> s;
                for (int e = 0; e < 4; ++e) s[e] = u[e] - 0.5 * dt * k1[e];
                auto k2 = rhs_at(i + 0.5, s);
                for (int e = 0; e < 4; ++e) s[e] = u[e] - 0.5 * dt * k2[e];
                auto k3 = rhs_at(i + 0.5, s);
                for (int e = 0; e < 4; ++e) s[e] = u[e] - dt * k3[e];
                auto k4 = rhs_at(i + 0.0, s);
                for (int e = 0; e < 4; ++e)
                    prev[e] = u[e] - dt / 6.0 * (k1[e] + 2.0 * k2[e] + 2.0 * k3[e] + k4[e]);
            }

            for (int e = 0; e < 4; ++e) {
                if (!(std::abs(prev[e]) <= kValueBlowup)) {
                    std::ostringstream os;
                    os << "backward sweep blow-up in group " << g.id.label << " at t="
                       << grid.time(i);
                    throw BlowupError(os.str());
                }
                values.at_raw(i, k, e) = prev[e];
            }
        }
    }

    ControlPath controls =
        controls_from(values, aggregates, groups, policy, grid, policy_time_offset, vacc_cap,
                      nullptr);
    return {std::move(values), std::move(controls)};
}

namespace {

struct WindowResult {
    DistributionPath p;
    ValuePath u;
    int iterations = 0;
    bool converged = false;
    std::vector<std::pair<double, double>> residuals;
    double max_drift = 0.0;
    std::string note;
};

WindowResult solve_window(const Scenario& sc, const SolverConfig& config, const TimeGrid& grid,
                          double t_offset, const std::vector<std::array<double, 4>>& p_init,
                          const std::vector<std::array<double, 4>>& u_term,
                          const DistributionPath* p_warm, const ValuePath* u_warm) {
    const int n = sc.n_groups();
    WindowResult res;

    if (p_warm) {
        res.p = *p_warm;
    } else {
        res.p = DistributionPath(grid.n_nodes(), n);
        for (int node = 0; node < grid.n_nodes(); ++node)
            for (int k = 0; k < n; ++k)
                for (int e = 0; e < 4; ++e) res.p.at_raw(node, k, e) = p_init[k][e];
    }
    if (u_warm) {
        res.u = *u_warm;
    } else {
        res.u = ValuePath(grid.n_nodes(), n);
        for (int node = 0; node < grid.n_nodes(); ++node)
            for (int k = 0; k < n; ++k)
                for (int e = 0; e < 4; ++e) res.u.at_raw(node, k, e) = u_term[k][e];
    }

    const double delta = config.damping;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        AggregatePath z =
            aggregates_from(res.p, sc.groups, sc.contacts, sc.policy, grid, t_offset);
        ControlPath controls =
            controls_from(res.u, z, sc.groups, sc.policy, grid, t_offset, sc.vacc_cap, nullptr);

        DistributionPath p_next;
        ValuePath u_next;
        try {
            double drift = 0.0;
            p_next = forward_sweep(controls, z, p_init, sc.groups, grid, sc.variant,
                                   config.integrator, &drift);
            res.max_drift = std::max(res.max_drift, drift);
            u_next = backward_sweep(p_next, z, sc.groups, grid, sc.policy, sc.variant,
                                    sc.vacc_cap, config.integrator, &u_term, t_offset)
                         .first;
        } catch (const BlowupError& e) {
            res.iterations = iter;
            res.note = e.what();
            return res;
        }

        double dp = 0.0, du = 0.0;
        auto& praw = res.p.raw();
        auto& uraw = res.u.raw();
        const auto& pnraw = p_next.raw();
        const auto& unraw = u_next.raw();
        for (size_t idx = 0; idx < praw.size(); ++idx) {
            double mixed = (1.0 - delta) * praw[idx] + delta * pnraw[idx];
            dp = std::max(dp, std::abs(mixed - praw[idx]));
            praw[idx] = mixed;
        }
        for (size_t idx = 0; idx < uraw.size(); ++idx) {
            double mixed = (1.0 - delta) * uraw[idx] + delta * unraw[idx];
            du = std::max(du, std::abs(mixed - uraw[idx]));
            uraw[idx] = mixed;
        }
        res.residuals.emplace_back(dp, du);
        res.iterations = iter;
        if (dp <= config.epsilon && du <= config.epsilon) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged && res.note.empty()) {
        std::ostringstream os;
        os << "no convergence after " << res.iterations << " iterations";
        res.note = os.str();
    }
    return res;
}

EquilibriumSolution assemble(const Scenario& sc, const SolverConfig& config, WindowResult&& win) {
    EquilibriumSolution sol;
    sol.grid = config.grid;
    sol.variant = sc.variant;
    for (const auto& g : sc.groups) sol.group_labels.push_back(g.id.label);
    sol.iterations = win.iterations;
    sol.converged = win.converged;
    sol.residual_history = std::move(win.residuals);
    sol.max_simplex_drift = win.max_drift;
    sol.note = std::move(win.note);
    sol.distributions = std::move(win.p);
    sol.values = std::move(win.u);
    sol.aggregates =
        aggregates_from(sol.distributions, sc.groups, sc.contacts, sc.policy, config.grid, 0.0);
    long clips = 0;
    sol.controls = controls_from(sol.values, sol.aggregates, sc.groups, sc.policy, config.grid,
                                 0.0, sc.vacc_cap, &clips);
    sol.clip_events = clips;
    return sol;
}

}  // namespace

EquilibriumSolution solve_fixed_point(const Scenario& scenario, const SolverConfig& config) {
    config.validate();
    WindowResult win = solve_window(scenario, config, config.grid, 0.0, scenario.initial,
                                    terminal_slice(scenario.groups), nullptr, nullptr);
    return assemble(scenario, config, std::move(win));
}

EquilibriumSolution solve_patched(const Scenario& scenario, const SolverConfig& config) {
    config.validate();
    if (!config.patch_length) throw std::invalid_argument("solve_patched needs patch_length");
    const TimeGrid& grid = config.grid;
    const int steps_per_patch =
        static_cast<int>(std::llround(*config.patch_length / grid.dt));

    std::vector<int> starts;  // patch j covers nodes [starts[j], starts[j+1]]
    for (int a = 0; a < grid.n_steps; a += steps_per_patch) starts.push_back(a);
    starts.push_back(grid.n_steps);
    const int n_patches = static_cast<int>(starts.size()) - 1;
    if (n_patches == 1) return solve_fixed_point(scenario, config);

    const int n = scenario.n_groups();
    DistributionPath p(grid.n_nodes(), n);
    ValuePath u(grid.n_nodes(), n);
    const auto u_term_final = terminal_slice(scenario.groups);
    for (int node = 0; node < grid.n_nodes(); ++node)
        for (int k = 0; k < n; ++k)
            for (int e = 0; e < 4; ++e) {
                p.at_raw(node, k, e) = scenario.initial[k][e];
                u.at_raw(node, k, e) = u_term_final[k][e];
            }

    WindowResult global;
    global.max_drift = 0.0;
    int total_inner = 0;
    bool converged = false;

    for (int pass = 1; pass <= config.max_iters && !converged; ++pass) {
        const std::vector<double> p_old = p.raw();
        const std::vector<double> u_old = u.raw();

        for (int j = n_patches - 1; j >= 0; --j) {
            const int a = starts[j];
            const int b = starts[j + 1];
            TimeGrid sub;
            sub.dt = grid.dt;
            sub.n_steps = b - a;
            sub.horizon = sub.n_steps * grid.dt;

            std::vector<std::array<double, 4>> p_init(n), u_term(n);
            for (int k = 0; k < n; ++k)
                for (int e = 0; e < 4; ++e) {
                    p_init[k][e] = p.at_raw(a, k, e);
                    u_term[k][e] = u.at_raw(b, k, e);
                }
            if (j == 0) {
                for (int k = 0; k < n; ++k)
                    for (int e = 0; e < 4; ++e) p_init[k][e] = scenario.initial[k][e];
            }

            DistributionPath p_warm(sub.n_nodes(), n);
            ValuePath u_warm(sub.n_nodes(), n);
            for (int node = 0; node <= sub.n_steps; ++node)
                for (int k = 0; k < n; ++k)
                    for (int e = 0; e < 4; ++e) {
                        p_warm.at_raw(node, k, e) = p.at_raw(a + node, k, e);
                        u_warm.at_raw(node, k, e) = u.at_raw(a + node, k, e);
                    }

            SolverConfig sub_config = config;
            sub_config.grid = sub;
            sub_config.patch_length.reset();
            WindowResult win = solve_window(scenario, sub_config, sub, grid.time(a), p_init,
                                            u_term, &p_warm, &u_warm);
            total_inner += win.iterations;
            global.max_drift = std::max(global.max_drift, win.max_drift);
            if (!win.converged) {
                std::ostringstream os;
                os << "patch " << (j + 1) << "/" << n_patches << " (pass " << pass
                   << "): " << win.note;
                global.p = std::move(p);
                global.u = std::move(u);
                global.iterations = pass;
                global.note = os.str();
                auto sol = assemble(scenario, config, std::move(global));
                sol.iterations = pass;
                return sol;
            }
            for (int node = 0; node <= sub.n_steps; ++node)
                for (int k = 0; k < n; ++k)
                    for (int e = 0; e < 4; ++e) {
                        p.at_raw(a + node, k, e) = win.p.at_raw(node, k, e);
                        u.at_raw(a + node, k, e) = win.u.at_raw(node, k, e);
                    }
        }

        double dp = sup_diff(p.raw(), p_old);
        double du = sup_diff(u.raw(), u_old);
        global.residuals.emplace_back(dp, du);
        global.iterations = pass;
        converged = dp <= config.epsilon && du <= config.epsilon;
    }

    global.converged = converged;
    if (!converged) {
        std::ostringstream os;
        os << "patched solve: no joint consistency after " << global.iterations << " passes";
        global.note = os.str();
    } else {
        std::ostringstream os;
        os << "patched solve: " << n_patches << " patches, " << total_inner
           << " inner iterations";
        global.note = os.str();
    }
    global.p = std::move(p);
    global.u = std::move(u);
    return assemble(scenario, config, std::move(global));
}

EquilibriumSolution solve(const Scenario& scenario, const SolverConfig& config) {
    return config.patch_length ? solve_patched(scenario, config)
                               : solve_fixed_point(scenario, config);
}

}  // namespace mfgepi
