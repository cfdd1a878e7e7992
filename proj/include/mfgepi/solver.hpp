#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mfgepi/scenario.hpp"
#include "mfgepi/types.hpp"

namespace mfgepi {

// Converged (or flagged) equilibrium of the population game.
struct EquilibriumSolution {
    TimeGrid grid;
    Variant variant = Variant::SIR;
    std::vector<std::string> group_labels;
    DistributionPath distributions;
    ValuePath values;
    ControlPath controls;
    AggregatePath aggregates;

    int iterations = 0;
    bool converged = false;
    // sup-norm iterate changes (distribution, value) per iteration
    std::vector<std::pair<double, double>> residual_history;
    long clip_events = 0;
    double max_simplex_drift = 0.0;
    std::string note;

    int n_groups() const { return static_cast<int>(group_labels.size()); }
};

// Integrates the population balance equations forward from `initial`, holding
// the given control and exposure paths fixed. Each step renormalizes every
// group distribution onto the simplex and records the largest drift seen.
// Throws BlowupError if any entry leaves [-2, 2].
DistributionPath forward_sweep(const ControlPath& controls, const AggregatePath& aggregates,
                               const std::vector<std::array<double, 4>>& initial,
                               const std::vector<GroupSpec>& groups, const TimeGrid& grid,
                               Variant variant, Integrator integrator = Integrator::ExplicitEuler,
                               double* max_drift = nullptr);

// Integrates the value equations backward from the terminal condition (zero
// for live states, death_cost for D unless `terminal` overrides it), holding
// the exposure path fixed. Controls are re-derived from the current values at
// every step; the returned control path is the best response along the swept
// values. `policy_time_offset` shifts guideline lookups, which patch solves
// use to evaluate absolute time.
std::pair<ValuePath, ControlPath> backward_sweep(
    const DistributionPath& distributions, const AggregatePath& aggregates,
    const std::vector<GroupSpec>& groups, const TimeGrid& grid, const PolicySchedule& policy,
    Variant variant, double vacc_cap, Integrator integrator = Integrator::ExplicitEuler,
    const std::vector<std::array<double, 4>>* terminal = nullptr, double policy_time_offset = 0.0);

// Damped fixed-point iteration over (distribution, value) paths:
// exposure -> best response -> forward -> backward, mixed into the previous
// iterate with the configured damping, until both sup-norm changes fall below
// epsilon. Non-convergence is reported through the `converged` flag.
EquilibriumSolution solve_fixed_point(const Scenario& scenario, const SolverConfig& config);

// Splits the horizon into patches of config.patch_length, solves each with
// the fixed-point iteration (terminal data from the later patch, initial data
// from the earlier one) and repeats backward passes until the stitched paths
// are jointly consistent under the same residual criterion.
EquilibriumSolution solve_patched(const Scenario& scenario, const SolverConfig& config);

// Dispatches on config.patch_length.
EquilibriumSolution solve(const Scenario& scenario, const SolverConfig& config);
inline EquilibriumSolution solve(const Scenario& scenario) {
    return solve(scenario, scenario.solver);
}

}  // namespace mfgepi
