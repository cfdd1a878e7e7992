#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mfgepi/scenario.hpp"
#include "mfgepi/solver.hpp"
#include "mfgepi/types.hpp"

namespace mfgepi {

// Deterministic rounding of fractional shares to integer counts: floor
// everything, then hand the remaining units to the largest remainders
// (lowest index wins ties).
std::vector<int> largest_remainder_allocation(const std::vector<double>& weights, int total);

// Event-driven finite-population check of a mean field solution.
struct SimReport {
    int n_agents = 0;
    int n_replicas = 0;
    std::uint64_t seed = 0;
    std::string rng_algorithm;
    std::string rng_streams;
    std::vector<int> group_sizes;

    // Replica-averaged within-group proportions, [group][compartment][node].
    std::vector<std::array<std::vector<double>, 4>> averaged;
    // Infected proportions per replica, [replica][group][node].
    std::vector<std::vector<std::vector<double>>> replica_infected;

    double sup_deviation = 0.0;  // averaged infected path vs mean field
    std::vector<double> replica_sup_deviation;
    long total_events = 0;
    long thinning_rejections = 0;
    long majorant_violations = 0;
};

// Simulates n_replicas runs of the N-agent jump process whose agents follow
// the frozen equilibrium control paths, with the infection pressure computed
// from the empirical infected counts. Time-varying rates are handled by
// thinning against a per-interval majorant (1.1 x the larger endpoint rate).
// Each replica draws from its own counter-based stream, so results do not
// depend on thread scheduling. max_threads <= 0 picks the hardware width.
SimReport simulate_finite_n(const EquilibriumSolution& solution, const Scenario& scenario,
                            int n_agents, int n_replicas, std::uint64_t seed,
                            int max_threads = 0);

// Independent single-agent solver used to cross-check the closed-form best
// response: backward induction on the grid with exhaustive minimization of
// the discrete Hamiltonian over control grids of the given resolution. The
// Hamiltonian separates additively in (social, vacc), so each channel is
// scanned exhaustively on its own grid. Returns a one-group control path.
ControlPath best_response_oracle(const AggregatePath& aggregates, int group,
                                 const Scenario& scenario, double resolution = 0.005);

// First-order optimality of the solution controls, via central finite
// differences of the Hamiltonian. Clipped controls get a one-sided check:
// the inward slope must be non-negative.
struct StationarityReport {
    double max_interior_residual = 0.0;
    double max_boundary_violation = 0.0;
    long interior_evaluations = 0;
    long boundary_evaluations = 0;
    double fd_step = 1e-5;
};

StationarityReport stationarity_check(const EquilibriumSolution& solution,
                                      const Scenario& scenario, double fd_step = 1e-5);

// Discrete expected cost of one group playing `social`/`vacc` against the
// frozen exposure path: occupancy propagation plus accumulated running and
// terminal costs. Used by the deviation tests and the enumeration oracle.
double single_agent_cost(const Scenario& scenario, int group, const AggregatePath& aggregates,
                         const std::vector<std::array<double, 3>>& social,
                         const std::vector<double>& vacc);

}  // namespace mfgepi
