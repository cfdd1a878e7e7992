#pragma once

#include <array>

#include "mfgepi/types.hpp"

namespace mfgepi {

// Continuous-time transition rates out of `from` for one individual of the
// given group. Entry e of the result is the rate into compartment e; the
// diagonal entry is minus the total outflow, so each row sums to zero.
//
//   S -> I at beta * social * aggregate      S -> R at kappa * vacc
//   I -> R at (1 - rho) * gamma              I -> D at rho * gamma
//   R -> S at eta                            D is absorbing
std::array<double, 4> transition_rates(const GroupSpec& group, Compartment from, double social,
                                       double vacc, double aggregate, Variant variant);

// Instantaneous cost rate of holding (social, vacc) in `state` at time t.
// Followers are anchored to the guideline level, indifferents to full
// socialization when healthy and to their intrinsic level when infected.
// Vaccination effort is only charged in state S. No running cost in D.
double running_cost(const GroupSpec& group, Compartment state, double t, double social,
                    double vacc, const PolicySchedule& policy);

// Horizon cost: death_cost in D, zero elsewhere.
double terminal_cost(const GroupSpec& group, Compartment state);

// Socialization level adopted while infected, which is deterministic: the
// guideline level for followers, the intrinsic level xi for indifferents.
double infected_socialization(const GroupSpec& group, const PolicySchedule& policy, double t);

// Exposure Z at one node: for each group k,
//   Z_k = sum_l w(k,l) * social_infected_l * p_l(I) * m_l.
std::vector<double> compute_aggregate(int node, const DistributionPath& distributions,
                                      const std::vector<double>& infected_social,
                                      const ContactMatrix& contacts,
                                      const std::vector<GroupSpec>& groups);

// Instantaneous best responses of every group at one node, given current
// values and exposures. Closed-form minimizers of the Hamiltonian, projected
// onto the admissible boxes [0,1] and [0,cap]; each projection that actually
// binds increments clip_events.
struct ControlSlice {
    std::vector<std::array<double, 3>> social;  // per group: levels in S, I, R
    std::vector<double> vacc;
    int clip_events = 0;
};

ControlSlice best_response_controls(double t, int node, const ValuePath& values,
                                    const std::vector<double>& aggregate,
                                    const std::vector<GroupSpec>& groups,
                                    const PolicySchedule& policy, double vacc_cap);

// Hamiltonian of one group in `state`: transition-weighted value differences
// plus the running cost, H = sum_e q(state,e) u(e) + f(state, social, vacc).
// The backward dynamics are du/dt = -min H.
double hamiltonian(const GroupSpec& group, Compartment state, double t, double aggregate,
                   double social, double vacc, const std::array<double, 4>& values,
                   const PolicySchedule& policy, Variant variant);

}  // namespace mfgepi
