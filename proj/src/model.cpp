#include "mfgepi/model.hpp"

#include <algorithm>
#include <cmath>

namespace mfgepi {

namespace {

void check_control_inputs(double social, double vacc, double aggregate) {
    if (!(social >= 0.0) || !(vacc >= 0.0) || !(aggregate >= 0.0))
        throw std::invalid_argument("controls and aggregate must be >= 0");
}

double square(double x) { return x * x; }

}  // namespace

std::array<double, 4> transition_rates(const GroupSpec& group, Compartment from, double social,
                                       double vacc, double aggregate, Variant variant) {
    check_control_inputs(social, vacc, aggregate);
    const auto& epi = group.epi;
    const double rho = variant == Variant::SIRD ? epi.rho : 0.0;

    std::array<double, 4> row{0.0, 0.0, 0.0, 0.0};
    switch (from) {
        case Compartment::S:
            row[static_cast<int>(Compartment::I)] = epi.beta * social * aggregate;
            row[static_cast<int>(Compartment::R)] = epi.kappa * vacc;
            break;
        case Compartment::I:
            row[static_cast<int>(Compartment::R)] = (1.0 - rho) * epi.gamma;
            row[static_cast<int>(Compartment::D)] = rho * epi.gamma;
            break;
        case Compartment::R:
            row[static_cast<int>(Compartment::S)] = epi.eta;
            break;
        case Compartment::D:
            break;  // absorbing
    }
    double outflow = row[0] + row[1] + row[2] + row[3];
    row[static_cast<int>(from)] = -outflow;
    return row;
}

double running_cost(const GroupSpec& group, Compartment state, double t, double social,
                    double vacc, const PolicySchedule& policy) {
    if (state == Compartment::D) throw std::invalid_argument("no running cost in state D");
    check_control_inputs(social, vacc, 0.0);
    const bool follower = group.kind == AuthorityKind::Follower;
    const auto& cost = group.cost;
    switch (state) {
        case Compartment::S: {
            double anchor = follower ? policy(t, group.id.index, Compartment::S) : 1.0;
            return cost.c_lambda * square(anchor - social) + cost.c_nu * square(vacc);
        }
        case Compartment::I: {
            double anchor =
                follower ? policy(t, group.id.index, Compartment::I) : cost.xi_infected;
            return square(anchor - social) + cost.c_infection;
        }
        case Compartment::R: {
            double anchor = follower ? policy(t, group.id.index, Compartment::R) : 1.0;
            return square(anchor - social);
        }
        default:
            return 0.0;
    }
}

double terminal_cost(const GroupSpec& group, Compartment state) {
    return state == Compartment::D ? group.cost.death_cost : 0.0;
}

double infected_socialization(const GroupSpec& group, const PolicySchedule& policy, double t) {
    return group.kind == AuthorityKind::Follower ? policy(t, group.id.index, Compartment::I)
                                                 : group.cost.xi_infected;
}

std::vector<double> compute_aggregate(int node, const DistributionPath& distributions,
                                      const std::vector<double>& infected_social,
                                      const ContactMatrix& contacts,
                                      const std::vector<GroupSpec>& groups) {
    const int n = static_cast<int>(groups.size());
    if (contacts.n_groups() != n || static_cast<int>(infected_social.size()) != n ||
        distributions.n_groups() != n)
        throw std::invalid_argument("aggregate inputs disagree on the number of groups");

    std::vector<double> z(n, 0.0);
    for (int l = 0; l < n; ++l) {
        double mass = infected_social[l] * distributions(node, l, Compartment::I) *
                      groups[l].proportion;
        for (int k = 0; k < n; ++k) z[k] += contacts(k, l) * mass;
    }
    return z;
}

ControlSlice best_response_controls(double t, int node, const ValuePath& values,
                                    const std::vector<double>& aggregate,
                                    const std::vector<GroupSpec>& groups,
                                    const PolicySchedule& policy, double vacc_cap) {
    const int n = static_cast<int>(groups.size());
    ControlSlice slice;
    slice.social.resize(n);
    slice.vacc.resize(n);

    for (int k = 0; k < n; ++k) {
        const GroupSpec& g = groups[k];
        const bool follower = g.kind == AuthorityKind::Follower;
        const double u_s = values(node, k, Compartment::S);
        const double u_i = values(node, k, Compartment::I);
        const double u_r = values(node, k, Compartment::R);

        double anchor_s = follower ? policy(t, k, Compartment::S) : 1.0;
        double social_s = anchor_s + g.epi.beta * aggregate[k] * (u_s - u_i) / (2.0 * g.cost.c_lambda);
        double clipped_s = std::clamp(social_s, 0.0, 1.0);
        if (clipped_s != social_s) ++slice.clip_events;

        double vacc = g.epi.kappa * (u_s - u_r) / (2.0 * g.cost.c_nu);
        double clipped_vacc = std::clamp(vacc, 0.0, vacc_cap);
        if (clipped_vacc != vacc) ++slice.clip_events;

        slice.social[k][static_cast<int>(Compartment::S)] = clipped_s;
        slice.social[k][static_cast<int>(Compartment::I)] = infected_socialization(g, policy, t);
        slice.social[k][static_cast<int>(Compartment::R)] =
            follower ? policy(t, k, Compartment::R) : 1.0;
        slice.vacc[k] = clipped_vacc;
    }
    return slice;
}

double hamiltonian(const GroupSpec& group, Compartment state, double t, double aggregate,
                   double social, double vacc, const std::array<double, 4>& values,
                   const PolicySchedule& policy, Variant variant) {
    auto rates = transition_rates(group, state, social, vacc, aggregate, variant);
    double drift = 0.0;
    for (int e = 0; e < 4; ++e) drift += rates[e] * values[e];
    return drift + running_cost(group, state, t, social, vacc, policy);
}

}  // namespace mfgepi
