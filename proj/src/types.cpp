#include "mfgepi/types.hpp"

#include <algorithm>
#include <cmath>

namespace mfgepi {

int compartment_count(Variant v) { return v == Variant::SIR ? 3 : 4; }

const char* compartment_name(Compartment e) {
    switch (e) {
        case Compartment::S: return "S";
        case Compartment::I: return "I";
        case Compartment::R: return "R";
        case Compartment::D: return "D";
    }
    return "?";
}

const char* variant_name(Variant v) { return v == Variant::SIR ? "sir" : "sird"; }

const char* authority_kind_name(AuthorityKind k) {
    return k == AuthorityKind::Follower ? "follower" : "indifferent";
}

const char* integrator_name(Integrator i) {
    return i == Integrator::ExplicitEuler ? "euler" : "rk4";
}

void EpidemicParams::validate(Variant variant) const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("epidemic parameter ") + name +
                                        " must be finite and >= 0");
    };
    nonneg(beta, "beta");
    nonneg(eta, "eta");
    nonneg(kappa, "kappa");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("epidemic parameter gamma must be finite and > 0");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("epidemic parameter rho must lie in [0, 1]");
    if (variant == Variant::SIR && rho != 0.0)
        throw std::invalid_argument("rho must be 0 for the SIR variant");
}

void CostParams::validate(AuthorityKind kind, Variant variant) const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("cost parameter ") + name +
                                        " must be finite and > 0");
    };
    positive(c_lambda, "c_lambda");
    positive(c_nu, "c_nu");
    if (!(c_infection >= 0.0) || !std::isfinite(c_infection))
        throw std::invalid_argument("cost parameter c_infection must be finite and >= 0");
    if (kind == AuthorityKind::Indifferent && !(xi_infected >= 0.0 && xi_infected <= 1.0))
        throw std::invalid_argument("cost parameter xi must lie in [0, 1]");
    if (!(death_cost >= 0.0) || !std::isfinite(death_cost))
        throw std::invalid_argument("cost parameter death_cost must be finite and >= 0");
    if (variant == Variant::SIR && death_cost != 0.0)
        throw std::invalid_argument("death_cost must be 0 for the SIR variant");
}

ContactMatrix::ContactMatrix(int n_groups, double fill)
    : n_(n_groups), w_(static_cast<size_t>(n_groups) * n_groups, fill) {}

ContactMatrix::ContactMatrix(int n_groups, std::vector<double> entries)
    : n_(n_groups), w_(std::move(entries)) {
    if (w_.size() != static_cast<size_t>(n_) * n_)
        throw std::invalid_argument("contact matrix entry count does not match group count");
}

void ContactMatrix::validate() const {
    for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
            double v = (*this)(k, l);
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("contact weights must lie in [0, 1]");
            if (std::abs(v - (*this)(l, k)) > 1e-12)
                throw std::invalid_argument("contact matrix must be symmetric");
        }
}

PiecewiseConstant::PiecewiseConstant(double constant) : points_{{0.0, constant}} {}

PiecewiseConstant::PiecewiseConstant(std::vector<std::pair<double, double>> breakpoints)
    : points_(std::move(breakpoints)) {
    if (points_.empty()) throw std::invalid_argument("piecewise-constant level needs a breakpoint");
    if (points_.front().first != 0.0)
        throw std::invalid_argument("first breakpoint must start at t = 0");
    for (size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i].first > points_[i - 1].first))
            throw std::invalid_argument("breakpoint times must be strictly increasing");
}

double PiecewiseConstant::operator()(double t) const {
    // last breakpoint with time <= t
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double v, const auto& p) { return v < p.first; });
    if (it == points_.begin()) return points_.front().second;
    return std::prev(it)->second;
}

PolicySchedule::PolicySchedule(int n_groups, double lambda_bar)
    : levels_(n_groups), lambda_bar_(lambda_bar) {}

PolicySchedule PolicySchedule::uniform(int n_groups, double level_s, double level_i,
                                       double level_r, double lambda_bar) {
    PolicySchedule p(n_groups, lambda_bar);
    for (int k = 0; k < n_groups; ++k) {
        p.levels_[k][0] = PiecewiseConstant(level_s);
        p.levels_[k][1] = PiecewiseConstant(level_i);
        p.levels_[k][2] = PiecewiseConstant(level_r);
    }
    p.validate();
    return p;
}

double PolicySchedule::operator()(double t, int group, Compartment e) const {
    if (e == Compartment::D) throw std::invalid_argument("no guideline level for state D");
    return levels_[group][static_cast<int>(e)](t);
}

void PolicySchedule::set(int group, Compartment e, PiecewiseConstant level) {
    if (e == Compartment::D) throw std::invalid_argument("no guideline level for state D");
    levels_.at(group)[static_cast<int>(e)] = std::move(level);
}

const PiecewiseConstant& PolicySchedule::segment(int group, Compartment e) const {
    return levels_.at(group)[static_cast<int>(e)];
}

void PolicySchedule::validate() const {
    if (!(lambda_bar_ > 0.0 && lambda_bar_ <= 1.0))
        throw std::invalid_argument("lambda_bar must lie in (0, 1]");
    for (const auto& group : levels_)
        for (const auto& level : group)
            for (const auto& [t, v] : level.breakpoints())
                if (!(v >= 0.0 && v <= lambda_bar_))
                    throw std::invalid_argument("guideline levels must lie in [0, lambda_bar]");
}

TimeGrid::TimeGrid(double horizon_, double dt_) : horizon(horizon_), dt(dt_) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be finite and > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be finite and > 0");
    n_steps = static_cast<int>(std::llround(horizon / dt));
    if (n_steps < 1 || std::abs(n_steps * dt - horizon) > 1e-9)
        throw std::invalid_argument("horizon must be an integer multiple of dt");
}

StateTable::StateTable(int n_nodes, int n_groups, double fill)
    : nodes_(n_nodes),
      groups_(n_groups),
      data_(static_cast<size_t>(n_nodes) * n_groups * kCompartmentStorage, fill) {}

ControlPath::ControlPath(int n_nodes, int n_groups, double cap)
    : nodes_(n_nodes),
      groups_(n_groups),
      cap_(cap),
      social_(static_cast<size_t>(n_nodes) * n_groups * 3, 0.0),
      vacc_(static_cast<size_t>(n_nodes) * n_groups, 0.0) {}

AggregatePath::AggregatePath(int n_nodes, int n_groups, double fill)
    : nodes_(n_nodes), groups_(n_groups), z_(static_cast<size_t>(n_nodes) * n_groups, fill) {}

void SolverConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("damping must lie in (0, 1]");
    if (patch_length) {
        double tau = *patch_length;
        if (!(tau > 0.0) || tau > grid.horizon + 1e-12)
            throw std::invalid_argument("patch_length must lie in (0, horizon]");
        double steps = tau / grid.dt;
        if (std::abs(steps - std::llround(steps)) > 1e-9)
            throw std::invalid_argument("patch_length must be an integer multiple of dt");
    }
}

}  // namespace mfgepi
