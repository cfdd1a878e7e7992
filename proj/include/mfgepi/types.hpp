#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mfgepi {

// Individual health states. Storage always carries four compartments; SIR runs
// keep the D column identically zero and suppress it in reports.
enum class Compartment : int { S = 0, I = 1, R = 2, D = 3 };

inline constexpr int kCompartmentStorage = 4;

enum class Variant { SIR, SIRD };

int compartment_count(Variant v);
const char* compartment_name(Compartment e);
const char* variant_name(Variant v);

// Attitude of a group towards official social distancing guidelines.
// Followers anchor their behavior to the published level, indifferents to
// full socialization (healthy) or an intrinsic sick-day level (infected).
enum class AuthorityKind { Follower, Indifferent };

const char* authority_kind_name(AuthorityKind k);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupId {
    int index = 0;
    std::string label;
};

struct EpidemicParams {
    double beta = 0.0;   // transmission rate scale
    double gamma = 0.0;  // exit rate from I
    double eta = 0.0;    // immunity waning rate R -> S
    double kappa = 0.0;  // vaccination efficiency S -> R
    double rho = 0.0;    // mortality fraction of I exits (SIRD only)

    void validate(Variant variant) const;
};

struct CostParams {
    double c_lambda = 1.0;     // weight on susceptible-state guideline deviation
    double c_nu = 1.0;         // weight on squared vaccination effort
    double c_infection = 0.0;  // flat cost rate while infected
    double xi_infected = 1.0;  // intrinsic infected socialization (indifferent groups)
    double death_cost = 0.0;   // terminal cost on death (SIRD)

    void validate(AuthorityKind kind, Variant variant) const;
};

struct GroupSpec {
    GroupId id;
    AuthorityKind kind = AuthorityKind::Follower;
    double proportion = 0.0;  // population share, all groups sum to 1
    EpidemicParams epi;
    CostParams cost;
};

// Symmetric interaction weights w(k,l) in [0,1].
class ContactMatrix {
public:
    ContactMatrix() = default;
    explicit ContactMatrix(int n_groups, double fill = 1.0);
    ContactMatrix(int n_groups, std::vector<double> entries);

    int n_groups() const { return n_; }
    double operator()(int k, int l) const { return w_[static_cast<size_t>(k) * n_ + l]; }
    double& operator()(int k, int l) { return w_[static_cast<size_t>(k) * n_ + l]; }
    void validate() const;

private:
    int n_ = 0;
    std::vector<double> w_;
};

// Right-continuous step function given by sorted (time, value) breakpoints.
class PiecewiseConstant {
public:
    PiecewiseConstant() : PiecewiseConstant(0.0) {}
    explicit PiecewiseConstant(double constant);
    explicit PiecewiseConstant(std::vector<std::pair<double, double>> breakpoints);

    double operator()(double t) const;
    const std::vector<std::pair<double, double>>& breakpoints() const { return points_; }
    bool is_constant() const { return points_.size() == 1; }

private:
    std::vector<std::pair<double, double>> points_;
};

// Official distancing guideline levels lambda(t, group, state) for the live
// states S, I, R. Levels live in [0, lambda_bar].
class PolicySchedule {
public:
    PolicySchedule() = default;
    PolicySchedule(int n_groups, double lambda_bar);

    static PolicySchedule uniform(int n_groups, double level_s, double level_i, double level_r,
                                  double lambda_bar = 1.0);

    double operator()(double t, int group, Compartment e) const;
    void set(int group, Compartment e, PiecewiseConstant level);
    const PiecewiseConstant& segment(int group, Compartment e) const;

    int n_groups() const { return static_cast<int>(levels_.size()); }
    double lambda_bar() const { return lambda_bar_; }
    void validate() const;

private:
    std::vector<std::array<PiecewiseConstant, 3>> levels_;
    double lambda_bar_ = 1.0;
};

// Uniform node grid on [0, horizon]: n_steps intervals, n_steps+1 nodes.
struct TimeGrid {
    double horizon = 100.0;
    double dt = 0.1;
    int n_steps = 1000;

    TimeGrid() = default;
    TimeGrid(double horizon, double dt);

    int n_nodes() const { return n_steps + 1; }
    double time(int node) const { return static_cast<double>(node) * dt; }
};

// Dense (node, group, compartment) table.
class StateTable {
public:
    StateTable() = default;
    StateTable(int n_nodes, int n_groups, double fill = 0.0);

    double operator()(int node, int group, Compartment e) const {
        return data_[index(node, group, static_cast<int>(e))];
    }
    double& operator()(int node, int group, Compartment e) {
        return data_[index(node, group, static_cast<int>(e))];
    }
    double at_raw(int node, int group, int e) const { return data_[index(node, group, e)]; }
    double& at_raw(int node, int group, int e) { return data_[index(node, group, e)]; }

    int n_nodes() const { return nodes_; }
    int n_groups() const { return groups_; }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

private:
    size_t index(int node, int group, int e) const {
        return (static_cast<size_t>(node) * groups_ + group) * kCompartmentStorage + e;
    }
    int nodes_ = 0;
    int groups_ = 0;
    std::vector<double> data_;
};

// Population distribution over compartments, one simplex per (node, group).
class DistributionPath : public StateTable {
public:
    using StateTable::StateTable;
};

// Expected remaining cost per (node, group, compartment).
class ValuePath : public StateTable {
public:
    using StateTable::StateTable;
};

// Behavioral controls on grid nodes: socialization per live state plus a
// vaccination effort bounded by `cap`.
class ControlPath {
public:
    ControlPath() = default;
    ControlPath(int n_nodes, int n_groups, double cap);

    double socialization(int node, int group, Compartment e) const {
        return social_[social_index(node, group, static_cast<int>(e))];
    }
    double& socialization(int node, int group, Compartment e) {
        return social_[social_index(node, group, static_cast<int>(e))];
    }
    double vaccination(int node, int group) const {
        return vacc_[static_cast<size_t>(node) * groups_ + group];
    }
    double& vaccination(int node, int group) {
        return vacc_[static_cast<size_t>(node) * groups_ + group];
    }

    int n_nodes() const { return nodes_; }
    int n_groups() const { return groups_; }
    double cap() const { return cap_; }

private:
    size_t social_index(int node, int group, int e) const {
        return (static_cast<size_t>(node) * groups_ + group) * 3 + e;
    }
    int nodes_ = 0;
    int groups_ = 0;
    double cap_ = 0.0;
    std::vector<double> social_;
    std::vector<double> vacc_;
};

// Weighted infectious contact exposure Z per (node, group).
class AggregatePath {
public:
    AggregatePath() = default;
    AggregatePath(int n_nodes, int n_groups, double fill = 0.0);

    double operator()(int node, int group) const {
        return z_[static_cast<size_t>(node) * groups_ + group];
    }
    double& operator()(int node, int group) {
        return z_[static_cast<size_t>(node) * groups_ + group];
    }

    int n_nodes() const { return nodes_; }
    int n_groups() const { return groups_; }

private:
    int nodes_ = 0;
    int groups_ = 0;
    std::vector<double> z_;
};

enum class Integrator { ExplicitEuler, RK4 };

const char* integrator_name(Integrator i);

struct SolverConfig {
    TimeGrid grid;
    double epsilon = 1e-6;
    int max_iters = 500;
    double damping = 0.5;
    Integrator integrator = Integrator::ExplicitEuler;
    // When set, the horizon is split into patches of this length (in time
    // units) that are solved separately and stitched to joint consistency.
    std::optional<double> patch_length;

    void validate() const;
};

}  // namespace mfgepi
