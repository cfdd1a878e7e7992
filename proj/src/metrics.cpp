#include "mfgepi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfgepi {

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::InfectedProportion: return "infected";
        case Quantity::SocializationS: return "socialization";
        case Quantity::Vaccination: return "vaccination";
    }
    return "?";
}

std::vector<double> quantity_series(const EquilibriumSolution& solution, int group, Quantity q) {
    if (group < 0 || group >= solution.n_groups())
        throw std::invalid_argument("quantity_series: group index out of range");
    std::vector<double> series(solution.grid.n_nodes());
    for (int node = 0; node < solution.grid.n_nodes(); ++node) {
        switch (q) {
            case Quantity::InfectedProportion:
                series[node] = solution.distributions(node, group, Compartment::I);
                break;
            case Quantity::SocializationS:
                series[node] = solution.controls.socialization(node, group, Compartment::S);
                break;
            case Quantity::Vaccination:
                series[node] = solution.controls.vaccination(node, group);
                break;
        }
    }
    return series;
}

PeakInfo peak_of(const std::vector<double>& series, Quantity q) {
    if (series.empty()) throw std::invalid_argument("peak_of: empty series");
    const bool minimum = q == Quantity::SocializationS;
    PeakInfo peak{series[0], 0};
    for (int i = 1; i < static_cast<int>(series.size()); ++i) {
        if (minimum ? series[i] < peak.value : series[i] > peak.value) {
            peak.value = series[i];
            peak.node = i;
        }
    }
    return peak;
}

double peak_difference(const std::vector<double>& a, const std::vector<double>& b, Quantity q) {
    if (a.size() != b.size())
        throw std::invalid_argument("peak_difference: series lengths differ");
    return std::abs(peak_of(a, q).value - peak_of(b, q).value);
}

double peak_time_span(const EquilibriumSolution& solution, Quantity q) {
    int earliest = solution.grid.n_nodes();
    int latest = 0;
    for (int k = 0; k < solution.n_groups(); ++k) {
        PeakInfo peak = peak_of(quantity_series(solution, k, q), q);
        earliest = std::min(earliest, peak.node);
        latest = std::max(latest, peak.node);
    }
    return solution.grid.dt * (latest - earliest);
}

double group_disparity(const EquilibriumSolution& solution, int group_k, int group_l, Quantity q) {
    auto a = quantity_series(solution, group_k, q);
    auto b = quantity_series(solution, group_l, q);
    double gap = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < a.size(); ++i) gap = std::max(gap, a[i] - b[i]);
    return gap;
}

}  // namespace mfgepi
