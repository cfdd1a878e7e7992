#pragma once

#include <vector>

#include "mfgepi/solver.hpp"
#include "mfgepi/types.hpp"

namespace mfgepi {

// Scalar time series the experiment metrics are defined on. "Peak" means the
// maximum for infected proportion and vaccination, and the minimum (deepest
// dip) for susceptible-state socialization.
enum class Quantity { InfectedProportion, SocializationS, Vaccination };

const char* quantity_name(Quantity q);

std::vector<double> quantity_series(const EquilibriumSolution& solution, int group, Quantity q);

struct PeakInfo {
    double value = 0.0;
    int node = 0;  // earliest node attaining the peak
};

PeakInfo peak_of(const std::vector<double>& series, Quantity q);

// |peak(a) - peak(b)| for two series on identical grids.
double peak_difference(const std::vector<double>& a, const std::vector<double>& b, Quantity q);

// Spread of per-group peak times, in time units: latest minus earliest
// argmax of the infected proportion (ties resolved to the earliest node).
double peak_time_span(const EquilibriumSolution& solution,
                      Quantity q = Quantity::InfectedProportion);

// Signed largest pointwise gap max_t (series_k - series_l).
double group_disparity(const EquilibriumSolution& solution, int group_k, int group_l, Quantity q);

}  // namespace mfgepi
