#pragma once

#include <vector>

#include "q1d/cooling_sim.hpp"

// Exact stationary statistics of the cooling cycle, computed without simulation.
// The chain is embedded at the start of every step I; rewards and cycle lengths are
// integrated analytically and combined by renewal-reward.
namespace q1d::verification {

struct StationaryResult {
  std::vector<double> embedded;  // stationary law of n at step-I starts
  double mean_n;                 // time-averaged phonon number
  double mean_cycle_s;
};

StationaryResult stationary_phonon_number(double gamma, double eta_SP, double tau_I, double heating_rate,
                                          const sim::TransferProbability& transfer = sim::unit_transfer(),
                                          int n_cap = 200);

/// Birth-death small-heating approximation h c / (1 - h c), c = tau_I + 1/(Gamma eta_SP).
double small_heating_mean_n(double gamma, double eta_SP, double tau_I, double heating_rate);

}  // namespace q1d::verification
