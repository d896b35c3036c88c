#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

// Event-driven simulation of the repeated two-step sideband-cooling cycle:
// step I (fixed duration, red-sideband transfer S->D removing one phonon) and
// step II (thermal D->P excitation at rate Gamma, instantaneous decay to S with
// probability eta_SP, otherwise back to D), with Poisson heating throughout.
namespace q1d::sim {

enum class InternalState : char {
  S = 'S',
  D = 'D',
  P = 'P',  // excitation to P that decayed back to D
};

/// Probability that step I transfers S->D at phonon number n.
using TransferProbability = std::function<double(long)>;

/// 1 for n >= 1, 0 in the ground state.
TransferProbability unit_transfer();

struct CycleConfig {
  double gamma = 0.0;        // D->P excitation rate, s^-1
  double eta_SP = 1.0;       // P->S branching fraction
  double tau_I = 0.0;        // step I duration, s
  TransferProbability transfer = unit_transfer();
  std::string transfer_label = "unit_above_ground";
  double heating_rate = 0.0; // phonon/s
  long n_initial = 0;
  double t_max = 0.0;        // s
  std::uint64_t seed = 0;

  void validate() const;
  /// Identifies the physical configuration (everything except the seed).
  std::string key() const;
};

struct Event {
  double time;
  long n;
  InternalState state;
};

struct CoolingTrajectory {
  std::vector<Event> events;
  std::uint64_t seed = 0;
  double t_max = 0.0;
  std::string config_key;
  long final_n = 0;
  double late_mean_n = 0.0;  // time average over the last quarter of [0, t_max]

  long n_at(double t) const;
  double time_average(double t0, double t1) const;
};

CoolingTrajectory simulate_trajectory(const CycleConfig& cfg);

std::string format_trajectory_csv(const CoolingTrajectory& traj);

/// Mean cooling rate of the cycle for n >> 1: one phonon per expected cycle
/// duration tau_I + 1/(Gamma eta_SP).
double renewal_cooling_rate(double gamma, double eta_SP, double tau_I);

struct EnsembleStats {
  std::size_t trajectories = 0;
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> variance;
  double steady_state_mean = 0.0;
  double steady_state_se = 0.0;
  double slope = 0.0;        // phonon/s over the fit window
  double slope_se = 0.0;
  double fit_window_end = 0.0;
};

/// Grid-resampled ensemble statistics. Needs >= 2 trajectories of one config.
/// The slope is the mean per-trajectory least-squares slope over the first 20%
/// of the ensemble-mean cooling, excluding the t = 0 sample.
EnsembleStats ensemble_stats(std::span<const CoolingTrajectory> trajectories, std::size_t grid_points = 401);

nlohmann::json to_json(const EnsembleStats& s, bool include_curves = false);

struct RatePoint {
  double t;
  double n;
};

/// RK4 integration of dn/dt = -R n/(n + 1/2) + h with R = renewal_cooling_rate.
std::vector<RatePoint> rate_equation_trajectory(const CycleConfig& cfg, std::size_t output_points = 401);

}  // namespace q1d::sim
