#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

// Implementations of the sunq1d subcommands. Each command takes a parameter
// object (config-file keys, overridden by flags), validates it completely before
// computing anything, writes its files atomically under `out_dir`, and returns a
// JSON report.
namespace q1d::cli {

struct SpectrumOptions {
  double temperature_k = 0.0;
  std::string family;
  double band_lo_nm = 0.0;
  double band_hi_nm = 0.0;
  std::size_t points = 1001;
  bool svg = false;
};

struct RateOptions {
  std::string ion_file;
  double eta = -1.0;
  std::optional<double> grayness;
  std::optional<double> waist_m;
  std::optional<nlohmann::json> fiber;  // fiber-model object
  double temperature_k = 0.0;
  double p_D = -1.0;
};

struct VirtualTempOptions {
  std::string ion_file;
  double laser_k = 0.0;  // +inf allowed
  double sun_k = 0.0;
  double room_k = 0.0;
  double motion_hz = 0.0;
};

struct SimulateOptions {
  double gamma_s = -1.0;
  std::optional<double> eta_sp;
  std::optional<std::string> ion_file;  // eta_SP from its branching fraction
  double tau_I_s = -1.0;
  double heating_rate_per_s = 0.0;
  long n_initial = 0;
  double t_max_s = 0.0;
  std::uint64_t seed = 0;
  std::size_t trajectories = 1;
  std::size_t grid_points = 401;
  std::optional<double> transfer_probability;  // constant p for n >= 1
};

struct SlitOptions {
  double width_m;
  double distance_m;
  double mode_radius_m;
};

struct ReduceOptions {
  std::string raw;
  std::string response;
  std::optional<std::string> reference;
  std::optional<SlitOptions> slit;
  double measured_power_w = -1.0;
  double power_band_lo_nm = 0.0;
  double power_band_hi_nm = 0.0;
  double band_lo_nm = 0.0;
  double band_hi_nm = 0.0;
  double temperature_k = 0.0;
};

SpectrumOptions spectrum_options(const nlohmann::json& params);
RateOptions rate_options(const nlohmann::json& params);
VirtualTempOptions virtual_temp_options(const nlohmann::json& params);
SimulateOptions simulate_options(const nlohmann::json& params);
ReduceOptions reduce_options(const nlohmann::json& params);

nlohmann::json cmd_spectrum(const SpectrumOptions& o, const std::string& out_dir);
nlohmann::json cmd_rate(const RateOptions& o);
nlohmann::json cmd_virtual_temp(const VirtualTempOptions& o);
nlohmann::json cmd_simulate(const SimulateOptions& o, const std::string& out_dir);
nlohmann::json cmd_reduce(const ReduceOptions& o, const std::string& out_dir);

}  // namespace q1d::cli
