#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "q1d/data_pipeline.hpp"

namespace q1d::verification {

/// Forward model of a fiber-coupled spectrometer measurement of an ideal q1D
/// source: counts = k * eta(l) * c(l) * S_l(l, T) * slit(l) * response(l).
struct SyntheticSetup {
  Temperature temperature = Temperature::kelvin(5800.0);
  std::vector<double> grid_nm;
  std::function<double(double)> eta;
  std::optional<SampledSpectrum> correction;
  std::optional<pipeline::SlitGeometry> slit;
  SampledSpectrum response;
  double counts_per_w_per_nm = 1e12;
  double power_band_lo_nm = 400.0;
  double power_band_hi_nm = 900.0;
};

struct SyntheticMeasurement {
  SampledSpectrum raw;
  double measured_power_w;  // delivered power in the power band
};

SyntheticMeasurement synthesize_measurement(const SyntheticSetup& setup);

/// Uniform grid lo, lo + step, ..., hi.
std::vector<double> uniform_grid(double lo, double hi, double step);

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

struct AcceptanceOptions {
  std::string data_dir;
  std::uint64_t seed = 20240607;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// One line per criterion: "[PASS] 1 name: detail".
std::string format_acceptance(const std::vector<CriterionResult>& results);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

/// Compiled-in location of the bundled data files.
std::string default_data_dir();

}  // namespace q1d::verification
