#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "q1d/spectrum.hpp"
#include "q1d/units.hpp"

// Reduction of fiber-coupled solar spectra: instrument response, slit clipping,
// absolute power calibration, atmospheric correction, delivery efficiency and a
// shape fit for the source temperature. Every correction except clipping is a
// pointwise multiplication, so the steps commute on a common grid.
namespace q1d::pipeline {

/// Relative spectrometer response; values must be > 0 across the analysis band.
SampledSpectrum make_response(std::vector<double> wavelengths_nm, std::vector<double> values);

/// raw / response on the coarser of the two grids over their overlap.
SampledSpectrum apply_response(const SampledSpectrum& raw, const SampledSpectrum& response);

struct SlitGeometry {
  double slit_width_m;
  double distance_m;     // fiber tip to slit
  double mode_radius_m;  // 1/e field radius at the fiber tip

  void validate() const;
};

/// Gaussian beam radius at the slit, w_f sqrt(1 + (lambda d / pi w_f^2)^2).
double beam_radius_at_slit(const SlitGeometry& g, double wavelength_nm);
/// Fraction passed by the slit (one-axis clipping): erf(sqrt(2) (s/2) / w).
double slit_transmission(const SlitGeometry& g, double wavelength_nm);
/// Divides out the slit transmission sample by sample.
SampledSpectrum correct_slit(const SampledSpectrum& s, const SlitGeometry& g);

/// Checks kind and the [350, 1100] nm coverage of a reference solar spectrum.
void validate_reference(const SampledSpectrum& reference);

struct AtmosphericCorrection {
  double amplitude;        // least-squares scale of the Planck irradiance over the fit band
  SampledSpectrum curve;   // c(lambda) = ref / (a Planck_lambda), clipped to [0, 1.2]
};

inline constexpr double kCorrectionCeiling = 1.2;

AtmosphericCorrection atmospheric_correction(const SampledSpectrum& reference, Temperature t,
                                             double fit_lo_nm = 400.0, double fit_hi_nm = 900.0);

/// c(lambda) S_lambda(lambda, T) in W/nm on the correction grid.
SampledSpectrum expected_q1d_spectrum(const SampledSpectrum& correction, Temperature t);

/// Scales `s` so its trapezoid integral over [lo, hi] nm equals `measured_power_w`.
/// The result is a per-wavelength PSD in W/nm.
SampledSpectrum calibrate_power(const SampledSpectrum& s, double measured_power_w, double lo_nm, double hi_nm);

/// Samples with c(lambda) below this are treated as opaque and skipped.
inline constexpr double kMinCorrection = 0.05;

struct EfficiencyResult {
  SampledSpectrum eta;   // ratio curve over the band
  double band_average;   // trapezoid mean over the band
  double band_lo_nm;
  double band_hi_nm;
  std::vector<std::string> warnings;
};

/// eta(lambda) = measured / ideal q1D PSD at T (times c(lambda) when a correction is
/// given). Warns when eta exceeds 1 anywhere.
EfficiencyResult extract_efficiency(const SampledSpectrum& calibrated, Temperature t, double lo_nm,
                                    double hi_nm, const SampledSpectrum* correction = nullptr);

enum class FitModel { q1d, threeD };

FitModel parse_fit_model(const std::string& name);

struct TemperatureFit {
  double temperature_k;
  double amplitude;
  double residual;  // RMS misfit / RMS data
  int iterations;
  bool acceptable;  // residual below kFitResidualThreshold
};

inline constexpr double kFitResidualThreshold = 0.05;

/// Least squares over (T, amplitude): golden-section on ln T in [t_lo, t_hi] with the
/// amplitude solved linearly at every T. Needs >= 20 samples spanning a factor 1.5
/// in wavelength; throws ConvergenceError after 200 iterations or when the minimum
/// sits on the search boundary.
TemperatureFit fit_temperature(const SampledSpectrum& s, FitModel model, double t_lo_k = 1000.0,
                               double t_hi_k = 30000.0);

struct ReductionInputs {
  SampledSpectrum raw;
  SampledSpectrum response;
  std::optional<SampledSpectrum> reference;
  std::optional<SlitGeometry> slit;
  double measured_power_w;
  double power_band_lo_nm;
  double power_band_hi_nm;
  double band_lo_nm;
  double band_hi_nm;
  Temperature source_temperature;
};

struct ReductionResult {
  SampledSpectrum calibrated;
  std::optional<AtmosphericCorrection> correction;
  EfficiencyResult efficiency;
  TemperatureFit fit;
};

/// Full reduction: response, slit, power calibration, optional atmospheric correction,
/// efficiency and a q1D temperature fit of the atmosphere-corrected PSD.
ReductionResult reduce(const ReductionInputs& in);

/// `{T_K, residual, eta_band_avg, band_nm}` plus diagnostics.
nlohmann::json fit_report(const ReductionResult& r);

}  // namespace q1d::pipeline
