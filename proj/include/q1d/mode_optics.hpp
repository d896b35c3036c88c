#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "q1d/units.hpp"

// Etendue bookkeeping for a single diffraction-limited spatial mode:
// A(omega) * Omega(omega) = lambda^2.
namespace q1d::mode_optics {

enum class Regime { constant_divergence, constant_area, tabulated };

/// How a guided mode's area and solid angle scale with frequency inside a
/// wavelength band. `tabulated` covers fibers between the two limiting regimes
/// with a measured A(lambda) curve.
class FiberModeModel {
 public:
  static FiberModeModel constant_divergence(double solid_angle_sr, double band_lo_nm, double band_hi_nm);
  static FiberModeModel constant_area(double area_m2, double band_lo_nm, double band_hi_nm);
  static FiberModeModel tabulated(std::vector<double> wavelengths_nm, std::vector<double> areas_m2);

  Regime regime() const { return regime_; }
  double band_lo_nm() const { return band_lo_; }
  double band_hi_nm() const { return band_hi_; }
  /// Omega_0 for constant_divergence, A_0 for constant_area, NaN for tabulated.
  double anchor() const { return anchor_; }
  const std::vector<double>& table_wavelengths_nm() const { return table_wl_; }
  const std::vector<double>& table_areas_m2() const { return table_area_; }

  bool in_band(AngularFrequency w) const;

 private:
  FiberModeModel() = default;
  Regime regime_ = Regime::constant_area;
  double anchor_ = 0.0;
  double band_lo_ = 0.0;
  double band_hi_ = 0.0;
  std::vector<double> table_wl_;
  std::vector<double> table_area_;
};

double mode_area(const FiberModeModel& model, AngularFrequency w);         // m^2
/// Solid angle lambda^2 / A; throws if it exceeds 4 pi.
double mode_solid_angle(const FiberModeModel& model, AngularFrequency w);  // sr

/// Radiance S / (A Omega) carried by the mode [W m^-2 sr^-1 (rad/s)^-1].
double mode_radiance(const FiberModeModel& model, AngularFrequency w, double psd);

/// Integrated-intensity area P/I_max = pi w0^2 / 2 of a gaussian mode with 1/e
/// field radius w0.
double top_hat_area(double waist_m);

/// Geometric grayness G = (lambda^2 / 4 pi) / A. Throws if A <= 0 or G > 1.
double grayness(double area_m2, AngularFrequency w);
double grayness_from_solid_angle(double solid_angle_sr);

/// rho = S / (c A).
double focused_energy_density(double psd, double area_m2);

/// Angular distribution of spectral radiance for a gaussian mode (top-hat area
/// normalization). Diagnostic only: its on-axis value is 4x Planck.
double gaussian_angular_radiance(AngularFrequency w, double theta_rad, double waist_m, double psd);

struct FocusGeometry {
  double waist_m;
  double half_angle_rad;

  /// Far-field half angle lambda / (pi w0) of a gaussian focus.
  static FocusGeometry from_waist(double waist_m, AngularFrequency w);
};

inline constexpr double kParaxialWarnAngle = 0.1;
inline constexpr double kParaxialMaxAngle = 0.3;

/// Throws at or above 0.3 rad; returns a warning between 0.1 and 0.3 rad.
std::optional<std::string> validate_focus(const FocusGeometry& g);

FiberModeModel fiber_model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FiberModeModel& model);

}  // namespace q1d::mode_optics
