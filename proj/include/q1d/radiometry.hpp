#pragma once

#include <optional>
#include <string_view>

#include "q1d/spectrum.hpp"
#include "q1d/units.hpp"

// Closed-form thermal-radiation quantities for an isotropic 3D black body and for
// a single guided transverse mode (quasi-1D). Angular frequency is the working
// variable; the *_per_wavelength helpers exist for instrument-facing code.
namespace q1d::radiometry {

/// Above this value of beta*hbar*omega the Bose factor uses exp(-x) directly.
inline constexpr double kWienSwitch = 700.0;

/// beta * hbar * omega. Throws for infinite temperature.
double reduced_energy(AngularFrequency w, Temperature t);

/// Bose-Einstein occupation 1/(exp(beta hbar omega) - 1). T = 0 gives 0;
/// infinite T throws (divergent).
double mean_occupation(AngularFrequency w, Temperature t);

/// Planck spectral radiance B_P(omega) [W m^-2 sr^-1 (rad/s)^-1].
double planck_radiance(AngularFrequency w, Temperature t);

/// Power spectral density of thermal light in one transverse mode, S(omega)
/// [W s/rad]. `polarizations` is 1 or 2.
double q1d_psd(AngularFrequency w, Temperature t, int polarizations = 2);

/// ln S(omega); finite where q1d_psd itself underflows.
double log_q1d_psd(AngularFrequency w, Temperature t, int polarizations = 2);

/// Closed-form total single-mode power pi/(6 hbar beta^2) [W].
double q1d_total_power(Temperature t, int polarizations = 2);

/// Black-body spectral energy density rho_P(omega) [J m^-3 (rad/s)^-1].
double planck_energy_density(AngularFrequency w, Temperature t);

double q1d_psd_per_wavelength(double wavelength_nm, Temperature t, int polarizations = 2);   // W/nm
double planck_radiance_per_wavelength(double wavelength_nm, Temperature t);                 // W m^-2 sr^-1 nm^-1
/// Hemispherical exitance pi * B_lambda of a Lambertian black surface [W m^-2 nm^-1].
double planck_irradiance_per_wavelength(double wavelength_nm, Temperature t);

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Integral of S(omega) over [0, inf): adaptive Gauss-Kronrod up to
/// beta hbar omega = 50 plus the exact series for the remaining tail.
QuadratureResult q1d_power_by_quadrature(Temperature t, int polarizations = 2);

/// Integral of S(omega) over the angular-frequency span of [lo_nm, hi_nm].
double q1d_band_power(Temperature t, double lo_nm, double hi_nm, int polarizations = 2);

enum class SpectralFamily { q1d_per_omega, q1d_per_lambda, threeD_per_omega, threeD_per_lambda };

std::string_view to_string(SpectralFamily f);
SpectralFamily parse_family(std::string_view name);
/// CSV kind of a family's curve (3D families are radiances).
SpectrumKind family_kind(SpectralFamily f);
/// The family's curve evaluated at a wavelength.
double family_value(SpectralFamily f, double wavelength_nm, Temperature t);

/// Root of p (1 - e^-x) = x, the stationary point of x^p / (e^x - 1).
/// Returns nullopt for p <= 1 (monotone).
std::optional<double> peak_reduced_frequency(int power);

/// Wavelength of the curve maximum; nullopt when the curve is monotone in the
/// family's own variable (q1D per omega).
std::optional<double> wien_peak_wavelength_nm(SpectralFamily f, Temperature t);

}  // namespace q1d::radiometry
