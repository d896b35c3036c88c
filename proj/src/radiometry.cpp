#include "q1d/radiometry.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>
#include <utility>

#include "q1d/constants.hpp"
#include "q1d/error.hpp"

namespace q1d::radiometry {

using constants::c;
using constants::hbar;
using constants::pi;

namespace {

void require_finite_positive(Temperature t) {
  if (!t.is_finite_positive()) {
    throw DomainError("temperature must be finite and > 0 K");
  }
}

void require_polarizations(int p) {
  if (p != 1 && p != 2) throw DomainError("polarization count must be 1 or 2");
}

double bose(double x) {
  if (x > kWienSwitch) return std::exp(-x);
  return 1.0 / std::expm1(x);
}

// ln(1/(e^x - 1))
double log_bose(double x) {
  if (x > kWienSwitch) return -x;
  return -std::log(std::expm1(x));
}

}  // namespace

double reduced_energy(AngularFrequency w, Temperature t) {
  if (t.is_infinite()) throw DomainError("reduced energy diverges at infinite temperature");
  return t.beta() * hbar * w.rad_per_s();
}

double mean_occupation(AngularFrequency w, Temperature t) {
  if (t.is_infinite()) throw DomainError("mean occupation diverges at infinite temperature");
  if (t.is_zero()) return 0.0;
  return bose(reduced_energy(w, t));
}

double planck_radiance(AngularFrequency w, Temperature t) {
  require_finite_positive(t);
  const double om = w.rad_per_s();
  return hbar * om * om * om / (4.0 * pi * pi * pi * c * c) * bose(reduced_energy(w, t));
}

double q1d_psd(AngularFrequency w, Temperature t, int polarizations) {
  require_finite_positive(t);
  require_polarizations(polarizations);
  return 0.5 * polarizations * hbar * w.rad_per_s() / pi * bose(reduced_energy(w, t));
}

double log_q1d_psd(AngularFrequency w, Temperature t, int polarizations) {
  require_finite_positive(t);
  require_polarizations(polarizations);
  return std::log(0.5 * polarizations * hbar * w.rad_per_s() / pi) + log_bose(reduced_energy(w, t));
}

double q1d_total_power(Temperature t, int polarizations) {
  require_finite_positive(t);
  require_polarizations(polarizations);
  const double b = t.beta();
  return 0.5 * polarizations * pi / (6.0 * hbar * b * b);
}

double planck_energy_density(AngularFrequency w, Temperature t) {
  require_finite_positive(t);
  const double om = w.rad_per_s();
  return hbar * om * om * om / (pi * pi * c * c * c) * bose(reduced_energy(w, t));
}

double q1d_psd_per_wavelength(double wavelength_nm, Temperature t, int polarizations) {
  const auto w = AngularFrequency::from_wavelength_nm(wavelength_nm);
  return q1d_psd(w, t, polarizations) * w.rad_per_s() / (wavelength_nm * 1e-9) * 1e-9;
}

double planck_radiance_per_wavelength(double wavelength_nm, Temperature t) {
  const auto w = AngularFrequency::from_wavelength_nm(wavelength_nm);
  return planck_radiance(w, t) * w.rad_per_s() / (wavelength_nm * 1e-9) * 1e-9;
}

double planck_irradiance_per_wavelength(double wavelength_nm, Temperature t) {
  return pi * planck_radiance_per_wavelength(wavelength_nm, t);
}

QuadratureResult q1d_power_by_quadrature(Temperature t, int polarizations) {
  require_finite_positive(t);
  require_polarizations(polarizations);
  // Integrate in x = beta hbar omega; boost's adaptive refinement misbehaves on
  // abscissae of order 1e15 rad/s.
  const double scale = 1.0 / (t.beta() * hbar);
  constexpr double x_cut = 50.0;
  const auto shape = [](double x) { return x == 0.0 ? 1.0 : x * bose(x); };
  double err = 0.0;
  const double body_x = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      shape, 0.0, x_cut, 20, 1e-13, &err);
  // Tail: integral_a^inf x/(e^x-1) dx = sum_k e^{-k a}(a/k + 1/k^2).
  double tail_x = 0.0;
  for (int k = 1; k <= 8; ++k) {
    tail_x += std::exp(-k * x_cut) * (x_cut / k + 1.0 / (double(k) * k));
  }
  const double prefactor = 0.5 * polarizations * hbar / pi * scale * scale;
  return {prefactor * (body_x + tail_x), prefactor * err};
}

double q1d_band_power(Temperature t, double lo_nm, double hi_nm, int polarizations) {
  require_finite_positive(t);
  require_polarizations(polarizations);
  if (!(hi_nm > lo_nm) || !(lo_nm > 0.0)) throw DomainError("bad wavelength band");
  const double scale = 1.0 / (t.beta() * hbar);
  const double x_hi = AngularFrequency::from_wavelength_nm(lo_nm).rad_per_s() / scale;
  const double x_lo = AngularFrequency::from_wavelength_nm(hi_nm).rad_per_s() / scale;
  const auto shape = [](double x) { return x * bose(x); };
  const double prefactor = 0.5 * polarizations * hbar / pi * scale * scale;
  return prefactor * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(shape, x_lo, x_hi, 20, 1e-13);
}

namespace {

constexpr std::array<std::pair<SpectralFamily, std::string_view>, 4> kFamilies{{
    {SpectralFamily::q1d_per_omega, "q1d_per_omega"},
    {SpectralFamily::q1d_per_lambda, "q1d_per_lambda"},
    {SpectralFamily::threeD_per_omega, "threeD_per_omega"},
    {SpectralFamily::threeD_per_lambda, "threeD_per_lambda"},
}};

// Exponent p in the dimensionless shape x^p/(e^x - 1) of each family in its own variable.
int family_power(SpectralFamily f) {
  switch (f) {
    case SpectralFamily::q1d_per_omega: return 1;
    case SpectralFamily::q1d_per_lambda: return 3;
    case SpectralFamily::threeD_per_omega: return 3;
    case SpectralFamily::threeD_per_lambda: return 5;
  }
  return 0;
}

}  // namespace

std::string_view to_string(SpectralFamily f) {
  for (const auto& [k, n] : kFamilies) {
    if (k == f) return n;
  }
  return "unknown";
}

SpectralFamily parse_family(std::string_view name) {
  for (const auto& [k, n] : kFamilies) {
    if (n == name) return k;
  }
  if (name == "3D_per_omega") return SpectralFamily::threeD_per_omega;
  if (name == "3D_per_lambda") return SpectralFamily::threeD_per_lambda;
  throw InputError("unknown spectral family '" + std::string(name) +
                   "' (expected q1d_per_omega, q1d_per_lambda, threeD_per_omega, threeD_per_lambda)");
}

SpectrumKind family_kind(SpectralFamily f) {
  switch (f) {
    case SpectralFamily::q1d_per_omega: return SpectrumKind::psd_per_angular_frequency;
    case SpectralFamily::q1d_per_lambda: return SpectrumKind::psd_per_wavelength;
    case SpectralFamily::threeD_per_omega: return SpectrumKind::radiance_per_angular_frequency;
    case SpectralFamily::threeD_per_lambda: return SpectrumKind::radiance_per_wavelength;
  }
  return SpectrumKind::ratio;
}

double family_value(SpectralFamily f, double wavelength_nm, Temperature t) {
  const auto w = AngularFrequency::from_wavelength_nm(wavelength_nm);
  switch (f) {
    case SpectralFamily::q1d_per_omega: return q1d_psd(w, t);
    case SpectralFamily::q1d_per_lambda: return q1d_psd_per_wavelength(wavelength_nm, t);
    case SpectralFamily::threeD_per_omega: return planck_radiance(w, t);
    case SpectralFamily::threeD_per_lambda: return planck_radiance_per_wavelength(wavelength_nm, t);
  }
  return 0.0;
}

std::optional<double> peak_reduced_frequency(int power) {
  if (power <= 1) return std::nullopt;
  const double p = power;
  const auto f = [p](double x) { return p * -std::expm1(-x) - x; };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, 0.5, p, boost::math::tools::eps_tolerance<double>(48), max_iter);
  if (max_iter >= 200) throw ConvergenceError("peak root solve did not converge");
  return 0.5 * (a + b);
}

std::optional<double> wien_peak_wavelength_nm(SpectralFamily f, Temperature t) {
  require_finite_positive(t);
  const auto x = peak_reduced_frequency(family_power(f));
  if (!x) return std::nullopt;
  // x = beta hbar omega  =>  lambda = 2 pi c beta hbar / x
  return 2.0 * pi * c * t.beta() * hbar / *x * 1e9;
}

}  // namespace q1d::radiometry
