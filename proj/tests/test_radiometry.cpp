#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "q1d/error.hpp"
#include "q1d/kernels.hpp"
#include "q1d/radiometry.hpp"

using namespace q1d;
using namespace q1d::radiometry;

namespace {

// Independent constants and formulas, written out here rather than shared.
constexpr double kH = 6.62607015e-34;
constexpr double kC = 299792458.0;
constexpr double kKB = 1.380649e-23;
constexpr double kPi = 3.14159265358979323846;
constexpr double kHbar = kH / (2 * kPi);

double occupation_oracle(double lambda_nm, double t_k) {
  return 1.0 / std::expm1(kH * kC / (lambda_nm * 1e-9 * kKB * t_k));
}

}  // namespace

TEST_CASE("Ba+ D-P line occupation at 5800 K") {
  const auto w = AngularFrequency::from_wavelength_nm(614.342);
  const auto t = Temperature::kelvin(5800.0);
  CHECK(reduced_energy(w, t) == doctest::Approx(4.0379).epsilon(1e-4));
  CHECK(mean_occupation(w, t) == doctest::Approx(occupation_oracle(614.342, 5800.0)).epsilon(1e-13));
  CHECK(mean_occupation(w, t) == doctest::Approx(0.017951).epsilon(1e-4));
}

TEST_CASE("total power closure against an independent quadrature") {
  for (double tk : {300.0, 1000.0, 5800.0, 20000.0}) {
    const double kt = kKB * tk;
    // exp_sinh on [0, inf) in omega, written from the occupation formula directly.
    const auto f = [&](double x) { return x == 0.0 ? 1.0 : x / std::expm1(x); };
    boost::math::quadrature::exp_sinh<double> es;
    const double ix = es.integrate(f);
    const double oracle = kt * kt / (kPi * kHbar) * ix;
    const auto t = Temperature::kelvin(tk);
    CHECK(q1d_total_power(t) == doctest::Approx(oracle).epsilon(1e-12));
    const auto q = q1d_power_by_quadrature(t);
    CHECK(q.value == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(q.error_estimate < 1e-10 * q.value);
  }
  CHECK(q1d_total_power(Temperature::kelvin(5800.0)) == doctest::Approx(3.19e-5).epsilon(3e-3));
}

TEST_CASE("total power scales as T squared and with polarization count") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(10.0, 1e5);
  for (int i = 0; i < 200; ++i) {
    const double tk = u(rng);
    const double p1 = q1d_total_power(Temperature::kelvin(tk));
    const double p2 = q1d_total_power(Temperature::kelvin(2 * tk));
    CHECK(p2 / p1 == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(q1d_total_power(Temperature::kelvin(tk), 1) == doctest::Approx(0.5 * p1).epsilon(1e-15));
  }
  CHECK_THROWS_AS(q1d_total_power(Temperature::kelvin(300.0), 3), DomainError);
  CHECK_THROWS_AS(q1d_total_power(Temperature::infinite()), DomainError);
  CHECK_THROWS_AS(q1d_total_power(Temperature::kelvin(0.0)), DomainError);
}

TEST_CASE("band power agrees with tanh-sinh in omega and is additive") {
  const auto t = Temperature::kelvin(5800.0);
  const double kt = kKB * 5800.0;
  const auto s = [&](double om) { return kHbar * om / kPi / std::expm1(kHbar * om / kt); };
  const auto om = [](double nm) { return 2 * kPi * kC / (nm * 1e-9); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double oracle = ts.integrate(s, om(900.0), om(400.0));
  CHECK(q1d_band_power(t, 400.0, 900.0) == doctest::Approx(oracle).epsilon(1e-11));
  const double sum = q1d_band_power(t, 400.0, 650.0) + q1d_band_power(t, 650.0, 900.0);
  CHECK(sum == doctest::Approx(q1d_band_power(t, 400.0, 900.0)).epsilon(1e-12));
  // The missing low-frequency sliver is about x_lo / (pi^2 / 6) of the total.
  CHECK(q1d_band_power(t, 1.0, 1e12) == doctest::Approx(q1d_total_power(t)).epsilon(1e-8));
  CHECK_THROWS(q1d_band_power(t, 900.0, 400.0));
}

TEST_CASE("psd limits: Rayleigh-Jeans and Wien") {
  const auto t = Temperature::kelvin(5800.0);
  // Rayleigh-Jeans: S -> k_B T / pi at x << 1.
  const auto low = AngularFrequency(1e6);
  CHECK(q1d_psd(low, t) == doctest::Approx(kKB * 5800.0 / kPi).epsilon(1e-8));
  // Wien: S -> (hbar omega / pi) e^{-x}.
  const auto high = AngularFrequency::from_wavelength_nm(100.0);
  const double x = reduced_energy(high, t);
  CHECK(x > 20);
  CHECK(q1d_psd(high, t) == doctest::Approx(kHbar * high.rad_per_s() / kPi * std::exp(-x)).epsilon(1e-9));
}

TEST_CASE("psd is continuous across the Wien switch and positive in log form beyond") {
  const auto t = Temperature::kelvin(1.0);
  const double scale = kKB / kHbar;  // omega per unit x at 1 K
  const double below = q1d_psd(AngularFrequency(scale * (kWienSwitch * (1 - 1e-12))), t);
  const double above = q1d_psd(AngularFrequency(scale * (kWienSwitch * (1 + 1e-12))), t);
  CHECK(above == doctest::Approx(below).epsilon(1e-8));
  for (double x : {1.0, 100.0, 699.0, 701.0, 745.0, 800.0, 1e4, 1e6}) {
    const double lg = log_q1d_psd(AngularFrequency(scale * x), t);
    CHECK(std::isfinite(lg));
    CHECK(q1d_psd(AngularFrequency(scale * x), t) >= 0.0);
    if (q1d_psd(AngularFrequency(scale * x), t) > 1e-290) {
      CHECK(lg == doctest::Approx(std::log(q1d_psd(AngularFrequency(scale * x), t))).epsilon(1e-12));
    }
  }
}

TEST_CASE("psd, radiance and energy density relations") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(200.0, 5000.0), temp(100.0, 20000.0);
  for (int i = 0; i < 500; ++i) {
    const auto w = AngularFrequency::from_wavelength_nm(lam(rng));
    const auto t = Temperature::kelvin(temp(rng));
    const double om = w.rad_per_s();
    const double n = mean_occupation(w, t);
    CHECK(q1d_psd(w, t) == doctest::Approx(kHbar * om / kPi * n).epsilon(1e-13));
    CHECK(planck_radiance(w, t) == doctest::Approx(kHbar * om * om * om / (4 * kPi * kPi * kPi * kC * kC) * n).epsilon(1e-13));
    CHECK(planck_energy_density(w, t) == doctest::Approx(4 * kPi / kC * planck_radiance(w, t)).epsilon(1e-13));
    // Per-wavelength forms carry |d omega / d lambda| = 2 pi c / lambda^2 (per nm).
    const double l = w.wavelength_nm();
    const double jac = 2 * kPi * kC / (l * 1e-9 * l * 1e-9) * 1e-9;
    CHECK(q1d_psd_per_wavelength(l, t) == doctest::Approx(q1d_psd(w, t) * jac).epsilon(1e-12));
    CHECK(planck_irradiance_per_wavelength(l, t) == doctest::Approx(kPi * planck_radiance(w, t) * jac).epsilon(1e-12));
  }
}

TEST_CASE("peak reduced frequencies solve p(1 - e^-x) = x") {
  CHECK_FALSE(peak_reduced_frequency(1).has_value());
  const double x3 = *peak_reduced_frequency(3);
  const double x5 = *peak_reduced_frequency(5);
  CHECK(x3 == doctest::Approx(2.821439372122079).epsilon(1e-12));
  CHECK(x5 == doctest::Approx(4.965114231744276).epsilon(1e-12));
  for (int p : {2, 3, 4, 5, 6}) {
    const double x = *peak_reduced_frequency(p);
    CHECK(p * (1 - std::exp(-x)) == doctest::Approx(x).epsilon(1e-13));
  }
}

TEST_CASE("peak wavelengths at 5800 K and Wien scaling") {
  const auto t = Temperature::kelvin(5800.0);
  const double q1d = *wien_peak_wavelength_nm(SpectralFamily::q1d_per_lambda, t);
  const double d3 = *wien_peak_wavelength_nm(SpectralFamily::threeD_per_lambda, t);
  CHECK(q1d == doctest::Approx(879.2).epsilon(2e-4));
  CHECK(d3 == doctest::Approx(499.6).epsilon(2e-4));
  CHECK_FALSE(wien_peak_wavelength_nm(SpectralFamily::q1d_per_omega, t).has_value());
  // lambda_peak * T is constant.
  const double q1d_2 = *wien_peak_wavelength_nm(SpectralFamily::q1d_per_lambda, Temperature::kelvin(2900.0));
  CHECK(q1d_2 == doctest::Approx(2.0 * q1d).epsilon(1e-12));
  // Local maximum on a fine grid.
  for (auto f : {SpectralFamily::q1d_per_lambda, SpectralFamily::threeD_per_lambda}) {
    const double p = *wien_peak_wavelength_nm(f, t);
    const double v = family_value(f, p, t);
    CHECK(v > family_value(f, p - 0.5, t));
    CHECK(v > family_value(f, p + 0.5, t));
  }
}

TEST_CASE("families parse by name") {
  for (auto f : {SpectralFamily::q1d_per_omega, SpectralFamily::q1d_per_lambda, SpectralFamily::threeD_per_omega,
                 SpectralFamily::threeD_per_lambda}) {
    CHECK(parse_family(to_string(f)) == f);
  }
  CHECK(parse_family("3D_per_lambda") == SpectralFamily::threeD_per_lambda);
  CHECK_THROWS_AS(parse_family("4D"), InputError);
}
