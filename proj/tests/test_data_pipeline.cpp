#include <cmath>

#include "doctest.h"
#include "q1d/data_pipeline.hpp"
#include "q1d/error.hpp"
#include "q1d/radiometry.hpp"
#include "q1d/verification/acceptance.hpp"

using namespace q1d;
using namespace q1d::pipeline;
using verification::uniform_grid;

namespace {

SampledSpectrum bundled_reference() {
  return read_spectrum_csv(std::string(Q1D_DATA_DIR) + "/astm_g173_direct.csv");
}

SampledSpectrum smooth_response() {
  std::vector<double> v;
  const auto g = uniform_grid(350.0, 1050.0, 2.0);
  for (double l : g) v.push_back(0.3 + 0.7 * std::exp(-std::pow((l - 600.0) / 250.0, 2)));
  return make_response(g, v);
}

SampledSpectrum q1d_per_nm(Temperature t, const std::vector<double>& grid, double scale = 1.0) {
  std::vector<double> v;
  for (double l : grid) v.push_back(scale * radiometry::q1d_psd_per_wavelength(l, t));
  return SampledSpectrum(grid, v, SpectrumKind::psd_per_wavelength);
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("instrument response") {
  CHECK_THROWS_AS(make_response({400.0, 500.0}, {1.0, 0.0}), DomainError);
  const SampledSpectrum raw({400, 401, 402, 403, 404}, {2, 4, 6, 8, 10}, SpectrumKind::counts);
  const auto resp = make_response({400.0, 402.0, 404.0}, {2.0, 2.0, 2.0});
  const auto out = apply_response(raw, resp);
  REQUIRE(out.size() == 3);
  CHECK(out.values()[1] == doctest::Approx(3.0));
}

TEST_CASE("slit clipping follows the gaussian beam") {
  const SlitGeometry g{25e-6, 0.5e-3, 2.5e-6};
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS((SlitGeometry{25e-6, 10e-6, 2.5e-6}.validate()), DomainError);
  CHECK_THROWS_AS((SlitGeometry{0.0, 1e-3, 2.5e-6}.validate()), DomainError);
  for (double l : {400.0, 600.0, 900.0}) {
    const double zr = kPi * 2.5e-6 * 2.5e-6 / (l * 1e-9);
    const double w = 2.5e-6 * std::sqrt(1 + std::pow(0.5e-3 / zr, 2));
    CHECK(beam_radius_at_slit(g, l) == doctest::Approx(w).epsilon(1e-13));
    CHECK(slit_transmission(g, l) == doctest::Approx(std::erf(std::sqrt(2.0) * 12.5e-6 / w)).epsilon(1e-13));
  }
  // Longer wavelengths diverge faster and are clipped more.
  CHECK(slit_transmission(g, 900.0) < slit_transmission(g, 400.0));
  // A very wide slit passes everything.
  CHECK(slit_transmission({1e-2, 0.5e-3, 2.5e-6}, 700.0) == doctest::Approx(1.0));
}

TEST_CASE("response and slit corrections commute") {
  std::vector<double> grid = uniform_grid(400.0, 900.0, 0.5), v;
  for (double l : grid) v.push_back(1e6 * (1.0 + 0.3 * std::sin(l / 37.0)));
  const SampledSpectrum raw(grid, v, SpectrumKind::counts);
  const SlitGeometry slit{25e-6, 0.5e-3, 2.5e-6};
  const auto resp = smooth_response();
  const auto a = correct_slit(apply_response(raw, resp), slit);
  const auto b = apply_response(correct_slit(raw, slit), resp);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values()[i] == doctest::Approx(b.values()[i]).epsilon(1e-12));
}

TEST_CASE("atmospheric correction from the bundled reference") {
  const auto ref = bundled_reference();
  CHECK_NOTHROW(validate_reference(ref));
  CHECK_THROWS_AS(validate_reference(ref.with_kind(SpectrumKind::counts)), DomainError);
  CHECK_THROWS_AS(validate_reference(ref.restricted(400.0, 1000.0)), DomainError);
  const auto corr = atmospheric_correction(ref, Temperature::kelvin(5800.0));
  CHECK(corr.amplitude > 0.0);
  double lo = 1e9, hi = -1e9;
  for (double v : corr.curve.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= 0.0);
  CHECK(hi <= kCorrectionCeiling);
  // Telluric absorption: the O2 A band and the 940 nm water band.
  CHECK(corr.curve.value_at(761.0) < 0.6 * corr.curve.value_at(745.0));
  CHECK(corr.curve.value_at(935.0) < 0.6 * corr.curve.value_at(870.0));
  // Expected spectrum is c times the q1D PSD.
  const auto expected = expected_q1d_spectrum(corr.curve, Temperature::kelvin(5800.0));
  CHECK(expected.value_at(600.0) ==
        doctest::Approx(corr.curve.value_at(600.0) * radiometry::q1d_psd_per_wavelength(600.0, Temperature::kelvin(5800.0)))
            .epsilon(1e-12));
}

TEST_CASE("power calibration conserves the measured power") {
  const SampledSpectrum s(uniform_grid(380.0, 1000.0, 1.0), std::vector<double>(621, 3.0), SpectrumKind::counts);
  const auto cal = calibrate_power(s, 2.5e-9, 400.0, 900.0);
  CHECK(cal.kind() == SpectrumKind::psd_per_wavelength);
  CHECK(cal.integrate(400.0, 900.0) == doctest::Approx(2.5e-9).epsilon(1e-12));
  CHECK_THROWS_AS(calibrate_power(s, 0.0, 400.0, 900.0), DomainError);
}

TEST_CASE("calibrated ideal spectrum carries the full q1D band power") {
  // Power-conservation oracle: a perfectly coupled source at T delivers the
  // analytic band power, so eta = 1 everywhere.
  const auto t = Temperature::kelvin(5800.0);
  const auto grid = uniform_grid(400.0, 900.0, 0.0025);
  const auto s = q1d_per_nm(t, grid);
  CHECK(s.integrate() == doctest::Approx(radiometry::q1d_band_power(t, 400.0, 900.0)).epsilon(1e-9));
  const auto eff = extract_efficiency(s, t, 400.0, 900.0);
  CHECK(eff.band_average == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("efficiency extraction and the eta > 1 warning") {
  const auto t = Temperature::kelvin(5800.0);
  const auto grid = uniform_grid(400.0, 900.0, 1.0);
  const auto eff = extract_efficiency(q1d_per_nm(t, grid, 0.65), t, 400.0, 900.0);
  CHECK(eff.band_average == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(eff.warnings.empty());
  const auto hot = extract_efficiency(q1d_per_nm(t, grid, 1.1), t, 400.0, 900.0);
  CHECK_FALSE(hot.warnings.empty());
  CHECK_THROWS_AS(extract_efficiency(SampledSpectrum(grid, std::vector<double>(grid.size(), 1.0), SpectrumKind::counts),
                                     t, 400.0, 900.0),
                  DomainError);
}

TEST_CASE("temperature fit recovers the source and discriminates the model") {
  const auto grid = uniform_grid(400.0, 900.0, 1.0);
  for (double tk : {3000.0, 5800.0, 9000.0}) {
    const auto fit = fit_temperature(q1d_per_nm(Temperature::kelvin(tk), grid, 0.37), FitModel::q1d);
    CHECK(fit.temperature_k == doctest::Approx(tk).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(0.37).epsilon(1e-6));
    CHECK(fit.residual < 1e-6);
    CHECK(fit.acceptable);
  }
  // 3D-shaped data with 1% deterministic ripple.
  std::vector<double> v;
  for (double l : grid) {
    v.push_back(radiometry::planck_irradiance_per_wavelength(l, Temperature::kelvin(5800.0)) *
                (1.0 + 0.01 * std::sin(l / 3.0)));
  }
  const SampledSpectrum three_d(grid, v, SpectrumKind::irradiance_per_wavelength);
  const auto matched = fit_temperature(three_d, FitModel::threeD);
  const auto mismatched = fit_temperature(three_d, FitModel::q1d);
  CHECK(matched.temperature_k == doctest::Approx(5800.0).epsilon(0.01));
  CHECK(mismatched.residual >= 5.0 * matched.residual);
  CHECK(parse_fit_model("3d") == FitModel::threeD);
  CHECK_THROWS_AS(parse_fit_model("2d"), InputError);
}

TEST_CASE("temperature fit failure modes") {
  const auto grid = uniform_grid(400.0, 900.0, 1.0);
  // A 300 K source pushes the minimum onto the lower search bound.
  CHECK_THROWS_AS(fit_temperature(q1d_per_nm(Temperature::kelvin(300.0), grid), FitModel::q1d), ConvergenceError);
  CHECK_THROWS_AS(fit_temperature(q1d_per_nm(Temperature::kelvin(5800.0), uniform_grid(400.0, 410.0, 1.0)), FitModel::q1d),
                  DomainError);
  CHECK_THROWS_AS(fit_temperature(q1d_per_nm(Temperature::kelvin(5800.0), uniform_grid(600.0, 800.0, 1.0)), FitModel::q1d),
                  DomainError);
}

TEST_CASE("synthetic round trip through the full reduction") {
  const auto t = Temperature::kelvin(5800.0);
  const auto ref = bundled_reference();
  const auto corr = atmospheric_correction(ref, t);
  const SlitGeometry slit{25e-6, 0.5e-3, 2.5e-6};
  for (double eta0 : {0.3, 0.7, 0.95}) {
    verification::SyntheticSetup s{t, uniform_grid(380.0, 1000.0, 0.5), [eta0](double) { return eta0; }, corr.curve,
                                   slit, smooth_response()};
    const auto m = verification::synthesize_measurement(s);
    const auto r = reduce({m.raw, smooth_response(), ref, slit, m.measured_power_w, 400.0, 900.0, 400.0, 900.0, t});
    CHECK(std::abs(r.efficiency.band_average - eta0) / eta0 < 0.02);
    CHECK(std::abs(r.fit.temperature_k - 5800.0) / 5800.0 < 0.01);
    const auto report = fit_report(r);
    for (const char* k : {"T_K", "residual", "eta_band_avg", "band_nm"}) CHECK(report.contains(k));
  }
  // Without atmosphere or slit the recovery is essentially exact.
  verification::SyntheticSetup clean{t, uniform_grid(380.0, 1000.0, 0.5), [](double) { return 0.6; }, std::nullopt,
                                     std::nullopt, smooth_response()};
  const auto m = verification::synthesize_measurement(clean);
  const auto r = reduce({m.raw, smooth_response(), std::nullopt, std::nullopt, m.measured_power_w, 400.0, 900.0, 400.0,
                         900.0, t});
  CHECK(r.efficiency.band_average == doctest::Approx(0.6).epsilon(1e-3));
  CHECK(r.fit.temperature_k == doctest::Approx(5800.0).epsilon(1e-3));
  CHECK_FALSE(r.correction.has_value());
}
