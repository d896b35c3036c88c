#include <cmath>
#include <limits>

#include "doctest.h"
#include "q1d/error.hpp"
#include "q1d/ion_thermo.hpp"
#include "q1d/mode_optics.hpp"
#include "q1d/radiometry.hpp"

using namespace q1d;
using namespace q1d::ion;

namespace {

constexpr double kH = 6.62607015e-34;
constexpr double kC = 299792458.0;
constexpr double kKB = 1.380649e-23;
constexpr double kPi = 3.14159265358979323846;

IonSpec barium() { return load_ion_file(std::string(Q1D_DATA_DIR) + "/ba_plus.json"); }

const AngularFrequency kMotion(2 * kPi * 1e6);

}  // namespace

TEST_CASE("bundled Ba+ data") {
  const auto ba = barium();
  CHECK(ba.omega3.rad_per_s() == doctest::Approx(ba.omega1.rad_per_s() + ba.omega2.rad_per_s()).epsilon(1e-12));
  CHECK(ba.omega3.wavelength_nm() == doctest::Approx(455.531).epsilon(1e-6));
  CHECK(ba.omega2.wavelength_nm() == doctest::Approx(614.342).epsilon(1e-6));
  CHECK(branching_fraction(ba) == doctest::Approx(0.7637).epsilon(1e-4));
  CHECK_FALSE(ba.references.empty());
}

TEST_CASE("atomic data parsing is strict") {
  auto j = to_json(barium());
  CHECK(ion_from_json(j).g_e == 4);
  auto bad = j;
  bad["omega3_rad_s"] = j["omega3_rad_s"].get<double>() * 1.001;
  CHECK_THROWS_AS(ion_from_json(bad), DomainError);
  auto extra = j;
  extra["lifetime"] = 1.0;
  CHECK_THROWS_AS(ion_from_json(extra), InputError);
  auto missing = j;
  missing.erase("A_PD_s");
  CHECK_THROWS_AS(ion_from_json(missing), InputError);
  CHECK_THROWS(load_ion_file("/nonexistent/ion.json"));
}

TEST_CASE("sunlight cooling rate for Ba+ with eta 0.5 and G 5e-5") {
  const auto ba = barium();
  const auto est = estimate_cooling_rate(ba, {0.5, 5e-5, 1.0, kMotion}, Temperature::kelvin(5800.0));
  // Direct Einstein form: Gamma = (g_e/g_g) A_PD eta G n(omega2, T).
  const double n = 1.0 / std::expm1(kH * kC / (614.342e-9 * kKB * 5800.0));
  const double gamma = (4.0 / 6.0) * ba.A_PD * 0.5 * 5e-5 * n;
  CHECK(est.occupation == doctest::Approx(n).epsilon(1e-9));
  CHECK(est.gamma == doctest::Approx(gamma).epsilon(1e-9));
  CHECK(est.gamma == doctest::Approx(10.85).epsilon(2e-3));
  CHECK(est.ndot == doctest::Approx(-gamma * branching_fraction(ba)).epsilon(1e-9));
  CHECK(std::abs(est.ndot - (-8.2)) / 8.2 < 0.1);
  CHECK(est.psd_delivered == doctest::Approx(0.5 * 5e-5 * est.psd).epsilon(1e-14));
}

TEST_CASE("excitation rate through the energy density route") {
  const auto ba = barium();
  const auto tr = driven_transition(ba);
  const auto t = Temperature::kelvin(5800.0);
  // rho at a top-hat focus, S / (c A), against eta G rho_P.
  const double a = mode_optics::top_hat_area(20e-6);
  const double rho = mode_optics::focused_energy_density(radiometry::q1d_psd(ba.omega2, t), a);
  const double g = mode_optics::grayness(a, ba.omega2);
  const double n = radiometry::mean_occupation(ba.omega2, t);
  CHECK(excitation_rate(tr, rho) == doctest::Approx((4.0 / 6.0) * ba.A_PD * g * n).epsilon(1e-12));
  CHECK(excitation_rate(tr, 0.0) == 0.0);
  CHECK_THROWS_AS(excitation_rate(tr, -1.0), DomainError);
}

TEST_CASE("cooling rate edge cases") {
  CHECK(phonon_cooling_rate(0.0, 1.0, 0.7) == 0.0);
  CHECK_FALSE(std::signbit(phonon_cooling_rate(0.0, 1.0, 0.7)));
  CHECK(phonon_cooling_rate(10.0, 0.5, 0.8) == doctest::Approx(-4.0));
  const auto ba = barium();
  const auto est = estimate_cooling_rate(ba, {0.0, 5e-5, 1.0, kMotion}, Temperature::kelvin(5800.0));
  CHECK(est.ndot == 0.0);
  CHECK_THROWS_AS(estimate_cooling_rate(ba, {1.5, 5e-5, 1.0, kMotion}, Temperature::kelvin(5800.0)), DomainError);
  CHECK_THROWS_AS(estimate_cooling_rate(ba, {0.5, 2.0, 1.0, kMotion}, Temperature::kelvin(5800.0)), DomainError);
  CHECK(branching_fraction(1.0, 0.0) == 1.0);
}

TEST_CASE("virtual temperature: equal baths are a fixed point") {
  const auto ba = barium();
  for (double tk : {0.01, 1.0, 77.0, 300.0, 5800.0, 1e6}) {
    const auto t = Temperature::kelvin(tk);
    CHECK(virtual_temperature(ba, {t, t, t}, kMotion).kelvin() == doctest::Approx(tk).epsilon(1e-12));
  }
}

TEST_CASE("virtual temperature of the sunlight scheme") {
  const auto ba = barium();
  const auto room = Temperature::kelvin(300.0);
  const auto lim = virtual_temperature_room_limit(ba, room, kMotion);
  CHECK(lim.kelvin() == doctest::Approx(2 * kPi * 1e6 / ba.omega3.rad_per_s() * 300.0).epsilon(1e-13));
  const auto full = virtual_temperature(ba, {Temperature::infinite(), Temperature::kelvin(5800.0), room}, kMotion);
  CHECK(full.kelvin() > 1e-7);
  CHECK(full.kelvin() < 2e-6);
  // The full form approaches the room limit as the sun gets colder relative to omega2.
  const auto cold_sun = virtual_temperature(ba, {Temperature::infinite(), Temperature::kelvin(300.0), room}, kMotion);
  CHECK(cold_sun.kelvin() > full.kelvin());
  const auto occ = ground_state_occupation(lim, kMotion);
  CHECK(occ.log10_exact == doctest::Approx(-45.72).epsilon(1e-3));
  CHECK(std::abs(occ.log10_exact + 46.0) <= 1.0);
}

TEST_CASE("inverted virtual qubit is reported as no cooling") {
  const auto ba = barium();
  const BathSet hot_room{Temperature::infinite(), Temperature::kelvin(300.0), Temperature::kelvin(1e7)};
  CHECK_THROWS_AS(virtual_temperature(ba, hot_room, kMotion), NoCoolingError);
  CHECK_THROWS_AS(virtual_temperature(ba, {Temperature::kelvin(300.0), Temperature::kelvin(300.0),
                                           Temperature::infinite()},
                                      kMotion),
                  DomainError);
}

TEST_CASE("ground-state occupation: exact vs Wien form") {
  const auto report = ground_state_occupation(Temperature::kelvin(48e-6 * 1.0), kMotion);
  const double x = report.reduced_energy;
  CHECK(report.exact == doctest::Approx(1.0 / std::expm1(x)).epsilon(1e-14));
  CHECK(report.wien == doctest::Approx(std::exp(-x)).epsilon(1e-14));
  CHECK(report.difference == doctest::Approx(report.exact - report.wien).epsilon(1e-12));
  CHECK(report.difference > 0.0);
  // Far in the Wien regime the log survives underflow.
  const auto deep = ground_state_occupation(Temperature::kelvin(1e-9), kMotion);
  CHECK(deep.exact == 0.0);
  CHECK(deep.log10_exact == doctest::Approx(-deep.reduced_energy / std::log(10.0)).epsilon(1e-12));
}
