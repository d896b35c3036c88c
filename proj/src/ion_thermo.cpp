#include "q1d/ion_thermo.hpp"

#include <cmath>
#include <numbers>

#include "q1d/constants.hpp"
#include "q1d/error.hpp"
#include "q1d/io.hpp"
#include "q1d/radiometry.hpp"

namespace q1d::ion {

using constants::c;
using constants::hbar;
using constants::pi;

void IonSpec::validate() const {
  const double sum = omega1.rad_per_s() + omega2.rad_per_s();
  if (std::abs(omega3.rad_per_s() - sum) > 1e-6 * omega3.rad_per_s()) {
    throw DomainError("ion '" + name + "': omega3 must equal omega1 + omega2 to 1e-6");
  }
  if (!(A_PS > 0.0) || !(A_PD > 0.0)) throw DomainError("ion '" + name + "': A coefficients must be > 0");
  if (g_e < 1 || g_g < 1) throw DomainError("ion '" + name + "': degeneracies must be >= 1");
}

IonSpec ion_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("atomic data must be a JSON object");
  static const char* const kKnown[] = {"name",   "omega1_rad_s", "omega2_rad_s", "omega3_rad_s",
                                       "A_PS_s", "A_PD_s",       "g_e",          "g_g",
                                       "references", "notes",    "version"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : kKnown) ok = ok || key == k;
    if (!ok) throw InputError("atomic data: unknown key '" + key + "'");
  }
  try {
    IonSpec ion{j.at("name").get<std::string>(),
                AngularFrequency(j.at("omega1_rad_s").get<double>()),
                AngularFrequency(j.at("omega2_rad_s").get<double>()),
                AngularFrequency(j.at("omega3_rad_s").get<double>()),
                j.at("A_PS_s").get<double>(),
                j.at("A_PD_s").get<double>(),
                j.at("g_e").get<int>(),
                j.at("g_g").get<int>(),
                j.value("references", std::vector<std::string>{})};
    ion.validate();
    return ion;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("atomic data: ") + e.what());
  }
}

IonSpec load_ion_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return ion_from_json(j);
}

nlohmann::json to_json(const IonSpec& ion) {
  return {{"name", ion.name},
          {"omega1_rad_s", ion.omega1.rad_per_s()},
          {"omega2_rad_s", ion.omega2.rad_per_s()},
          {"omega3_rad_s", ion.omega3.rad_per_s()},
          {"A_PS_s", ion.A_PS},
          {"A_PD_s", ion.A_PD},
          {"g_e", ion.g_e},
          {"g_g", ion.g_g},
          {"references", ion.references}};
}

void BathSet::validate() const {
  if (!sun.is_finite_positive() || !room.is_finite_positive()) {
    throw DomainError("sun and room temperatures must be finite and > 0");
  }
  if (laser.is_zero()) throw DomainError("laser bath temperature must be > 0");
}

void CoolingDrive::validate() const {
  if (!(eta_delivery >= 0.0 && eta_delivery <= 1.0)) throw DomainError("delivery efficiency must lie in [0, 1]");
  if (!(grayness > 0.0 && grayness <= 1.0)) throw DomainError("grayness must lie in (0, 1]");
  if (!(p_D >= 0.0 && p_D <= 1.0)) throw DomainError("p_D must lie in [0, 1]");
}

Transition driven_transition(const IonSpec& ion) {
  return {ion.A_PD, ion.g_e, ion.g_g, ion.omega2};
}

double branching_fraction(double A_PS, double A_PD) {
  if (!(A_PS > 0.0) || A_PD < 0.0) throw DomainError("need A_PS > 0 and A_PD >= 0");
  return A_PS / (A_PS + A_PD);
}

double branching_fraction(const IonSpec& ion) { return branching_fraction(ion.A_PS, ion.A_PD); }

double excitation_rate(const Transition& tr, double rho) {
  if (rho < 0.0 || !std::isfinite(rho)) throw DomainError("energy density must be finite and >= 0");
  if (!(tr.A_eg > 0.0) || tr.g_e < 1 || tr.g_g < 1) throw DomainError("bad transition data");
  const double w = tr.omega_eg.rad_per_s();
  return pi * pi * c * c * c / (hbar * w * w * w) * (double(tr.g_e) / tr.g_g) * tr.A_eg * rho;
}

double phonon_cooling_rate(double gamma, double p_D, double eta_SP) {
  if (gamma < 0.0) throw DomainError("excitation rate must be >= 0");
  if (!(p_D >= 0.0 && p_D <= 1.0) || !(eta_SP >= 0.0 && eta_SP <= 1.0)) {
    throw DomainError("p_D and eta_SP must lie in [0, 1]");
  }
  const double r = gamma * p_D * eta_SP;
  return r == 0.0 ? 0.0 : -r;
}

namespace {

double inverse_kelvin(Temperature t) { return t.is_infinite() ? 0.0 : 1.0 / t.kelvin(); }

}  // namespace

Temperature virtual_temperature(const IonSpec& ion, const BathSet& baths, AngularFrequency omega_motion) {
  baths.validate();
  const double w1 = ion.omega1.rad_per_s();
  const double w2 = ion.omega2.rad_per_s();
  const double wm = omega_motion.rad_per_s();
  if (wm >= w1) throw DomainError("motional frequency must be below omega1");
  const double inv_l = inverse_kelvin(baths.laser);
  const double inv_2 = inverse_kelvin(baths.sun);
  const double inv_3 = inverse_kelvin(baths.room);
  // omega3/T3 - omega2/T2 - (omega1 - omega_m)/T_l with omega3 -> omega1 + omega2
  const double denom = w1 * (inv_3 - inv_l) + w2 * (inv_3 - inv_2) + wm * inv_l;
  if (!(denom > 0.0)) {
    throw NoCoolingError(
        "virtual-qubit denominator omega3/T3 - omega2/T2 - omega_l/T_l = " + io::format_double(denom) +
        " K^-1 rad/s is not positive: the virtual qubit is population-inverted, so these baths "
        "heat rather than cool the motion");
  }
  return Temperature::kelvin(wm / denom);
}

Temperature virtual_temperature_room_limit(const IonSpec& ion, Temperature room, AngularFrequency omega_motion) {
  if (!room.is_finite_positive()) throw DomainError("room temperature must be finite and > 0");
  return Temperature::kelvin(omega_motion.rad_per_s() / ion.omega3.rad_per_s() * room.kelvin());
}

OccupationReport ground_state_occupation(Temperature t_v, AngularFrequency omega_motion) {
  if (!t_v.is_finite_positive()) throw DomainError("virtual temperature must be finite and > 0");
  const double x = radiometry::reduced_energy(omega_motion, t_v);
  const double exact = radiometry::mean_occupation(omega_motion, t_v);
  const double wien = std::exp(-x);
  const double log_exact = x > 30.0 ? -x - std::log1p(-std::exp(-x)) : std::log(exact);
  return {x, exact, wien, exact - wien, log_exact / std::numbers::ln10};
}

RateEstimate estimate_cooling_rate(const IonSpec& ion, const CoolingDrive& drive, Temperature sun) {
  drive.validate();
  const auto tr = driven_transition(ion);
  RateEstimate r{};
  r.occupation = radiometry::mean_occupation(tr.omega_eg, sun);
  r.psd = radiometry::q1d_psd(tr.omega_eg, sun);
  r.psd_delivered = drive.eta_delivery * drive.grayness * r.psd;
  r.energy_density = drive.eta_delivery * drive.grayness * radiometry::planck_energy_density(tr.omega_eg, sun);
  r.gamma = excitation_rate(tr, r.energy_density);
  r.eta_SP = branching_fraction(ion);
  r.ndot = phonon_cooling_rate(r.gamma, drive.p_D, r.eta_SP);
  return r;
}

}  // namespace q1d::ion
