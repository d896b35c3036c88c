#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "q1d/units.hpp"

// Three-level (S, D, P) ion driven by thermal light: Einstein-rate excitation,
// phonon removal rate, and the virtual-qubit temperature of the motional bath.
namespace q1d::ion {

/// S<->D at omega1, D<->P at omega2, S<->P at omega3. A_PD and the degeneracies
/// describe the thermally driven D -> P transition.
struct IonSpec {
  std::string name;
  AngularFrequency omega1;
  AngularFrequency omega2;
  AngularFrequency omega3;
  double A_PS;  // s^-1
  double A_PD;  // s^-1
  int g_e;
  int g_g;
  std::vector<std::string> references;

  /// Throws unless omega3 = omega1 + omega2 to 1e-6, A > 0, g >= 1.
  void validate() const;
};

IonSpec ion_from_json(const nlohmann::json& j);
IonSpec load_ion_file(const std::string& path);
nlohmann::json to_json(const IonSpec& ion);

/// Effective temperatures of the laser (S<->D), sunlight (D<->P) and room (S<->P) baths.
struct BathSet {
  Temperature laser;
  Temperature sun;
  Temperature room;

  void validate() const;
};

struct CoolingDrive {
  double eta_delivery;
  double grayness;
  double p_D;
  AngularFrequency omega_motion;

  void validate() const;
};

struct Transition {
  double A_eg;
  int g_e;
  int g_g;
  AngularFrequency omega_eg;
};

/// The sunlight-driven D -> P transition of `ion`.
Transition driven_transition(const IonSpec& ion);

/// eta_SP = A_PS / (A_PS + A_PD).
double branching_fraction(const IonSpec& ion);
double branching_fraction(double A_PS, double A_PD);

/// Einstein-B excitation rate Gamma = (pi^2 c^3 / hbar omega^3)(g_e/g_g) A rho [s^-1].
double excitation_rate(const Transition& tr, double rho);

/// -Gamma p_D eta_SP [phonon/s]; never positive.
double phonon_cooling_rate(double gamma, double p_D, double eta_SP);

/// Thrown when the virtual qubit is population-inverted (no cooling).
class NoCoolingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// omega_motion / (omega3/T3 - omega2/T2 - omega_l/T_l) with omega_l = omega1 - omega_motion.
/// The balance is evaluated with omega3 = omega1 + omega2 so equal baths return T exactly.
Temperature virtual_temperature(const IonSpec& ion, const BathSet& baths, AngularFrequency omega_motion);

/// Limit T_l -> inf, omega3/T_room >> omega2/T_sun: (omega_motion/omega3) T_room.
Temperature virtual_temperature_room_limit(const IonSpec& ion, Temperature room,
                                           AngularFrequency omega_motion);

struct OccupationReport {
  double reduced_energy;  // beta_V hbar omega_motion
  double exact;           // 1/(e^x - 1)
  double wien;            // e^-x
  double difference;      // exact - wien
  double log10_exact;
};

OccupationReport ground_state_occupation(Temperature t_v, AngularFrequency omega_motion);

/// Everything that goes into the sunlight-driven cooling rate.
struct RateEstimate {
  double occupation;     // n(omega2, T_sun)
  double psd;            // S(omega2) [W s/rad]
  double psd_delivered;  // eta G S(omega2)
  double energy_density; // eta G rho_P(omega2)
  double gamma;          // s^-1
  double eta_SP;
  double ndot;           // phonon/s
};

RateEstimate estimate_cooling_rate(const IonSpec& ion, const CoolingDrive& drive, Temperature sun);

}  // namespace q1d::ion
