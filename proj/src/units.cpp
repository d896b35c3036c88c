#include "q1d/units.hpp"

#include <cmath>
#include <string>

#include "q1d/constants.hpp"
#include "q1d/error.hpp"

namespace q1d {

Temperature Temperature::kelvin(double t) {
  if (std::isnan(t) || t < 0.0) {
    throw DomainError("temperature must be >= 0 K, got " + std::to_string(t));
  }
  if (std::isinf(t)) return infinite();
  if (t == 0.0) return Temperature(std::numeric_limits<double>::infinity());
  return Temperature(1.0 / (constants::k_B * t));
}

Temperature Temperature::from_beta(double beta) {
  if (std::isnan(beta) || beta < 0.0) throw DomainError("beta must be >= 0");
  return Temperature(beta);
}

double Temperature::kelvin() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  if (is_zero()) return 0.0;
  return 1.0 / (constants::k_B * beta_);
}

AngularFrequency::AngularFrequency(double rad_per_s) : w_(rad_per_s) {
  if (!(rad_per_s > 0.0) || std::isinf(rad_per_s)) {
    throw DomainError("angular frequency must be finite and > 0, got " +
                      std::to_string(rad_per_s));
  }
}

AngularFrequency AngularFrequency::from_wavelength_m(double lambda_m) {
  if (!(lambda_m > 0.0) || std::isinf(lambda_m)) {
    throw DomainError("wavelength must be finite and > 0");
  }
  return AngularFrequency(2.0 * constants::pi * constants::c / lambda_m);
}

double AngularFrequency::wavelength_m() const {
  return 2.0 * constants::pi * constants::c / w_;
}

}  // namespace q1d
