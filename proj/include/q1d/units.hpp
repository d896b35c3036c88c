#pragma once

#include <limits>

namespace q1d {

/// Thermodynamic temperature stored as inverse temperature beta = 1/(k_B T).
/// beta = 0 is the infinite-temperature sentinel; beta = inf is absolute zero.
class Temperature {
 public:
  static Temperature kelvin(double t);
  static Temperature infinite() { return Temperature(0.0); }
  static Temperature from_beta(double beta);

  double kelvin() const;
  double beta() const { return beta_; }
  bool is_infinite() const { return beta_ == 0.0; }
  bool is_zero() const { return beta_ == std::numeric_limits<double>::infinity(); }
  bool is_finite_positive() const { return !is_infinite() && !is_zero(); }

 private:
  explicit Temperature(double beta) : beta_(beta) {}
  double beta_;
};

class AngularFrequency {
 public:
  explicit AngularFrequency(double rad_per_s);
  static AngularFrequency from_wavelength_m(double lambda_m);
  static AngularFrequency from_wavelength_nm(double lambda_nm) {
    return from_wavelength_m(lambda_nm * 1e-9);
  }

  double rad_per_s() const { return w_; }
  double wavelength_m() const;
  double wavelength_nm() const { return wavelength_m() * 1e9; }

 private:
  double w_;
};

}  // namespace q1d
