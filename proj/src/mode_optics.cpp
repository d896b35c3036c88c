#include "q1d/mode_optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "q1d/constants.hpp"
#include "q1d/error.hpp"
#include "q1d/io.hpp"

namespace q1d::mode_optics {

using constants::c;
using constants::pi;

namespace {

constexpr double kFullSphere = 4.0 * pi;

void check_band(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw DomainError("fiber model band must satisfy 0 < lo < hi");
  }
}

double lambda_sq(AngularFrequency w) {
  const double l = w.wavelength_m();
  return l * l;
}

}  // namespace

FiberModeModel FiberModeModel::constant_divergence(double solid_angle_sr, double lo, double hi) {
  if (!(solid_angle_sr > 0.0) || solid_angle_sr > kFullSphere) {
    throw DomainError("constant-divergence solid angle must lie in (0, 4 pi]");
  }
  check_band(lo, hi);
  FiberModeModel m;
  m.regime_ = Regime::constant_divergence;
  m.anchor_ = solid_angle_sr;
  m.band_lo_ = lo;
  m.band_hi_ = hi;
  return m;
}

FiberModeModel FiberModeModel::constant_area(double area_m2, double lo, double hi) {
  if (!(area_m2 > 0.0) || !std::isfinite(area_m2)) throw DomainError("mode area must be > 0");
  check_band(lo, hi);
  FiberModeModel m;
  m.regime_ = Regime::constant_area;
  m.anchor_ = area_m2;
  m.band_lo_ = lo;
  m.band_hi_ = hi;
  return m;
}

FiberModeModel FiberModeModel::tabulated(std::vector<double> wl, std::vector<double> area) {
  if (wl.size() != area.size() || wl.size() < 2) {
    throw DomainError("tabulated mode area needs >= 2 matching samples");
  }
  for (std::size_t i = 0; i < wl.size(); ++i) {
    if (!(area[i] > 0.0)) throw DomainError("tabulated mode area must be > 0");
    if (i > 0 && !(wl[i] > wl[i - 1])) throw DomainError("tabulated wavelengths must increase");
  }
  check_band(wl.front(), wl.back());
  FiberModeModel m;
  m.regime_ = Regime::tabulated;
  m.anchor_ = std::numeric_limits<double>::quiet_NaN();
  m.band_lo_ = wl.front();
  m.band_hi_ = wl.back();
  m.table_wl_ = std::move(wl);
  m.table_area_ = std::move(area);
  return m;
}

bool FiberModeModel::in_band(AngularFrequency w) const {
  const double l = w.wavelength_nm();
  return l >= band_lo_ && l <= band_hi_;
}

double mode_area(const FiberModeModel& model, AngularFrequency w) {
  if (!model.in_band(w)) {
    throw DomainError("wavelength " + io::format_double(w.wavelength_nm()) +
                      " nm outside fiber model band");
  }
  switch (model.regime()) {
    case Regime::constant_area: return model.anchor();
    case Regime::constant_divergence: return lambda_sq(w) / model.anchor();
    case Regime::tabulated: {
      const auto& x = model.table_wavelengths_nm();
      const auto& y = model.table_areas_m2();
      const double l = w.wavelength_nm();
      auto it = std::upper_bound(x.begin(), x.end(), l);
      if (it == x.end()) return y.back();
      const auto i = static_cast<std::size_t>(it - x.begin());
      const double t = (l - x[i - 1]) / (x[i] - x[i - 1]);
      return y[i - 1] + t * (y[i] - y[i - 1]);
    }
  }
  return 0.0;
}

double mode_solid_angle(const FiberModeModel& model, AngularFrequency w) {
  if (model.regime() == Regime::constant_divergence) {
    if (!model.in_band(w)) throw DomainError("wavelength outside fiber model band");
    return model.anchor();
  }
  const double omega = lambda_sq(w) / mode_area(model, w);
  if (omega > kFullSphere) {
    throw DomainError("mode solid angle lambda^2/A = " + io::format_double(omega) +
                      " sr exceeds 4 pi (mode area below lambda^2 / 4 pi)");
  }
  return omega;
}

double mode_radiance(const FiberModeModel& model, AngularFrequency w, double psd) {
  return psd / (mode_area(model, w) * mode_solid_angle(model, w));
}

double top_hat_area(double waist_m) {
  if (!(waist_m > 0.0)) throw DomainError("beam waist must be > 0");
  return 0.5 * pi * waist_m * waist_m;
}

double grayness(double area_m2, AngularFrequency w) {
  if (!(area_m2 > 0.0)) throw DomainError("area must be > 0");
  const double g = lambda_sq(w) / (kFullSphere * area_m2);
  if (g > 1.0 + 1e-12) {
    throw DomainError("grayness " + io::format_double(g) +
                      " > 1: mode claims more than the full solid angle");
  }
  return std::min(g, 1.0);
}

double grayness_from_solid_angle(double solid_angle_sr) {
  if (!(solid_angle_sr > 0.0) || solid_angle_sr > kFullSphere * (1.0 + 1e-12)) {
    throw DomainError("solid angle must lie in (0, 4 pi]");
  }
  return std::min(solid_angle_sr / kFullSphere, 1.0);
}

double focused_energy_density(double psd, double area_m2) {
  if (psd < 0.0 || !std::isfinite(psd)) throw DomainError("PSD must be finite and >= 0");
  if (!(area_m2 > 0.0)) throw DomainError("area must be > 0");
  return psd / (c * area_m2);
}

double gaussian_angular_radiance(AngularFrequency w, double theta_rad, double waist_m, double psd) {
  if (!(theta_rad >= 0.0) || theta_rad >= 0.5 * pi) throw DomainError("theta must lie in [0, pi/2)");
  const double k = w.rad_per_s() * waist_m / (2.0 * c);
  const double s = std::sin(theta_rad);
  return psd / top_hat_area(waist_m) * (2.0 / pi) * k * k * std::exp(-2.0 * s * s * k * k);
}

FocusGeometry FocusGeometry::from_waist(double waist_m, AngularFrequency w) {
  if (!(waist_m > 0.0)) throw DomainError("beam waist must be > 0");
  return {waist_m, w.wavelength_m() / (pi * waist_m)};
}

std::optional<std::string> validate_focus(const FocusGeometry& g) {
  if (!(g.waist_m > 0.0)) throw DomainError("beam waist must be > 0");
  if (!(g.half_angle_rad > 0.0)) throw DomainError("convergence half-angle must be > 0");
  if (g.half_angle_rad >= kParaxialMaxAngle) {
    throw DomainError("convergence half-angle " + io::format_double(g.half_angle_rad) +
                      " rad breaks the paraxial approximation (limit 0.3 rad)");
  }
  if (g.half_angle_rad > kParaxialWarnAngle) {
    return "convergence half-angle " + io::format_double(g.half_angle_rad) +
           " rad is above 0.1 rad; paraxial results are approximate";
  }
  return std::nullopt;
}

FiberModeModel fiber_model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("fiber model must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "regime" && key != "omega0_sr" && key != "area_m2" && key != "band_nm" &&
        key != "table") {
      throw InputError("fiber model: unknown key '" + key + "'");
    }
  }
  try {
    const std::string regime = j.at("regime").get<std::string>();
    if (regime == "tabulated") {
      std::vector<double> wl, area;
      for (const auto& row : j.at("table")) {
        wl.push_back(row.at(0).get<double>());
        area.push_back(row.at(1).get<double>());
      }
      return FiberModeModel::tabulated(std::move(wl), std::move(area));
    }
    const auto band = j.at("band_nm");
    if (!band.is_array() || band.size() != 2) throw InputError("band_nm must be [lo, hi]");
    const double lo = band[0].get<double>(), hi = band[1].get<double>();
    if (regime == "constant_divergence") {
      return FiberModeModel::constant_divergence(j.at("omega0_sr").get<double>(), lo, hi);
    }
    if (regime == "constant_area") {
      return FiberModeModel::constant_area(j.at("area_m2").get<double>(), lo, hi);
    }
    throw InputError("fiber model: unknown regime '" + regime + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("fiber model: ") + e.what());
  }
}

nlohmann::json to_json(const FiberModeModel& model) {
  nlohmann::json j;
  switch (model.regime()) {
    case Regime::constant_divergence:
      j["regime"] = "constant_divergence";
      j["omega0_sr"] = model.anchor();
      j["band_nm"] = {model.band_lo_nm(), model.band_hi_nm()};
      break;
    case Regime::constant_area:
      j["regime"] = "constant_area";
      j["area_m2"] = model.anchor();
      j["band_nm"] = {model.band_lo_nm(), model.band_hi_nm()};
      break;
    case Regime::tabulated: {
      j["regime"] = "tabulated";
      auto rows = nlohmann::json::array();
      for (std::size_t i = 0; i < model.table_wavelengths_nm().size(); ++i) {
        rows.push_back({model.table_wavelengths_nm()[i], model.table_areas_m2()[i]});
      }
      j["table"] = rows;
      break;
    }
  }
  return j;
}

}  // namespace q1d::mode_optics
