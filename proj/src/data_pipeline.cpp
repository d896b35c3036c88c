#include "q1d/data_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "q1d/constants.hpp"
#include "q1d/error.hpp"
#include "q1d/io.hpp"
#include "q1d/radiometry.hpp"

namespace q1d::pipeline {

SampledSpectrum make_response(std::vector<double> wavelengths_nm, std::vector<double> values) {
  for (double v : values) {
    if (!(v > 0.0)) throw DomainError("instrument response must be > 0");
  }
  return SampledSpectrum(std::move(wavelengths_nm), std::move(values), SpectrumKind::ratio);
}

SampledSpectrum apply_response(const SampledSpectrum& raw, const SampledSpectrum& response) {
  const auto grid = common_grid(raw, response);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = response.value_at(grid[i]);
    if (!(r > 0.0)) {
      throw DomainError("instrument response is " + io::format_double(r) + " at " +
                        io::format_double(grid[i]) + " nm; it must be > 0 across the band");
    }
    v[i] = raw.value_at(grid[i]) / r;
  }
  return SampledSpectrum(grid, std::move(v), raw.kind());
}

void SlitGeometry::validate() const {
  if (!(slit_width_m > 0.0) || !(distance_m > 0.0) || !(mode_radius_m > 0.0)) {
    throw DomainError("slit width, distance and mode radius must be > 0");
  }
  if (!(distance_m > 10.0 * mode_radius_m)) {
    throw DomainError("slit distance must be much larger than the mode radius (paraxial)");
  }
}

double beam_radius_at_slit(const SlitGeometry& g, double wavelength_nm) {
  g.validate();
  const double lambda = wavelength_nm * 1e-9;
  const double z = lambda * g.distance_m / (constants::pi * g.mode_radius_m * g.mode_radius_m);
  return g.mode_radius_m * std::sqrt(1.0 + z * z);
}

double slit_transmission(const SlitGeometry& g, double wavelength_nm) {
  const double w = beam_radius_at_slit(g, wavelength_nm);
  return std::erf(std::numbers::sqrt2 * 0.5 * g.slit_width_m / w);
}

SampledSpectrum correct_slit(const SampledSpectrum& s, const SlitGeometry& g) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] /= slit_transmission(g, s.wavelengths_nm()[i]);
  return s.with_values(std::move(v));
}

void validate_reference(const SampledSpectrum& reference) {
  if (reference.kind() != SpectrumKind::irradiance_per_wavelength) {
    throw DomainError("reference solar spectrum must be irradiance_per_wavelength");
  }
  if (reference.min_wavelength_nm() > 350.0 || reference.max_wavelength_nm() < 1100.0) {
    throw DomainError("reference solar spectrum must cover 350-1100 nm");
  }
}

AtmosphericCorrection atmospheric_correction(const SampledSpectrum& reference, Temperature t,
                                             double fit_lo_nm, double fit_hi_nm) {
  if (!(fit_hi_nm > fit_lo_nm)) throw DomainError("empty correction fit band");
  if (reference.min_wavelength_nm() > fit_lo_nm || reference.max_wavelength_nm() < fit_hi_nm) {
    throw DomainError("reference spectrum does not cover the correction fit band");
  }
  const auto wl = reference.wavelengths_nm();
  const auto ref = reference.values();
  std::vector<double> planck(wl.size());
  for (std::size_t i = 0; i < wl.size(); ++i) {
    planck[i] = radiometry::planck_irradiance_per_wavelength(wl[i], t);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < wl.size(); ++i) {
    if (wl[i] < fit_lo_nm || wl[i] > fit_hi_nm) continue;
    num += ref[i] * planck[i];
    den += planck[i] * planck[i];
  }
  if (!(den > 0.0) || !(num > 0.0)) {
    throw DomainError("degenerate atmospheric-correction fit (amplitude <= 0)");
  }
  const double a = num / den;
  std::vector<double> c(wl.size());
  for (std::size_t i = 0; i < wl.size(); ++i) {
    const double model = a * planck[i];
    c[i] = model > 0.0 ? std::clamp(ref[i] / model, 0.0, kCorrectionCeiling) : 0.0;
  }
  return {a, SampledSpectrum(std::vector<double>(wl.begin(), wl.end()), std::move(c), SpectrumKind::ratio)};
}

SampledSpectrum expected_q1d_spectrum(const SampledSpectrum& correction, Temperature t) {
  std::vector<double> v(correction.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double l = correction.wavelengths_nm()[i];
    v[i] = correction.values()[i] * radiometry::q1d_psd_per_wavelength(l, t);
  }
  return SampledSpectrum(std::vector<double>(correction.wavelengths_nm().begin(), correction.wavelengths_nm().end()),
                         std::move(v), SpectrumKind::psd_per_wavelength);
}

SampledSpectrum calibrate_power(const SampledSpectrum& s, double measured_power_w, double lo_nm, double hi_nm) {
  if (!(measured_power_w > 0.0)) throw DomainError("measured power must be > 0");
  // Integrate in wavelength regardless of the input kind; only the shape matters here.
  const SampledSpectrum shape = is_per_angular_frequency(s.kind())
                                    ? convert_spectral_domain(s, domain_partner(s.kind()))
                                    : s.with_kind(SpectrumKind::ratio);
  const double integral = shape.integrate(lo_nm, hi_nm);
  if (!(integral > 0.0)) throw DomainError("spectrum integrates to zero over the calibration band");
  return shape.scaled(measured_power_w / integral).with_kind(SpectrumKind::psd_per_wavelength);
}

EfficiencyResult extract_efficiency(const SampledSpectrum& calibrated, Temperature t, double lo_nm,
                                    double hi_nm, const SampledSpectrum* correction) {
  SampledSpectrum psd = calibrated;
  if (calibrated.kind() == SpectrumKind::psd_per_angular_frequency) {
    psd = convert_spectral_domain(calibrated, SpectrumKind::psd_per_wavelength);
  } else if (calibrated.kind() != SpectrumKind::psd_per_wavelength) {
    throw DomainError("efficiency needs a calibrated PSD, got '" + std::string(to_string(calibrated.kind())) + "'");
  }
  const SampledSpectrum band = psd.restricted(lo_nm, hi_nm);
  std::vector<double> wl, eta;
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double l = band.wavelengths_nm()[i];
    double expected = radiometry::q1d_psd_per_wavelength(l, t);
    if (correction) {
      const double c = correction->value_at(l);
      if (c < kMinCorrection) continue;
      expected *= c;
    }
    wl.push_back(l);
    eta.push_back(band.values()[i] / expected);
  }
  if (wl.size() < 2) throw DomainError("no usable samples in the efficiency band");
  EfficiencyResult r{SampledSpectrum(std::move(wl), std::move(eta), SpectrumKind::ratio), 0.0, lo_nm, hi_nm, {}};
  const double span = r.eta.max_wavelength_nm() - r.eta.min_wavelength_nm();
  r.band_average = r.eta.integrate() / span;
  const auto peak = std::max_element(r.eta.values().begin(), r.eta.values().end());
  if (*peak > 1.0) {
    const auto idx = static_cast<std::size_t>(peak - r.eta.values().begin());
    r.warnings.push_back("efficiency exceeds 1 (max " + io::format_double(*peak) + " at " +
                         io::format_double(r.eta.wavelengths_nm()[idx]) +
                         " nm): super-thermal, check the power calibration");
  }
  return r;
}

FitModel parse_fit_model(const std::string& name) {
  if (name == "q1d" || name == "q1D") return FitModel::q1d;
  if (name == "3d" || name == "3D" || name == "threeD") return FitModel::threeD;
  throw InputError("unknown fit model '" + name + "' (expected q1d or 3d)");
}

namespace {

struct Misfit {
  double rss;
  double amplitude;
};

}  // namespace

TemperatureFit fit_temperature(const SampledSpectrum& s, FitModel model, double t_lo_k, double t_hi_k) {
  if (s.size() < 20) throw DomainError("temperature fit needs at least 20 samples");
  if (s.max_wavelength_nm() < 1.5 * s.min_wavelength_nm()) {
    throw DomainError("temperature fit needs samples spanning a factor 1.5 in wavelength");
  }
  if (!(t_hi_k > t_lo_k) || !(t_lo_k > 0.0)) throw DomainError("bad temperature search range");
  const SampledSpectrum data = s.kind() == SpectrumKind::psd_per_angular_frequency ||
                                       s.kind() == SpectrumKind::radiance_per_angular_frequency ||
                                       s.kind() == SpectrumKind::irradiance_per_angular_frequency
                                   ? convert_spectral_domain(s, domain_partner(s.kind()))
                                   : s;
  const auto wl = data.wavelengths_nm();
  const auto y = data.values();
  double yy = 0.0;
  for (double v : y) yy += v * v;
  if (!(yy > 0.0)) throw DomainError("cannot fit an all-zero spectrum");

  std::vector<double> f(wl.size());
  const auto misfit = [&](double log_t) {
    const auto t = Temperature::kelvin(std::exp(log_t));
    for (std::size_t i = 0; i < wl.size(); ++i) {
      f[i] = model == FitModel::q1d ? radiometry::q1d_psd_per_wavelength(wl[i], t)
                                    : radiometry::planck_radiance_per_wavelength(wl[i], t);
    }
    double fy = 0.0, ff = 0.0;
    for (std::size_t i = 0; i < wl.size(); ++i) {
      fy += f[i] * y[i];
      ff += f[i] * f[i];
    }
    const double a = fy / ff;
    double rss = 0.0;
    for (std::size_t i = 0; i < wl.size(); ++i) rss += (y[i] - a * f[i]) * (y[i] - a * f[i]);
    return Misfit{rss, a};
  };

  constexpr double inv_phi = 0.6180339887498949;
  double a = std::log(t_lo_k), b = std::log(t_hi_k);
  const double lo_edge = a, hi_edge = b;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = misfit(x1).rss, f2 = misfit(x2).rss;
  int it = 0;
  for (; it < 200 && (b - a) > 1e-10; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = misfit(x1).rss;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = misfit(x2).rss;
    }
  }
  if ((b - a) > 1e-10) throw ConvergenceError("temperature fit did not converge in 200 iterations");
  const double best = 0.5 * (a + b);
  if (best - lo_edge < 1e-6 || hi_edge - best < 1e-6) {
    throw ConvergenceError("temperature fit minimum lies on the search boundary (" +
                           io::format_double(std::exp(best)) + " K): spectrum shape not thermal");
  }
  const auto m = misfit(best);
  const double residual = std::sqrt(m.rss / yy);
  return {std::exp(best), m.amplitude, residual, it, residual < kFitResidualThreshold};
}

ReductionResult reduce(const ReductionInputs& in) {
  SampledSpectrum corrected = apply_response(in.raw, in.response);
  if (in.slit) corrected = correct_slit(corrected, *in.slit);
  SampledSpectrum calibrated =
      calibrate_power(corrected, in.measured_power_w, in.power_band_lo_nm, in.power_band_hi_nm);

  std::optional<AtmosphericCorrection> correction;
  if (in.reference) {
    validate_reference(*in.reference);
    correction = atmospheric_correction(*in.reference, in.source_temperature);
  }
  EfficiencyResult eff = extract_efficiency(calibrated, in.source_temperature, in.band_lo_nm, in.band_hi_nm,
                                            correction ? &correction->curve : nullptr);

  // Remove the atmosphere before fitting the source shape.
  const SampledSpectrum band = calibrated.restricted(in.band_lo_nm, in.band_hi_nm);
  std::vector<double> wl, v;
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double l = band.wavelengths_nm()[i];
    double c = 1.0;
    if (correction) {
      c = correction->curve.value_at(l);
      if (c < kMinCorrection) continue;
    }
    wl.push_back(l);
    v.push_back(band.values()[i] / c);
  }
  const TemperatureFit fit =
      fit_temperature(SampledSpectrum(std::move(wl), std::move(v), SpectrumKind::psd_per_wavelength), FitModel::q1d);
  return {std::move(calibrated), std::move(correction), std::move(eff), fit};
}

nlohmann::json fit_report(const ReductionResult& r) {
  nlohmann::json j{{"T_K", r.fit.temperature_k},
                   {"residual", r.fit.residual},
                   {"eta_band_avg", r.efficiency.band_average},
                   {"band_nm", {r.efficiency.band_lo_nm, r.efficiency.band_hi_nm}},
                   {"fit_acceptable", r.fit.acceptable},
                   {"fit_iterations", r.fit.iterations},
                   {"warnings", r.efficiency.warnings}};
  if (r.correction) j["atmosphere_amplitude"] = r.correction->amplitude;
  return j;
}

}  // namespace q1d::pipeline
