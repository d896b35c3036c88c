#include "q1d/verification/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "q1d/commands.hpp"
#include "q1d/constants.hpp"
#include "q1d/error.hpp"
#include "q1d/ion_thermo.hpp"
#include "q1d/kernels.hpp"
#include "q1d/mode_optics.hpp"
#include "q1d/radiometry.hpp"
#include "q1d/rng.hpp"
#include "q1d/verification/markov_oracle.hpp"

namespace q1d::verification {

namespace {

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

SyntheticMeasurement synthesize_measurement(const SyntheticSetup& s) {
  const auto model = [&](double l) {
    double v = s.eta(l) * radiometry::q1d_psd_per_wavelength(l, s.temperature);
    if (s.correction) v *= s.correction->value_at(l);
    return v;
  };
  std::vector<double> counts(s.grid_nm.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double l = s.grid_nm[i];
    double v = model(l) * s.counts_per_w_per_nm * s.response.value_at(l);
    if (s.slit) v *= pipeline::slit_transmission(*s.slit, l);
    counts[i] = v;
  }
  // Delivered power through the short-pass band, integrated on a 10x finer grid.
  const auto fine = uniform_grid(s.power_band_lo_nm, s.power_band_hi_nm,
                                 (s.grid_nm[1] - s.grid_nm[0]) / 10.0);
  double power = 0.0;
  for (std::size_t i = 1; i < fine.size(); ++i) {
    power += 0.5 * (model(fine[i - 1]) + model(fine[i])) * (fine[i] - fine[i - 1]);
  }
  return {SampledSpectrum(s.grid_nm, std::move(counts), SpectrumKind::counts), power};
}

namespace {

CriterionResult criterion_rate(const AcceptanceOptions& o) {
  cli::RateOptions ro;
  ro.ion_file = o.data_dir + "/ba_plus.json";
  ro.eta = 0.5;
  ro.grayness = 5e-5;
  ro.temperature_k = 5800.0;
  ro.p_D = 1.0;
  const auto report = cli::cmd_rate(ro);
  const double ndot = report.at("ndot_phonon_per_s").get<double>();
  const bool ok = std::abs(ndot - (-8.2)) <= 0.82;
  return {1, "cooling rate (Ba+, eta=0.5, G=5e-5, 5800 K)", ok,
          fmt("ndot = %.4f phonon/s (target -8.2 +- 10%%)", ndot)};
}

CriterionResult criterion_grayness() {
  const auto w = AngularFrequency::from_wavelength_nm(614.0);
  const double g = mode_optics::grayness(mode_optics::top_hat_area(20e-6), w);
  const bool ok = rel(g, 5e-5) <= 0.05;
  return {2, "grayness of a 20 um top-hat spot at 614 nm", ok, fmt("G = %.4e (target 5e-5 +- 5%%)", g)};
}

CriterionResult criterion_closure() {
  bool ok = true;
  std::string detail;
  for (double tk : {300.0, 1000.0, 5800.0}) {
    const auto t = Temperature::kelvin(tk);
    const double quad = radiometry::q1d_power_by_quadrature(t).value;
    const double closed = radiometry::q1d_total_power(t);
    const double r = rel(quad, closed);
    ok = ok && r <= 1e-6;
    detail += fmt("T=%.0f K ", tk) + fmt("rel=%.1e; ", r);
  }
  const double p5800 = radiometry::q1d_total_power(Temperature::kelvin(5800.0));
  ok = ok && rel(p5800, 3.19e-5) < 0.005;
  detail += fmt("P(5800 K) = %.4e W", p5800);
  return {3, "total-power closure (quadrature vs pi/(6 hbar beta^2))", ok, detail};
}

CriterionResult criterion_virtual_temperature(const AcceptanceOptions& o) {
  const auto ion = ion::load_ion_file(o.data_dir + "/ba_plus.json");
  const AngularFrequency wm(2.0 * constants::pi * 1e6);
  const auto room = Temperature::kelvin(300.0);
  const auto tv_limit = ion::virtual_temperature_room_limit(ion, room, wm);
  const auto tv_full = ion::virtual_temperature(
      ion, {Temperature::infinite(), Temperature::kelvin(5800.0), room}, wm);
  const auto occ = ion::ground_state_occupation(tv_limit, wm);
  const double tv_uk = tv_limit.kelvin() * 1e6;
  const double tv_full_uk = tv_full.kelvin() * 1e6;
  bool ok = tv_uk >= 0.1 && tv_uk <= 2.0 && tv_full_uk >= 0.1 && tv_full_uk <= 2.0 &&
            std::abs(occ.log10_exact - (-46.0)) <= 1.0;
  double worst = 0.0;
  for (double tk : {0.5, 4.0, 300.0, 5800.0, 1e5}) {
    const auto t = Temperature::kelvin(tk);
    const double tv = ion::virtual_temperature(ion, {t, t, t}, wm).kelvin();
    worst = std::max(worst, rel(tv, tk));
  }
  ok = ok && worst <= 1e-12;
  return {4, "virtual temperature and ground-state occupation", ok,
          fmt("T_V = %.3f uK", tv_uk) + fmt(" (full form %.3f uK), ", tv_full_uk) +
              fmt("log10 n = %.2f, ", occ.log10_exact) + fmt("equal-bath max rel err %.1e", worst)};
}

CriterionResult criterion_factor_four(const AcceptanceOptions& o) {
  Rng rng(derive_seed(o.seed, 5));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto w = AngularFrequency::from_wavelength_nm(log_uniform(rng, 200.0, 5000.0));
    const double w0 = log_uniform(rng, 1e-6, 1e-3);
    const auto t = Temperature::kelvin(log_uniform(rng, 100.0, 20000.0));
    const double s = radiometry::q1d_psd(w, t);
    const double ratio = mode_optics::gaussian_angular_radiance(w, 0.0, w0, s) / radiometry::planck_radiance(w, t);
    worst = std::max(worst, std::abs(ratio - 4.0) / 4.0);
  }
  return {5, "on-axis gaussian-mode radiance is 4x Planck", worst <= 1e-9,
          fmt("max rel deviation from 4 over 100 draws: %.2e", worst)};
}

CriterionResult criterion_radiance_closure(const AcceptanceOptions& o) {
  Rng rng(derive_seed(o.seed, 6));
  const auto divergent = mode_optics::FiberModeModel::constant_divergence(0.02, 300.0, 2000.0);
  const auto fixed_area = mode_optics::FiberModeModel::constant_area(3e-11, 300.0, 2000.0);
  double worst_div = 0.0, worst_area = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto w = AngularFrequency::from_wavelength_nm(300.0 + 1700.0 * rng.uniform());
    const auto t = Temperature::kelvin(log_uniform(rng, 200.0, 20000.0));
    const double s = radiometry::q1d_psd(w, t);
    const double bp = radiometry::planck_radiance(w, t);
    worst_div = std::max(worst_div, rel(mode_optics::mode_radiance(divergent, w, s), bp));
    worst_area = std::max(worst_area, rel(mode_optics::mode_radiance(fixed_area, w, s), bp));
  }
  return {6, "S/(A Omega) reproduces Planck radiance in both fiber regimes",
          worst_div <= 1e-12 && worst_area <= 1e-12,
          fmt("max rel err constant-divergence %.1e, ", worst_div) + fmt("constant-area %.1e", worst_area)};
}

CriterionResult criterion_peaks() {
  const auto t = Temperature::kelvin(5800.0);
  const double q1d = *radiometry::wien_peak_wavelength_nm(radiometry::SpectralFamily::q1d_per_lambda, t);
  const double d3 = *radiometry::wien_peak_wavelength_nm(radiometry::SpectralFamily::threeD_per_lambda, t);
  const bool none = !radiometry::wien_peak_wavelength_nm(radiometry::SpectralFamily::q1d_per_omega, t);
  // Dense-grid scan as an independent check of the root solve.
  const auto scan = [&](radiometry::SpectralFamily f) {
    const auto grid = uniform_grid(300.0, 1500.0, 0.01);
    const auto v = kernels::evaluate_family(f, t, grid);
    return grid[static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin())];
  };
  const double q1d_scan = scan(radiometry::SpectralFamily::q1d_per_lambda);
  const double d3_scan = scan(radiometry::SpectralFamily::threeD_per_lambda);
  const bool ok = std::abs(q1d - 879.0) <= 2.0 && std::abs(d3 - 500.0) <= 2.0 && none &&
                  std::abs(q1d - q1d_scan) <= 0.02 && std::abs(d3 - d3_scan) <= 0.02;
  return {7, "q1D vs 3D per-wavelength peaks at 5800 K", ok,
          fmt("q1D %.3f nm", q1d) + fmt(" (scan %.2f), ", q1d_scan) + fmt("3D %.3f nm", d3) +
              fmt(" (scan %.2f)", d3_scan)};
}

CriterionResult criterion_simulation(const AcceptanceOptions& o) {
  sim::CycleConfig cfg;
  cfg.gamma = 11.0;
  cfg.eta_SP = 0.74;
  cfg.tau_I = 1e-3;
  cfg.heating_rate = 0.0;
  cfg.n_initial = 20;
  cfg.t_max = 4.0;
  cfg.seed = derive_seed(o.seed, 8);
  const auto ens = kernels::run_ensemble(cfg, 1200);
  const auto stats = sim::ensemble_stats(ens);
  const double expected = -sim::renewal_cooling_rate(cfg.gamma, cfg.eta_SP, cfg.tau_I);
  const double z_slope = (stats.slope - expected) / stats.slope_se;
  bool ok = std::abs(z_slope) <= 3.0;
  std::string detail = fmt("slope %.3f", stats.slope) + fmt(" +- %.3f", stats.slope_se) +
                       fmt(" vs %.3f phonon/s", expected) + fmt(" (z=%.2f); ", z_slope);

  struct Triple {
    double gamma, tau, h;
  };
  int k = 0;
  for (const Triple tr : {Triple{11.0, 1e-3, 2.0}, Triple{40.0, 5e-3, 5.0}, Triple{11.0, 20e-3, 4.0}}) {
    sim::CycleConfig c;
    c.gamma = tr.gamma;
    c.eta_SP = 0.74;
    c.tau_I = tr.tau;
    c.heating_rate = tr.h;
    c.n_initial = 0;
    c.t_max = 400.0;
    c.seed = derive_seed(o.seed, 80 + k++);
    const auto st = sim::ensemble_stats(kernels::run_ensemble(c, 200), 101);
    const double exact = stationary_phonon_number(tr.gamma, 0.74, tr.tau, tr.h).mean_n;
    const double z = (st.steady_state_mean - exact) / st.steady_state_se;
    ok = ok && std::abs(z) <= 3.0;
    detail += fmt("n_ss %.4f", st.steady_state_mean) + fmt(" vs %.4f", exact) + fmt(" (z=%.2f); ", z);
  }
  return {8, "simulator vs renewal rate and Markov-chain steady state", ok, detail};
}

CriterionResult criterion_pipeline(const AcceptanceOptions& o) {
  const auto t = Temperature::kelvin(5800.0);
  const auto reference = read_spectrum_csv(o.data_dir + "/astm_g173_direct.csv");
  const auto corr = pipeline::atmospheric_correction(reference, t);
  const auto response_grid = uniform_grid(380.0, 1000.0, 2.0);
  std::vector<double> response_values;
  for (double l : response_grid) response_values.push_back(0.25 + 0.75 * std::exp(-std::pow((l - 620.0) / 260.0, 2)));
  const auto response = pipeline::make_response(response_grid, response_values);
  const pipeline::SlitGeometry slit{25e-6, 0.5e-3, 2.5e-6};

  const auto run = [&](std::function<double(double)> eta) {
    SyntheticSetup s{t, uniform_grid(380.0, 1000.0, 0.5), std::move(eta), corr.curve, slit, response};
    const auto m = synthesize_measurement(s);
    pipeline::ReductionInputs in{m.raw, response, reference, slit, m.measured_power_w, 400.0, 900.0, 400.0, 900.0, t};
    return pipeline::reduce(in);
  };

  const auto flat = run([](double) { return 0.7; });
  const double eta_err = rel(flat.efficiency.band_average, 0.7);
  const double t_err = rel(flat.fit.temperature_k, 5800.0);

  // Realistic corruption: coupling falls off toward both band edges.
  const auto realistic_eta = [](double l) { return 0.82 - 0.18 * std::pow((l - 640.0) / 300.0, 2); };
  const auto real = run(realistic_eta);
  double constructed = 0.0;
  const auto g = uniform_grid(400.0, 900.0, 0.01);
  for (double l : g) constructed += realistic_eta(l);
  constructed /= static_cast<double>(g.size());
  const double avg = real.efficiency.band_average;
  const bool ok = eta_err <= 0.02 && t_err <= 0.01 && avg >= 0.6 && avg <= 0.9 && rel(avg, constructed) <= 0.02;
  return {9, "synthetic pipeline round trip", ok,
          fmt("eta %.4f (target 0.7), ", flat.efficiency.band_average) +
              fmt("T %.1f K, ", flat.fit.temperature_k) + fmt("realistic band-average eta %.3f", avg) +
              fmt(" (constructed %.3f)", constructed)};
}

template <typename F>
CriterionResult guarded(int id, const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("error: ") + e.what()};
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
  std::vector<CriterionResult> out;
  out.push_back(guarded(1, "cooling rate", [&] { return criterion_rate(o); }));
  out.push_back(guarded(2, "grayness", [&] { return criterion_grayness(); }));
  out.push_back(guarded(3, "total-power closure", [&] { return criterion_closure(); }));
  out.push_back(guarded(4, "virtual temperature", [&] { return criterion_virtual_temperature(o); }));
  out.push_back(guarded(5, "factor of four", [&] { return criterion_factor_four(o); }));
  out.push_back(guarded(6, "radiance closure", [&] { return criterion_radiance_closure(o); }));
  out.push_back(guarded(7, "spectral peaks", [&] { return criterion_peaks(); }));
  out.push_back(guarded(8, "simulation", [&] { return criterion_simulation(o); }));
  out.push_back(guarded(9, "pipeline round trip", [&] { return criterion_pipeline(o); }));
  return out;
}

std::string format_acceptance(const std::vector<CriterionResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += (r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail + "\n";
  }
  return out;
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  auto arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  return arr;
}

std::string default_data_dir() { return Q1D_DATA_DIR; }

}  // namespace q1d::verification
