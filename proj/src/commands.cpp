#include "q1d/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "q1d/constants.hpp"
#include "q1d/error.hpp"
#include "q1d/io.hpp"
#include "q1d/ion_thermo.hpp"
#include "q1d/kernels.hpp"
#include "q1d/mode_optics.hpp"
#include "q1d/radiometry.hpp"
#include "q1d/svg.hpp"
#include "q1d/data_pipeline.hpp"
#include "q1d/spectrum.hpp"

namespace q1d::cli {

using nlohmann::json;

namespace {

void check_keys(const json& p, const std::set<std::string>& allowed, const std::string& command) {
  if (!p.is_object()) throw InputError(command + ": parameters must be a JSON object");
  for (const auto& [key, _] : p.items()) {
    if (!allowed.contains(key)) throw InputError(command + ": unknown key '" + key + "'");
  }
}

const json& required(const json& p, const std::string& key, const std::string& command) {
  if (!p.contains(key) || p.at(key).is_null()) throw InputError(command + ": missing required '" + key + "'");
  return p.at(key);
}

template <typename T>
T get(const json& v, const std::string& key, const std::string& command) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InputError(command + ": '" + key + "' has the wrong type");
  }
}

double number(const json& p, const std::string& key, const std::string& command) {
  return get<double>(required(p, key, command), key, command);
}

// Temperatures accept a number in kelvin or the string "inf".
double temperature_value(const json& p, const std::string& key, const std::string& command) {
  const auto& v = required(p, key, command);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw InputError(command + ": '" + key + "' must be a number or \"inf\"");
  }
  return get<double>(v, key, command);
}

std::pair<double, double> band(const json& p, const std::string& key, const std::string& command) {
  const auto& v = required(p, key, command);
  if (!v.is_array() || v.size() != 2) throw InputError(command + ": '" + key + "' must be [lo, hi] in nm");
  const double lo = get<double>(v[0], key, command), hi = get<double>(v[1], key, command);
  if (!(lo > 0.0) || !(hi > lo) || std::isinf(hi)) {
    throw InputError(command + ": '" + key + "' must satisfy 0 < lo < hi");
  }
  return {lo, hi};
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0) || std::isinf(v)) throw InputError(what + " must be finite and > 0");
  return v;
}

json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

SpectrumOptions spectrum_options(const json& p) {
  const std::string c = "spectrum";
  check_keys(p, {"temperature_k", "family", "band_nm", "points", "svg"}, c);
  SpectrumOptions o;
  o.temperature_k = number(p, "temperature_k", c);
  o.family = get<std::string>(required(p, "family", c), "family", c);
  std::tie(o.band_lo_nm, o.band_hi_nm) = band(p, "band_nm", c);
  if (p.contains("points")) o.points = get<std::size_t>(p.at("points"), "points", c);
  if (p.contains("svg")) o.svg = get<bool>(p.at("svg"), "svg", c);
  return o;
}

RateOptions rate_options(const json& p) {
  const std::string c = "rate";
  check_keys(p, {"ion_file", "eta", "grayness", "waist_m", "fiber", "temperature_k", "p_D"}, c);
  RateOptions o;
  o.ion_file = get<std::string>(required(p, "ion_file", c), "ion_file", c);
  o.eta = number(p, "eta", c);
  o.temperature_k = number(p, "temperature_k", c);
  o.p_D = number(p, "p_D", c);
  if (p.contains("grayness")) o.grayness = number(p, "grayness", c);
  if (p.contains("waist_m")) o.waist_m = number(p, "waist_m", c);
  if (p.contains("fiber")) {
    const auto& f = p.at("fiber");
    if (f.is_string()) {
      try {
        o.fiber = json::parse(io::read_text_file(f.get<std::string>()));
      } catch (const json::parse_error& e) {
        throw InputError(c + ": fiber file: " + e.what());
      }
    } else {
      o.fiber = f;
    }
  }
  const int sources = int(o.grayness.has_value()) + int(o.waist_m.has_value()) + int(o.fiber.has_value());
  if (sources != 1) throw InputError(c + ": give exactly one of grayness, waist_m, fiber");
  return o;
}

VirtualTempOptions virtual_temp_options(const json& p) {
  const std::string c = "virtual-temp";
  check_keys(p, {"ion_file", "laser_k", "sun_k", "room_k", "motion_hz"}, c);
  VirtualTempOptions o;
  o.ion_file = get<std::string>(required(p, "ion_file", c), "ion_file", c);
  o.laser_k = temperature_value(p, "laser_k", c);
  o.sun_k = temperature_value(p, "sun_k", c);
  o.room_k = temperature_value(p, "room_k", c);
  o.motion_hz = number(p, "motion_hz", c);
  return o;
}

SimulateOptions simulate_options(const json& p) {
  const std::string c = "simulate";
  check_keys(p, {"gamma_s", "eta_sp", "ion_file", "tau_I_s", "heating_rate_per_s", "n_initial", "t_max_s", "seed",
                 "trajectories", "grid_points", "transfer_probability"},
             c);
  SimulateOptions o;
  o.gamma_s = number(p, "gamma_s", c);
  o.tau_I_s = number(p, "tau_I_s", c);
  o.t_max_s = number(p, "t_max_s", c);
  o.seed = get<std::uint64_t>(required(p, "seed", c), "seed", c);
  if (p.contains("eta_sp")) o.eta_sp = number(p, "eta_sp", c);
  if (p.contains("ion_file")) o.ion_file = get<std::string>(p.at("ion_file"), "ion_file", c);
  if (o.eta_sp.has_value() == o.ion_file.has_value()) throw InputError(c + ": give exactly one of eta_sp, ion_file");
  if (p.contains("heating_rate_per_s")) o.heating_rate_per_s = number(p, "heating_rate_per_s", c);
  if (p.contains("n_initial")) o.n_initial = get<long>(p.at("n_initial"), "n_initial", c);
  if (p.contains("trajectories")) o.trajectories = get<std::size_t>(p.at("trajectories"), "trajectories", c);
  if (p.contains("grid_points")) o.grid_points = get<std::size_t>(p.at("grid_points"), "grid_points", c);
  if (p.contains("transfer_probability")) o.transfer_probability = number(p, "transfer_probability", c);
  if (o.trajectories < 1) throw InputError(c + ": trajectories must be >= 1");
  if (o.grid_points < 2) throw InputError(c + ": grid_points must be >= 2");
  return o;
}

ReduceOptions reduce_options(const json& p) {
  const std::string c = "reduce";
  check_keys(p, {"raw", "response", "reference", "slit", "measured_power_w", "power_band_nm", "band_nm",
                 "temperature_k"},
             c);
  ReduceOptions o;
  o.raw = get<std::string>(required(p, "raw", c), "raw", c);
  o.response = get<std::string>(required(p, "response", c), "response", c);
  if (p.contains("reference")) o.reference = get<std::string>(p.at("reference"), "reference", c);
  if (p.contains("slit")) {
    const auto& s = p.at("slit");
    check_keys(s, {"width_m", "distance_m", "mode_radius_m"}, c + " slit");
    o.slit = SlitOptions{number(s, "width_m", c), number(s, "distance_m", c), number(s, "mode_radius_m", c)};
  }
  o.measured_power_w = number(p, "measured_power_w", c);
  std::tie(o.power_band_lo_nm, o.power_band_hi_nm) = band(p, "power_band_nm", c);
  std::tie(o.band_lo_nm, o.band_hi_nm) = band(p, "band_nm", c);
  o.temperature_k = number(p, "temperature_k", c);
  return o;
}

json cmd_spectrum(const SpectrumOptions& o, const std::string& out_dir) {
  const auto family = radiometry::parse_family(o.family);
  const auto t = Temperature::kelvin(positive(o.temperature_k, "temperature_k"));
  if (!(o.band_hi_nm > o.band_lo_nm) || !(o.band_lo_nm > 0.0)) {
    throw InputError("spectrum: band must satisfy 0 < lo < hi");
  }
  if (o.points < 2) throw InputError("spectrum: points must be >= 2");
  std::vector<double> grid(o.points);
  const double step = (o.band_hi_nm - o.band_lo_nm) / static_cast<double>(o.points - 1);
  for (std::size_t i = 0; i < o.points; ++i) grid[i] = o.band_lo_nm + step * static_cast<double>(i);
  grid.back() = o.band_hi_nm;
  auto values = kernels::evaluate_family(family, t, grid);
  const auto max_it = std::max_element(values.begin(), values.end());
  const double grid_peak = grid[static_cast<std::size_t>(max_it - values.begin())];
  const SampledSpectrum curve(grid, std::move(values), radiometry::family_kind(family));

  const std::string name = "spectrum_" + std::string(radiometry::to_string(family));
  const auto csv_path = join(out_dir, name + ".csv");
  write_spectrum_csv(csv_path, curve);
  json files = {csv_path};
  if (o.svg) {
    const svg::Series series{std::string(radiometry::to_string(family)), grid,
                             std::vector<double>(curve.values().begin(), curve.values().end())};
    const auto svg_path = join(out_dir, name + ".svg");
    io::write_file_atomic(svg_path, svg::line_plot(std::span(&series, 1), name + " at " +
                                                   io::format_double(o.temperature_k) + " K",
                                                   "wavelength (nm)", std::string(to_string(curve.kind()))));
    files.push_back(svg_path);
  }
  const auto peak = radiometry::wien_peak_wavelength_nm(family, t);
  return {{"family", radiometry::to_string(family)},
          {"kind", to_string(curve.kind())},
          {"temperature_k", o.temperature_k},
          {"band_nm", {o.band_lo_nm, o.band_hi_nm}},
          {"points", o.points},
          {"peak_nm", peak ? json(*peak) : json(nullptr)},
          {"grid_peak_nm", grid_peak},
          {"files", files}};
}

json cmd_rate(const RateOptions& o) {
  if (o.ion_file.empty()) throw InputError("rate: ion_file is required");
  const auto ion = ion::load_ion_file(o.ion_file);
  const auto t = Temperature::kelvin(positive(o.temperature_k, "temperature_k"));
  const auto w2 = ion.omega2;
  json provenance = {{"ion_file", o.ion_file}, {"ion", ion::to_json(ion)}, {"eta", o.eta},
                     {"temperature_k", o.temperature_k}, {"p_D", o.p_D}};
  json warnings = json::array();

  double g = 0.0;
  if (o.grayness) {
    g = *o.grayness;
    provenance["grayness_source"] = "direct";
  } else if (o.waist_m) {
    const double w0 = positive(*o.waist_m, "waist_m");
    const auto focus = mode_optics::FocusGeometry::from_waist(w0, w2);
    if (auto warn = mode_optics::validate_focus(focus)) warnings.push_back(*warn);
    g = mode_optics::grayness(mode_optics::top_hat_area(w0), w2);
    provenance["grayness_source"] = "top_hat_waist";
    provenance["waist_m"] = w0;
    provenance["top_hat_area_m2"] = mode_optics::top_hat_area(w0);
  } else if (o.fiber) {
    const auto model = mode_optics::fiber_model_from_json(*o.fiber);
    if (!model.in_band(w2)) throw DomainError("rate: D-P wavelength lies outside the fiber model band");
    g = mode_optics::grayness(mode_optics::mode_area(model, w2), w2);
    provenance["grayness_source"] = "fiber_model";
    provenance["fiber"] = mode_optics::to_json(model);
  } else {
    throw InputError("rate: give exactly one of grayness, waist_m, fiber");
  }

  const ion::CoolingDrive drive{o.eta, g, o.p_D, AngularFrequency(2.0 * constants::pi * 1e6)};
  const auto est = ion::estimate_cooling_rate(ion, drive, t);
  return {{"gamma_s", est.gamma},
          {"eta_SP", est.eta_SP},
          {"ndot_phonon_per_s", est.ndot},
          {"grayness", g},
          {"occupation", est.occupation},
          {"psd_w_per_rad_s", est.psd},
          {"psd_delivered_w_per_rad_s", est.psd_delivered},
          {"energy_density_j_s_per_m3", est.energy_density},
          {"wavelength_nm", w2.wavelength_nm()},
          {"inputs", provenance},
          {"warnings", warnings}};
}

json cmd_virtual_temp(const VirtualTempOptions& o) {
  const auto ion = ion::load_ion_file(o.ion_file);
  const AngularFrequency wm(2.0 * constants::pi * positive(o.motion_hz, "motion_hz"));
  const ion::BathSet baths{Temperature::kelvin(o.laser_k), Temperature::kelvin(o.sun_k),
                           Temperature::kelvin(o.room_k)};
  json out = {{"inputs",
               {{"ion_file", o.ion_file}, {"ion", ion.name}, {"laser_k", number_or_inf(o.laser_k)},
                {"sun_k", number_or_inf(o.sun_k)}, {"room_k", number_or_inf(o.room_k)}, {"motion_hz", o.motion_hz}}}};
  Temperature tv = Temperature::infinite();
  try {
    tv = ion::virtual_temperature(ion, baths, wm);
  } catch (const ion::NoCoolingError& e) {
    throw ion::NoCoolingError(std::string(e.what()) +
                              "; the combined baths invert the virtual qubit, so the motion is heated, not cooled");
  }
  const auto occ = ion::ground_state_occupation(tv, wm);
  out["virtual_temperature_k"] = tv.kelvin();
  out["occupation"] = {{"reduced_energy", occ.reduced_energy}, {"exact", occ.exact}, {"wien", occ.wien},
                       {"difference", occ.difference}, {"log10", occ.log10_exact}};
  if (baths.room.is_finite_positive()) {
    const auto lim = ion::virtual_temperature_room_limit(ion, baths.room, wm);
    const auto occ_lim = ion::ground_state_occupation(lim, wm);
    out["room_limit"] = {{"virtual_temperature_k", lim.kelvin()}, {"log10_occupation", occ_lim.log10_exact}};
  }
  return out;
}

json cmd_simulate(const SimulateOptions& o, const std::string& out_dir) {
  sim::CycleConfig cfg;
  cfg.gamma = o.gamma_s;
  std::string eta_source = "eta_sp";
  if (o.ion_file) {
    cfg.eta_SP = ion::branching_fraction(ion::load_ion_file(*o.ion_file));
    eta_source = *o.ion_file;
  } else {
    cfg.eta_SP = *o.eta_sp;
  }
  cfg.tau_I = o.tau_I_s;
  cfg.heating_rate = o.heating_rate_per_s;
  cfg.n_initial = o.n_initial;
  cfg.t_max = o.t_max_s;
  cfg.seed = o.seed;
  if (o.transfer_probability) {
    const double p = *o.transfer_probability;
    if (!(p > 0.0 && p <= 1.0)) throw InputError("simulate: transfer_probability must be in (0, 1]");
    cfg.transfer = [p](long n) { return n >= 1 ? p : 0.0; };
    cfg.transfer_label = "constant_" + io::format_double(p);
  }
  cfg.validate();

  const auto ensemble = kernels::run_ensemble(cfg, o.trajectories);
  const double renewal = sim::renewal_cooling_rate(cfg.gamma, cfg.eta_SP, cfg.tau_I);
  const auto traj_path = join(out_dir, "trajectory.csv");
  io::write_file_atomic(traj_path, sim::format_trajectory_csv(ensemble.front()));

  json summary = {{"config",
                   {{"gamma_s", cfg.gamma}, {"eta_SP", cfg.eta_SP}, {"eta_source", eta_source},
                    {"tau_I_s", cfg.tau_I}, {"heating_rate_per_s", cfg.heating_rate},
                    {"n_initial", cfg.n_initial}, {"t_max_s", cfg.t_max}, {"seed", cfg.seed},
                    {"trajectories", o.trajectories}, {"transfer", cfg.transfer_label}}},
                  {"renewal_rate_per_s", renewal},
                  {"rate_equation_slope", -renewal + cfg.heating_rate},
                  {"einstein_rate_slope", -cfg.gamma * cfg.eta_SP},
                  {"final_n_first", ensemble.front().final_n},
                  {"late_mean_n_first", ensemble.front().late_mean_n}};
  json files = {traj_path};

  if (ensemble.size() >= 2) {
    const auto stats = sim::ensemble_stats(ensemble, o.grid_points);
    summary["ensemble"] = sim::to_json(stats);
    if (stats.slope_se > 0.0) {
      summary["slope_z_vs_rate_equation"] = (stats.slope + renewal - cfg.heating_rate) / stats.slope_se;
    }
    const auto ode = sim::rate_equation_trajectory(cfg, stats.grid.size());
    std::ostringstream csv;
    csv << "time_s,mean_n,variance,rate_equation_n\n";
    for (std::size_t i = 0; i < stats.grid.size(); ++i) {
      const double ode_n = i < ode.size() ? ode[i].n : std::nan("");
      csv << io::format_double(stats.grid[i]) << ',' << io::format_double(stats.mean[i]) << ','
          << io::format_double(stats.variance[i]) << ',' << io::format_double(ode_n) << '\n';
    }
    const auto mean_path = join(out_dir, "ensemble_mean.csv");
    io::write_file_atomic(mean_path, csv.str());
    files.push_back(mean_path);
  }
  const auto summary_path = join(out_dir, "simulation_summary.json");
  files.push_back(summary_path);
  summary["files"] = files;
  io::write_file_atomic(summary_path, summary.dump(2) + "\n");
  return summary;
}

json cmd_reduce(const ReduceOptions& o, const std::string& out_dir) {
  pipeline::ReductionInputs in{
      read_spectrum_csv(o.raw, SpectrumKind::counts),
      read_spectrum_csv(o.response, SpectrumKind::ratio),
      std::nullopt,
      std::nullopt,
      o.measured_power_w,
      o.power_band_lo_nm,
      o.power_band_hi_nm,
      o.band_lo_nm,
      o.band_hi_nm,
      Temperature::kelvin(positive(o.temperature_k, "temperature_k"))};
  in.response = pipeline::make_response(
      std::vector<double>(in.response.wavelengths_nm().begin(), in.response.wavelengths_nm().end()),
      std::vector<double>(in.response.values().begin(), in.response.values().end()));
  if (o.reference) in.reference = read_spectrum_csv(*o.reference);
  if (o.slit) in.slit = pipeline::SlitGeometry{o.slit->width_m, o.slit->distance_m, o.slit->mode_radius_m};
  const auto r = pipeline::reduce(in);

  const auto cal_path = join(out_dir, "calibrated_psd.csv");
  const auto eta_path = join(out_dir, "efficiency.csv");
  const auto fit_path = join(out_dir, "fit_report.json");
  write_spectrum_csv(cal_path, r.calibrated);
  write_spectrum_csv(eta_path, r.efficiency.eta);
  json files = {cal_path, eta_path};
  if (r.correction) {
    const auto corr_path = join(out_dir, "atmospheric_correction.csv");
    write_spectrum_csv(corr_path, r.correction->curve);
    files.push_back(corr_path);
  }
  auto report = pipeline::fit_report(r);
  io::write_file_atomic(fit_path, report.dump(2) + "\n");
  files.push_back(fit_path);
  report["files"] = files;
  return report;
}

}  // namespace q1d::cli
