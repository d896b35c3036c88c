// sunq1d: thermal-light spectra, sunlight cooling rates, virtual temperatures,
// cooling-cycle simulations and spectrometer data reduction.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "q1d/commands.hpp"
#include "q1d/error.hpp"
#include "q1d/io.hpp"
#include "q1d/ion_thermo.hpp"
#include "q1d/verification/acceptance.hpp"

using nlohmann::json;

namespace {

template <typename T>
void put(json& params, const std::string& key, const std::optional<T>& v) {
  if (v) params[key] = *v;
}

void put_band(json& params, const std::string& key, const std::vector<double>& v) {
  if (!v.empty()) params[key] = v;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    auto j = json::parse(q1d::io::read_text_file(path));
    if (!j.is_object()) throw q1d::InputError(path + ": config must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw q1d::InputError(path + ": " + e.what());
  }
}

void print_human(const std::string& command, const json& report) {
  if (command == "rate") {
    std::cout << "Gamma   = " << report["gamma_s"].get<double>() << " s^-1\n"
              << "eta_SP  = " << report["eta_SP"].get<double>() << "\n"
              << "G       = " << report["grayness"].get<double>() << "\n"
              << "ndot    = " << report["ndot_phonon_per_s"].get<double>() << " phonon/s\n";
    for (const auto& w : report["warnings"]) std::cout << "warning: " << w.get<std::string>() << "\n";
  } else if (command == "virtual-temp") {
    std::cout << "T_V       = " << report["virtual_temperature_k"].get<double>() << " K\n"
              << "log10 n   = " << report["occupation"]["log10"].get<double>() << "\n";
    if (report.contains("room_limit")) {
      std::cout << "room limit T_V = " << report["room_limit"]["virtual_temperature_k"].get<double>()
                << " K, log10 n = " << report["room_limit"]["log10_occupation"].get<double>() << "\n";
    }
  } else if (command == "spectrum") {
    if (!report["peak_nm"].is_null()) std::cout << "peak    = " << report["peak_nm"].get<double>() << " nm\n";
    for (const auto& f : report["files"]) std::cout << "wrote " << f.get<std::string>() << "\n";
  } else if (command == "simulate") {
    std::cout << "renewal rate = " << report["renewal_rate_per_s"].get<double>() << " phonon/s\n"
              << "expected slope (n >> 1) = " << report["rate_equation_slope"].get<double>() << " phonon/s\n";
    if (report.contains("ensemble")) {
      const auto& e = report["ensemble"];
      std::cout << "ensemble slope = " << e["slope_phonon_per_s"].get<double>() << " +- " << e["slope_se"].get<double>()
                << " phonon/s\nsteady-state n = " << e["steady_state_n"].get<double>() << " +- "
                << e["steady_state_se"].get<double>() << "\n";
    }
    for (const auto& f : report["files"]) std::cout << "wrote " << f.get<std::string>() << "\n";
  } else if (command == "reduce") {
    std::cout << "T_fit   = " << report["T_K"].get<double>() << " K (residual " << report["residual"].get<double>()
              << ")\neta     = " << report["eta_band_avg"].get<double>() << "\n";
    for (const auto& w : report["warnings"]) std::cout << "warning: " << w.get<std::string>() << "\n";
    for (const auto& f : report["files"]) std::cout << "wrote " << f.get<std::string>() << "\n";
  }
}

int fail(bool as_json, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  if (as_json) std::cout << json{{"error", message}}.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal light in single-mode channels and sunlight-driven ion cooling"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  bool as_json = false;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON file with the subcommand's parameters");
  app.add_flag("--json", as_json, "Print a machine-readable JSON report");
  app.add_option("--seed", seed, "Random seed (simulate, check)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Sample a q1D or 3D thermal spectrum");
  std::optional<double> sp_t;
  std::optional<std::string> sp_family;
  std::vector<double> sp_band;
  std::optional<std::size_t> sp_points;
  bool sp_svg = false;
  spectrum->add_option("--temperature", sp_t, "Source temperature (K)");
  spectrum->add_option("--family", sp_family, "q1d_per_omega, q1d_per_lambda, threeD_per_omega, threeD_per_lambda");
  spectrum->add_option("--band", sp_band, "Wavelength band LO HI (nm)")->expected(2);
  spectrum->add_option("--points", sp_points, "Number of samples");
  spectrum->add_flag("--svg", sp_svg, "Also write an SVG plot");

  // rate
  auto* rate = app.add_subcommand("rate", "Sunlight-driven sideband cooling rate");
  std::optional<std::string> rt_ion, rt_fiber;
  std::optional<double> rt_eta, rt_g, rt_w0, rt_t, rt_pd;
  rate->add_option("--ion", rt_ion, "Ion data file (JSON)");
  rate->add_option("--eta", rt_eta, "Delivery efficiency");
  rate->add_option("--grayness", rt_g, "Geometric grayness G");
  rate->add_option("--waist", rt_w0, "Focus 1/e field radius (m); G from the top-hat area");
  rate->add_option("--fiber", rt_fiber, "Fiber mode model file (JSON)");
  rate->add_option("--temperature", rt_t, "Source temperature (K)");
  rate->add_option("--p-d", rt_pd, "Population of D during step II");

  // virtual-temp
  auto* vt = app.add_subcommand("virtual-temp", "Virtual temperature of the motional bath");
  std::optional<std::string> vt_ion, vt_laser, vt_sun, vt_room;
  std::optional<double> vt_motion;
  vt->add_option("--ion", vt_ion, "Ion data file (JSON)");
  vt->add_option("--laser", vt_laser, "Laser bath temperature (K or inf)");
  vt->add_option("--sun", vt_sun, "Sunlight bath temperature (K or inf)");
  vt->add_option("--room", vt_room, "Room bath temperature (K or inf)");
  vt->add_option("--motion-hz", vt_motion, "Trap frequency (Hz)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of the two-step cooling cycle");
  std::optional<std::size_t> sim_traj;
  simulate->add_option("--trajectories", sim_traj, "Number of trajectories");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Calibrate a fiber-coupled solar spectrum");
  std::optional<std::string> rd_raw, rd_resp, rd_ref;
  std::optional<double> rd_power, rd_t;
  std::vector<double> rd_pband, rd_band, rd_slit;
  reduce->add_option("--raw", rd_raw, "Raw spectrum CSV (counts)");
  reduce->add_option("--response", rd_resp, "Relative spectrometer response CSV");
  reduce->add_option("--reference", rd_ref, "Reference solar spectrum CSV");
  reduce->add_option("--power", rd_power, "Measured delivered power (W)");
  reduce->add_option("--power-band", rd_pband, "Power-meter band LO HI (nm)")->expected(2);
  reduce->add_option("--band", rd_band, "Analysis band LO HI (nm)")->expected(2);
  reduce->add_option("--temperature", rd_t, "Source temperature (K)");
  reduce->add_option("--slit", rd_slit, "Slit WIDTH DISTANCE MODE_RADIUS (m)")->expected(3);

  // check
  auto* check = app.add_subcommand("check", "Run the acceptance suite");
  std::string data_dir = q1d::verification::default_data_dir();
  check->add_option("--data-dir", data_dir, "Directory with the bundled data files")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    json params = load_config(config_path);
    json report;
    if (command == "spectrum") {
      put(params, "temperature_k", sp_t);
      put(params, "family", sp_family);
      put_band(params, "band_nm", sp_band);
      put(params, "points", sp_points);
      if (sp_svg) params["svg"] = true;
      report = q1d::cli::cmd_spectrum(q1d::cli::spectrum_options(params), out_dir);
    } else if (command == "rate") {
      put(params, "ion_file", rt_ion);
      put(params, "eta", rt_eta);
      put(params, "grayness", rt_g);
      put(params, "waist_m", rt_w0);
      put(params, "fiber", rt_fiber);
      put(params, "temperature_k", rt_t);
      put(params, "p_D", rt_pd);
      report = q1d::cli::cmd_rate(q1d::cli::rate_options(params));
    } else if (command == "virtual-temp") {
      const auto temp = [](const std::optional<std::string>& s) -> std::optional<json> {
        if (!s) return std::nullopt;
        if (*s == "inf") return json("inf");
        try {
          return json(std::stod(*s));
        } catch (const std::exception&) {
          throw q1d::InputError("temperature '" + *s + "' is not a number");
        }
      };
      put(params, "ion_file", vt_ion);
      put(params, "laser_k", temp(vt_laser));
      put(params, "sun_k", temp(vt_sun));
      put(params, "room_k", temp(vt_room));
      put(params, "motion_hz", vt_motion);
      report = q1d::cli::cmd_virtual_temp(q1d::cli::virtual_temp_options(params));
    } else if (command == "simulate") {
      if (config_path.empty()) throw q1d::InputError("simulate: --config <file> is required");
      put(params, "seed", seed);
      put(params, "trajectories", sim_traj);
      report = q1d::cli::cmd_simulate(q1d::cli::simulate_options(params), out_dir);
    } else if (command == "reduce") {
      put(params, "raw", rd_raw);
      put(params, "response", rd_resp);
      put(params, "reference", rd_ref);
      put(params, "measured_power_w", rd_power);
      put_band(params, "power_band_nm", rd_pband);
      put_band(params, "band_nm", rd_band);
      put(params, "temperature_k", rd_t);
      if (!rd_slit.empty()) {
        params["slit"] = {{"width_m", rd_slit[0]}, {"distance_m", rd_slit[1]}, {"mode_radius_m", rd_slit[2]}};
      }
      report = q1d::cli::cmd_reduce(q1d::cli::reduce_options(params), out_dir);
    } else if (command == "check") {
      if (!config_path.empty()) throw q1d::InputError("check takes no config file");
      q1d::verification::AcceptanceOptions opts{data_dir};
      if (seed) opts.seed = *seed;
      const auto results = q1d::verification::run_acceptance(opts);
      bool all = true;
      for (const auto& r : results) all = all && r.passed;
      if (as_json) {
        std::cout << json{{"passed", all}, {"criteria", q1d::verification::to_json(results)}}.dump(2) << "\n";
      } else {
        std::cout << q1d::verification::format_acceptance(results);
      }
      return all ? 0 : 1;
    }
    if (as_json) {
      std::cout << report.dump(2) << "\n";
    } else {
      print_human(command, report);
    }
    return 0;
  } catch (const q1d::ion::NoCoolingError& e) {
    return fail(as_json, std::string("no cooling: ") + e.what());
  } catch (const std::exception& e) {
    return fail(as_json, e.what());
  }
}
