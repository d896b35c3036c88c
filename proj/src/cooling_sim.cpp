#include "q1d/cooling_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "q1d/error.hpp"
#include "q1d/io.hpp"
#include "q1d/rng.hpp"

namespace q1d::sim {

TransferProbability unit_transfer() {
  return [](long n) { return n >= 1 ? 1.0 : 0.0; };
}

void CycleConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("excitation rate Gamma must be > 0");
  if (!(eta_SP > 0.0 && eta_SP <= 1.0)) throw DomainError("eta_SP must lie in (0, 1]");
  if (!(tau_I > 0.0) || !std::isfinite(tau_I)) throw DomainError("step I duration must be > 0");
  if (!(heating_rate >= 0.0) || !std::isfinite(heating_rate)) throw DomainError("heating rate must be >= 0");
  if (n_initial < 0) throw DomainError("initial phonon number must be >= 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be > 0");
  if (!transfer) throw DomainError("transfer probability function is empty");
}

std::string CycleConfig::key() const {
  using io::format_double;
  return "gamma=" + format_double(gamma) + ";eta_SP=" + format_double(eta_SP) +
         ";tau_I=" + format_double(tau_I) + ";transfer=" + transfer_label +
         ";h=" + format_double(heating_rate) + ";n0=" + std::to_string(n_initial) +
         ";t_max=" + format_double(t_max);
}

long CoolingTrajectory::n_at(double t) const {
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double v, const Event& e) { return v < e.time; });
  if (it == events.begin()) return events.front().n;
  return std::prev(it)->n;
}

double CoolingTrajectory::time_average(double t0, double t1) const {
  if (!(t1 > t0)) throw DomainError("empty averaging window");
  double acc = 0.0;
  double cursor = t0;
  long current = n_at(t0);
  for (const Event& e : events) {
    if (e.time <= t0) continue;
    if (e.time >= t1) break;
    acc += current * (e.time - cursor);
    cursor = e.time;
    current = e.n;
  }
  acc += current * (t1 - cursor);
  return acc / (t1 - t0);
}

CoolingTrajectory simulate_trajectory(const CycleConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  CoolingTrajectory traj;
  traj.seed = cfg.seed;
  traj.t_max = cfg.t_max;
  traj.config_key = cfg.key();

  constexpr double kNever = std::numeric_limits<double>::infinity();
  const double h = cfg.heating_rate;
  double t = 0.0;
  long n = cfg.n_initial;
  InternalState state = InternalState::S;
  traj.events.push_back({0.0, n, state});
  double next_heat = h > 0.0 ? rng.exponential(h) : kNever;

  const auto drain_heating = [&](double until) {
    while (next_heat < until && next_heat <= cfg.t_max) {
      ++n;
      traj.events.push_back({next_heat, n, state});
      next_heat += rng.exponential(h);
    }
  };

  while (true) {
    if (state == InternalState::S) {
      if (n == 0) {
        // Step I is idle in the ground state; jump to the cycle that holds the next heating event.
        if (next_heat > cfg.t_max) break;
        double k = std::floor((next_heat - t) / cfg.tau_I);
        if (t + k * cfg.tau_I > next_heat) k -= 1.0;
        t += std::max(k, 0.0) * cfg.tau_I;
      }
      const double t_end = t + cfg.tau_I;
      drain_heating(t_end);
      if (t_end > cfg.t_max) break;
      t = t_end;
      if (n >= 1 && rng.uniform() < cfg.transfer(n)) {
        --n;
        state = InternalState::D;
        traj.events.push_back({t, n, state});
      }
    } else {
      const double t_exc = t + rng.exponential(cfg.gamma);
      drain_heating(t_exc);
      if (t_exc > cfg.t_max) break;
      t = t_exc;
      if (rng.uniform() < cfg.eta_SP) {
        state = InternalState::S;
        traj.events.push_back({t, n, state});
      } else {
        traj.events.push_back({t, n, InternalState::P});
      }
    }
  }

  traj.final_n = n;
  traj.late_mean_n = traj.time_average(0.75 * cfg.t_max, cfg.t_max);
  return traj;
}

std::string format_trajectory_csv(const CoolingTrajectory& traj) {
  std::string out = "time_s,n,internal_state\n";
  for (const Event& e : traj.events) {
    out += io::format_double(e.time);
    out += ',';
    out += std::to_string(e.n);
    out += ',';
    out += static_cast<char>(e.state);
    out += '\n';
  }
  return out;
}

double renewal_cooling_rate(double gamma, double eta_SP, double tau_I) {
  const double r = gamma * eta_SP;
  return r / (1.0 + r * tau_I);
}

namespace {

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_and_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

EnsembleStats ensemble_stats(std::span<const CoolingTrajectory> trajectories, std::size_t grid_points) {
  if (trajectories.size() < 2) throw DomainError("ensemble statistics need at least two trajectories");
  if (grid_points < 4) throw DomainError("need at least four grid points");
  const auto& first = trajectories.front();
  for (const auto& tr : trajectories) {
    if (tr.config_key != first.config_key) {
      throw DomainError("trajectories come from different configurations: '" + first.config_key +
                        "' vs '" + tr.config_key + "'");
    }
  }

  EnsembleStats s;
  s.trajectories = trajectories.size();
  const double t_max = first.t_max;
  const std::size_t nt = trajectories.size();
  s.grid.resize(grid_points);
  for (std::size_t g = 0; g < grid_points; ++g) s.grid[g] = t_max * g / (grid_points - 1);

  std::vector<std::vector<double>> samples(nt, std::vector<double>(grid_points));
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t g = 0; g < grid_points; ++g) samples[i][g] = trajectories[i].n_at(s.grid[g]);
  }
  s.mean.assign(grid_points, 0.0);
  s.variance.assign(grid_points, 0.0);
  for (std::size_t g = 0; g < grid_points; ++g) {
    double m = 0.0;
    for (std::size_t i = 0; i < nt; ++i) m += samples[i][g];
    m /= nt;
    double v = 0.0;
    for (std::size_t i = 0; i < nt; ++i) v += (samples[i][g] - m) * (samples[i][g] - m);
    s.mean[g] = m;
    s.variance[g] = v / (nt - 1);
  }

  std::vector<double> late;
  late.reserve(nt);
  for (const auto& tr : trajectories) late.push_back(tr.late_mean_n);
  const auto steady = mean_and_se(late);
  s.steady_state_mean = steady.mean;
  s.steady_state_se = steady.se;

  // Fit window: until the ensemble mean has covered 20% of its drop to steady state.
  const double drop = s.mean.front() - s.steady_state_mean;
  std::size_t last = (grid_points - 1) / 5;
  if (drop > 0.0) {
    const double target = s.mean.front() - 0.2 * drop;
    for (std::size_t g = 1; g < grid_points; ++g) {
      if (s.mean[g] <= target) {
        last = g;
        break;
      }
    }
  }
  last = std::max<std::size_t>(last, 3);
  s.fit_window_end = s.grid[last];

  // The t = 0 sample is excluded: the first transfer follows after only tau_I, so
  // the initial condition sits one phonon above the steady cooling line.
  const std::size_t g0 = 1;
  const std::size_t m = last + 1 - g0;
  double tbar = 0.0;
  for (std::size_t g = g0; g <= last; ++g) tbar += s.grid[g];
  tbar /= m;
  double stt = 0.0;
  for (std::size_t g = g0; g <= last; ++g) stt += (s.grid[g] - tbar) * (s.grid[g] - tbar);
  std::vector<double> slopes(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    double stn = 0.0;
    for (std::size_t g = g0; g <= last; ++g) stn += (s.grid[g] - tbar) * samples[i][g];
    slopes[i] = stn / stt;
  }
  const auto slope = mean_and_se(slopes);
  s.slope = slope.mean;
  s.slope_se = slope.se;
  return s;
}

nlohmann::json to_json(const EnsembleStats& s, bool include_curves) {
  nlohmann::json j{{"trajectories", s.trajectories},
                   {"slope_phonon_per_s", s.slope},
                   {"slope_se", s.slope_se},
                   {"slope_ci95", {s.slope - 1.96 * s.slope_se, s.slope + 1.96 * s.slope_se}},
                   {"fit_window_end_s", s.fit_window_end},
                   {"steady_state_n", s.steady_state_mean},
                   {"steady_state_se", s.steady_state_se},
                   {"steady_state_ci95",
                    {s.steady_state_mean - 1.96 * s.steady_state_se,
                     s.steady_state_mean + 1.96 * s.steady_state_se}}};
  if (include_curves) {
    j["grid_s"] = s.grid;
    j["mean_n"] = s.mean;
    j["variance_n"] = s.variance;
  }
  return j;
}

std::vector<RatePoint> rate_equation_trajectory(const CycleConfig& cfg, std::size_t output_points) {
  cfg.validate();
  if (output_points < 2) throw DomainError("need at least two output points");
  const double r = renewal_cooling_rate(cfg.gamma, cfg.eta_SP, cfg.tau_I);
  const double h = cfg.heating_rate;
  const auto rhs = [r, h](double n) { return -r * n / (n + 0.5) + h; };
  const double max_step = r > 0.0 ? std::min(0.01 / r, cfg.t_max / 1000.0) : cfg.t_max / 1000.0;
  const double dt_out = cfg.t_max / (output_points - 1);
  const auto substeps = static_cast<std::size_t>(std::ceil(dt_out / max_step));
  const double dt = dt_out / substeps;

  std::vector<RatePoint> out;
  out.reserve(output_points);
  double n = static_cast<double>(cfg.n_initial);
  out.push_back({0.0, n});
  for (std::size_t k = 1; k < output_points; ++k) {
    for (std::size_t s = 0; s < substeps; ++s) {
      const double k1 = rhs(n);
      const double k2 = rhs(n + 0.5 * dt * k1);
      const double k3 = rhs(n + 0.5 * dt * k2);
      const double k4 = rhs(n + dt * k3);
      n = std::max(0.0, n + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    out.push_back({dt_out * k, n});
  }
  return out;
}

}  // namespace q1d::sim
