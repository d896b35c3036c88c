#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "q1d/cooling_sim.hpp"
#include "q1d/error.hpp"
#include "q1d/kernels.hpp"
#include "q1d/rng.hpp"
#include "q1d/verification/markov_oracle.hpp"

using namespace q1d;
using namespace q1d::sim;

namespace {

CycleConfig base_config() {
  CycleConfig c;
  c.gamma = 11.0;
  c.eta_SP = 0.74;
  c.tau_I = 1e-3;
  c.heating_rate = 0.0;
  c.n_initial = 10;
  c.t_max = 10.0;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("configuration validation") {
  auto c = base_config();
  CHECK_NOTHROW(c.validate());
  for (auto mutate : std::vector<std::function<void(CycleConfig&)>>{
           [](CycleConfig& x) { x.gamma = 0.0; }, [](CycleConfig& x) { x.eta_SP = 1.5; },
           [](CycleConfig& x) { x.eta_SP = 0.0; }, [](CycleConfig& x) { x.tau_I = 0.0; },
           [](CycleConfig& x) { x.heating_rate = -1.0; }, [](CycleConfig& x) { x.n_initial = -1; },
           [](CycleConfig& x) { x.t_max = 0.0; }, [](CycleConfig& x) { x.transfer = nullptr; }}) {
    auto bad = base_config();
    mutate(bad);
    CHECK_THROWS_AS(simulate_trajectory(bad), DomainError);
  }
}

TEST_CASE("trajectories are reproducible from the seed") {
  const auto a = simulate_trajectory(base_config());
  const auto b = simulate_trajectory(base_config());
  CHECK(format_trajectory_csv(a) == format_trajectory_csv(b));
  auto other = base_config();
  other.seed = 43;
  CHECK(format_trajectory_csv(simulate_trajectory(other)) != format_trajectory_csv(a));
  CHECK(a.config_key == simulate_trajectory(other).config_key);
}

TEST_CASE("event stream invariants") {
  auto c = base_config();
  c.heating_rate = 3.0;
  c.t_max = 30.0;
  const auto tr = simulate_trajectory(c);
  REQUIRE_FALSE(tr.events.empty());
  CHECK(tr.events.front().time == 0.0);
  CHECK(tr.events.front().n == 10);
  std::set<char> states;
  for (std::size_t i = 1; i < tr.events.size(); ++i) {
    CHECK(tr.events[i].time >= tr.events[i - 1].time);
    CHECK(std::abs(tr.events[i].n - tr.events[i - 1].n) <= 1);
    CHECK(tr.events[i].n >= 0);
    CHECK(tr.events[i].time <= c.t_max);
    states.insert(static_cast<char>(tr.events[i].state));
  }
  CHECK(states.contains('S'));
  CHECK(states.contains('D'));
  CHECK(tr.final_n == tr.n_at(c.t_max));
  const auto csv = format_trajectory_csv(tr);
  CHECK(csv.rfind("time_s,n,internal_state\n", 0) == 0);
}

TEST_CASE("without heating the ion reaches and stays in the ground state") {
  auto c = base_config();
  c.t_max = 30.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    c.seed = s;
    const auto tr = simulate_trajectory(c);
    CHECK(tr.final_n == 0);
    CHECK(tr.late_mean_n == 0.0);
  }
}

TEST_CASE("late mean is the time average over the last quarter") {
  auto c = base_config();
  c.heating_rate = 2.0;
  c.t_max = 40.0;
  const auto tr = simulate_trajectory(c);
  CHECK(tr.late_mean_n == doctest::Approx(tr.time_average(30.0, 40.0)).epsilon(1e-12));
}

TEST_CASE("renewal cooling rate") {
  CHECK(renewal_cooling_rate(11.0, 0.74, 1e-3) == doctest::Approx(11.0 * 0.74 / (1 + 11.0 * 0.74 * 1e-3)));
  CHECK(renewal_cooling_rate(1e9, 1.0, 1e-3) == doctest::Approx(1000.0).epsilon(1e-6));
}

TEST_CASE("rate equation follows its implicit analytic solution") {
  auto c = base_config();
  c.n_initial = 20;
  c.t_max = 2.0;
  const double r = renewal_cooling_rate(c.gamma, c.eta_SP, c.tau_I);
  const auto pts = rate_equation_trajectory(c, 201);
  REQUIRE(pts.size() == 201);
  // n + ln(n)/2 = n0 + ln(n0)/2 - R t
  for (const auto& p : pts) {
    if (p.n < 1.0) break;
    CHECK(p.n + 0.5 * std::log(p.n) == doctest::Approx(20.0 + 0.5 * std::log(20.0) - r * p.t).epsilon(1e-8));
  }
  // Average slope from 20 to 5 stays within 5% of R.
  double t5 = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].n <= 5.0) {
      const double f = (pts[i - 1].n - 5.0) / (pts[i - 1].n - pts[i].n);
      t5 = pts[i - 1].t + f * (pts[i].t - pts[i - 1].t);
      break;
    }
  }
  REQUIRE(t5 > 0.0);
  CHECK(std::abs(15.0 / t5 - r) / r < 0.05);
}

TEST_CASE("ensemble statistics reject mixed configurations") {
  auto a = base_config();
  auto b = base_config();
  b.gamma = 12.0;
  const std::vector<CoolingTrajectory> mixed{simulate_trajectory(a), simulate_trajectory(b)};
  CHECK_THROWS_AS(ensemble_stats(mixed), DomainError);
  const std::vector<CoolingTrajectory> one{simulate_trajectory(a)};
  CHECK_THROWS_AS(ensemble_stats(one), DomainError);
}

TEST_CASE("ensemble slope matches the renewal rate") {
  auto c = base_config();
  c.n_initial = 20;
  c.t_max = 4.0;
  const auto ens = kernels::run_ensemble(c, 400);
  const auto st = ensemble_stats(ens);
  const double r = renewal_cooling_rate(c.gamma, c.eta_SP, c.tau_I);
  CHECK(std::abs(st.slope + r) < 3.5 * st.slope_se);
  CHECK(st.mean.front() == 20.0);
  CHECK(st.variance.front() == 0.0);
  const auto j = to_json(st, true);
  CHECK(j.contains("slope_ci95"));
  CHECK(j.at("mean_n").size() == st.grid.size());
}

TEST_CASE("Markov oracle: sanity limits") {
  using verification::small_heating_mean_n;
  using verification::stationary_phonon_number;
  const auto zero = stationary_phonon_number(11.0, 0.74, 1e-3, 0.0);
  CHECK(zero.mean_n == doctest::Approx(0.0));
  CHECK(zero.embedded[0] == doctest::Approx(1.0));
  const auto small = stationary_phonon_number(11.0, 0.74, 1e-3, 0.01);
  CHECK(small.mean_n == doctest::Approx(small_heating_mean_n(11.0, 0.74, 1e-3, 0.01)).epsilon(0.02));
  const double total = std::accumulate(small.embedded.begin(), small.embedded.end(), 0.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // More heating, more phonons.
  CHECK(stationary_phonon_number(11.0, 0.74, 1e-3, 4.0).mean_n > stationary_phonon_number(11.0, 0.74, 1e-3, 2.0).mean_n);
}

TEST_CASE("steady state with partial transfer matches the Markov chain") {
  auto c = base_config();
  c.heating_rate = 3.0;
  c.n_initial = 0;
  c.t_max = 300.0;
  c.transfer = [](long n) { return n >= 1 ? 0.5 : 0.0; };
  c.transfer_label = "half";
  const auto st = ensemble_stats(kernels::run_ensemble(c, 120), 51);
  const double exact = verification::stationary_phonon_number(c.gamma, c.eta_SP, c.tau_I, c.heating_rate, c.transfer)
                           .mean_n;
  CHECK(std::abs(st.steady_state_mean - exact) < 3.5 * st.steady_state_se);
}

TEST_CASE("rng helpers") {
  Rng a(1), b(1);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng r(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += r.exponential(4.0);
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.01));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
