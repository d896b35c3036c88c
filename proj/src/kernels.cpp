#include "q1d/kernels.hpp"

#include <exception>

#include "q1d/rng.hpp"

namespace q1d::kernels {

namespace {

sim::CycleConfig seeded(const sim::CycleConfig& base, std::size_t i) {
  sim::CycleConfig cfg = base;
  cfg.seed = derive_seed(base.seed, i);
  return cfg;
}

}  // namespace

std::vector<double> evaluate_family_serial(radiometry::SpectralFamily family, Temperature t,
                                           std::span<const double> wavelengths_nm) {
  std::vector<double> out(wavelengths_nm.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = radiometry::family_value(family, wavelengths_nm[i], t);
  }
  return out;
}

std::vector<double> evaluate_family(radiometry::SpectralFamily family, Temperature t,
                                    std::span<const double> wavelengths_nm) {
  // Validate once outside the parallel region so errors surface as exceptions.
  if (!wavelengths_nm.empty()) radiometry::family_value(family, wavelengths_nm[0], t);
  std::vector<double> out(wavelengths_nm.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = radiometry::family_value(family, wavelengths_nm[i], t);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<sim::CoolingTrajectory> run_ensemble_serial(const sim::CycleConfig& base, std::size_t count) {
  base.validate();
  std::vector<sim::CoolingTrajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sim::simulate_trajectory(seeded(base, i)));
  return out;
}

std::vector<sim::CoolingTrajectory> run_ensemble(const sim::CycleConfig& base, std::size_t count) {
  base.validate();
  std::vector<sim::CoolingTrajectory> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = sim::simulate_trajectory(seeded(base, static_cast<std::size_t>(i)));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace q1d::kernels
