#pragma once

#include <span>
#include <vector>

#include "q1d/cooling_sim.hpp"
#include "q1d/radiometry.hpp"

// Data-parallel kernels. Each OpenMP kernel has a serial twin that is kept as the
// reference: tests require identical output, and the bench target compares speed.
namespace q1d::kernels {

std::vector<double> evaluate_family_serial(radiometry::SpectralFamily family, Temperature t,
                                           std::span<const double> wavelengths_nm);
std::vector<double> evaluate_family(radiometry::SpectralFamily family, Temperature t,
                                    std::span<const double> wavelengths_nm);

/// `count` trajectories; trajectory i uses seed derive_seed(base.seed, i).
std::vector<sim::CoolingTrajectory> run_ensemble_serial(const sim::CycleConfig& base, std::size_t count);
std::vector<sim::CoolingTrajectory> run_ensemble(const sim::CycleConfig& base, std::size_t count);

}  // namespace q1d::kernels
