#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace q1d {

/// What a sampled curve's values measure. Densities come in per-angular-frequency
/// and per-wavelength pairs; the grid is always vacuum wavelength in nm.
enum class SpectrumKind {
  counts,
  ratio,
  psd_per_angular_frequency,        // W s/rad
  psd_per_wavelength,               // W/nm
  irradiance_per_angular_frequency, // W m^-2 (rad/s)^-1
  irradiance_per_wavelength,        // W m^-2 nm^-1
  radiance_per_angular_frequency,   // W m^-2 sr^-1 (rad/s)^-1
  radiance_per_wavelength,          // W m^-2 sr^-1 nm^-1
};

std::string_view to_string(SpectrumKind kind);
SpectrumKind parse_spectrum_kind(std::string_view name);

bool is_density(SpectrumKind kind);
bool is_per_angular_frequency(SpectrumKind kind);
/// The same physical quantity expressed in the other spectral variable.
SpectrumKind domain_partner(SpectrumKind kind);

class SampledSpectrum {
 public:
  SampledSpectrum(std::vector<double> wavelengths_nm, std::vector<double> values,
                  SpectrumKind kind);

  std::span<const double> wavelengths_nm() const { return wavelengths_; }
  std::span<const double> values() const { return values_; }
  SpectrumKind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }
  double min_wavelength_nm() const { return wavelengths_.front(); }
  double max_wavelength_nm() const { return wavelengths_.back(); }

  /// Linear interpolation in wavelength; throws outside the grid.
  double value_at(double wavelength_nm) const;

  /// Samples on [lo, hi], with interpolated end points added when they fall
  /// between grid nodes.
  SampledSpectrum restricted(double lo_nm, double hi_nm) const;

  /// Trapezoid integral in the kind's natural variable (nm for per-wavelength
  /// kinds, rad/s for per-angular-frequency kinds and everything else in nm).
  double integrate() const;
  double integrate(double lo_nm, double hi_nm) const { return restricted(lo_nm, hi_nm).integrate(); }

  SampledSpectrum with_values(std::vector<double> values) const;
  SampledSpectrum with_kind(SpectrumKind kind) const;
  SampledSpectrum scaled(double factor) const;

  /// Mean grid spacing, used to choose the coarser of two grids.
  double mean_spacing_nm() const;

 private:
  std::vector<double> wavelengths_;
  std::vector<double> values_;
  SpectrumKind kind_;
};

/// Linear resampling onto `grid_nm`; every grid point must lie inside s's range.
SampledSpectrum resample(const SampledSpectrum& s, std::span<const double> grid_nm);

/// The nodes of the coarser of a and b restricted to their overlap.
std::vector<double> common_grid(const SampledSpectrum& a, const SampledSpectrum& b);

/// Changes a density between per-angular-frequency and per-wavelength form using
/// |d omega / d lambda| = 2 pi c / lambda^2, so the integrated power is preserved.
SampledSpectrum convert_spectral_domain(const SampledSpectrum& s, SpectrumKind target);

/// Reads the `wavelength_nm,value` CSV. `# kind=<kind>` comment lines set the kind;
/// `kind_override` wins over the file.
SampledSpectrum read_spectrum_csv(const std::string& path,
                                  std::optional<SpectrumKind> kind_override = std::nullopt);
SampledSpectrum parse_spectrum_csv(std::string_view text,
                                   std::optional<SpectrumKind> kind_override = std::nullopt);
std::string format_spectrum_csv(const SampledSpectrum& s);
void write_spectrum_csv(const std::string& path, const SampledSpectrum& s);

}  // namespace q1d
