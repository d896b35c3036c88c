#include "q1d/spectrum.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "q1d/constants.hpp"
#include "q1d/error.hpp"
#include "q1d/io.hpp"

namespace q1d {

namespace {

constexpr std::array<std::pair<SpectrumKind, std::string_view>, 8> kKindNames{{
    {SpectrumKind::counts, "counts"},
    {SpectrumKind::ratio, "ratio"},
    {SpectrumKind::psd_per_angular_frequency, "psd_per_angular_frequency"},
    {SpectrumKind::psd_per_wavelength, "psd_per_wavelength"},
    {SpectrumKind::irradiance_per_angular_frequency, "irradiance_per_angular_frequency"},
    {SpectrumKind::irradiance_per_wavelength, "irradiance_per_wavelength"},
    {SpectrumKind::radiance_per_angular_frequency, "radiance_per_angular_frequency"},
    {SpectrumKind::radiance_per_wavelength, "radiance_per_wavelength"},
}};

// |d omega / d lambda| in (rad/s) per nm.
double jacobian_per_nm(double lambda_nm) {
  const double lambda_m = lambda_nm * 1e-9;
  return 2.0 * constants::pi * constants::c / (lambda_m * lambda_m) * 1e-9;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError("line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(SpectrumKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

SpectrumKind parse_spectrum_kind(std::string_view name) {
  name = trim(name);
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  // Short aliases accepted on the command line.
  if (name == "psd") return SpectrumKind::psd_per_angular_frequency;
  if (name == "irradiance") return SpectrumKind::irradiance_per_wavelength;
  throw InputError("unknown spectrum kind '" + std::string(name) + "'");
}

bool is_density(SpectrumKind kind) {
  return kind != SpectrumKind::counts && kind != SpectrumKind::ratio;
}

bool is_per_angular_frequency(SpectrumKind kind) {
  return kind == SpectrumKind::psd_per_angular_frequency ||
         kind == SpectrumKind::irradiance_per_angular_frequency ||
         kind == SpectrumKind::radiance_per_angular_frequency;
}

SpectrumKind domain_partner(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::psd_per_angular_frequency: return SpectrumKind::psd_per_wavelength;
    case SpectrumKind::psd_per_wavelength: return SpectrumKind::psd_per_angular_frequency;
    case SpectrumKind::irradiance_per_angular_frequency: return SpectrumKind::irradiance_per_wavelength;
    case SpectrumKind::irradiance_per_wavelength: return SpectrumKind::irradiance_per_angular_frequency;
    case SpectrumKind::radiance_per_angular_frequency: return SpectrumKind::radiance_per_wavelength;
    case SpectrumKind::radiance_per_wavelength: return SpectrumKind::radiance_per_angular_frequency;
    default: break;
  }
  throw DomainError("spectrum kind '" + std::string(to_string(kind)) + "' is not a spectral density");
}

SampledSpectrum::SampledSpectrum(std::vector<double> wavelengths_nm, std::vector<double> values,
                                 SpectrumKind kind)
    : wavelengths_(std::move(wavelengths_nm)), values_(std::move(values)), kind_(kind) {
  if (wavelengths_.size() != values_.size()) {
    throw DomainError("spectrum grid and values differ in length");
  }
  if (wavelengths_.size() < 2) throw DomainError("spectrum needs at least two samples");
  for (std::size_t i = 0; i < wavelengths_.size(); ++i) {
    if (!std::isfinite(wavelengths_[i]) || !(wavelengths_[i] > 0.0)) {
      throw DomainError("spectrum wavelengths must be finite and positive");
    }
    if (i > 0 && !(wavelengths_[i] > wavelengths_[i - 1])) {
      throw DomainError("spectrum wavelengths must be strictly increasing");
    }
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw DomainError("spectrum values must be finite and non-negative (index " +
                        std::to_string(i) + ")");
    }
  }
}

double SampledSpectrum::value_at(double wavelength_nm) const {
  if (wavelength_nm < wavelengths_.front() || wavelength_nm > wavelengths_.back()) {
    throw DomainError("wavelength " + io::format_double(wavelength_nm) + " nm outside spectrum grid");
  }
  auto it = std::upper_bound(wavelengths_.begin(), wavelengths_.end(), wavelength_nm);
  if (it == wavelengths_.end()) return values_.back();
  const auto i = static_cast<std::size_t>(it - wavelengths_.begin());
  const double x0 = wavelengths_[i - 1], x1 = wavelengths_[i];
  const double t = (wavelength_nm - x0) / (x1 - x0);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

SampledSpectrum SampledSpectrum::restricted(double lo_nm, double hi_nm) const {
  if (!(hi_nm > lo_nm)) throw DomainError("empty wavelength band");
  if (lo_nm < wavelengths_.front() || hi_nm > wavelengths_.back()) {
    throw DomainError("band [" + io::format_double(lo_nm) + ", " + io::format_double(hi_nm) +
                      "] nm exceeds spectrum grid");
  }
  std::vector<double> wl{lo_nm};
  std::vector<double> v{value_at(lo_nm)};
  for (std::size_t i = 0; i < wavelengths_.size(); ++i) {
    if (wavelengths_[i] > lo_nm && wavelengths_[i] < hi_nm) {
      wl.push_back(wavelengths_[i]);
      v.push_back(values_[i]);
    }
  }
  wl.push_back(hi_nm);
  v.push_back(value_at(hi_nm));
  return SampledSpectrum(std::move(wl), std::move(v), kind_);
}

double SampledSpectrum::integrate() const {
  double sum = 0.0;
  if (is_per_angular_frequency(kind_)) {
    for (std::size_t i = 1; i < size(); ++i) {
      const double w0 = 2.0 * constants::pi * constants::c / (wavelengths_[i - 1] * 1e-9);
      const double w1 = 2.0 * constants::pi * constants::c / (wavelengths_[i] * 1e-9);
      sum += 0.5 * (values_[i - 1] + values_[i]) * (w0 - w1);
    }
  } else {
    for (std::size_t i = 1; i < size(); ++i) {
      sum += 0.5 * (values_[i - 1] + values_[i]) * (wavelengths_[i] - wavelengths_[i - 1]);
    }
  }
  return sum;
}

SampledSpectrum SampledSpectrum::with_values(std::vector<double> values) const {
  return SampledSpectrum(wavelengths_, std::move(values), kind_);
}

SampledSpectrum SampledSpectrum::with_kind(SpectrumKind kind) const {
  return SampledSpectrum(wavelengths_, values_, kind);
}

SampledSpectrum SampledSpectrum::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return with_values(std::move(v));
}

double SampledSpectrum::mean_spacing_nm() const {
  return (wavelengths_.back() - wavelengths_.front()) / static_cast<double>(size() - 1);
}

SampledSpectrum resample(const SampledSpectrum& s, std::span<const double> grid_nm) {
  std::vector<double> v;
  v.reserve(grid_nm.size());
  for (double x : grid_nm) v.push_back(s.value_at(x));
  return SampledSpectrum(std::vector<double>(grid_nm.begin(), grid_nm.end()), std::move(v), s.kind());
}

std::vector<double> common_grid(const SampledSpectrum& a, const SampledSpectrum& b) {
  const double lo = std::max(a.min_wavelength_nm(), b.min_wavelength_nm());
  const double hi = std::min(a.max_wavelength_nm(), b.max_wavelength_nm());
  if (!(hi > lo)) throw DomainError("spectra do not overlap in wavelength");
  const SampledSpectrum& coarse = a.mean_spacing_nm() >= b.mean_spacing_nm() ? a : b;
  std::vector<double> grid;
  for (double x : coarse.wavelengths_nm()) {
    if (x >= lo && x <= hi) grid.push_back(x);
  }
  if (grid.size() < 2) throw DomainError("overlap of spectra holds fewer than two samples");
  return grid;
}

SampledSpectrum convert_spectral_domain(const SampledSpectrum& s, SpectrumKind target) {
  if (!is_density(s.kind())) {
    throw DomainError("cannot convert '" + std::string(to_string(s.kind())) +
                      "' to a density without a response curve");
  }
  if (target == s.kind()) return s;
  if (domain_partner(s.kind()) != target) {
    throw DomainError("no conversion from '" + std::string(to_string(s.kind())) + "' to '" +
                      std::string(to_string(target)) + "'");
  }
  const bool to_wavelength = !is_per_angular_frequency(target);
  std::vector<double> v(s.values().begin(), s.values().end());
  const auto wl = s.wavelengths_nm();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double j = jacobian_per_nm(wl[i]);
    v[i] = to_wavelength ? v[i] * j : v[i] / j;
  }
  return SampledSpectrum(std::vector<double>(wl.begin(), wl.end()), std::move(v), target);
}

SampledSpectrum parse_spectrum_csv(std::string_view text, std::optional<SpectrumKind> kind_override) {
  std::optional<SpectrumKind> file_kind;
  bool header_seen = false;
  std::vector<double> wl, v;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      if (body.starts_with("kind=")) file_kind = parse_spectrum_kind(body.substr(5));
      continue;
    }
    if (!header_seen) {
      if (line != "wavelength_nm,value") {
        throw InputError("expected header 'wavelength_nm,value', got '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected two fields");
    }
    wl.push_back(parse_number(line.substr(0, comma), line_no));
    v.push_back(parse_number(line.substr(comma + 1), line_no));
  }
  if (!header_seen) throw InputError("spectrum CSV has no header");
  const auto kind = kind_override ? kind_override : file_kind;
  if (!kind) throw InputError("spectrum kind not given (no '# kind=' line and no override)");
  return SampledSpectrum(std::move(wl), std::move(v), *kind);
}

SampledSpectrum read_spectrum_csv(const std::string& path, std::optional<SpectrumKind> kind_override) {
  try {
    return parse_spectrum_csv(io::read_text_file(path), kind_override);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_spectrum_csv(const SampledSpectrum& s) {
  std::string out = "# kind=" + std::string(to_string(s.kind())) + "\nwavelength_nm,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += io::format_double(s.wavelengths_nm()[i]);
    out += ',';
    out += io::format_double(s.values()[i]);
    out += '\n';
  }
  return out;
}

void write_spectrum_csv(const std::string& path, const SampledSpectrum& s) {
  io::write_file_atomic(path, format_spectrum_csv(s));
}

}  // namespace q1d
