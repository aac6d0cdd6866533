#pragma once

// Experiment configuration: a sectioned key-value document.
//
//   preset = "kovachy2015"       (optional, must precede any section)
//   [constants]  c, hbar, m_planck, m_nucleon            (SI)
//   [model]      species_mass_amu, density_fraction, prefactor = paper|eq1,
//                kernel = quadratic|scattering, event_rate_hz, sigma_per_m
//   [trajectory] shape = paper|triangular|constant|sampled,
//                d_max_m, half_time_s, samples_csv
//   [recoils]    n, wavelength_nm, drift_time_s
//   [measurement] contrast, initial_coherence, attribution_fraction
//   [output]     csv, precision
//
// Full-line comments start with ';' or '#'. Values may be double-quoted.
// Keys given in the document override the preset. Unknown sections or keys
// are errors.

#include <map>
#include <optional>
#include <string>

#include "qgdecoh/kernels.hpp"
#include "qgdecoh/trajectory.hpp"

namespace qgdecoh {

// section -> key -> raw value; top-level keys live under section "".
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

enum class KernelKind { Quadratic, Scattering };

struct RecoilSettings {
  int n;
  double wavelength_nm;
  std::optional<double> drift_time_s;  // defaults to half_time_s
};

class ExperimentConfig {
 public:
  std::string preset;
  PhysicalConstants constants;

  double species_mass_amu = 0.0;
  double density_fraction = 1.0;
  double prefactor = kPrefactorPaper;
  KernelKind kernel = KernelKind::Quadratic;
  std::optional<double> event_rate_hz;
  std::optional<double> sigma_per_m;

  Trajectory::Shape shape = Trajectory::Shape::PaperSmoothed;
  std::optional<double> d_max_m;
  std::optional<double> half_time_s;
  std::string samples_csv;
  std::optional<RecoilSettings> recoils;

  std::optional<double> contrast;
  double initial_coherence = 0.5;
  double attribution_fraction = 1.0;

  std::optional<std::string> csv_path;
  int precision = 17;

  Quantity species_mass() const;
  EllisParameters ellis() const;
  Quantity gamma() const;
  Quantity sigma() const;  // sigma_per_m override or wormhole_sigma
  // Quadratic: gamma_qg with the configured prefactor. Scattering:
  // event_rate_hz with sigma().
  LocalizationKernel localization_kernel() const;
  const Trajectory& trajectory() const { return *trajectory_; }
  // d_max actually used: derived from [recoils] when present.
  double effective_d_max_m() const;

  // The document as given, before preset expansion.
  const RawConfig& raw() const noexcept { return raw_; }
  const std::string& base_dir() const noexcept { return base_dir_; }

  // Copy with one document key replaced (section "" for the preset) and
  // everything re-validated. Document keys still override the preset.
  ExperimentConfig with_override(const std::string& section, const std::string& key,
                                 const std::string& value) const;

  // Validates and applies defaults. Throws ConfigError naming the offending
  // key. Relative samples_csv paths resolve against base_dir.
  static ExperimentConfig resolve(const RawConfig& raw, const std::string& base_dir = "");

 private:
  RawConfig raw_;
  std::string base_dir_;
  std::optional<Trajectory> trajectory_;
};

// Syntax pass only: sections, keys, quotes stripped. Throws ConfigError with
// the line number; unknown sections/keys are rejected here.
RawConfig parse_config_document(const std::string& text);

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = "");

// Expanded key table of a named preset; throws ConfigError for unknown names.
RawConfig preset_table(const std::string& name);

}  // namespace qgdecoh
