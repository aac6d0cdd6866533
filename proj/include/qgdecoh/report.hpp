#pragma once

// Text and CSV products behind each CLI subcommand. All numbers SI; every
// CSV starts with a header row.

#include <string>
#include <vector>

#include "qgdecoh/bounds.hpp"
#include "qgdecoh/experiment.hpp"

namespace qgdecoh {

// precision >= 17 selects shortest round-trip formatting; smaller values
// give that many significant digits. Infinities print as "inf".
class NumberFormat {
 public:
  explicit NumberFormat(int precision = 17) : precision_(precision) {}
  std::string operator()(double v) const;

 private:
  int precision_;
};

// quantity,value table: gamma_qg, sigma, validity product, kappa.
std::string gamma_report(const ExperimentConfig& cfg, const NumberFormat& fmt);

// t_s,d_m at `points` equally spaced times.
std::string trajectory_csv(const ExperimentConfig& cfg, int points, const NumberFormat& fmt);

std::string contrast_report(const ExperimentConfig& cfg, const NumberFormat& fmt);

// t_s,coherence,exponent_accumulated.
std::string evolve_csv(const ExperimentConfig& cfg, int points, const NumberFormat& fmt);

// separation_m,rate_per_s on [0, max_separation_m].
std::string kernel_csv(const ExperimentConfig& cfg, double max_separation_m, int points,
                       const NumberFormat& fmt);

struct BoundReport {
  BoundResult result;
  std::string table;  // human-readable
  std::string csv;
};
// Uses cfg.contrast / initial_coherence / attribution_fraction. Throws
// ConfigError when no contrast is configured.
BoundReport bound_report(const ExperimentConfig& cfg, const NumberFormat& fmt);

// Scan axes: d_max_m, half_time_s, species_mass_amu, density_fraction.
bool is_scan_axis(const std::string& axis);

// <axis>,gamma,exponent,contrast; one row per value in input order. Points
// are evaluated concurrently, rows are emitted in input order.
std::string scan_csv(const ExperimentConfig& cfg, const std::string& axis,
                     const std::vector<double>& values, const NumberFormat& fmt);

}  // namespace qgdecoh
