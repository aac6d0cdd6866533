#include "qgdecoh/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

#include "qgdecoh/errors.hpp"

namespace qgdecoh {

namespace {

struct Row {
  std::string name;
  double value;
};

std::string key_value_csv(const std::vector<Row>& rows, const NumberFormat& fmt) {
  std::string out = "quantity,value\n";
  for (const auto& r : rows) out += r.name + ',' + fmt(r.value) + '\n';
  return out;
}

std::string scan_section(const std::string& axis) {
  if (axis == "d_max_m" || axis == "half_time_s") return "trajectory";
  return "model";
}

}  // namespace

std::string NumberFormat::operator()(double v) const {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (precision_ >= 17) return format_round_trip(v);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision_);
  return std::string(buf, end);
}

std::string gamma_report(const ExperimentConfig& cfg, const NumberFormat& fmt) {
  const Quantity sigma = cfg.sigma();
  const ValidityReport v = validity_check(cfg.trajectory(), sigma);
  std::vector<Row> rows = {
      {"species_mass_kg", cfg.species_mass().value()},
      {"density_fraction", cfg.density_fraction},
      {"gamma_qg", cfg.gamma().value()},
      {"sigma", sigma.value()},
      {"d_max_m", cfg.trajectory().peak_separation_m()},
      {"sigma_d_max", v.sigma_times_peak},
      {"quadratic_regime", v.quadratic_regime ? 1.0 : 0.0},
  };
  if (const auto* s = cfg.localization_kernel().as_scattering())
    rows.push_back({"quadratic_limit_coefficient", quadratic_limit_coefficient(*s).value()});
  return key_value_csv(rows, fmt);
}

std::string trajectory_csv(const ExperimentConfig& cfg, int points, const NumberFormat& fmt) {
  if (points < 2) throw InputError("need at least 2 trajectory points");
  const Trajectory& traj = cfg.trajectory();
  std::string out = "t_s,d_m\n";
  for (int k = 0; k < points; ++k) {
    const double t = k == points - 1 ? traj.start_s() + traj.duration_s()
                                     : traj.start_s() + traj.duration_s() * k / (points - 1);
    out += fmt(t) + ',' + fmt(traj.separation_si(t)) + '\n';
  }
  return out;
}

std::string contrast_report(const ExperimentConfig& cfg, const NumberFormat& fmt) {
  const CoherenceResult r =
      coherence_decay(cfg.localization_kernel(), cfg.trajectory(), cfg.initial_coherence);
  return key_value_csv({{"gamma_qg", cfg.gamma().value()},
                        {"kappa", geometric_factor(cfg.trajectory())},
                        {"d_max_m", cfg.trajectory().peak_separation_m()},
                        {"half_time_s", cfg.trajectory().half_time_s()},
                        {"exponent", r.exponent},
                        {"initial_coherence", r.initial_coherence},
                        {"final_coherence", r.final_coherence},
                        {"contrast", r.contrast}},
                       fmt);
}

std::string evolve_csv(const ExperimentConfig& cfg, int points, const NumberFormat& fmt) {
  const auto series = coherence_series(cfg.localization_kernel(), cfg.trajectory(),
                                       cfg.initial_coherence, points);
  std::string out = "t_s,coherence,exponent_accumulated\n";
  for (const auto& s : series)
    out += fmt(s.t_s) + ',' + fmt(s.coherence) + ',' + fmt(s.exponent) + '\n';
  return out;
}

std::string kernel_csv(const ExperimentConfig& cfg, double max_separation_m, int points,
                       const NumberFormat& fmt) {
  if (points < 2) throw InputError("need at least 2 kernel points");
  if (!(max_separation_m > 0.0) || !std::isfinite(max_separation_m))
    throw InputError("max separation must be positive");
  const LocalizationKernel kernel = cfg.localization_kernel();
  std::string out = "separation_m,rate_per_s\n";
  for (int k = 0; k < points; ++k) {
    const double dx = k == points - 1 ? max_separation_m : max_separation_m * k / (points - 1);
    out += fmt(dx) + ',' + fmt(kernel.rate_si(dx)) + '\n';
  }
  return out;
}

BoundReport bound_report(const ExperimentConfig& cfg, const NumberFormat& fmt) {
  if (!cfg.contrast) throw ConfigError("no measured contrast: set 'measurement.contrast'");
  const MeasuredContrast meas{*cfg.contrast, cfg.initial_coherence, cfg.attribution_fraction};
  BoundResult r = invert_bound(meas, cfg.trajectory(), cfg.localization_kernel());
  r = exclusion_ratio(r, cfg.ellis());
  const double nominal = gamma_qg(EllisParameters(cfg.species_mass(), 1.0, cfg.constants)).value();

  BoundReport rep{r, {}, {}};
  std::ostringstream t;
  t << std::left;
  auto line = [&t](const std::string& name, const std::string& value) {
    t << std::setw(28) << name << value << '\n';
  };
  line("measured contrast", fmt(meas.value));
  line("initial coherence", fmt(meas.initial_coherence));
  line("attribution fraction", fmt(meas.attribution_fraction));
  line("kappa", fmt(geometric_factor(cfg.trajectory())));
  line("exponent observed", fmt(r.exponent_observed));
  if (r.event_rate_max) line("event rate max [s^-1]", fmt(r.event_rate_max->value()));
  line("gamma max [m^-2 s^-1]", fmt(r.gamma_max.value()));
  line("gamma_qg model [m^-2 s^-1]", fmt(nominal));
  line("exclusion ratio", fmt(r.exclusion_ratio));
  line("density fraction max", fmt(r.density_fraction_max));
  line("status", to_string(r.status));
  rep.table = t.str();

  rep.csv = "gamma_max,exponent_observed,exclusion_ratio,density_fraction_max,event_rate_max,status\n";
  rep.csv += fmt(r.gamma_max.value()) + ',' + fmt(r.exponent_observed) + ',' +
             fmt(r.exclusion_ratio) + ',' + fmt(r.density_fraction_max) + ',' +
             (r.event_rate_max ? fmt(r.event_rate_max->value()) : std::string()) + ',' +
             to_string(r.status) + '\n';
  return rep;
}

bool is_scan_axis(const std::string& axis) {
  return axis == "d_max_m" || axis == "half_time_s" || axis == "species_mass_amu" ||
         axis == "density_fraction";
}

std::string scan_csv(const ExperimentConfig& cfg, const std::string& axis,
                     const std::vector<double>& values, const NumberFormat& fmt) {
  if (!is_scan_axis(axis)) throw ConfigError("invalid scan axis '" + axis + "'");
  if (values.empty()) throw ConfigError("scan needs at least one value");
  if (axis == "d_max_m" && (cfg.recoils || cfg.shape == Trajectory::Shape::Sampled))
    throw ConfigError("scan axis d_max_m conflicts with a [recoils] or sampled trajectory");
  if (axis == "half_time_s" && cfg.shape == Trajectory::Shape::Sampled)
    throw ConfigError("scan axis half_time_s conflicts with a sampled trajectory");
  for (double v : values)
    if (!std::isfinite(v)) throw ConfigError("scan values must be finite");

  // Validate every point up front so config errors are reported before any
  // numeric work starts.
  std::vector<ExperimentConfig> points;
  points.reserve(values.size());
  for (double v : values)
    points.push_back(cfg.with_override(scan_section(axis), axis, format_round_trip(v)));

  struct Point {
    double gamma;
    double exponent;
    double contrast;
  };
  auto evaluate = [](const ExperimentConfig& p) {
    const CoherenceResult r =
        coherence_decay(p.localization_kernel(), p.trajectory(), p.initial_coherence);
    return Point{p.gamma().value(), r.exponent, r.contrast};
  };

  std::vector<Point> results;
  results.reserve(points.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t first = 0; first < points.size(); first += width) {
    std::vector<std::future<Point>> batch;
    const std::size_t last = std::min(points.size(), first + width);
    for (std::size_t i = first; i < last; ++i)
      batch.push_back(std::async(std::launch::async, evaluate, std::cref(points[i])));
    for (auto& f : batch) results.push_back(f.get());
  }

  std::string out = axis + ",gamma,exponent,contrast\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Point& p = results[i];
    out += fmt(values[i]) + ',' + fmt(p.gamma) + ',' + fmt(p.exponent) + ',' + fmt(p.contrast) + '\n';
  }
  return out;
}

}  // namespace qgdecoh
