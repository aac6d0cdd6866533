#pragma once

// Branch-separation histories d(t) and their geometric factor
//   kappa = integral d(t)^2 dt / (d_max^2 * T),
// where T is the HALF duration (the drift time to maximum separation), not
// the total time 2T. With that normalization the smoothed ramp gives
// kappa = 2/3 + 5/(4 pi^2) ~ 0.793.

#include <string>
#include <vector>

#include "qgdecoh/units.hpp"

namespace qgdecoh {

class Trajectory {
 public:
  enum class Shape { PaperSmoothed, Triangular, Constant, Sampled };

  //   d(t) = d_max + (d_max/T) ((T/2pi) sin(2pi|t-T|/T) - |t-T|),  t in [0, 2T]
  static Trajectory paper_smoothed(Quantity d_max, Quantity half_time);
  // Linear ramp 0 -> d_max at T -> 0 at 2T.
  static Trajectory triangular(Quantity d_max, Quantity half_time);
  static Trajectory constant(Quantity separation, Quantity duration);
  // Linear interpolation between samples. Times strictly ascending, at least
  // two samples, separations >= 0.
  static Trajectory sampled(const std::vector<Quantity>& times,
                            const std::vector<Quantity>& separations);
  static Trajectory sampled_si(std::vector<double> times_s,
                               std::vector<double> separations_m);

  Shape shape() const noexcept { return shape_; }
  const char* shape_name() const noexcept;

  double start_s() const noexcept { return start_; }
  double duration_s() const noexcept { return duration_; }
  // T in the kappa normalization: half of the total duration.
  double half_time_s() const noexcept { return 0.5 * duration_; }
  // Largest separation reached (d_max; the constant d; max sample).
  double peak_separation_m() const noexcept { return peak_; }

  Quantity duration() const { return seconds(duration_); }
  Quantity half_time() const { return seconds(half_time_s()); }
  Quantity peak_separation() const { return metres(peak_); }

  // d(t) in metres for t in seconds on [start, start + duration]; throws
  // InputError outside that domain.
  double separation_si(double t) const;

  // Points in the domain where d(t) may have a kink, including both ends.
  std::vector<double> breakpoints_s() const;

  const std::vector<double>& sample_times_s() const noexcept { return times_; }
  const std::vector<double>& sample_separations_m() const noexcept { return seps_; }

  // Same shape with every separation multiplied by s > 0.
  Trajectory with_separation_scaled(double s) const;
  // Same shape with the time axis multiplied by s > 0.
  Trajectory with_time_scaled(double s) const;

 private:
  Trajectory(Shape shape, double start, double duration, double peak)
      : shape_(shape), start_(start), duration_(duration), peak_(peak) {}

  Shape shape_;
  double start_;
  double duration_;
  double peak_;
  std::vector<double> times_;
  std::vector<double> seps_;
};

Quantity separation_at(const Trajectory& traj, Quantity t);

// kappa, see the header comment. Adaptive quadrature (rel. tol. 1e-10) for
// the closed-form shapes, exact piecewise integration for Sampled. Zero
// for a degenerate trajectory (zero duration or zero peak separation).
double geometric_factor(const Trajectory& traj);

// integral d(t)^2 dt in m^2 s, by the same routes as geometric_factor.
double squared_separation_integral(const Trajectory& traj);

struct RecoilKinematics {
  int n_recoils;
  Quantity wavenumber;
  Quantity atom_mass;
  Quantity drift_time;
};

// n (hbar k / m) T.
Quantity max_separation_from_recoils(const RecoilKinematics& kin,
                                     const PhysicalConstants& constants = {});

struct ValidityReport {
  double sigma_times_peak;  // max_t d(t) * sigma
  bool quadratic_regime;    // sigma_times_peak < 0.01; advisory only
};

ValidityReport validity_check(const Trajectory& traj, Quantity sigma);

// Two-column CSV with the header "t_s,d_m". Throws ConfigError with the
// offending line number.
Trajectory parse_samples_csv(const std::string& text);

}  // namespace qgdecoh
