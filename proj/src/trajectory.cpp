#include "qgdecoh/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qgdecoh/errors.hpp"
#include "qgdecoh/quadrature.hpp"

namespace qgdecoh {

namespace {

constexpr double kKappaTolerance = 1e-10;

void require_positive(const Quantity& q, Dimension d, const char* what) {
  if (q.in(d, what) <= 0.0) throw InputError(std::string(what) + " must be positive");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Trajectory Trajectory::paper_smoothed(Quantity d_max, Quantity half_time) {
  require_positive(d_max, dim::length, "d_max");
  require_positive(half_time, dim::time, "half_time");
  return Trajectory(Shape::PaperSmoothed, 0.0, 2.0 * half_time.value(), d_max.value());
}

Trajectory Trajectory::triangular(Quantity d_max, Quantity half_time) {
  require_positive(d_max, dim::length, "d_max");
  require_positive(half_time, dim::time, "half_time");
  return Trajectory(Shape::Triangular, 0.0, 2.0 * half_time.value(), d_max.value());
}

Trajectory Trajectory::constant(Quantity separation, Quantity duration) {
  if (separation.in(dim::length, "separation") < 0.0)
    throw InputError("separation must be >= 0");
  if (duration.in(dim::time, "duration") < 0.0)
    throw InputError("duration must be >= 0");
  return Trajectory(Shape::Constant, 0.0, duration.value(), separation.value());
}

Trajectory Trajectory::sampled(const std::vector<Quantity>& times,
                               const std::vector<Quantity>& separations) {
  std::vector<double> t;
  std::vector<double> d;
  t.reserve(times.size());
  d.reserve(separations.size());
  for (const auto& q : times) t.push_back(q.in(dim::time, "sample time"));
  for (const auto& q : separations) d.push_back(q.in(dim::length, "sample separation"));
  return sampled_si(std::move(t), std::move(d));
}

Trajectory Trajectory::sampled_si(std::vector<double> times,
                                  std::vector<double> seps) {
  if (times.size() != seps.size())
    throw InputError("sampled trajectory needs as many separations as times");
  if (times.size() < 2) throw InputError("sampled trajectory needs at least 2 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(seps[i]))
      throw InputError("sampled trajectory values must be finite");
    if (seps[i] < 0.0) throw InputError("sampled separations must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw InputError("sample times must be strictly ascending");
  }
  const double peak = *std::max_element(seps.begin(), seps.end());
  Trajectory traj(Shape::Sampled, times.front(), times.back() - times.front(), peak);
  traj.times_ = std::move(times);
  traj.seps_ = std::move(seps);
  return traj;
}

const char* Trajectory::shape_name() const noexcept {
  switch (shape_) {
    case Shape::PaperSmoothed: return "paper";
    case Shape::Triangular: return "triangular";
    case Shape::Constant: return "constant";
    case Shape::Sampled: return "sampled";
  }
  return "?";
}

double Trajectory::separation_si(double t) const {
  const double end = start_ + duration_;
  if (!(t >= start_ && t <= end))
    throw InputError("time " + format_round_trip(t) + " s outside trajectory domain [" +
                     format_round_trip(start_) + ", " + format_round_trip(end) + "]");
  switch (shape_) {
    case Shape::PaperSmoothed: {
      const double T = half_time_s();
      const double s = std::abs(t - T) / T;
      if (s >= 1.0) return 0.0;
      const double f = 1.0 - s + std::sin(2.0 * std::numbers::pi * s) / (2.0 * std::numbers::pi);
      return std::max(0.0, peak_ * f);
    }
    case Shape::Triangular: {
      const double T = half_time_s();
      const double s = std::abs(t - T) / T;
      return s >= 1.0 ? 0.0 : peak_ * (1.0 - s);
    }
    case Shape::Constant:
      return peak_;
    case Shape::Sampled: {
      auto hi = std::upper_bound(times_.begin(), times_.end(), t);
      if (hi == times_.end()) return seps_.back();
      const auto i = static_cast<std::size_t>(hi - times_.begin());
      const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
      return seps_[i - 1] + w * (seps_[i] - seps_[i - 1]);
    }
  }
  return 0.0;
}

std::vector<double> Trajectory::breakpoints_s() const {
  switch (shape_) {
    case Shape::PaperSmoothed:
    case Shape::Triangular:
      return {0.0, half_time_s(), duration_};
    case Shape::Constant:
      return {0.0, duration_};
    case Shape::Sampled:
      return times_;
  }
  return {};
}

Trajectory Trajectory::with_separation_scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw InputError("scale must be positive");
  Trajectory out = *this;
  out.peak_ *= s;
  for (auto& d : out.seps_) d *= s;
  return out;
}

Trajectory Trajectory::with_time_scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw InputError("scale must be positive");
  Trajectory out = *this;
  out.start_ *= s;
  out.duration_ *= s;
  for (auto& t : out.times_) t *= s;
  return out;
}

Quantity separation_at(const Trajectory& traj, Quantity t) {
  return metres(traj.separation_si(t.in(dim::time, "t")));
}

double squared_separation_integral(const Trajectory& traj) {
  switch (traj.shape()) {
    case Trajectory::Shape::Constant:
      return traj.peak_separation_m() * traj.peak_separation_m() * traj.duration_s();
    case Trajectory::Shape::Sampled: {
      // d is linear on each segment, so d^2 integrates exactly.
      const auto& t = traj.sample_times_s();
      const auto& d = traj.sample_separations_m();
      double total = 0.0;
      for (std::size_t i = 1; i < t.size(); ++i) {
        const double a = d[i - 1];
        const double b = d[i];
        total += (t[i] - t[i - 1]) * (a * a + a * b + b * b) / 3.0;
      }
      return total;
    }
    default: {
      const double T = traj.half_time_s();
      return integrate(
          [&traj](double t) {
            const double d = traj.separation_si(t);
            return d * d;
          },
          {0.0, T, 2.0 * T}, kKappaTolerance, "geometric factor");
    }
  }
}

double geometric_factor(const Trajectory& traj) {
  const double d = traj.peak_separation_m();
  const double T = traj.half_time_s();
  if (d == 0.0 || T == 0.0) return 0.0;
  return squared_separation_integral(traj) / (d * d * T);
}

Quantity max_separation_from_recoils(const RecoilKinematics& kin,
                                     const PhysicalConstants& constants) {
  if (kin.n_recoils < 0) throw InputError("n_recoils must be >= 0");
  require_positive(kin.wavenumber, dim::wavenumber, "wavenumber");
  require_positive(kin.atom_mass, dim::mass, "atom_mass");
  require_positive(kin.drift_time, dim::time, "drift_time");
  const Quantity d = Quantity(static_cast<double>(kin.n_recoils)) *
                     (constants.hbar * kin.wavenumber / kin.atom_mass) * kin.drift_time;
  d.in(dim::length, "max separation");
  return d;
}

ValidityReport validity_check(const Trajectory& traj, Quantity sigma) {
  require_positive(sigma, dim::wavenumber, "sigma");
  const double product =
      (traj.peak_separation() * sigma).in(dim::none, "sigma * d_max");
  return {product, product < 0.01};
}

Trajectory parse_samples_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  unsigned long lineno = 0;
  bool header = false;
  std::vector<double> t;
  std::vector<double> d;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
      throw ConfigError("expected two comma-separated columns", lineno);
    const std::string a = trim(row.substr(0, comma));
    const std::string b = trim(row.substr(comma + 1));
    if (!header) {
      if (a != "t_s" || b != "d_m") throw ConfigError("expected header 't_s,d_m'", lineno);
      header = true;
      continue;
    }
    try {
      t.push_back(parse_double(a));
      d.push_back(parse_double(b));
    } catch (const InputError& e) {
      throw ConfigError(e.what(), lineno);
    }
  }
  if (!header) throw ConfigError("samples CSV is empty");
  try {
    return Trajectory::sampled_si(std::move(t), std::move(d));
  } catch (const InputError& e) {
    throw ConfigError(std::string("samples CSV: ") + e.what());
  }
}

}  // namespace qgdecoh
