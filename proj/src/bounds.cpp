#include "qgdecoh/bounds.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "qgdecoh/errors.hpp"

namespace qgdecoh {

namespace {

constexpr double kEventRateCeiling = 1e12;
constexpr double kBisectionTolerance = 1e-10;

double quadratic_denominator(const Trajectory& traj, double prefactor) {
  const double d = traj.peak_separation_m();
  const double kappa = geometric_factor(traj);
  if (!(kappa > 0.0)) throw InputError("trajectory has zero geometric factor");
  return prefactor * kappa * d * d * traj.half_time_s();
}

}  // namespace

void MeasuredContrast::validate() const {
  if (!(value > 0.0 && value <= 1.0)) throw InputError("contrast must lie in (0, 1]");
  if (!(initial_coherence > 0.0 && initial_coherence <= 0.5))
    throw InputError("initial coherence must lie in (0, 1/2]");
  if (!(attribution_fraction > 0.0 && attribution_fraction <= 1.0))
    throw InputError("attribution fraction must lie in (0, 1]");
  if (value > 2.0 * initial_coherence)
    throw InputError("contrast exceeds the decoherence-free value 2 * initial coherence");
}

double observed_exponent(const MeasuredContrast& meas) {
  meas.validate();
  // -ln(1 - a (1 - r)), evaluated without cancellation at either end.
  const double a = meas.attribution_fraction;
  const double r = meas.value / (2.0 * meas.initial_coherence);
  const double remaining = (1.0 - a) + a * r;
  if (remaining < 0.5) return -std::log(remaining);
  return -std::log1p(a * (r - 1.0));
}

BoundResult invert_bound(const MeasuredContrast& meas, const Trajectory& traj,
                         double prefactor) {
  if (prefactor != kPrefactorPaper && prefactor != kPrefactorMasterEquation)
    throw InputError("prefactor must be 1 or 1/2");
  BoundResult r;
  r.exponent_observed = observed_exponent(meas);
  r.gamma_max = localization_rate(r.exponent_observed / quadratic_denominator(traj, prefactor));
  return r;
}

BoundResult invert_bound(const MeasuredContrast& meas, const Trajectory& traj,
                         const LocalizationKernel& shape) {
  if (const auto* q = shape.as_quadratic()) return invert_bound(meas, traj, q->prefactor);

  const auto& k = *shape.as_scattering();
  BoundResult r;
  r.exponent_observed = observed_exponent(meas);
  if (!(geometric_factor(traj) > 0.0)) throw InputError("trajectory has zero geometric factor");

  double rate = 0.0;
  if (r.exponent_observed > 0.0) {
    auto excess = [&](double event_rate) {
      const auto kernel = LocalizationKernel::scattering(hertz(event_rate), k.sigma);
      return decay_exponent(kernel, traj) - r.exponent_observed;
    };
    if (excess(kEventRateCeiling) < 0.0)
      throw NumericError("observed exponent not reachable with event_rate <= 1e12 s^-1");
    auto converged = [](double lo, double hi) { return hi - lo <= kBisectionTolerance * hi; };
    std::uintmax_t max_iter = 400;
    const auto [lo, hi] =
        boost::math::tools::bisect(excess, 0.0, kEventRateCeiling, converged, max_iter);
    if (!converged(lo, hi)) throw NumericError("event-rate bisection did not converge");
    rate = 0.5 * (lo + hi);
  }
  r.event_rate_max = hertz(rate);
  r.gamma_max = quadratic_limit_coefficient({hertz(rate), k.sigma});
  return r;
}

BoundResult exclusion_ratio(BoundResult r, const EllisParameters& model) {
  const double nominal =
      gamma_qg(EllisParameters(model.system_mass, 1.0, model.constants)).value();
  const double gmax = r.gamma_max.in(dim::localization, "gamma_max");
  if (gmax == 0.0) {
    r.exclusion_ratio = std::numeric_limits<double>::infinity();
    r.density_fraction_max = 0.0;
    r.status = ExclusionStatus::NoObservedLoss;
    return r;
  }
  r.exclusion_ratio = nominal / gmax;
  r.density_fraction_max = gmax / nominal;
  r.status = ExclusionStatus::Finite;
  return r;
}

CoherenceResult predict_species(const EllisParameters& model, const Trajectory& traj,
                                Quantity species_mass, double c0, double prefactor) {
  const EllisParameters species(species_mass, model.density_fraction, model.constants);
  return coherence_decay(LocalizationKernel::quadratic(gamma_qg(species), prefactor), traj, c0);
}

const char* to_string(ExclusionStatus s) {
  switch (s) {
    case ExclusionStatus::Pending: return "pending";
    case ExclusionStatus::Finite: return "ok";
    case ExclusionStatus::NoObservedLoss: return "no_observed_loss";
  }
  return "?";
}

}  // namespace qgdecoh
