#include "qgdecoh/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "qgdecoh/errors.hpp"
#include "qgdecoh/quadrature.hpp"

namespace qgdecoh {

namespace {

// Radial weight is integrated in units of sigma; the tail beyond 12 sigma
// is below 1e-30 of the total and dropped.
constexpr double kMomentumCutoff = 12.0;
constexpr double kOverlapTolerance = 1e-8;

double maxwell_weight(double u) { return u * u * std::exp(-0.5 * u * u); }

double maxwell_norm() {
  static const double norm = integrate(maxwell_weight, 0.0, kMomentumCutoff,
                                       1e-14, "radial weight normalization");
  return norm;
}

}  // namespace

EllisParameters::EllisParameters(Quantity mass, double fraction,
                                 PhysicalConstants c)
    : system_mass(mass), density_fraction(fraction), constants(c) {
  if (system_mass.in(dim::mass, "system_mass") <= 0.0)
    throw InputError("system_mass must be positive");
  if (!(density_fraction >= 0.0) || !std::isfinite(density_fraction))
    throw InputError("density_fraction must be finite and >= 0");
  constants.validate();
}

Quantity gamma_qg(const EllisParameters& p) {
  const auto& k = p.constants;
  const Quantity g = p.density_fraction * (k.c * k.m_nucleon).pow(4) *
                     p.system_mass.pow(2) / (k.hbar * k.m_planck).pow(3);
  g.in(dim::localization, "gamma_qg");
  return g;
}

Quantity wormhole_sigma(const PhysicalConstants& k) {
  const Quantity s = k.c * k.m_nucleon.pow(2) / (k.hbar * k.m_planck);
  s.in(dim::wavenumber, "wormhole_sigma");
  return s;
}

LocalizationKernel LocalizationKernel::quadratic(Quantity gamma,
                                                 double prefactor) {
  if (gamma.in(dim::localization, "gamma") < 0.0)
    throw InputError("gamma must be >= 0");
  if (prefactor != kPrefactorPaper && prefactor != kPrefactorMasterEquation)
    throw InputError("prefactor must be 1 or 1/2");
  return LocalizationKernel(QuadraticKernel{gamma, prefactor});
}

LocalizationKernel LocalizationKernel::scattering(Quantity event_rate,
                                                  Quantity sigma) {
  if (event_rate.in(dim::rate, "event_rate") < 0.0)
    throw InputError("event_rate must be >= 0");
  if (sigma.in(dim::wavenumber, "sigma") <= 0.0)
    throw InputError("sigma must be positive");
  return LocalizationKernel(ScatteringOverlapKernel{event_rate, sigma});
}

LocalizationKernel LocalizationKernel::scaled(double s) const {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("scale must be finite and >= 0");
  if (const auto* q = as_quadratic()) return quadratic(s * q->gamma, q->prefactor);
  const auto& k = std::get<ScatteringOverlapKernel>(model_);
  return scattering(s * k.event_rate, k.sigma);
}

double LocalizationKernel::rate_si(double dx) const {
  if (!(dx >= 0.0)) throw InputError("separation must be >= 0");
  if (dx == 0.0) return 0.0;
  if (const auto* q = as_quadratic())
    return q->prefactor * q->gamma.value() * dx * dx;

  const auto& k = std::get<ScatteringOverlapKernel>(model_);
  if (k.event_rate.value() == 0.0) return 0.0;
  const double z_per_u = k.sigma.value() * dx;
  const double avg =
      integrate(
          [z_per_u](double u) {
            return maxwell_weight(u) * one_minus_sinc(u * z_per_u);
          },
          0.0, kMomentumCutoff, kOverlapTolerance, "scattering overlap") /
      maxwell_norm();
  // The exact average is 1 - exp(-(sigma dx)^2 / 2); clip quadrature noise.
  return k.event_rate.value() * std::clamp(avg, 0.0, 1.0);
}

Quantity kernel_rate(const LocalizationKernel& k, Quantity separation) {
  return hertz(k.rate_si(separation.in(dim::length, "separation")));
}

Quantity quadratic_limit_coefficient(const ScatteringOverlapKernel& k) {
  // <p^2> = 3 sigma^2 for the radial Maxwell weight.
  const Quantity g = k.event_rate * Quantity(3.0) * k.sigma.pow(2) / Quantity(6.0);
  g.in(dim::localization, "quadratic_limit_coefficient");
  return g;
}

double one_minus_sinc(double z) {
  const double z2 = z * z;
  if (std::abs(z) < 0.1) {
    // Taylor series, truncation error < z^12 / 13!.
    return z2 / 6.0 *
           (1.0 - z2 / 20.0 *
                      (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0 * (1.0 - z2 / 110.0))));
  }
  return 1.0 - std::sin(z) / z;
}

}  // namespace qgdecoh
