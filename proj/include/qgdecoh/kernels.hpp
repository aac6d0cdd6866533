#pragma once

// Decoherence-rate models: the Ellis localization constant, the wormhole
// wavenumber spread, and the two localization kernels D(dx).

#include <variant>

#include "qgdecoh/units.hpp"

namespace qgdecoh {

struct EllisParameters {
  // Throws InputError unless system_mass > 0 and density_fraction >= 0.
  explicit EllisParameters(Quantity system_mass, double density_fraction = 1.0,
                           PhysicalConstants constants = {});

  Quantity system_mass;
  // Wormhole density relative to one per Planck volume.
  double density_fraction;
  PhysicalConstants constants;
};

// density_fraction * (c m0)^4 m^2 / (hbar m_Pl)^3, in m^-2 s^-1.
Quantity gamma_qg(const EllisParameters& p);

// c m0^2 / (hbar m_Pl), a wavenumber in m^-1.
Quantity wormhole_sigma(const PhysicalConstants& constants);

// Prefactor multiplying gamma*dx^2 in the coherence decay rate. kPaper
// reproduces the decay law exp(-gamma * integral d^2 dt); kMasterEquation
// is the literal 1/2 in front of the localization term.
inline constexpr double kPrefactorPaper = 1.0;
inline constexpr double kPrefactorMasterEquation = 0.5;

// D(dx) = prefactor * gamma * dx^2.
struct QuadraticKernel {
  Quantity gamma;
  double prefactor;
};

// D(dx) = event_rate * <1 - sinc(p dx)> over the radial Maxwell weight
// p^2 exp(-p^2 / (2 sigma^2)), i.e. constant s-wave amplitude on the shell.
// Saturates at event_rate once dx >> 1/sigma.
struct ScatteringOverlapKernel {
  Quantity event_rate;
  Quantity sigma;
};

class LocalizationKernel {
 public:
  static LocalizationKernel quadratic(Quantity gamma,
                                      double prefactor = kPrefactorPaper);
  static LocalizationKernel scattering(Quantity event_rate, Quantity sigma);

  bool is_quadratic() const { return std::holds_alternative<QuadraticKernel>(model_); }
  const QuadraticKernel* as_quadratic() const { return std::get_if<QuadraticKernel>(&model_); }
  const ScatteringOverlapKernel* as_scattering() const {
    return std::get_if<ScatteringOverlapKernel>(&model_);
  }

  // Returns a copy whose strength (gamma or event_rate) is scaled by s >= 0.
  LocalizationKernel scaled(double s) const;

  // Rate in s^-1 for a separation given in metres. Unchecked fast path used
  // by the integrators; throws InputError on negative separation.
  double rate_si(double separation_m) const;

 private:
  using Model = std::variant<QuadraticKernel, ScatteringOverlapKernel>;
  explicit LocalizationKernel(Model m) : model_(std::move(m)) {}
  Model model_;
};

// Coherence decay rate D(separation) in s^-1.
Quantity kernel_rate(const LocalizationKernel& k, Quantity separation);

// gamma_eff with kernel_rate ~ gamma_eff * dx^2 as dx -> 0:
// event_rate * <p^2> / 6 = event_rate * sigma^2 / 2.
Quantity quadratic_limit_coefficient(const ScatteringOverlapKernel& k);

// 1 - sin(z)/z without cancellation at small z.
double one_minus_sinc(double z);

}  // namespace qgdecoh
