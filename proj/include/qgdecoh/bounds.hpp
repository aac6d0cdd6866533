#pragma once

// Inversion of a measured interference contrast into an upper bound on the
// localization rate, and comparison of that bound with the Ellis model.

#include <limits>
#include <optional>

#include "qgdecoh/evolution.hpp"
#include "qgdecoh/kernels.hpp"
#include "qgdecoh/trajectory.hpp"

namespace qgdecoh {

struct MeasuredContrast {
  double value;                      // (0, 1]
  double initial_coherence = 0.5;    // (0, 1/2]
  // Fraction of the observed contrast loss blamed on the kernel. 1 gives
  // the most conservative (weakest) bound.
  double attribution_fraction = 1.0;  // (0, 1]

  // Throws InputError on out-of-range fields or value > 2 * initial_coherence.
  void validate() const;
};

enum class ExclusionStatus {
  Pending,         // exclusion_ratio not computed yet
  Finite,
  NoObservedLoss,  // gamma_max == 0: ratio infinite, density_fraction_max 0
};

struct BoundResult {
  Quantity gamma_max{0.0, dim::localization};
  double exponent_observed = 0.0;
  double exclusion_ratio = 0.0;
  double density_fraction_max = 0.0;
  ExclusionStatus status = ExclusionStatus::Pending;
  // Set when the bound was inverted through a scattering-overlap kernel;
  // gamma_max is then its small-separation coefficient.
  std::optional<Quantity> event_rate_max;
};

// -ln(1 - a (1 - C / (2 c0))).
double observed_exponent(const MeasuredContrast& meas);

// Closed-form inversion for a quadratic kernel:
//   gamma_max = exponent_observed / (prefactor * kappa * d_max^2 * T).
BoundResult invert_bound(const MeasuredContrast& meas, const Trajectory& traj,
                         double prefactor = kPrefactorPaper);

// Inversion through an arbitrary kernel shape. Quadratic kernels use the
// closed form above; scattering kernels bisect on event_rate over
// [0, 1e12] s^-1 to 1e-10 relative (the exponent is monotone in the rate).
BoundResult invert_bound(const MeasuredContrast& meas, const Trajectory& traj,
                         const LocalizationKernel& shape);

// exclusion_ratio = gamma_qg(model at density 1) / gamma_max;
// density_fraction_max = 1 / exclusion_ratio.
BoundResult exclusion_ratio(BoundResult partial, const EllisParameters& model);

// Contrast for the same trajectory with gamma_qg recomputed at species_mass.
CoherenceResult predict_species(const EllisParameters& model, const Trajectory& traj,
                                Quantity species_mass, double initial_coherence = 0.5,
                                double prefactor = kPrefactorPaper);

const char* to_string(ExclusionStatus s);

}  // namespace qgdecoh
