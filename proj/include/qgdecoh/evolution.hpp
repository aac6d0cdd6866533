#pragma once

// Coherence decay under the position-localization master equation
//   d rho/dt = i [rho, H0] - sum_{x,x'} D(|x - x'|) |x><x| rho |x'><x'|
// with D the localization kernel. Two engines: a quadrature evaluator of the
// decay exponent for a two-branch superposition, and a brute-force
// position-grid density-matrix integrator used to cross-check it.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qgdecoh/kernels.hpp"
#include "qgdecoh/trajectory.hpp"

namespace qgdecoh {

struct CoherenceResult {
  double initial_coherence;  // <x|rho0|x'>, in [0, 1/2]
  double exponent;           // integral of D(d(t)) dt
  double final_coherence;    // initial_coherence * exp(-exponent)
  double contrast;           // 2 * final_coherence
};

// Fills the derived fields; throws InputError unless 0 <= c0 <= 1/2.
CoherenceResult make_coherence_result(double initial_coherence, double exponent);

// integral of kernel_rate(d(t)) over [a, b] (seconds), split at the
// trajectory's kinks, adaptive quadrature to rel. tol. 1e-10.
double decay_exponent(const LocalizationKernel& kernel, const Trajectory& traj,
                      double a_s, double b_s);
double decay_exponent(const LocalizationKernel& kernel, const Trajectory& traj);

CoherenceResult coherence_decay(const LocalizationKernel& kernel,
                                const Trajectory& traj,
                                double initial_coherence = 0.5);

// Accumulated exponent at `points` equally spaced times spanning the
// trajectory (first entry at its start, value 0).
struct CoherenceSample {
  double t_s;
  double coherence;
  double exponent;
};
std::vector<CoherenceSample> coherence_series(const LocalizationKernel& kernel,
                                              const Trajectory& traj,
                                              double initial_coherence,
                                              int points);

// Two-branch 2x2 density matrix stepped with the midpoint rule: the
// off-diagonal element decays by exp(-D(d(t_mid)) h) per step. A time-
// discretized check on coherence_decay. Requires time_steps >= 100.
CoherenceResult moving_branch_evolve(const LocalizationKernel& kernel,
                                     const Trajectory& traj, int time_steps,
                                     double initial_coherence = 0.5);

// 1-D position-basis density matrix.
class DensityMatrixGrid {
 public:
  // Throws InputError unless rho is square with positions.size() rows,
  // Hermitian to 1e-12, unit trace to 1e-12 and has no eigenvalue below
  // -1e-10.
  DensityMatrixGrid(std::vector<double> positions_m, Eigen::MatrixXcd rho,
                    double time_s = 0.0);

  const std::vector<double>& positions_m() const noexcept { return positions_; }
  const Eigen::MatrixXcd& rho() const noexcept { return rho_; }
  double time_s() const noexcept { return time_; }
  Eigen::Index size() const noexcept { return rho_.rows(); }

  double trace_defect() const;        // |tr rho - 1|
  double hermiticity_defect() const;  // max |rho - rho^dagger|
  double min_eigenvalue() const;

 private:
  friend DensityMatrixGrid grid_evolve(const DensityMatrixGrid&,
                                       const LocalizationKernel&,
                                       const std::optional<Eigen::MatrixXcd>&,
                                       double, int);
  DensityMatrixGrid() = default;

  std::vector<double> positions_;
  Eigen::MatrixXcd rho_;
  double time_ = 0.0;
};

// Advances `steps` steps of size dt. The localization term multiplies each
// rho_ij by exp(-D(|x_i - x_j|) dt), which is exact. A Hamiltonian (angular
// frequencies, s^-1) enters through a Strang split
//   half dephasing, exp(-i H dt) rho exp(i H dt), half dephasing.
// Preconditions: dt * max_ij D <= 0.1, H Hermitian. Throws NumericError if
// Hermiticity drifts beyond 1e-9 or an eigenvalue drops below -1e-10.
DensityMatrixGrid grid_evolve(const DensityMatrixGrid& grid,
                              const LocalizationKernel& kernel,
                              const std::optional<Eigen::MatrixXcd>& hamiltonian,
                              double dt_s, int steps);

}  // namespace qgdecoh
