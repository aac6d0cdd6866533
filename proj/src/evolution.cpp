#include "qgdecoh/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "qgdecoh/errors.hpp"
#include "qgdecoh/quadrature.hpp"

namespace qgdecoh {

namespace {

constexpr double kExponentTolerance = 1e-10;
constexpr double kStabilityLimit = 0.1;
constexpr double kMaxHermiticityDrift = 1e-9;
constexpr double kPositivityFloor = -1e-10;
constexpr double kStateTolerance = 1e-12;

double max_abs_antihermitian(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double lowest_eigenvalue(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

CoherenceResult make_coherence_result(double c0, double exponent) {
  if (!(c0 >= 0.0 && c0 <= 0.5))
    throw InputError("initial coherence must lie in [0, 1/2]");
  if (!std::isfinite(exponent) || exponent < 0.0)
    throw NumericError("decay exponent must be finite and >= 0");
  const double final_coherence = c0 * std::exp(-exponent);
  return {c0, exponent, final_coherence, 2.0 * final_coherence};
}

double decay_exponent(const LocalizationKernel& kernel, const Trajectory& traj,
                      double a, double b) {
  if (!(a <= b)) throw InputError("decay_exponent needs a <= b");
  auto rate = [&](double t) { return kernel.rate_si(traj.separation_si(t)); };
  double total = 0.0;
  double lo = a;
  for (double kink : traj.breakpoints_s()) {
    if (kink <= lo) continue;
    if (kink >= b) break;
    total += integrate(rate, lo, kink, kExponentTolerance, "decay exponent");
    lo = kink;
  }
  total += integrate(rate, lo, b, kExponentTolerance, "decay exponent");
  return total;
}

double decay_exponent(const LocalizationKernel& kernel, const Trajectory& traj) {
  return decay_exponent(kernel, traj, traj.start_s(),
                        traj.start_s() + traj.duration_s());
}

CoherenceResult coherence_decay(const LocalizationKernel& kernel,
                                const Trajectory& traj, double c0) {
  make_coherence_result(c0, 0.0);
  return make_coherence_result(c0, decay_exponent(kernel, traj));
}

std::vector<CoherenceSample> coherence_series(const LocalizationKernel& kernel,
                                              const Trajectory& traj, double c0,
                                              int points) {
  if (points < 2) throw InputError("coherence series needs at least 2 points");
  make_coherence_result(c0, 0.0);
  std::vector<CoherenceSample> out;
  out.reserve(static_cast<std::size_t>(points));
  const double start = traj.start_s();
  const double span = traj.duration_s();
  double exponent = 0.0;
  double prev = start;
  for (int k = 0; k < points; ++k) {
    const double t = k == points - 1 ? start + span : start + span * k / (points - 1);
    exponent += decay_exponent(kernel, traj, prev, t);
    prev = t;
    out.push_back({t, c0 * std::exp(-exponent), exponent});
  }
  return out;
}

CoherenceResult moving_branch_evolve(const LocalizationKernel& kernel,
                                     const Trajectory& traj, int time_steps,
                                     double c0) {
  if (time_steps < 100) throw InputError("moving_branch_evolve needs >= 100 steps");
  make_coherence_result(c0, 0.0);
  Eigen::Matrix2cd rho;
  rho << 0.5, c0, c0, 0.5;
  const double h = traj.duration_s() / time_steps;
  double exponent = 0.0;
  for (int k = 0; k < time_steps; ++k) {
    const double t_mid = traj.start_s() + (k + 0.5) * h;
    const double step_exponent = kernel.rate_si(traj.separation_si(t_mid)) * h;
    const double factor = std::exp(-step_exponent);
    rho(0, 1) *= factor;
    rho(1, 0) *= factor;
    exponent += step_exponent;
  }
  CoherenceResult r = make_coherence_result(c0, exponent);
  r.final_coherence = std::abs(rho(0, 1));
  r.contrast = 2.0 * r.final_coherence;
  return r;
}

DensityMatrixGrid::DensityMatrixGrid(std::vector<double> positions,
                                     Eigen::MatrixXcd rho, double time)
    : positions_(std::move(positions)), rho_(std::move(rho)), time_(time) {
  const auto n = static_cast<Eigen::Index>(positions_.size());
  if (n == 0) throw InputError("grid needs at least one position");
  if (rho_.rows() != n || rho_.cols() != n)
    throw InputError("rho must be N x N for N grid positions");
  for (double x : positions_)
    if (!std::isfinite(x)) throw InputError("grid positions must be finite");
  if (!rho_.allFinite()) throw InputError("rho entries must be finite");
  if (!std::isfinite(time_)) throw InputError("grid time must be finite");
  if (hermiticity_defect() > kStateTolerance) throw InputError("rho is not Hermitian");
  if (trace_defect() > kStateTolerance) throw InputError("rho must have unit trace");
  if (min_eigenvalue() < kPositivityFloor) throw InputError("rho is not positive semidefinite");
}

double DensityMatrixGrid::trace_defect() const {
  return std::abs(rho_.trace() - std::complex<double>(1.0, 0.0));
}

double DensityMatrixGrid::hermiticity_defect() const {
  return max_abs_antihermitian(rho_);
}

double DensityMatrixGrid::min_eigenvalue() const { return lowest_eigenvalue(rho_); }

DensityMatrixGrid grid_evolve(const DensityMatrixGrid& grid,
                              const LocalizationKernel& kernel,
                              const std::optional<Eigen::MatrixXcd>& hamiltonian,
                              double dt, int steps) {
  const Eigen::Index n = grid.size();
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw InputError("dt must be finite and >= 0");
  if (steps < 0) throw InputError("steps must be >= 0");

  Eigen::MatrixXd rates(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      rates(i, j) = i == j ? 0.0
                           : kernel.rate_si(std::abs(grid.positions_m()[i] -
                                                     grid.positions_m()[j]));
  if (dt * rates.maxCoeff() > kStabilityLimit)
    throw InputError("dt * max kernel rate exceeds " + format_round_trip(kStabilityLimit));

  Eigen::MatrixXcd unitary;
  if (hamiltonian) {
    const auto& h = *hamiltonian;
    if (h.rows() != n || h.cols() != n) throw InputError("hamiltonian must be N x N");
    if (!h.allFinite()) throw InputError("hamiltonian entries must be finite");
    if (max_abs_antihermitian(h) > kStateTolerance * std::max(1.0, h.cwiseAbs().maxCoeff()))
      throw InputError("hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (h + h.adjoint()));
    const Eigen::VectorXcd phases =
        (std::complex<double>(0.0, -dt) * solver.eigenvalues().cast<std::complex<double>>())
            .array()
            .exp();
    unitary = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  }

  const Eigen::MatrixXd full = (-dt * rates).array().exp();
  const Eigen::MatrixXd half = (-0.5 * dt * rates).array().exp();

  DensityMatrixGrid out;
  out.positions_ = grid.positions_m();
  out.rho_ = grid.rho();
  out.time_ = grid.time_s();
  for (int s = 0; s < steps; ++s) {
    if (hamiltonian) {
      out.rho_ = out.rho_.cwiseProduct(half.cast<std::complex<double>>());
      out.rho_ = unitary * out.rho_ * unitary.adjoint();
      out.rho_ = out.rho_.cwiseProduct(half.cast<std::complex<double>>());
      if (out.hermiticity_defect() > kMaxHermiticityDrift)
        throw NumericError("Hermiticity drift beyond 1e-9 in grid evolution");
    } else {
      out.rho_ = out.rho_.cwiseProduct(full.cast<std::complex<double>>());
    }
  }
  out.time_ += dt * steps;

  if (out.min_eigenvalue() < kPositivityFloor)
    throw NumericError("density matrix lost positivity in grid evolution");
  return out;
}

}  // namespace qgdecoh
