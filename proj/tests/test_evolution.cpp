#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qgdecoh/errors.hpp"
#include "qgdecoh/evolution.hpp"

using namespace qgdecoh;
using Eigen::MatrixXcd;

namespace {

MatrixXcd two_branch(double c0) {
  MatrixXcd rho(2, 2);
  rho << 0.5, c0, c0, 0.5;
  return rho;
}

MatrixXcd random_state(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

MatrixXcd random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g;
  MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return scale * 0.5 * (a + a.adjoint());
}

std::vector<double> random_positions(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("coherence decay for the rubidium preset") {
  const auto k = LocalizationKernel::quadratic(localization_rate(oracle::gamma_rb87_87amu));
  const auto tr = Trajectory::paper_smoothed(metres(0.54), seconds(1.04));
  const CoherenceResult r = coherence_decay(k, tr, 0.5);
  CHECK(oracle::close(r.exponent, oracle::exponent_87amu, 1e-10));
  CHECK(r.exponent == doctest::Approx(26.3).epsilon(0.01));
  CHECK(r.contrast > 1e-12);
  CHECK(r.contrast < 1e-11);
  CHECK(r.final_coherence == r.initial_coherence * std::exp(-r.exponent));
  CHECK(r.contrast == 2.0 * r.final_coherence);
}

TEST_CASE("coherence decay edge cases") {
  const auto tr = Trajectory::paper_smoothed(metres(0.54), seconds(1.04));
  const auto zero = LocalizationKernel::quadratic(localization_rate(0.0));
  const CoherenceResult r0 = coherence_decay(zero, tr, 0.4);
  CHECK(r0.exponent == 0.0);
  CHECK(r0.contrast == 0.8);
  const auto k = LocalizationKernel::quadratic(localization_rate(50.0));
  CHECK(coherence_decay(k, tr, 0.0).contrast == 0.0);
  CHECK_THROWS_AS(coherence_decay(k, tr, 0.6), InputError);
  CHECK_THROWS_AS(coherence_decay(k, tr, -0.1), InputError);
}

TEST_CASE("exponent factorizes as prefactor * gamma * kappa * d^2 * T") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lg(-3.0, 3.0);
  std::uniform_real_distribution<double> d(0.01, 1.0);
  std::uniform_real_distribution<double> T(0.1, 3.0);
  for (int i = 0; i < 30; ++i) {
    const double gamma = std::pow(10.0, lg(rng));
    const double prefactor = i % 2 ? kPrefactorPaper : kPrefactorMasterEquation;
    const auto k = LocalizationKernel::quadratic(localization_rate(gamma), prefactor);
    const Trajectory tr = i % 3 == 0   ? Trajectory::paper_smoothed(metres(d(rng)), seconds(T(rng)))
                          : i % 3 == 1 ? Trajectory::triangular(metres(d(rng)), seconds(T(rng)))
                                       : Trajectory::constant(metres(d(rng)), seconds(T(rng)));
    const double expected = prefactor * gamma * geometric_factor(tr) * tr.peak_separation_m() *
                            tr.peak_separation_m() * tr.half_time_s();
    CHECK(oracle::close(decay_exponent(k, tr), expected, 1e-9));
  }
}

TEST_CASE("exponent scaling laws are exact on the quadratic path") {
  const auto k = LocalizationKernel::quadratic(localization_rate(oracle::gamma_rb87_preset));
  const auto tr = Trajectory::paper_smoothed(metres(0.54), seconds(1.04));
  const double e = decay_exponent(k, tr);
  CHECK(oracle::close(decay_exponent(k, tr.with_separation_scaled(2.0)) / e, 4.0, 1e-12));
  CHECK(oracle::close(decay_exponent(k.scaled(3.0), tr) / e, 3.0, 1e-12));
}

TEST_CASE("coherence series accumulates to the full exponent") {
  const auto k = LocalizationKernel::quadratic(localization_rate(10.0));
  const auto tr = Trajectory::triangular(metres(0.5), seconds(1.0));
  const auto series = coherence_series(k, tr, 0.5, 11);
  REQUIRE(series.size() == 11);
  CHECK(series.front().t_s == 0.0);
  CHECK(series.front().exponent == 0.0);
  CHECK(series.back().t_s == 2.0);
  CHECK(oracle::close(series.back().exponent, decay_exponent(k, tr), 1e-12));
  for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i].coherence <= series[i - 1].coherence);
  // Triangular first half: exponent(t) = gamma d^2 t^3 / (3 T^2)
  CHECK(oracle::close(series[5].exponent, 10.0 * 0.25 / 3.0, 1e-10));
}

TEST_CASE("moving branch converges to the quadrature exponent") {
  const auto k = LocalizationKernel::quadratic(localization_rate(oracle::gamma_rb87_87amu));
  const auto tr = Trajectory::paper_smoothed(metres(0.54), seconds(1.04));
  const double exact = decay_exponent(k, tr);
  const CoherenceResult fine = moving_branch_evolve(k, tr, 100000);
  CHECK(oracle::close(fine.exponent, exact, 1e-6));

  const double e1 = std::abs(moving_branch_evolve(k, tr, 1000).exponent - exact);
  const double e2 = std::abs(moving_branch_evolve(k, tr, 2000).exponent - exact);
  // d^2 has zero slope at both ends, so the midpoint error falls as h^4.
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.05));

  CHECK_THROWS_AS(moving_branch_evolve(k, tr, 99), InputError);
}

TEST_CASE("two-site grid reproduces pure dephasing") {
  const double gamma = 7.0, d = 0.3, c0 = 0.5;
  for (double prefactor : {kPrefactorPaper, kPrefactorMasterEquation}) {
    const auto k = LocalizationKernel::quadratic(localization_rate(gamma), prefactor);
    const DensityMatrixGrid g0({0.0, d}, two_branch(c0));
    const double dt = 1e-3;
    const int steps = 500;
    const DensityMatrixGrid g1 = grid_evolve(g0, k, std::nullopt, dt, steps);
    const double expected = oracle::two_level_coherence(c0, prefactor * gamma * d * d, dt * steps);
    CHECK(oracle::close(std::abs(g1.rho()(0, 1)), expected, 1e-12));
    CHECK(g1.rho()(0, 0).real() == 0.5);
    CHECK(g1.time_s() == doctest::Approx(0.5));
    const CoherenceResult cd = coherence_decay(k, Trajectory::constant(metres(d), seconds(dt * steps)), c0);
    CHECK(oracle::close(cd.final_coherence, expected, 1e-12));
    const CoherenceResult mb = moving_branch_evolve(k, Trajectory::constant(metres(d), seconds(dt * steps)), 1000, c0);
    CHECK(oracle::close(mb.final_coherence, expected, 1e-12));
  }
}

TEST_CASE("grid identity cases") {
  std::mt19937_64 rng(4);
  const auto rho = random_state(6, rng);
  const auto x = random_positions(6, rng);
  const DensityMatrixGrid g(x, rho);
  const auto off = LocalizationKernel::quadratic(localization_rate(0.0));
  CHECK((grid_evolve(g, off, std::nullopt, 0.01, 100).rho() - rho).cwiseAbs().maxCoeff() == 0.0);

  MatrixXcd diag = MatrixXcd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) diag(i, i) = 1.0 / 6.0;
  const auto k = LocalizationKernel::quadratic(localization_rate(3.0));
  const DensityMatrixGrid gd(x, diag);
  CHECK((grid_evolve(gd, k, std::nullopt, 0.01, 100).rho() - diag).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grid invariants with a random Hamiltonian") {
  std::mt19937_64 rng(8);
  const auto k = LocalizationKernel::quadratic(localization_rate(20.0));
  for (Eigen::Index n : {3, 8, 16}) {
    const DensityMatrixGrid g(random_positions(n, rng), random_state(n, rng));
    const auto h = random_hermitian(n, rng, 5.0);
    const DensityMatrixGrid out = grid_evolve(g, k, h, 1e-3, 1000);
    CHECK(out.trace_defect() <= 1e-12);
    CHECK(out.hermiticity_defect() <= 1e-12);
    CHECK(out.min_eigenvalue() >= -1e-10);
  }
}

TEST_CASE("grid with hopping Hamiltonian converges at second order") {
  // Two sites with hopping: compare against a fine-step reference.
  const auto k = LocalizationKernel::quadratic(localization_rate(4.0));
  MatrixXcd h(2, 2);
  h << 0.0, 3.0, 3.0, 0.0;
  MatrixXcd rho(2, 2);
  rho << 1.0, 0.0, 0.0, 0.0;
  const DensityMatrixGrid g({0.0, 0.5}, rho);
  const double t = 1.0;
  const auto ref = grid_evolve(g, k, h, t / 64000, 64000).rho();
  const double e1 = (grid_evolve(g, k, h, t / 100, 100).rho() - ref).cwiseAbs().maxCoeff();
  const double e2 = (grid_evolve(g, k, h, t / 200, 200).rho() - ref).cwiseAbs().maxCoeff();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("grid preconditions") {
  const auto k = LocalizationKernel::quadratic(localization_rate(100.0));
  const DensityMatrixGrid g({0.0, 1.0}, two_branch(0.5));
  CHECK_THROWS_AS(grid_evolve(g, k, std::nullopt, 0.01, 1), InputError);  // dt * rate = 1
  CHECK_NOTHROW(grid_evolve(g, k, std::nullopt, 0.001, 1));
  MatrixXcd bad_h(2, 2);
  bad_h << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(grid_evolve(g, k, bad_h, 0.001, 1), InputError);
  CHECK_THROWS_AS(grid_evolve(g, k, MatrixXcd::Zero(3, 3), 0.001, 1), InputError);

  MatrixXcd not_unit(2, 2);
  not_unit << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(DensityMatrixGrid({0.0, 1.0}, not_unit), InputError);
  MatrixXcd not_herm(2, 2);
  not_herm << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityMatrixGrid({0.0, 1.0}, not_herm), InputError);
  MatrixXcd negative(2, 2);
  negative << 0.5, 0.9, 0.9, 0.5;
  CHECK_THROWS_AS(DensityMatrixGrid({0.0, 1.0}, negative), InputError);
  CHECK_THROWS_AS(DensityMatrixGrid({0.0}, two_branch(0.5)), InputError);
}

TEST_CASE("scattering kernel on the grid stays positive") {
  std::mt19937_64 rng(13);
  const auto k = LocalizationKernel::scattering(hertz(10.0), per_metre(8.0));
  const DensityMatrixGrid g(random_positions(10, rng), random_state(10, rng));
  const DensityMatrixGrid out = grid_evolve(g, k, std::nullopt, 0.01, 200);
  CHECK(out.min_eigenvalue() >= -1e-10);
  for (Eigen::Index i = 0; i < 10; ++i)
    for (Eigen::Index j = 0; j < 10; ++j) CHECK(std::abs(out.rho()(i, j)) <= std::abs(g.rho()(i, j)));
}
