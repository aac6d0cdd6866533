#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "qgdecoh/bounds.hpp"
#include "qgdecoh/errors.hpp"

using namespace qgdecoh;

namespace {
const Trajectory& preset_trajectory() {
  static const Trajectory tr = Trajectory::paper_smoothed(metres(0.54), seconds(1.04));
  return tr;
}
EllisParameters preset_model() {
  const PhysicalConstants k;
  return EllisParameters(Quantity(86.909) * k.amu);
}
}  // namespace

TEST_CASE("invert the 28% contrast") {
  const BoundResult b = invert_bound({0.28, 0.5, 1.0}, preset_trajectory());
  CHECK(oracle::close(b.exponent_observed, std::log(1.0 / 0.28), 1e-15));
  CHECK(b.exponent_observed == doctest::Approx(1.273).epsilon(1e-3));
  CHECK(oracle::close(b.gamma_max.value(), oracle::gamma_max_preset, 1e-10));
  CHECK(b.gamma_max.dimension() == dim::localization);
  CHECK(b.status == ExclusionStatus::Pending);

  const BoundResult done = exclusion_ratio(b, preset_model());
  CHECK(oracle::close(done.exclusion_ratio, oracle::exclusion_ratio_preset, 1e-10));
  CHECK(oracle::close(done.density_fraction_max, oracle::density_fraction_max_preset, 1e-10));
  CHECK(done.exclusion_ratio > 20.0);
  CHECK(done.density_fraction_max < 0.05);
  CHECK(oracle::close(done.density_fraction_max * gamma_qg(preset_model()).value(),
                      done.gamma_max.value(), 1e-15));
  CHECK(done.status == ExclusionStatus::Finite);

  const PhysicalConstants k;
  const BoundResult halved = exclusion_ratio(b, EllisParameters(Quantity(86.909 / 2) * k.amu));
  CHECK(oracle::close(halved.exclusion_ratio, done.exclusion_ratio / 4.0, 1e-14));
}

TEST_CASE("perfect contrast means no observed loss") {
  const BoundResult b = invert_bound({1.0, 0.5, 1.0}, preset_trajectory());
  CHECK(b.exponent_observed == 0.0);
  CHECK(b.gamma_max.value() == 0.0);
  const BoundResult done = exclusion_ratio(b, preset_model());
  CHECK(std::isinf(done.exclusion_ratio));
  CHECK(done.density_fraction_max == 0.0);
  CHECK(done.status == ExclusionStatus::NoObservedLoss);
}

TEST_CASE("observed exponent is accurate for deep and shallow loss") {
  CHECK(oracle::close(observed_exponent({1e-100, 0.5, 1.0}), 100.0 * std::log(10.0), 1e-14));
  CHECK(oracle::close(observed_exponent({1e-300, 0.5, 1.0}), 300.0 * std::log(10.0), 1e-14));
  CHECK(oracle::close(observed_exponent({1.0 - 1e-12, 0.5, 1.0}), 1e-12, 1e-4));
  // Partial attribution saturates at -ln(1 - a).
  CHECK(oracle::close(observed_exponent({1e-300, 0.5, 0.5}), std::log(2.0), 1e-14));
  CHECK(oracle::close(observed_exponent({0.28, 0.5, 0.25}), -std::log(1.0 - 0.25 * 0.72), 1e-14));
}

TEST_CASE("measurement validation") {
  const auto& tr = preset_trajectory();
  CHECK_THROWS_AS(invert_bound({0.0, 0.5, 1.0}, tr), InputError);
  CHECK_THROWS_AS(invert_bound({-0.1, 0.5, 1.0}, tr), InputError);
  CHECK_THROWS_AS(invert_bound({0.5, 0.2, 1.0}, tr), InputError);  // above 2 c0
  CHECK_THROWS_AS(invert_bound({0.2, 0.5, 0.0}, tr), InputError);
  CHECK_THROWS_AS(invert_bound({0.2, 0.5, 1.5}, tr), InputError);
  CHECK_THROWS_AS(invert_bound({0.2, 0.5, 1.0}, tr, 0.3), InputError);
  CHECK_THROWS_AS(invert_bound({0.2, 0.5, 1.0}, Trajectory::constant(metres(0.1), seconds(0.0))),
                  InputError);
}

TEST_CASE("prefactor halves the measured exponent budget") {
  const BoundResult paper = invert_bound({0.28, 0.5, 1.0}, preset_trajectory(), kPrefactorPaper);
  const BoundResult eq1 = invert_bound({0.28, 0.5, 1.0}, preset_trajectory(), kPrefactorMasterEquation);
  CHECK(oracle::close(eq1.gamma_max.value(), 2.0 * paper.gamma_max.value(), 1e-15));
}

TEST_CASE("round trip invert_bound after coherence_decay") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lg(-3.0, 3.0);
  // Keeps the exponent above ~1e-5: a double contrast cannot resolve a
  // smaller exponent to 1e-10 relative.
  std::uniform_real_distribution<double> d(0.2, 0.6);
  std::uniform_real_distribution<double> T(0.5, 1.5);
  std::uniform_real_distribution<double> c0(0.1, 0.5);
  for (int i = 0; i < 100; ++i) {
    const double gamma = std::pow(10.0, lg(rng));
    const double prefactor = i % 2 ? kPrefactorPaper : kPrefactorMasterEquation;
    const Trajectory tr = i % 3 == 0   ? Trajectory::paper_smoothed(metres(d(rng)), seconds(T(rng)))
                          : i % 3 == 1 ? Trajectory::triangular(metres(d(rng)), seconds(T(rng)))
                                       : Trajectory::constant(metres(d(rng)), seconds(T(rng)));
    const double coherence = c0(rng);
    const CoherenceResult r =
        coherence_decay(LocalizationKernel::quadratic(localization_rate(gamma), prefactor), tr, coherence);
    if (r.contrast < std::numeric_limits<double>::min()) continue;
    const BoundResult b = invert_bound({r.contrast, coherence, 1.0}, tr, prefactor);
    INFO("i = ", i, " exponent = ", r.exponent);
    CHECK(oracle::close(b.gamma_max.value(), gamma, 1e-10));
  }
}

TEST_CASE("gamma_max monotonicity") {
  const auto& tr = preset_trajectory();
  double prev = std::numeric_limits<double>::infinity();
  for (double c : {0.05, 0.1, 0.28, 0.5, 0.9, 1.0}) {
    const double g = invert_bound({c, 0.5, 1.0}, tr).gamma_max.value();
    CHECK(g <= prev);
    prev = g;
  }
  prev = 0.0;
  for (double a : {1e-12, 1e-6, 0.1, 0.5, 1.0}) {
    const double g = invert_bound({0.28, 0.5, a}, tr).gamma_max.value();
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("exclusion holds down to tiny attribution") {
  for (double a : {1.0, 0.5, 1e-3, 1e-6, 1e-9}) {
    const BoundResult b = exclusion_ratio(invert_bound({0.28, 0.5, a}, preset_trajectory()), preset_model());
    CHECK(b.exclusion_ratio >= 1.0);
  }
}

TEST_CASE("scattering-kernel inversion by bisection") {
  const auto& tr = preset_trajectory();
  const auto shape = LocalizationKernel::scattering(hertz(1.0), per_metre(oracle::sigma));
  const BoundResult b = invert_bound({0.28, 0.5, 1.0}, tr, shape);
  REQUIRE(b.event_rate_max);
  // Forward model at the inverted rate reproduces the observed exponent.
  const auto fitted = LocalizationKernel::scattering(*b.event_rate_max, per_metre(oracle::sigma));
  CHECK(oracle::close(decay_exponent(fitted, tr), b.exponent_observed, 1e-9));
  // Deep in the quadratic regime gamma_max agrees with the closed form.
  CHECK(oracle::close(b.gamma_max.value(), oracle::gamma_max_preset, 1e-7));

  const BoundResult none = invert_bound({1.0, 0.5, 1.0}, tr, shape);
  CHECK(none.event_rate_max->value() == 0.0);
  CHECK(none.gamma_max.value() == 0.0);

  // Out of reach: saturated kernel cannot exceed 1e12 * duration.
  const auto wide = LocalizationKernel::scattering(hertz(1.0), per_metre(1e-12));
  CHECK_THROWS_AS(invert_bound({1e-200, 0.5, 1.0}, Trajectory::constant(metres(1e-3), seconds(1e-9)), wide),
                  NumericError);
}

TEST_CASE("species predictions") {
  const auto& tr = preset_trajectory();
  const PhysicalConstants k;
  const EllisParameters rb(Quantity(87.0) * k.amu);
  const CoherenceResult same = predict_species(rb, tr, rb.system_mass);
  const CoherenceResult direct = coherence_decay(LocalizationKernel::quadratic(gamma_qg(rb)), tr);
  CHECK(same.exponent == direct.exponent);
  CHECK(same.contrast == direct.contrast);

  const CoherenceResult h = predict_species(rb, tr, k.amu);
  CHECK(oracle::close(h.exponent, oracle::exponent_hydrogen, 1e-10));
  CHECK(oracle::close(h.contrast, oracle::contrast_hydrogen, 1e-12));
  CHECK(h.exponent == doctest::Approx(same.exponent / (87.0 * 87.0)).epsilon(1e-12));

  const CoherenceResult swapped =
      predict_species(rb, tr.with_separation_scaled(0.1), Quantity(10.0) * rb.system_mass);
  CHECK(oracle::close(swapped.exponent, same.exponent, 1e-12));
}
