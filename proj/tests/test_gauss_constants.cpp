#include <doctest.h>

#include <cmath>
#include <vector>

#include "gammaref/errors.hpp"
#include "gammaref/gauss_constants.hpp"
#include "gammaref/stats.hpp"

using namespace gammaref;

namespace {

// Independent 1-d quadrature oracle for alpha = 2, where B_2(t) = t Z and
// sup_{[0,S]}(sqrt(2) Z t - c t^2) = Z^2/(2c) for 0 < Z <= sqrt(2) c S,
// sqrt(2) Z S - c S^2 beyond, and 0 for Z <= 0.
double alpha2_quadrature_one_sided(double coeff, double s) {
  const double lo = 0.0, hi = std::sqrt(2.0) * coeff * s + 12.0;
  const int n = 4000000;
  const double dz = (hi - lo) / n;
  double sum = 0.5;  // P(Z <= 0) contributes exp(0)
  for (int i = 0; i < n; ++i) {
    const double z = lo + (i + 0.5) * dz;
    const double t_star = z / (std::sqrt(2.0) * coeff);
    const double sup = t_star <= s ? z * z / (2.0 * coeff)
                                   : std::sqrt(2.0) * z * s - coeff * s * s;
    sum += std::exp(sup - 0.5 * z * z) / std::sqrt(2.0 * M_PI) * dz;
  }
  return sum;
}

double alpha2_quadrature_two_sided(double coeff, double s) {
  // symmetric in Z: sup over [-S, S] equals the one-sided sup at |Z|
  return 2.0 * alpha2_quadrature_one_sided(coeff, s) - 1.0;
}

// Exact finite-S Pickands functional at alpha = 1 via the closed-form law of
// the drifted Brownian supremum M = sup_{[0,S]}(sqrt(2) B(t) - t):
//   P(M > x) = Psi((x+S)/sqrt(2S)) + exp(-x) Phi((S-x)/sqrt(2S)).
double alpha1_exact_functional(double s) {
  const double dx = 1e-4;
  double e = 1.0;
  for (double x = 0.5 * dx; x < s + 60.0; x += dx) {
    const double p = normal_tail((x + s) / std::sqrt(2.0 * s)) +
                     std::exp(-x) * normal_cdf((s - x) / std::sqrt(2.0 * s));
    e += std::exp(x) * p * dx;
  }
  return e / s;
}

}  // namespace

TEST_SUITE("gauss_constants") {
  TEST_CASE("alpha=2 estimates match the quadrature oracles") {
    const auto pk = pickands_estimate(2.0, 20.0, 0.05, 20000, 7, 4);
    CHECK(std::abs(pk.value - alpha2_quadrature_one_sided(1.0, 20.0) / 20.0) <
          3.0 * pk.std_error + 1e-3);

    const auto pb = piterbarg_estimate(2.0, 1.0, 10.0, 0.05, 20000, 7, 4);
    CHECK(std::abs(pb.value - alpha2_quadrature_one_sided(2.0, 10.0)) <
          3.0 * pb.std_error + 1e-3);

    const auto tp = tilde_piterbarg_estimate(2.0, 1.0, 5.0, 0.05, 20000, 7, 4);
    CHECK(std::abs(tp.value - alpha2_quadrature_two_sided(2.0, 5.0)) <
          3.0 * tp.std_error + 1e-3);
  }

  TEST_CASE("alpha=2 limits reached at large S") {
    // S large enough that the finite-S term 1/S sits inside the band
    const auto pk = pickands_estimate(2.0, 40.0, 0.05, 20000, 3, 4);
    CHECK(pk.value == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(0.10));
    const auto pb = piterbarg_estimate(2.0, 0.5, 20.0, 0.05, 20000, 3, 4);
    CHECK(pb.value ==
          doctest::Approx(0.5 * (1.0 + std::sqrt(1.0 + 1.0 / 0.5))).epsilon(0.05));
    const auto tp = tilde_piterbarg_estimate(2.0, 0.5, 20.0, 0.05, 20000, 3, 4);
    CHECK(tp.value == doctest::Approx(std::sqrt(1.5 / 0.5)).epsilon(0.05));
  }

  TEST_CASE("Brownian closed forms") {
    CHECK(brownian_pickands() == 1.0);
    CHECK(brownian_piterbarg(1.0) == doctest::Approx(2.0));
    CHECK(brownian_tilde_piterbarg(1.0) == doctest::Approx(4.0 - 4.0 / 3.0));
    CHECK_THROWS_AS(brownian_piterbarg(0.0), ParamOutOfRange);
    CHECK_THROWS_AS(brownian_tilde_piterbarg(-1.0), ParamOutOfRange);
  }

  TEST_CASE("determinism per seed and across worker counts") {
    const auto serial = pickands_estimate(1.2, 2.0, 0.05, 2000, 17, 1);
    const auto threaded = pickands_estimate(1.2, 2.0, 0.05, 2000, 17, 4);
    CHECK(serial.value == threaded.value);
    CHECK(serial.std_error == threaded.std_error);
    const auto again = pickands_estimate(1.2, 2.0, 0.05, 2000, 17, 4);
    CHECK(again.value == serial.value);
    CHECK(pickands_estimate(1.2, 2.0, 0.05, 2000, 18, 1).value != serial.value);
  }

  TEST_CASE("structural bounds and monotonicity") {
    // drift dominance: huge b kills the supremum
    const auto dominated = piterbarg_estimate(1.5, 50.0, 2.0, 0.05, 10000, 5, 4);
    CHECK(dominated.value >= 1.0);
    CHECK(dominated.value <= 1.1);

    // sup over a larger interval can only grow (up to noise)
    const auto small_s = piterbarg_estimate(1.5, 1.0, 2.0, 0.05, 10000, 5, 4);
    const auto large_s = piterbarg_estimate(1.5, 1.0, 4.0, 0.05, 10000, 5, 4);
    CHECK(large_s.value >= small_s.value - 2.0 * (small_s.std_error + large_s.std_error));

    // two-sided index set contains the one-sided one
    const auto two_sided = tilde_piterbarg_estimate(1.5, 1.0, 2.0, 0.05, 10000, 5, 4);
    CHECK(two_sided.value >= small_s.value - 2.0 * (small_s.std_error + two_sided.std_error));
    CHECK(two_sided.b.has_value());
    CHECK(kind_name(two_sided.kind) == "tilde_piterbarg");
  }

  TEST_CASE("alpha=1 crude estimate against its exact finite-S value") {
    // Grid suprema bias the crude estimate down; the exact functional at
    // finite S sits above the S -> infinity limit 1. Both biases are
    // documented properties of the estimator, not defects of the law.
    const double exact = alpha1_exact_functional(5.0);
    CHECK(exact == doctest::Approx(1.3926).epsilon(1e-3));
    const auto est = pickands_estimate(1.0, 5.0, 0.01, 50000, 13, 4);
    CHECK(est.value > 0.75 * exact);
    CHECK(est.value < exact + 3.0 * est.std_error);
    CHECK(est.value == doctest::Approx(1.0).epsilon(0.45));
  }

  TEST_CASE("parameter guards") {
    CHECK_THROWS_AS(pickands_estimate(2.5, 5.0, 0.05, 100, 1), ParamOutOfRange);
    CHECK_THROWS_AS(pickands_estimate(1.0, 0.5, 0.05, 100, 1), ParamOutOfRange);
    CHECK_THROWS_AS(pickands_estimate(1.0, 5.0, 0.2, 100, 1), ParamOutOfRange);
    CHECK_THROWS_AS(pickands_estimate(1.0, 5.0, 0.05, 0, 1), ParamOutOfRange);
    CHECK_THROWS_AS(piterbarg_estimate(1.0, 0.0, 5.0, 0.05, 100, 1), ParamOutOfRange);
    CHECK_THROWS_AS(tilde_piterbarg_estimate(1.0, -0.5, 5.0, 0.05, 100, 1),
                    ParamOutOfRange);
    // two-sided dense factorization guard
    CHECK_THROWS_AS(tilde_piterbarg_estimate(1.5, 1.0, 60.0, 0.05, 100, 1), GridTooLarge);
  }
}
