#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mllp/specfun.hpp"
#include "oracle_values.hpp"

using namespace mllp;

TEST_CASE("unit-alpha Mittag-Leffler is the exponential on [-5, 5]") {
  for (int i = 0; i <= 100; ++i) {
    const double z = -5.0 + 0.1 * i;
    CHECK(std::fabs(mittag_leffler(1.0, 1.0, z) - std::exp(z)) <= 1e-10);
  }
  CHECK(mittag_leffler(1.0, 1.0, 0.0) == 1.0);
  CHECK(mittag_leffler(1.0, 1.0, 1.0) == doctest::Approx(std::numbers::e).epsilon(1e-12));
}

TEST_CASE("Mittag-Leffler at zero is exactly one") {
  for (double a : {0.3, 0.5, 0.7, 0.9}) CHECK(mittag_leffler(a, 1.0, 0.0) == 1.0);
}

TEST_CASE("Mittag-Leffler reference values") {
  CHECK(mittag_leffler(0.5, 1.0, -2.0) == doctest::Approx(oracle::ml_half_minus2).epsilon(1e-13));
  // e^(z^2) erfc(-z) closed form at alpha = 1/2
  CHECK(mittag_leffler(0.5, 1.0, -0.7) == doctest::Approx(std::exp(0.49) * std::erfc(0.7)).epsilon(1e-13));
  CHECK(mittag_leffler(0.5, 1.0, 1.5) == doctest::Approx(std::exp(2.25) * std::erfc(-1.5)).epsilon(1e-12));
}

TEST_CASE("E_alpha(-x) is completely monotone: decreasing and in (0, 1]") {
  // the plain series covers x up to ~2 at alpha = 0.3; larger x belongs to the expansion
  for (double a : {0.3, 0.5, 0.7, 0.9}) {
    const double x_max = a < 0.5 ? 2.0 : 6.0;
    double prev = 1.0;
    for (int i = 1; 0.05 * i <= x_max; ++i) {
      const double x = 0.05 * i;
      const double v = mittag_leffler(a, 1.0, -x);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("truncation soundness: tighter settings move values by less than the tolerance") {
  const SeriesConfig base;
  SeriesConfig tight;
  tight.max_terms = 2 * base.max_terms;
  tight.tolerance = base.tolerance / 2;
  for (double a : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    for (double b : {0.5, 1.0, 2.5}) {
      for (double z : {-3.0, -1.0, -0.5, 0.5, 2.0}) {
        const SeriesSum r = prabhakar_sum(a, b, 1.0, z, 0.0, base);
        const double v2 = prabhakar_sum(a, b, 1.0, z, 0.0, tight).value;
        CHECK(std::fabs(r.value - v2) <= base.tolerance * std::fabs(r.value) + r.rounding_bound);
        CHECK(r.terms_used <= base.max_terms);
      }
    }
  }
}

TEST_CASE("series failures are reported, not hidden") {
  SeriesConfig few;
  few.max_terms = 5;
  CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, -2.0, few), TermCapExceeded);
  CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, -1e4), TermCapExceeded);
  CHECK_THROWS_AS(mittag_leffler(0.9, 1.0, -80.0), SeriesError);
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(1.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.5, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, INFINITY), DomainError);
}

TEST_CASE("extended precision takes over under cancellation") {
  // e^(-25) needs ~22 digits of cancellation in the alpha = 1 series
  const SeriesSum r = prabhakar_sum(1.0, 1.0, 1.0, -25.0, 0.0, {});
  CHECK(r.extended_precision);
  CHECK(r.value == doctest::Approx(std::exp(-25.0)).epsilon(1e-11));
}

TEST_CASE("SeriesConfig validation") {
  SeriesConfig c;
  CHECK_NOTHROW(c.validate());
  c.tolerance = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.tolerance = 1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.tolerance = 1e-10;
  c.max_terms = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("log_gamma") {
  CHECK(log_gamma(1.0) == 0.0);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  CHECK(log_gamma(7.3) == doctest::Approx(oracle::lgamma_7_3).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("beta function") {
  CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(beta_fn(1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(beta_fn(0.5, 1.5) == doctest::Approx(oracle::beta_half_three_halves).epsilon(1e-13));
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(beta_fn(1.0, -2.0), DomainError);
}

TEST_CASE("reciprocal gamma vanishes at the poles") {
  for (double s : {0.0, -1.0, -2.0, -7.0}) CHECK(log_reciprocal_gamma(s).sign == 0);
  const SignedLog half = log_reciprocal_gamma(-0.5);  // 1/Gamma(-1/2) = -1/(2 sqrt(pi))
  CHECK(half.sign == -1);
  CHECK(std::exp(half.log_abs) == doctest::Approx(0.5 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(sin_pi(3.0) == 0.0);
  CHECK(sin_pi(0.5) == doctest::Approx(1.0));
}
