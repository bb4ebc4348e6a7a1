#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "mllp/analytics.hpp"
#include "oracle_values.hpp"

using namespace mllp;

namespace {

const double kAlphas[] = {0.3, 0.5, 0.7, 0.9};
const double kLambdas[] = {0.5, 1.0, 2.0};
const double kTimes[] = {0.5, 1.0, 2.0};

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

double gamma_pdf(double x, double t, double lambda) {
  return std::exp(t * std::log(lambda) + (t - 1.0) * std::log(x) - lambda * x - std::lgamma(t));
}

}  // namespace

TEST_CASE("density and CDF reference values") {
  CHECK(rel(mllp_density(1.0, 1.0, {0.5, 1.0, 1.0}).value, oracle::density_half_1_1_x1) < 1e-11);
  CHECK(rel(mllp_density(30.0, 1.0, {0.5, 1.0, 1.0}).value, oracle::density_half_1_1_x30) < 1e-11);
  CHECK(rel(mllp_density(10.0, 1.0, {0.3, 2.0, 1.0}).value, oracle::density_03_2_1_x10) < 1e-11);
  CHECK(rel(mllp_density(200.0, 0.5, {0.7, 1.0, 1.0}).value, oracle::density_07_1_05_x200) < 1e-11);
  CHECK(rel(mllp_cdf(1.0, 1.0, {0.5, 1.0, 1.0}), oracle::cdf_half_1_1_x1) < 1e-11);
  CHECK(rel(mllp_cdf(3.0, 2.0, {0.3, 2.0, 1.0}), oracle::cdf_03_2_2_x3) < 1e-11);
  CHECK(rel(mllp_cdf(60.0, 1.0, {0.9, 0.5, 1.0}), oracle::cdf_09_05_1_x60) < 1e-11);
}

TEST_CASE("the density reports which route it used") {
  const ProcessParams p{0.5, 1.0, 1.0};
  const DensityEval near = mllp_density(0.5, 1.0, p);
  CHECK(near.method == EvalMethod::Series);
  CHECK(near.terms_used > 0);
  CHECK(near.truncation_bound <= 1e-12 * near.value);
  const DensityEval far = mllp_density(1e6, 1.0, p);
  CHECK(far.method == EvalMethod::Expansion);
  CHECK(far.value > 0.0);
  CHECK(std::string(to_string(EvalMethod::Expansion)) == "expansion");
}

TEST_CASE("alpha = 1 collapses to the gamma density") {
  for (double lambda : {0.5, 1.0}) {
    for (double t : {1.0, 2.0, 3.0}) {
      for (double x : {0.01, 0.3, 1.0, 4.0, 11.0, 20.0}) {
        const double f = mllp_density(x, t, {1.0, lambda, 1.0}).value;
        CHECK(std::fabs(f - gamma_pdf(x, t, lambda)) <= 1e-8);
      }
    }
  }
  SUBCASE("lambda = 2 is resolvable up to x = 14") {
    for (double x = 0.5; x <= 14.0; x += 0.5) {
      CHECK(std::fabs(mllp_density(x, 2.0, {1.0, 2.0, 1.0}).value - gamma_pdf(x, 2.0, 2.0)) <= 1e-8);
    }
  }
  CHECK(rel(mllp_cdf(20.0, 1.0, {1.0, 1.0, 1.0}), -std::expm1(-20.0)) < 1e-12);
}

TEST_CASE("CDF: series route against quadrature of the density") {
  for (double a : kAlphas) {
    for (double lambda : kLambdas) {
      const ProcessParams p{a, lambda, 1.0};
      for (double x : {0.01, 0.5, 2.0, 10.0, 100.0}) {
        CHECK_MESSAGE(std::fabs(mllp_cdf(x, 1.0, p) - mllp_cdf_quadrature(x, 1.0, p)) <= 1e-8,
                      "alpha=" << a << " lambda=" << lambda << " x=" << x);
      }
    }
  }
}

TEST_CASE("CDF at t = 1 is 1 - E_alpha(-lambda x^alpha)") {
  for (double a : kAlphas) {
    for (double x : {0.1, 0.5, 1.0, 1.5}) {
      const double expected = 1.0 - mittag_leffler(a, 1.0, -std::pow(x, a));
      CHECK(std::fabs(mllp_cdf(x, 1.0, {a, 1.0, 1.0}) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("CDF is strictly increasing and tends to 0 and 1") {
  const ProcessParams p{0.5, 1.0, 1.0};
  double prev = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double x = std::pow(10.0, -4.0 + 0.1 * i);
    const double v = mllp_cdf(x, 1.0, p);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(mllp_cdf(1e-12, 1.0, p) < 1e-5);
  CHECK(mllp_cdf(1e12, 1.0, p) > 1.0 - 1e-5);
  CHECK_THROWS_AS(mllp_cdf(0.0, 1.0, p), DomainError);
}

TEST_CASE("Levy density") {
  CHECK(rel(mllp_levy_density(1.0, {1.0, 1.0, 1.0}), std::exp(-1.0)) < 1e-12);
  SUBCASE("x nu(x) -> alpha as x -> 0") {
    CHECK(std::fabs(1e-6 * mllp_levy_density(1e-6, {0.5, 1.0, 1.0}) - 0.5) <= 1e-3);
  }
  SUBCASE("small-t limit of f(x, t) / t") {
    const ProcessParams p{0.7, 1.0, 1.0};
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      CHECK(rel(mllp_density(x, 1e-3, p).value / 1e-3, mllp_levy_density(x, p)) < 1e-2);
    }
  }
  SUBCASE("positive on (0, 50]") {
    for (double a : kAlphas) {
      for (double lambda : kLambdas) {
        for (double x = 0.25; x <= 50.0; x += 0.25) CHECK(mllp_levy_density(x, {a, lambda, 1.0}) > 0.0);
      }
    }
  }
}

TEST_CASE("small-x asymptote") {
  const ProcessParams p{0.5, 1.0, 1.0};
  // the relative gap shrinks like x^alpha
  const double r4 = mllp_density(1e-4, 1.0, p).value / density_asymptote_zero(1e-4, 1.0, p);
  const double r8 = mllp_density(1e-8, 1.0, p).value / density_asymptote_zero(1e-8, 1.0, p);
  CHECK(std::fabs(1.0 - r8) < 2e-4);
  CHECK((1.0 - r4) / (1.0 - r8) == doctest::Approx(100.0).epsilon(0.02));
  // two more series terms: 1 - x^(1/2) Gamma(1/2) + x Gamma(1/2) / Gamma(3/2)
  CHECK(r4 == doctest::Approx(1.0 - 0.01 * std::sqrt(std::numbers::pi) + 2e-4).epsilon(1e-5));
}

TEST_CASE("the large-x formula as written is not a density") {
  const ProcessParams p{0.5, 1.0, 1.0};
  const AsymptoteEval a = density_asymptote_inf(1e4, 1.0, p);
  CHECK(a.value < 0.0);
  CHECK_FALSE(a.valid_as_density);
  CHECK_FALSE(a.advisory.empty());
  // decays like 1/x, unlike the x^(-alpha-1) tail of the true density
  CHECK(density_asymptote_inf(1e6, 1.0, p).value / a.value == doctest::Approx(1e-2).epsilon(0.01));
  CHECK_THROWS_AS(density_asymptote_inf(10.0, 2.0, p), PoleError);
}

TEST_CASE("fractional moment") {
  CHECK(rel(fractional_moment(0.25, 1.0, {0.5, 2.0, 1.0}), oracle::frac_moment_half_2_q025) < 1e-13);
  for (double lambda : {0.5, 3.0}) {
    for (double q : {0.2, 0.7}) {
      CHECK(rel(fractional_moment(q, 1.0, {1.0, lambda, 1.0}), std::tgamma(1.0 + q) / std::pow(lambda, q)) < 1e-13);
    }
  }
  SUBCASE("matches quadrature at q = alpha/2") {
    for (double a : kAlphas) {
      for (double t : {1.0, 2.0}) {
        const ProcessParams p{a, 1.0, 1.0};
        CHECK(std::fabs(fractional_moment(a / 2.0, t, p) - integrate_mllp_density(t, p, a / 2.0).value) <= 1e-4);
      }
    }
  }
  CHECK_THROWS_AS(fractional_moment(0.0, 1.0, {0.5, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(fractional_moment(0.5, 1.0, {0.5, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(fractional_moment(0.1, 1.0, {0.5, 1.0, 2.0}), DomainError);
}

TEST_CASE("normalization, Laplace transform and CDF limit by quadrature over the grid") {
  for (double a : kAlphas) {
    for (double lambda : kLambdas) {
      for (double t : kTimes) {
        const ProcessParams p{a, lambda, 1.0};
        CHECK(std::fabs(integrate_mllp_density(t, p).value - 1.0) <= 1e-4);
        for (double u : {0.5, 1.0, 2.0}) {
          CHECK(std::fabs(integrate_mllp_density(t, p, 0.0, u).value - mllp_laplace(u, t, p)) <= 1e-4);
        }
      }
    }
  }
}

TEST_CASE("Laplace transforms") {
  CHECK(mllp_laplace(0.0, 3.0, {0.5, 1.0, 1.0}) == 1.0);
  CHECK(mllp_laplace(1.0, 1.0, {0.5, 1.0, 1.0}) == doctest::Approx(0.5));
  CHECK(mllp_laplace(1.0, 2.0, {0.5, 1.0, 1.5}) == doctest::Approx(std::pow(0.5, 3.0)));
  const TemperedParams tp{{0.5, 1.0, 1.0}, 1.0};
  CHECK(tempered_laplace(0.0, 1.0, tp) == 1.0);
  CHECK(tempered_laplace(1.0, 1.0, tp) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("tempered density") {
  SUBCASE("single-term collapse at lambda = mu^alpha") {
    // w = 0 leaves lambda^t x^(alpha t - 1) e^(-mu x) / Gamma(alpha t)
    const TemperedParams tp{{0.5, 1.0, 1.0}, 1.0};
    CHECK(rel(tempered_density(1.0, 1.0, tp).value, std::exp(-1.0) / std::sqrt(std::numbers::pi)) < 1e-14);
    CHECK(rel(tempered_levy_density(2.0, tp), std::exp(-2.0) / 4.0) < 1e-14);
  }
  SUBCASE("normalization on both sides of lambda = mu^alpha") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (double mu : {0.5, 1.0, 3.0}) {
        const TemperedParams tp{{0.6, lambda, 1.0}, mu};
        CHECK_MESSAGE(std::fabs(integrate_tempered_density(1.0, tp).value - 1.0) <= 1e-8,
                      "lambda=" << lambda << " mu=" << mu);
        CHECK(std::fabs(integrate_tempered_density(1.0, tp, 0.0, 0.7).value - tempered_laplace(0.7, 1.0, tp)) <=
              1e-8);
      }
    }
  }
  SUBCASE("moments by quadrature") {
    const TemperedParams tp{{0.5, 1.0, 1.0}, 2.0};
    const Moments m = tempered_moments(2.0, tp);
    const double m1 = integrate_tempered_density(2.0, tp, 1.0).value;
    const double m2 = integrate_tempered_density(2.0, tp, 2.0).value;
    CHECK(rel(m1, m.mean) < 1e-8);
    CHECK(rel(m2 - m1 * m1, m.variance) < 1e-7);
  }
  SUBCASE("small-t limit gives the tempered Levy density") {
    const TemperedParams tp{{0.5, 2.0, 1.0}, 1.0};
    for (double x : {0.1, 1.0, 3.0}) {
      CHECK(rel(tempered_density(x, 1e-3, tp).value / 1e-3, tempered_levy_density(x, tp)) < 1e-2);
    }
  }
  SUBCASE("mu -> 0 approaches the untempered law at rate mu^alpha") {
    const ProcessParams p{0.5, 1.0, 1.0};
    const double gap8 = rel(tempered_density(1.0, 1.0, {p, 1e-8}).value, mllp_density(1.0, 1.0, p).value);
    const double gap16 = rel(tempered_density(1.0, 1.0, {p, 1e-16}).value, mllp_density(1.0, 1.0, p).value);
    CHECK(gap8 > 1e-5);
    CHECK(gap8 < 1e-3);
    CHECK(gap16 < 1e-6);
    CHECK(rel(tempered_laplace(1.0, 1.0, {p, 1e-16}), mllp_laplace(1.0, 1.0, p)) < 1e-6);
  }
  CHECK_THROWS_AS(tempered_density(1.0, 1.0, {{0.5, 1.0, 2.0}, 1.0}), DomainError);
}

TEST_CASE("tempered moments") {
  // conditioning on the gamma clock: mean alpha mu^(alpha-1) t / lambda
  const TemperedParams tp{{0.6, 1.0, 1.0}, 2.0};
  const Moments m = tempered_moments(1.0, tp);
  CHECK(rel(m.mean, 0.6 * std::pow(2.0, -0.4)) < 1e-14);
  const double var_s = 0.6 * 0.4 * std::pow(2.0, -1.4);
  CHECK(rel(m.variance, var_s + m.mean * m.mean) < 1e-14);
}

TEST_CASE("tabulated CDF stays within 1e-7 of the exact CDF") {
  for (double a : {0.3, 0.9}) {
    const ProcessParams p{a, 1.0, 1.0};
    const TabulatedCdf cdf(1e-6, 1e6, 1.0, p);
    CHECK(cdf.nodes() >= 2400);
    double worst = 0.0;
    for (int i = 0; i < 997; ++i) {
      const double x = std::pow(10.0, -6.0 + 12.0 * (i + 0.37) / 997.0);
      worst = std::max(worst, std::fabs(cdf(x) - mllp_cdf(x, 1.0, p)));
    }
    CHECK_MESSAGE(worst < 1e-7, "alpha=" << a << " worst=" << worst);
    CHECK(cdf(1e-9) == mllp_cdf(1e-9, 1.0, p));
  }
}

TEST_CASE("beta != 1 is rejected by the density routines") {
  const ProcessParams p{0.5, 1.0, 2.0};
  CHECK_THROWS_AS(mllp_density(1.0, 1.0, p), DomainError);
  CHECK_THROWS_AS(mllp_cdf(1.0, 1.0, p), DomainError);
  CHECK_THROWS_AS(density_asymptote_zero(1.0, 1.0, p), DomainError);
  CHECK_NOTHROW(tempered_moments(1.0, {p, 1.0}));
  CHECK_THROWS_AS(mllp_density(-1.0, 1.0, {0.5, 1.0, 1.0}), DomainError);
}
