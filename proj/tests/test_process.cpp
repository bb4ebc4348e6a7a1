#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mllp/analytics.hpp"
#include "mllp/process.hpp"
#include "mllp/verify.hpp"

using namespace mllp;

namespace {

bool within_3se(const Estimate& e, double expected) {
  return std::fabs(e.estimate - expected) <= 3.0 * e.std_error;
}

}  // namespace

TEST_CASE("TimeGrid") {
  const TimeGrid g(2.0, 4);
  CHECK(g.size() == 4);
  CHECK(g.step() == 0.5);
  CHECK(g.at(0) == 0.5);
  CHECK(g.at(3) == 2.0);
  CHECK(g.times() == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK_THROWS_AS(TimeGrid(0.0, 4), DomainError);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW((ProcessParams{0.5, 1.0, 1.0}.validate()));
  CHECK_THROWS_AS((ProcessParams{1.0, 1.0, 1.0}.validate()), DomainError);
  CHECK_NOTHROW((ProcessParams{1.0, 1.0, 1.0}.validate(true)));
  CHECK_THROWS_AS((ProcessParams{0.5, 0.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ProcessParams{0.5, 1.0, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((TemperedParams{{0.5, 1.0, 1.0}, 0.0}.validate()), DomainError);
}

TEST_CASE("paths are non-decreasing and positive") {
  RandomSource src(21);
  const TimeGrid grid(5.0, 500);
  const ProcessParams p{0.6, 1.5, 1.0};
  const TemperedParams tp{p, 0.8};
  for (int rep = 0; rep < 20; ++rep) {
    for (const SamplePath& path : {simulate_gamma_path(src, p, grid), simulate_mllp_path(src, p, grid),
                                   simulate_tempered_mllp_path(src, tp, grid)}) {
      REQUIRE(path.values.size() == grid.size());
      CHECK(path.values.front() >= 0.0);
      for (std::size_t i = 0; i < grid.size(); ++i) CHECK(path.increment(i) >= 0.0);
      CHECK(path.endpoint() > 0.0);
    }
  }
}

TEST_CASE("simulators are pure given the source") {
  const TimeGrid grid(1.0, 16);
  const ProcessParams p{0.5, 1.0, 1.0};
  RandomSource a(5);
  RandomSource b(5);
  CHECK(simulate_mllp_path(a, p, grid).values == simulate_mllp_path(b, p, grid).values);
  CHECK(simulate_tempered_mllp_path(a, {p, 1.0}, grid).values == simulate_tempered_mllp_path(b, {p, 1.0}, grid).values);
}

TEST_CASE("gamma subordinator endpoint") {
  RandomSource src(22);
  const ProcessParams p{0.5, 2.0, 1.5};
  const TimeGrid grid(2.0, 8);
  std::vector<double> ends(100000);
  for (auto& x : ends) x = simulate_gamma_path(src, p, grid).endpoint();
  CHECK(within_3se(sample_mean(ends), p.beta * 2.0 / p.lambda));
  // shape beta t = 3, rate lambda
  CHECK(ks_one_sample(ends, [&](double x) { return boost::math::gamma_p(3.0, p.lambda * x); }, 0.01).passed);
}

TEST_CASE("MLLP marginal Laplace transform at t = 1 and 2") {
  RandomSource src(23);
  const ProcessParams p{0.5, 1.0, 1.0};
  for (double t : {1.0, 2.0}) {
    const TimeGrid grid(t, 4);
    std::vector<double> ends(400000);
    for (auto& x : ends) x = simulate_mllp_path(src, p, grid).endpoint();
    CHECK_MESSAGE(within_3se(empirical_laplace(ends, 1.0), mllp_laplace(1.0, t, p)), "t=" << t);
  }
}

TEST_CASE("increments over equal steps are identically distributed") {
  RandomSource src(24);
  const ProcessParams p{0.7, 1.0, 1.0};
  const TimeGrid grid(2.0, 2);
  std::vector<double> first(50000);
  std::vector<double> second(50000);
  for (std::size_t i = 0; i < first.size(); ++i) {
    const SamplePath path = simulate_mllp_path(src, p, grid);
    first[i] = path.increment(0);
    second[i] = path.increment(1);
  }
  CHECK(ks_two_sample(first, second, 0.01).passed);
}

TEST_CASE("fine grids with tiny gamma shapes stay monotone") {
  RandomSource src(25);
  const SamplePath path = simulate_mllp_path(src, {0.5, 1.0, 1.0}, TimeGrid(1.0, 100000));
  for (std::size_t i = 0; i < path.grid.size(); ++i) REQUIRE(path.increment(i) >= 0.0);
  CHECK(std::isfinite(path.endpoint()));
}

TEST_CASE("tempered marginal moments and Laplace transform") {
  RandomSource src(26);
  const TemperedParams tp{{0.5, 1.0, 1.0}, 1.0};
  TemperedStats stats;
  const auto draws = sample_tempered_marginal(src, tp, 1.0, 1000000, &stats);
  const Moments m = tempered_moments(1.0, tp);
  CHECK(within_3se(sample_mean(draws), m.mean));
  CHECK(within_3se(sample_variance(draws), m.variance));
  CHECK(within_3se(empirical_laplace(draws, 0.5), tempered_laplace(0.5, 1.0, tp)));
  CHECK(stats.accepted >= 1000000);  // one acceptance per time piece
  CHECK(stats.acceptance_rate() > 0.3);

  // a tempered path endpoint has the same law as the one-step marginal
  const TimeGrid grid(1.0, 10);
  std::vector<double> ends(200000);
  for (auto& x : ends) x = simulate_tempered_mllp_path(src, tp, grid).endpoint();
  CHECK(within_3se(empirical_laplace(ends, 1.0), tempered_laplace(1.0, 1.0, tp)));
}

TEST_CASE("negative-binomial subordination") {
  RandomSource src(27);
  const ProcessParams p{0.5, 1.0, 1.0};
  SUBCASE("Laplace transform lambda / (lambda + c u^alpha)") {
    // c = 2, u = 1: 1/3
    const auto draws = simulate_nb_subordinated(src, p, 2.0, 1000000);
    CHECK(within_3se(empirical_laplace(draws, 1.0), 1.0 / 3.0));
  }
  SUBCASE("c close to 1 leaves M(1)") {
    const auto draws = simulate_nb_subordinated(src, p, 1.001, 200000);
    CHECK(within_3se(empirical_laplace(draws, 1.0), 1.0 / (1.0 + 1.001)));
  }
  CHECK_THROWS_AS(simulate_nb_subordinated(src, p, 1.0, 10), DomainError);
}
