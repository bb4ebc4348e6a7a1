#include "mllp/process.hpp"

#include <cmath>
#include <string>

namespace mllp {

void ProcessParams::validate(bool allow_unit_alpha) const {
  const bool alpha_ok = allow_unit_alpha ? (alpha > 0.0 && alpha <= 1.0) : (alpha > 0.0 && alpha < 1.0);
  if (!alpha_ok) {
    throw DomainError(std::string("alpha must lie in (0, 1") + (allow_unit_alpha ? "]" : ")"));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
}

void TemperedParams::validate() const {
  base.validate();
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
}

TimeGrid::TimeGrid(double horizon, std::size_t n_steps) : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("TimeGrid: horizon must be positive");
  if (n_steps < 1) throw DomainError("TimeGrid: n_steps must be at least 1");
}

double TimeGrid::at(std::size_t i) const {
  // The last point is exactly the horizon.
  return i + 1 == n_steps_ ? horizon_ : static_cast<double>(i + 1) * horizon_ / static_cast<double>(n_steps_);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(n_steps_);
  for (std::size_t i = 0; i < n_steps_; ++i) out[i] = at(i);
  return out;
}

namespace {

template <class Increment>
SamplePath accumulate(const TimeGrid& grid, Increment&& draw) {
  SamplePath path{grid, std::vector<double>(grid.size())};
  double level = 0.0;
  double previous_time = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.at(i);
    level += draw(t - previous_time);
    path.values[i] = level;
    previous_time = t;
  }
  return path;
}

double mllp_increment(RandomSource& src, const ProcessParams& p, double dt) {
  const double g = gamma_variate(src, p.lambda, p.beta * dt);
  const double s = stable_variate(src, p.alpha);
  return g == 0.0 ? 0.0 : std::exp(std::log(g) / p.alpha + std::log(s));
}

}  // namespace

SamplePath simulate_gamma_path(RandomSource& src, const ProcessParams& params, const TimeGrid& grid) {
  params.validate(true);
  return accumulate(grid, [&](double dt) { return gamma_variate(src, params.lambda, params.beta * dt); });
}

SamplePath simulate_mllp_path(RandomSource& src, const ProcessParams& params, const TimeGrid& grid) {
  params.validate();
  return accumulate(grid, [&](double dt) { return mllp_increment(src, params, dt); });
}

SamplePath simulate_tempered_mllp_path(RandomSource& src, const TemperedParams& params, const TimeGrid& grid,
                                       TemperedStats* stats) {
  params.validate();
  const ProcessParams& p = params.base;
  return accumulate(grid, [&](double dt) {
    const double g = gamma_variate(src, p.lambda, p.beta * dt);
    return g == 0.0 ? 0.0 : tempered_stable_variate(src, p.alpha, params.mu, g, stats);
  });
}

std::vector<double> simulate_nb_subordinated(RandomSource& src, const ProcessParams& params, double c,
                                             std::size_t n_samples) {
  params.validate();
  if (!(c > 1.0) || !std::isfinite(c)) throw DomainError("simulate_nb_subordinated: c must exceed 1");
  std::vector<double> out(n_samples);
  for (auto& x : out) {
    const auto jumps = negbin_variate(src, 1.0, 1.0 / c);
    const double random_time = 1.0 + static_cast<double>(jumps);
    x = mllp_increment(src, params, random_time);
  }
  return out;
}

std::vector<double> sample_mllp_marginal(RandomSource& src, const ProcessParams& params, double t, std::size_t n) {
  params.validate();
  if (!(t > 0.0)) throw DomainError("sample_mllp_marginal: t must be positive");
  std::vector<double> out(n);
  for (auto& x : out) x = mllp_increment(src, params, t);
  return out;
}

std::vector<double> sample_tempered_marginal(RandomSource& src, const TemperedParams& params, double t,
                                             std::size_t n, TemperedStats* stats) {
  params.validate();
  if (!(t > 0.0)) throw DomainError("sample_tempered_marginal: t must be positive");
  std::vector<double> out(n);
  const ProcessParams& p = params.base;
  for (auto& x : out) {
    const double g = gamma_variate(src, p.lambda, p.beta * t);
    x = g == 0.0 ? 0.0 : tempered_stable_variate(src, p.alpha, params.mu, g, stats);
  }
  return out;
}

}  // namespace mllp
