#pragma once

#include <cstddef>
#include <vector>

#include "mllp/random.hpp"

namespace mllp {

/// Parameters (alpha, lambda, beta) of a Mittag-Leffler Levy process.
struct ProcessParams {
  double alpha = 0.5;   ///< stability index, in (0, 1)
  double lambda = 1.0;  ///< gamma subordinator rate, > 0
  double beta = 1.0;    ///< gamma subordinator shape per unit time, > 0

  /// Throws DomainError. `allow_unit_alpha` admits alpha == 1 for analytic formulas.
  void validate(bool allow_unit_alpha = false) const;
};

struct TemperedParams {
  ProcessParams base;
  double mu = 1.0;  ///< tempering parameter, > 0

  void validate() const;
};

/// Equally spaced grid t_i = i * horizon / n_steps, i = 1..n_steps (t_0 = 0 implicit).
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t n_steps);

  double horizon() const { return horizon_; }
  std::size_t size() const { return n_steps_; }
  double step() const { return horizon_ / static_cast<double>(n_steps_); }
  double at(std::size_t i) const;  ///< t_{i+1}, zero-based
  std::vector<double> times() const;

 private:
  double horizon_;
  std::size_t n_steps_;
};

struct SamplePath {
  TimeGrid grid;
  std::vector<double> values;  ///< cumulative process value at each grid time

  double endpoint() const { return values.back(); }
  /// Increment over (t_{i-1}, t_i], zero-based.
  double increment(std::size_t i) const { return i == 0 ? values[0] : values[i] - values[i - 1]; }
};

/// Gamma subordinator G_{lambda,beta}: increments gamma(rate=lambda, shape=beta*dt).
SamplePath simulate_gamma_path(RandomSource& src, const ProcessParams& params, const TimeGrid& grid);

/// MLLP by gamma subordination: increments G_k^(1/alpha) S_k with S_k standard stable.
SamplePath simulate_mllp_path(RandomSource& src, const ProcessParams& params, const TimeGrid& grid);

/// Tempered MLLP: increments S_{alpha,mu}(G_k) drawn by the tempered stable sampler.
SamplePath simulate_tempered_mllp_path(RandomSource& src, const TemperedParams& params, const TimeGrid& grid,
                                       TemperedStats* stats = nullptr);

/// n_samples draws of M(N_{1/c}(1)), N_{1/c}(1) = 1 + NB(t_shape=1, p=1/c), via a single gamma
/// draw of shape beta * N_{1/c}(1).
std::vector<double> simulate_nb_subordinated(RandomSource& src, const ProcessParams& params, double c,
                                             std::size_t n_samples);

/// n endpoint draws M(t), each from a one-step path.
std::vector<double> sample_mllp_marginal(RandomSource& src, const ProcessParams& params, double t, std::size_t n);

std::vector<double> sample_tempered_marginal(RandomSource& src, const TemperedParams& params, double t,
                                             std::size_t n, TemperedStats* stats = nullptr);

}  // namespace mllp
