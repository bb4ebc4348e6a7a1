#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "mllp/errors.hpp"

namespace mllp {

/**
 * Seedable uniform source: xoshiro256** (Blackman & Vigna) with its 256-bit state
 * filled from the 64-bit seed by splitmix64. Identical seeds give bit-identical
 * streams on every platform. A source is single-owner; parallel work uses one
 * source per partition, seeded with derive_seed().
 */
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1): ((x >> 12) + 0.5) * 2^-52, every value exact.
  double uniform01();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

/// Independent child seed for partition `index` of a run seeded with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// |ln u| / rate; the exponential transform of one uniform.
inline double exponential_from_uniform(double u, double rate) { return std::fabs(std::log(u)) / rate; }

double exponential(RandomSource& src, double rate);

/// Standard normal by the Marsaglia polar method.
double standard_normal(RandomSource& src);

/**
 * Gamma variate with density rate^shape x^(shape-1) e^(-rate x) / Gamma(shape).
 *
 * shape >= 1: Marsaglia & Tsang (2000) squeeze/rejection.
 * shape < 1:  boost to shape + 1 and multiply by U^(1/shape), evaluated in log
 *             space. For very small shapes the result may underflow to 0 when the
 *             true draw lies below the smallest positive double.
 */
double gamma_variate(RandomSource& src, double rate, double shape);

/**
 * Standard positive alpha-stable draw with E exp(-u S) = exp(-u^alpha), alpha in (0, 1),
 * by Kanter's product form with theta = pi U and W ~ exponential(1):
 *
 *   S = sin(alpha theta) sin((1-alpha) theta)^((1-alpha)/alpha) / sin(theta)^(1/alpha) * W^(-(1-alpha)/alpha)
 */
double stable_variate(RandomSource& src, double alpha);

/// Rejection diagnostics for the tempered stable sampler.
struct TemperedStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t low_efficiency_events = 0;  ///< pieces whose acceptance probability fell below 1e-6

  double acceptance_rate() const {
    return proposals == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// Tuning of the tempered stable sampler.
struct TemperedOptions {
  /// Largest t*mu^alpha handled by a single rejection loop. Larger time scales are split
  /// into independent pieces, each with acceptance probability at least exp(-max_piece_exponent).
  double max_piece_exponent = 1.0;
};

/**
 * Draw of the tempered stable subordinator S_{alpha,mu}(t_scale), whose Laplace transform is
 * exp(-t_scale((u+mu)^alpha - mu^alpha)). Proposals S = t^(1/alpha) stable_variate(alpha) are
 * accepted with probability exp(-mu S). The time scale is split into m equal pieces, with m the
 * smallest count keeping t_scale mu^alpha / m <= options.max_piece_exponent, and the pieces summed.
 */
double tempered_stable_variate(RandomSource& src, double alpha, double mu, double t_scale,
                               TemperedStats* stats = nullptr, const TemperedOptions& options = {});

/// Mittag-Leffler draw G^(1/alpha) S with G ~ exponential(lambda); LT lambda/(lambda + u^alpha).
double ml_variate(RandomSource& src, double alpha, double lambda);

/// Poisson draw: inversion for mean < 10, Hormann's PTRS transformed rejection otherwise.
std::uint64_t poisson_variate(RandomSource& src, double mean);

/// Negative binomial draw P(J=j) = C(t+j-1, j) p^t (1-p)^j, as a gamma-mixed Poisson.
std::uint64_t negbin_variate(RandomSource& src, double t_shape, double p);

}  // namespace mllp
