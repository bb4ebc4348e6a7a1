#pragma once

#include "mllp/errors.hpp"

namespace mllp {

/// Truncation policy shared by every infinite-series evaluation.
struct SeriesConfig {
  double tolerance = 1e-12;  ///< relative truncation threshold, in (0, 1)
  int max_terms = 2000;      ///< hard cap on summed terms, >= 1

  void validate() const;
};

/// Outcome of a series summation.
struct SeriesSum {
  double value = 0.0;
  int terms_used = 0;
  double truncation_bound = 0.0;  ///< bound on the magnitude of the omitted tail
  double rounding_bound = 0.0;    ///< estimated error from cancellation between terms
  bool extended_precision = false;
};

/// Sign and log-magnitude of a real number; sign == 0 encodes an exact zero.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// 1/Gamma(s) for any real s, as sign and log-magnitude. Zero at the poles s = 0, -1, -2, ...
SignedLog log_reciprocal_gamma(double s);

/// sin(pi x), exactly zero at integers.
double sin_pi(double x);

/// Euler beta function B(a, b) for a, b > 0.
double beta_fn(double a, double b);

/**
 * Three-parameter (Prabhakar) Mittag-Leffler sum
 *
 *   exp(log_scale) * sum_{k>=0} (delta)_k / k! * w^k / Gamma(alpha*k + gamma)
 *
 * Every term is formed in log space with explicit sign tracking and accumulated
 * with compensated summation. Summation runs in double first; if the estimated
 * cancellation error exceeds cfg.tolerance relative to the result, it is redone
 * in 113-bit binary128 arithmetic. Truncation stops at the first index past the
 * largest term whose magnitude is below cfg.tolerance times the partial sum.
 *
 * Throws TermCapExceeded when cfg.max_terms is reached first and PrecisionLoss when
 * even binary128 cannot resolve the cancellation (|w| far too large for the series).
 */
SeriesSum prabhakar_sum(double alpha, double gamma, double delta, double w, double log_scale,
                        const SeriesConfig& cfg = {});

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) by its power series.
/// alpha in (0, 1], beta > 0.
double mittag_leffler(double alpha, double beta, double z, const SeriesConfig& cfg = {});

}  // namespace mllp
