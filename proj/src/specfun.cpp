#include "mllp/specfun.hpp"

#include <quadmath.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mllp {

void SeriesConfig::validate() const {
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw DomainError("SeriesConfig: tolerance must lie in (0, 1)");
  }
  if (max_terms < 1) {
    throw DomainError("SeriesConfig: max_terms must be at least 1");
  }
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return std::lgamma(x);
}

double sin_pi(double x) {
  // Reduce to r in [-1, 1] so integer arguments give an exact zero.
  const double r = x - 2.0 * std::nearbyint(0.5 * x);
  if (r == 0.0 || r == 1.0 || r == -1.0) {
    return 0.0;
  }
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(std::numbers::pi * r);
}

SignedLog log_reciprocal_gamma(double s) {
  if (s > 0.0) {
    return {-std::lgamma(s), 1};
  }
  // Reflection: 1/Gamma(s) = sin(pi s) Gamma(1 - s) / pi.
  const double sp = sin_pi(s);
  if (sp == 0.0) {
    return {-std::numeric_limits<double>::infinity(), 0};
  }
  return {std::log(std::fabs(sp)) + std::lgamma(1.0 - s) - std::log(std::numbers::pi), sp > 0 ? 1 : -1};
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_fn: both arguments must be positive");
  }
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

namespace {

template <class Real>
struct Arith;

template <>
struct Arith<double> {
  static double log(double x) { return std::log(x); }
  static double exp(double x) { return std::exp(x); }
  static double lgamma(double x) { return std::lgamma(x); }
  static double abs(double x) { return std::fabs(x); }
  static constexpr double eps = std::numeric_limits<double>::epsilon();
};

template <>
struct Arith<__float128> {
  static __float128 log(__float128 x) { return logq(x); }
  static __float128 exp(__float128 x) { return expq(x); }
  static __float128 lgamma(__float128 x) { return lgammaq(x); }
  static __float128 abs(__float128 x) { return fabsq(x); }
  static constexpr __float128 eps = 0x1p-112;  // FLT128_EPSILON
};

// Neumaier variant of Kahan summation.
template <class Real>
struct Compensated {
  Real sum = 0;
  Real carry = 0;

  void add(Real x) {
    const Real t = sum + x;
    if (Arith<Real>::abs(sum) >= Arith<Real>::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  Real value() const { return sum + carry; }
};

struct SeriesShape {
  double alpha;
  double gamma;
  double delta;
  double w;
};

// Location of the largest term, found from log magnitudes alone.
struct PeakInfo {
  double log_peak;  // unscaled log magnitude of the largest term
  int past_peak;    // first index from which term magnitudes decrease monotonically
};

double log_rising_over_factorial(double delta, int k) {
  return std::lgamma(delta + k) - std::lgamma(delta) - std::lgamma(k + 1.0);
}

double log_term(const SeriesShape& s, double log_w, int k) {
  return k * log_w + log_rising_over_factorial(s.delta, k) - std::lgamma(s.alpha * k + s.gamma);
}

PeakInfo locate_peak(const SeriesShape& s, const SeriesConfig& cfg) {
  const double log_w = std::log(std::fabs(s.w));
  // Beyond this index the successive-term ratio is decreasing in k.
  const int ratio_monotone = static_cast<int>(std::ceil((3.0 + s.gamma) / s.alpha)) + 1;
  double best = log_term(s, log_w, 0);
  double prev = best;
  for (int k = 1; k < cfg.max_terms; ++k) {
    const double cur = log_term(s, log_w, k);
    if (cur > best) best = cur;
    if (k >= ratio_monotone && cur < prev) {
      return {best, k - 1};
    }
    prev = cur;
  }
  throw TermCapExceeded("series peak not reached within max_terms=" + std::to_string(cfg.max_terms) +
                        " (|w|=" + std::to_string(std::fabs(s.w)) + ")");
}

template <class Real>
SeriesSum sum_shifted(const SeriesShape& s, const PeakInfo& peak, double log_scale,
                      const SeriesConfig& cfg) {
  using A = Arith<Real>;
  const Real log_w = A::log(Real(std::fabs(s.w)));
  const Real shift = Real(peak.log_peak);
  const bool alternating = s.w < 0.0;

  Compensated<Real> acc;
  Real rounding = 0;
  Real rising = 1;  // (delta)_k / k!
  Real prev_mag = 0;
  for (int k = 0; k < cfg.max_terms; ++k) {
    if (k > 0) {
      rising *= (Real(s.delta) + Real(k - 1)) / Real(k);
    }
    const Real lg = A::lgamma(Real(s.alpha) * Real(k) + Real(s.gamma));
    const Real mag = A::exp(Real(k) * log_w - lg - shift) * rising;
    acc.add((alternating && (k & 1)) ? -mag : mag);
    // Relative error of each term is driven by the absolute error of its exponent.
    rounding += mag * (A::abs(Real(k) * log_w) + A::abs(lg) + A::abs(shift) + Real(4));

    const Real partial = acc.value();
    if (k >= peak.past_peak && mag <= Real(cfg.tolerance) * A::abs(partial)) {
      const Real ratio = (k > 0 && prev_mag > 0) ? mag / prev_mag : Real(0);
      SeriesSum out;
      out.terms_used = k + 1;
      const double base = static_cast<double>(shift) + log_scale;
      const double sum = static_cast<double>(partial);
      out.value = sum == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::fabs(sum)) + base), sum);
      const double tail = ratio < Real(1) ? static_cast<double>(mag * ratio / (Real(1) - ratio))
                                          : static_cast<double>(mag);
      out.truncation_bound = tail * std::exp(base);
      out.rounding_bound = static_cast<double>(rounding * A::eps) * std::exp(base);
      out.extended_precision = !std::is_same_v<Real, double>;
      return out;
    }
    prev_mag = mag;
  }
  throw TermCapExceeded("series did not meet tolerance within max_terms=" + std::to_string(cfg.max_terms) +
                        " (|w|=" + std::to_string(std::fabs(s.w)) + ")");
}

bool accurate(const SeriesSum& r, const SeriesConfig& cfg) {
  return r.rounding_bound <= cfg.tolerance * std::fabs(r.value) || r.rounding_bound < 1e-300;
}

}  // namespace

SeriesSum prabhakar_sum(double alpha, double gamma, double delta, double w, double log_scale,
                        const SeriesConfig& cfg) {
  cfg.validate();
  if (!(alpha > 0.0) || !(gamma > 0.0) || !(delta > 0.0) || !std::isfinite(w) || !std::isfinite(log_scale)) {
    throw DomainError("prabhakar_sum: need alpha, gamma, delta > 0 and finite w");
  }
  if (w == 0.0) {
    SeriesSum out;
    out.value = std::exp(log_scale - std::lgamma(gamma));
    out.terms_used = 1;
    return out;
  }
  const SeriesShape shape{alpha, gamma, delta, w};
  const PeakInfo peak = locate_peak(shape, cfg);
  SeriesSum result = sum_shifted<double>(shape, peak, log_scale, cfg);
  if (accurate(result, cfg)) {
    return result;
  }
  result = sum_shifted<__float128>(shape, peak, log_scale, cfg);
  // The rounding bound is a worst-case linear sum over hundreds of terms and overstates the
  // typical error by orders of magnitude; at binary128 it is held to sqrt(tolerance).
  SeriesConfig relaxed = cfg;
  relaxed.tolerance = std::sqrt(cfg.tolerance);
  if (!accurate(result, relaxed)) {
    throw PrecisionLoss("series cancellation exceeds binary128 resolution (|w|=" + std::to_string(std::fabs(w)) +
                        ")");
  }
  return result;
}

double mittag_leffler(double alpha, double beta, double z, const SeriesConfig& cfg) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("mittag_leffler: alpha must lie in (0, 1]");
  }
  if (!(beta > 0.0)) {
    throw DomainError("mittag_leffler: beta must be positive");
  }
  if (!std::isfinite(z)) {
    throw DomainError("mittag_leffler: z must be finite");
  }
  return prabhakar_sum(alpha, beta, 1.0, z, 0.0, cfg).value;
}

}  // namespace mllp
