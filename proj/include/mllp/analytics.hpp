#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mllp/process.hpp"
#include "mllp/specfun.hpp"

namespace mllp {

enum class EvalMethod {
  Series,     ///< convergent power series
  Expansion,  ///< large-argument algebraic expansion, optimally truncated
};

const char* to_string(EvalMethod m);

/// One density evaluation with its truncation diagnostics.
struct DensityEval {
  double x = 0.0;
  double value = 0.0;
  int terms_used = 0;
  double truncation_bound = 0.0;
  EvalMethod method = EvalMethod::Series;
};

/**
 * Large-argument expansion of the three-parameter Mittag-Leffler function at a
 * negative argument, for 0 < alpha < 1 and y > 0:
 *
 *   exp(log_scale) * E^delta_{alpha,gamma}(-y)
 *     ~ exp(log_scale) * sum_{k>=0} (-1)^k (delta)_k/k! y^(-delta-k) / Gamma(gamma - alpha(delta+k))
 *
 * Summation stops at the smallest term of the envelope; truncation_bound is the
 * envelope of the first omitted term.
 */
SeriesSum prabhakar_expansion(double alpha, double gamma, double delta, double y, double log_scale,
                              const SeriesConfig& cfg = {});

/// exp(log_scale) * E^delta_{alpha,gamma}(-y), y >= 0, choosing the series or the expansion.
SeriesSum prabhakar_negative(double alpha, double gamma, double delta, double y, double log_scale,
                             const SeriesConfig& cfg, EvalMethod* method = nullptr);

/// (lambda / (lambda + u^alpha))^(beta t).
double mllp_laplace(double u, double t, const ProcessParams& params);

/// Marginal density of M(t), beta = 1, alpha in (0, 1].
DensityEval mllp_density(double x, double t, const ProcessParams& params, const SeriesConfig& cfg = {});

/// Distribution function of M(t) from the term-wise integrated density series (or its expansion).
double mllp_cdf(double x, double t, const ProcessParams& params, const SeriesConfig& cfg = {});

/// Distribution function of M(t) by adaptive quadrature of mllp_density over (0, x].
double mllp_cdf_quadrature(double x, double t, const ProcessParams& params, const SeriesConfig& cfg = {});

/// Levy density (alpha / x) E_{alpha,1}(-lambda x^alpha).
double mllp_levy_density(double x, const ProcessParams& params, const SeriesConfig& cfg = {});

/// lambda^t x^(alpha t - 1) / Gamma(alpha t), the small-x behaviour of the density.
double density_asymptote_zero(double x, double t, const ProcessParams& params);

struct AsymptoteEval {
  double value = 0.0;
  bool valid_as_density = false;
  std::string advisory;
};

/**
 * The large-x formula (1/Gamma(-alpha t)) (lambda + x^alpha)^t x^(-alpha t - 1), evaluated
 * as written. It is negative whenever 0 < alpha t < 1 and decays like x^(-1), so it is not a
 * usable tail density; the advisory says so. Use mllp_density (which switches to the
 * expansion) for actual tail values. Throws PoleError when alpha t is a positive integer.
 */
AsymptoteEval density_asymptote_inf(double x, double t, const ProcessParams& params);

/// E M(t)^q = t / (lambda^(q/alpha) Gamma(1-q)) B(1 - q/alpha, t + q/alpha), 0 < q < alpha.
double fractional_moment(double q, double t, const ProcessParams& params);

/// (lambda / (lambda - mu^alpha + (mu+u)^alpha))^(beta t).
double tempered_laplace(double u, double t, const TemperedParams& params);

/// Marginal density of the tempered process, beta = 1.
DensityEval tempered_density(double x, double t, const TemperedParams& params, const SeriesConfig& cfg = {});

/// (alpha e^(-mu x) / x) E_{alpha,1}((mu^alpha - lambda) x^alpha).
double tempered_levy_density(double x, const TemperedParams& params, const SeriesConfig& cfg = {});

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the tempered process at time t, by conditioning on the gamma clock.
Moments tempered_moments(double t, const TemperedParams& params);

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/**
 * Integral of x^q e^(-u x) f(x) over (0, upper] for the MLLP density f at time t.
 *
 * The first panel uses y = x^(alpha t), which removes the x^(alpha t - 1) singularity.
 * The middle range is integrated in log x by adaptive Gauss-Kronrod. For the unbounded
 * heavy tail with u = 0, the range beyond the point where the expansion is accurate is
 * integrated term by term in closed form (requires q < alpha).
 */
Integral integrate_mllp_density(double t, const ProcessParams& params, double q = 0.0, double u = 0.0,
                                double upper = std::numeric_limits<double>::infinity(),
                                const SeriesConfig& cfg = {});

/// Integral of x^q e^(-u x) f*(x) over (0, infinity) for the tempered density f* at time t.
Integral integrate_tempered_density(double t, const TemperedParams& params, double q = 0.0, double u = 0.0,
                                    const SeriesConfig& cfg = {});

/**
 * Monotone piecewise-cubic (Fritsch-Carlson) interpolant of mllp_cdf in log x over [lo, hi],
 * with nodes_per_decade nodes per factor of ten. Outside the table the exact CDF is evaluated.
 */
class TabulatedCdf {
 public:
  TabulatedCdf(double lo, double hi, double t, const ProcessParams& params, int nodes_per_decade = 200,
               const SeriesConfig& cfg = {});

  double operator()(double x) const;

  std::size_t nodes() const { return log_x_.size(); }

 private:
  double t_;
  ProcessParams params_;
  SeriesConfig cfg_;
  std::vector<double> log_x_;
  std::vector<double> value_;
  std::vector<double> slope_;
};

}  // namespace mllp
