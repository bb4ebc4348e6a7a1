#include "mllp/analytics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

namespace mllp {

const char* to_string(EvalMethod m) {
  switch (m) {
    case EvalMethod::Series:
      return "series";
    case EvalMethod::Expansion:
      return "expansion";
  }
  return "unknown";
}

namespace {

constexpr double kLogPi = 1.1447298858494002;  // ln(pi)

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void require_unit_beta(const ProcessParams& p, const char* fn) {
  require(p.beta == 1.0, std::string(fn) + ": densities are defined for beta = 1");
}

// Envelope of |1/Gamma(s)|: exact for s > 0, Gamma(1-s)/pi (dropping |sin(pi s)|) otherwise.
double log_rgamma_envelope(double s) { return s > 0.0 ? -std::lgamma(s) : std::lgamma(1.0 - s) - kLogPi; }

// |sin(pi s)| below this is treated as an exact pole of Gamma.
constexpr double kPoleSnap = 1e-13;

constexpr double kCrossoverTolerance = 1e-8;

double rgamma_factor(double s) {
  if (s > 0.0) return 1.0;
  const double sp = sin_pi(s);
  return std::fabs(sp) < kPoleSnap ? 0.0 : sp;
}

}  // namespace

SeriesSum prabhakar_expansion(double alpha, double gamma, double delta, double y, double log_scale,
                              const SeriesConfig& cfg) {
  cfg.validate();
  require(alpha > 0.0 && alpha < 1.0, "prabhakar_expansion: alpha must lie in (0, 1)");
  require(y > 0.0 && std::isfinite(y), "prabhakar_expansion: y must be positive");
  const double log_y = std::log(y);
  double sum = 0.0;
  double carry = 0.0;
  double log_rising = 0.0;
  double last_env = std::numeric_limits<double>::infinity();
  SeriesSum out;
  for (int k = 0; k < cfg.max_terms; ++k) {
    if (k > 0) log_rising += std::log((delta + k - 1.0) / k);
    const double s = gamma - alpha * (delta + k);
    const double env = std::exp(log_scale + log_rising - (delta + k) * log_y + log_rgamma_envelope(s));
    if (env > last_env) {
      // Divergence sets in: optimal truncation point reached.
      out.truncation_bound = env;
      out.terms_used = k;
      out.value = sum + carry;
      return out;
    }
    const double term = ((k & 1) ? -env : env) * rgamma_factor(s);
    const double t = sum + term;
    carry += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    last_env = env;
    const double partial = sum + carry;
    if (partial != 0.0 && env <= cfg.tolerance * std::fabs(partial) * 1e-3) {
      out.truncation_bound = env;
      out.terms_used = k + 1;
      out.value = partial;
      return out;
    }
  }
  out.value = sum + carry;
  out.terms_used = cfg.max_terms;
  out.truncation_bound = last_env;
  return out;
}

SeriesSum prabhakar_negative(double alpha, double gamma, double delta, double y, double log_scale,
                             const SeriesConfig& cfg, EvalMethod* method) {
  require(y >= 0.0 && std::isfinite(y), "prabhakar_negative: y must be nonnegative");
  SeriesSum asym;
  const bool try_expansion = alpha < 1.0 && y >= 1.0;
  if (try_expansion) {
    asym = prabhakar_expansion(alpha, gamma, delta, y, log_scale, cfg);
    if (asym.value != 0.0 && asym.truncation_bound <= cfg.tolerance * std::fabs(asym.value)) {
      if (method != nullptr) *method = EvalMethod::Expansion;
      return asym;
    }
  }
  if (method != nullptr) *method = EvalMethod::Series;
  try {
    return prabhakar_sum(alpha, gamma, delta, -y, log_scale, cfg);
  } catch (const PrecisionLoss&) {
    // In the crossover band neither route meets the tolerance; take the expansion if it is
    // still accurate to kCrossoverTolerance. Its truncation_bound reports the actual accuracy.
    if (!try_expansion || !(asym.truncation_bound <= kCrossoverTolerance * std::fabs(asym.value))) throw;
    if (method != nullptr) *method = EvalMethod::Expansion;
    return asym;
  }
}

double mllp_laplace(double u, double t, const ProcessParams& params) {
  params.validate(true);
  require(u >= 0.0, "mllp_laplace: u must be nonnegative");
  require(t > 0.0, "mllp_laplace: t must be positive");
  const double lambda = params.lambda;
  return std::pow(lambda / (lambda + std::pow(u, params.alpha)), params.beta * t);
}

namespace {

// Evaluates exp(log_extra) * f(x) for the MLLP density f at time t.
SeriesSum density_core(double x, double t, double alpha, double lambda, double log_extra, const SeriesConfig& cfg,
                       EvalMethod* method) {
  const double log_x = std::log(x);
  const double y = std::exp(std::log(lambda) + alpha * log_x);
  const double log_scale = t * std::log(lambda) + (alpha * t - 1.0) * log_x + log_extra;
  return prabhakar_negative(alpha, alpha * t, t, y, log_scale, cfg, method);
}

void validate_density_args(double x, double t, const ProcessParams& params, const char* fn) {
  params.validate(true);
  require_unit_beta(params, fn);
  require(x > 0.0 && std::isfinite(x), std::string(fn) + ": x must be positive");
  require(t > 0.0 && std::isfinite(t), std::string(fn) + ": t must be positive");
}

}  // namespace

DensityEval mllp_density(double x, double t, const ProcessParams& params, const SeriesConfig& cfg) {
  validate_density_args(x, t, params, "mllp_density");
  DensityEval out;
  out.x = x;
  const SeriesSum r = density_core(x, t, params.alpha, params.lambda, 0.0, cfg, &out.method);
  out.value = std::max(r.value, 0.0);
  out.terms_used = r.terms_used;
  out.truncation_bound = r.truncation_bound;
  return out;
}

double mllp_cdf(double x, double t, const ProcessParams& params, const SeriesConfig& cfg) {
  validate_density_args(x, t, params, "mllp_cdf");
  const double alpha = params.alpha;
  const double lambda = params.lambda;
  const double log_x = std::log(x);
  const double y = std::exp(std::log(lambda) + alpha * log_x);
  const double log_scale = t * std::log(lambda) + alpha * t * log_x;
  const SeriesSum r = prabhakar_negative(alpha, alpha * t + 1.0, t, y, log_scale, cfg);
  return std::clamp(r.value, 0.0, 1.0);
}

double mllp_cdf_quadrature(double x, double t, const ProcessParams& params, const SeriesConfig& cfg) {
  validate_density_args(x, t, params, "mllp_cdf_quadrature");
  const Integral r = integrate_mllp_density(t, params, 0.0, 0.0, x, cfg);
  return std::clamp(r.value, 0.0, 1.0);
}

double mllp_levy_density(double x, const ProcessParams& params, const SeriesConfig& cfg) {
  params.validate(true);
  require_unit_beta(params, "mllp_levy_density");
  require(x > 0.0 && std::isfinite(x), "mllp_levy_density: x must be positive");
  const double alpha = params.alpha;
  const double y = std::exp(std::log(params.lambda) + alpha * std::log(x));
  return prabhakar_negative(alpha, 1.0, 1.0, y, std::log(alpha / x), cfg).value;
}

double density_asymptote_zero(double x, double t, const ProcessParams& params) {
  params.validate(true);
  require_unit_beta(params, "density_asymptote_zero");
  require(x > 0.0 && t > 0.0, "density_asymptote_zero: x and t must be positive");
  const double at = params.alpha * t;
  return std::exp(t * std::log(params.lambda) + (at - 1.0) * std::log(x) - std::lgamma(at));
}

AsymptoteEval density_asymptote_inf(double x, double t, const ProcessParams& params) {
  params.validate(true);
  require_unit_beta(params, "density_asymptote_inf");
  require(x > 0.0 && t > 0.0, "density_asymptote_inf: x and t must be positive");
  const double at = params.alpha * t;
  if (std::fabs(at - std::nearbyint(at)) < 1e-12) {
    throw PoleError("density_asymptote_inf: Gamma(-alpha t) has a pole at alpha t = " + std::to_string(at));
  }
  const SignedLog rg = log_reciprocal_gamma(-at);
  const double magnitude =
      std::exp(rg.log_abs + t * std::log(params.lambda + std::pow(x, params.alpha)) - (at + 1.0) * std::log(x));
  AsymptoteEval out;
  out.value = rg.sign * magnitude;
  out.valid_as_density = false;
  out.advisory =
      "formula evaluated as written: its leading order is x^(-1) rather than the x^(-alpha-1) "
      "tail of the density, and it is negative whenever 0 < alpha*t < 1 (Gamma(-alpha*t) < 0); "
      "do not use it as a tail density";
  return out;
}

double fractional_moment(double q, double t, const ProcessParams& params) {
  params.validate(true);
  require_unit_beta(params, "fractional_moment");
  require(t > 0.0, "fractional_moment: t must be positive");
  const double alpha = params.alpha;
  require(q > 0.0 && q < alpha, "fractional_moment: q must lie in (0, alpha)");
  const double ratio = q / alpha;
  return t / (std::pow(params.lambda, ratio) * std::tgamma(1.0 - q)) * beta_fn(1.0 - ratio, t + ratio);
}

double tempered_laplace(double u, double t, const TemperedParams& params) {
  params.validate();
  require(u >= 0.0, "tempered_laplace: u must be nonnegative");
  require(t > 0.0, "tempered_laplace: t must be positive");
  const double alpha = params.base.alpha;
  const double lambda = params.base.lambda;
  const double mu = params.mu;
  // (mu+u)^a - mu^a via expm1/log1p to keep accuracy as mu -> 0 or u -> 0.
  const double shift = std::pow(mu, alpha) * std::expm1(alpha * std::log1p(u / mu));
  return std::pow(lambda / (lambda + shift), params.base.beta * t);
}

namespace {

// exp(log_extra) * f*(x) for the tempered density.
SeriesSum tempered_core(double x, double t, const TemperedParams& p, double log_extra, const SeriesConfig& cfg,
                        EvalMethod* method) {
  const double alpha = p.base.alpha;
  const double lambda = p.base.lambda;
  const double w = std::pow(p.mu, alpha) - lambda;
  const double log_x = std::log(x);
  const double log_scale = t * std::log(lambda) - p.mu * x + (alpha * t - 1.0) * log_x + log_extra;
  if (w < 0.0) {
    const double y = std::exp(std::log(-w) + alpha * log_x);
    return prabhakar_negative(alpha, alpha * t, t, y, log_scale, cfg, method);
  }
  if (method != nullptr) *method = EvalMethod::Series;
  const double arg = w == 0.0 ? 0.0 : std::exp(std::log(w) + alpha * log_x);
  return prabhakar_sum(alpha, alpha * t, t, arg, log_scale, cfg);
}

}  // namespace

DensityEval tempered_density(double x, double t, const TemperedParams& params, const SeriesConfig& cfg) {
  params.validate();
  require_unit_beta(params.base, "tempered_density");
  require(x > 0.0 && std::isfinite(x), "tempered_density: x must be positive");
  require(t > 0.0 && std::isfinite(t), "tempered_density: t must be positive");
  DensityEval out;
  out.x = x;
  const SeriesSum r = tempered_core(x, t, params, 0.0, cfg, &out.method);
  out.value = std::max(r.value, 0.0);
  out.terms_used = r.terms_used;
  out.truncation_bound = r.truncation_bound;
  return out;
}

double tempered_levy_density(double x, const TemperedParams& params, const SeriesConfig& cfg) {
  params.validate();
  require_unit_beta(params.base, "tempered_levy_density");
  require(x > 0.0 && std::isfinite(x), "tempered_levy_density: x must be positive");
  const double alpha = params.base.alpha;
  const double w = std::pow(params.mu, alpha) - params.base.lambda;
  const double log_x = std::log(x);
  const double log_scale = std::log(alpha) - params.mu * x - log_x;
  if (w < 0.0) {
    return prabhakar_negative(alpha, 1.0, 1.0, std::exp(std::log(-w) + alpha * log_x), log_scale, cfg).value;
  }
  const double arg = w == 0.0 ? 0.0 : std::exp(std::log(w) + alpha * log_x);
  return prabhakar_sum(alpha, 1.0, 1.0, arg, log_scale, cfg).value;
}

Moments tempered_moments(double t, const TemperedParams& params) {
  params.validate();
  require(t > 0.0, "tempered_moments: t must be positive");
  const double a = params.base.alpha;
  const double lambda = params.base.lambda;
  const double mu = params.mu;
  const double clock = params.base.beta * t;
  // E S(1) = a mu^(a-1), var S(1) = a(1-a) mu^(a-2); E G = clock/lambda, var G = clock/lambda^2.
  const double stable_mean = a * std::pow(mu, a - 1.0);
  const double stable_var = a * (1.0 - a) * std::pow(mu, a - 2.0);
  Moments m;
  m.mean = stable_mean * clock / lambda;
  m.variance = stable_var * clock / lambda + stable_mean * stable_mean * clock / (lambda * lambda);
  return m;
}

namespace {

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 18;
constexpr double kQuadTol = 1e-11;

// Closed-form integral of x^q times the large-x expansion of the density over (X, infinity).
Integral expansion_tail(double q, double X, double t, double alpha, double lambda, const SeriesConfig& cfg) {
  const double log_x = std::log(X);
  const double log_lambda = std::log(lambda);
  double sum = 0.0;
  double log_rising = 0.0;
  double last_env = std::numeric_limits<double>::infinity();
  for (int k = 1; k < cfg.max_terms; ++k) {
    log_rising += std::log((t + k - 1.0) / k);
    const double s = -alpha * k;
    const double env = std::exp(log_rising - k * log_lambda + (q - alpha * k) * log_x -
                                std::log(alpha * k - q) + log_rgamma_envelope(s));
    if (env > last_env) return {sum, env};
    sum += ((k & 1) ? -env : env) * rgamma_factor(s);
    last_env = env;
    if (sum != 0.0 && env <= 1e-3 * cfg.tolerance * std::fabs(sum)) return {sum, env};
  }
  throw IntegrationFailure("expansion tail did not converge");
}

template <class F>
Integral gauss_kronrod(F&& f, double a, double b) {
  if (!(b > a)) return {};
  double err = 0.0;
  const double v = GaussKronrod::integrate(f, a, b, kMaxDepth, kQuadTol, &err);
  if (!std::isfinite(v)) throw IntegrationFailure("non-finite integral");
  return {v, err};
}

Integral operator+(Integral a, Integral b) { return {a.value + b.value, a.error + b.error}; }

// Integral of x^q e^(-u x) g(x) over (0, upper], where eval(x, log_extra) returns exp(log_extra) g(x)
// and g(x) ~ C x^(singular - 1) near zero.
template <class Eval>
Integral integrate_panels(Eval&& eval, double singular, double x0, double upper, double q, double u) {
  const double first = std::min(x0, upper);
  // Panel 1 in y = x^singular: dx = x^(1 - singular) / singular dy.
  auto panel1 = [&](double y) {
    const double log_x = std::log(y) / singular;
    const double x = std::exp(log_x);
    if (x == 0.0) return 0.0;
    return eval(x, (1.0 - singular + q) * log_x - u * x - std::log(singular));
  };
  Integral total = gauss_kronrod(panel1, 0.0, std::pow(first, singular));
  if (upper > first) {
    // Remaining range in s = ln x: dx = x ds.
    auto panel2 = [&](double s) {
      const double x = std::exp(s);
      return eval(x, (1.0 + q) * s - u * x);
    };
    const double a = std::log(first);
    const double b = std::log(upper);
    // Split into unit-width pieces in log x so each piece sees a smooth integrand.
    const int pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
    for (int i = 0; i < pieces; ++i) {
      total = total + gauss_kronrod(panel2, a + (b - a) * i / pieces, a + (b - a) * (i + 1) / pieces);
    }
  }
  return total;
}

}  // namespace

Integral integrate_mllp_density(double t, const ProcessParams& params, double q, double u, double upper,
                                const SeriesConfig& cfg) {
  params.validate(true);
  require_unit_beta(params, "integrate_mllp_density");
  require(t > 0.0, "integrate_mllp_density: t must be positive");
  require(u >= 0.0, "integrate_mllp_density: u must be nonnegative");
  require(upper > 0.0, "integrate_mllp_density: upper limit must be positive");
  const double alpha = params.alpha;
  const double lambda = params.lambda;
  require(q >= 0.0 && (q < alpha || alpha == 1.0 || u > 0.0 || std::isfinite(upper)),
          "integrate_mllp_density: need 0 <= q < alpha for the heavy tail");
  const double scale = std::pow(lambda, -1.0 / alpha);  // natural length scale lambda^(-1/alpha)
  auto eval = [&](double x, double log_extra) {
    return density_core(x, t, alpha, lambda, log_extra, cfg, nullptr).value;
  };

  double X = upper;
  bool add_tail = false;
  if (!std::isfinite(upper)) {
    if (alpha == 1.0) {
      X = (t + q + 45.0 + 10.0 * std::sqrt(t + q)) / lambda;
    } else if (u > 0.0) {
      X = std::max(45.0 * scale, 60.0 / u);
    } else {
      X = 45.0 * scale;
      add_tail = true;
    }
  }
  Integral total = integrate_panels(eval, alpha * t, scale, X, q, u);
  if (add_tail) total = total + expansion_tail(q, X, t, alpha, lambda, cfg);
  return total;
}

Integral integrate_tempered_density(double t, const TemperedParams& params, double q, double u,
                                    const SeriesConfig& cfg) {
  params.validate();
  require_unit_beta(params.base, "integrate_tempered_density");
  require(t > 0.0 && q >= 0.0 && u >= 0.0, "integrate_tempered_density: need t > 0, q >= 0, u >= 0");
  const double alpha = params.base.alpha;
  const double w = std::pow(params.mu, alpha) - params.base.lambda;
  // Exponential decay rate of the density tail.
  const double growth = w > 0.0 ? std::pow(w, 1.0 / alpha) : 0.0;
  const double decay = params.mu + u - growth;
  const double scale = 1.0 / std::max(params.mu, std::pow(std::fabs(w), 1.0 / alpha));
  const double X = scale + (60.0 + 10.0 * (t + q)) / decay;
  auto eval = [&](double x, double log_extra) { return tempered_core(x, t, params, log_extra, cfg, nullptr).value; };
  return integrate_panels(eval, alpha * t, scale, X, q, u);
}

TabulatedCdf::TabulatedCdf(double lo, double hi, double t, const ProcessParams& params, int nodes_per_decade,
                           const SeriesConfig& cfg)
    : t_(t), params_(params), cfg_(cfg) {
  require(lo > 0.0 && hi > lo && std::isfinite(hi), "TabulatedCdf: need 0 < lo < hi");
  require(nodes_per_decade >= 4, "TabulatedCdf: nodes_per_decade must be at least 4");
  const double a = std::log(lo);
  const double b = std::log(hi);
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / std::numbers::ln10 * nodes_per_decade)) + 2;
  const double h = (b - a) / static_cast<double>(n - 1);
  log_x_.resize(n);
  value_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_x_[i] = i + 1 == n ? b : a + h * static_cast<double>(i);
    value_[i] = mllp_cdf(std::exp(log_x_[i]), t, params, cfg);
  }
  // Fritsch-Carlson monotone slopes.
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    secant[i] = std::max(0.0, value_[i + 1] - value_[i]) / h;
  }
  slope_.assign(n, 0.0);
  slope_[0] = secant[0];
  slope_[n - 1] = secant[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    slope_[i] = secant[i - 1] * secant[i] <= 0.0 ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (secant[i] == 0.0) {
      slope_[i] = 0.0;
      slope_[i + 1] = 0.0;
      continue;
    }
    const double r0 = slope_[i] / secant[i];
    const double r1 = slope_[i + 1] / secant[i];
    const double norm = r0 * r0 + r1 * r1;
    if (norm > 9.0) {
      const double tau = 3.0 / std::sqrt(norm);
      slope_[i] = tau * r0 * secant[i];
      slope_[i + 1] = tau * r1 * secant[i];
    }
  }
}

double TabulatedCdf::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  const double lx = std::log(x);
  if (lx < log_x_.front() || lx > log_x_.back()) {
    return mllp_cdf(x, t_, params_, cfg_);
  }
  auto it = std::upper_bound(log_x_.begin(), log_x_.end(), lx);
  std::size_t i = it == log_x_.begin() ? 0 : static_cast<std::size_t>(it - log_x_.begin()) - 1;
  if (i + 1 >= log_x_.size()) i = log_x_.size() - 2;
  const double h = log_x_[i + 1] - log_x_[i];
  const double s = (lx - log_x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return std::clamp(h00 * value_[i] + h10 * h * slope_[i] + h01 * value_[i + 1] + h11 * h * slope_[i + 1], 0.0, 1.0);
}

}  // namespace mllp
