#include "mllp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "mllp/analytics.hpp"

namespace mllp {

namespace {

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("significance level must lie in (0, 1)");
}

}  // namespace

Estimate sample_mean(const std::vector<double>& values) {
  if (values.empty()) throw EmptySample("sample_mean: empty sample");
  // Welford keeps the variance accurate when the mean dominates.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  const double n = static_cast<double>(values.size());
  const double var = values.size() > 1 ? m2 / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

Estimate sample_variance(const std::vector<double>& values) {
  if (values.size() < 2) throw EmptySample("sample_variance: need at least two values");
  const double mean = sample_mean(values).estimate;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(values.size());
  const double var = m2 / (n - 1.0);
  const double fourth = m4 / n;
  // Large-sample standard error of the sample variance: sqrt((mu_4 - sigma^4) / n).
  return {var, std::sqrt(std::max(0.0, fourth - var * var) / n)};
}

Estimate empirical_laplace(const std::vector<double>& sample, double u) {
  if (sample.empty()) throw EmptySample("empirical_laplace: empty sample");
  if (!(u >= 0.0)) throw DomainError("empirical_laplace: u must be nonnegative");
  if (u == 0.0) return {1.0, 0.0};
  std::vector<double> e(sample.size());
  std::transform(sample.begin(), sample.end(), e.begin(), [u](double x) { return std::exp(-u * x); });
  return sample_mean(e);
}

double ks_critical_value(double level, std::uint64_t n, std::uint64_t m) {
  require_level(level);
  if (n == 0) throw EmptySample("ks_critical_value: empty sample");
  const double c = std::sqrt(-0.5 * std::log(level / 2.0));
  const double dn = static_cast<double>(n);
  if (m == 0) return c / std::sqrt(dn);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // the alternating series loses accuracy here and P(K > 0.2) rounds to 1
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k & 1) ? term : -term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

CheckReport ks_two_sample(std::vector<double> a, std::vector<double> b, double level, const std::string& name) {
  require_level(level);
  if (a.empty() || b.empty()) throw EmptySample("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Step past every copy of the smaller value so ties do not open spurious gaps.
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  CheckReport r;
  r.name = name;
  r.statistic = d;
  r.threshold = ks_critical_value(level, a.size(), b.size());
  r.passed = d <= r.threshold;
  r.n_samples = a.size() + b.size();
  const double scaled = d * std::sqrt(na * nb / (na + nb));
  r.details = format("two-sample KS, n=%.0f m=%.0f, asymptotic p=%.4g", na, nb, kolmogorov_survival(scaled));
  return r;
}

CheckReport ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf, double level,
                          const std::string& name) {
  require_level(level);
  if (sample.empty()) throw EmptySample("ks_one_sample: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  double previous = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    if (!(f >= 0.0 && f <= 1.0)) throw NonMonotoneCdf("ks_one_sample: CDF value outside [0, 1]");
    if (f < previous - 1e-12) {
      throw NonMonotoneCdf("ks_one_sample: CDF decreases at x=" + format("%.17g", sample[i]));
    }
    previous = std::max(previous, f);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  CheckReport r;
  r.name = name;
  r.statistic = d;
  r.threshold = ks_critical_value(level, sample.size());
  r.passed = d <= r.threshold;
  r.n_samples = sample.size();
  r.details = format("one-sample KS, n=%.0f, asymptotic p=%.4g", n, kolmogorov_survival(d * std::sqrt(n)));
  return r;
}

CheckReport se_check(const std::string& name, const Estimate& est, double expected, std::uint64_t n,
                     std::uint64_t seed, double threshold) {
  CheckReport r;
  r.name = name;
  const double diff = est.estimate - expected;
  if (est.std_error > 0.0) {
    r.statistic = diff / est.std_error;
  } else {
    r.statistic = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  r.threshold = threshold;
  r.passed = std::fabs(r.statistic) <= threshold;
  r.n_samples = n;
  r.seed = seed;
  r.details = format("estimate=%.10g expected=%.10g se=%.4g", est.estimate, expected, est.std_error);
  return r;
}

CheckReport tolerance_check(const std::string& name, double value, double expected, double tolerance) {
  CheckReport r;
  r.name = name;
  r.statistic = std::fabs(value - expected);
  r.threshold = tolerance;
  r.passed = r.statistic <= tolerance;
  r.details = format("value=%.15g expected=%.15g", value, expected);
  return r;
}

CheckReport check_self_similarity(RandomSource& src, const ProcessParams& params, double c, std::uint64_t n,
                                  double level, bool wrong_index) {
  params.validate();
  const std::uint64_t seed = src.seed();
  const std::vector<double> subordinated = simulate_nb_subordinated(src, params, c, n);
  std::vector<double> scaled = sample_mllp_marginal(src, params, 1.0, n);
  const double index = wrong_index ? 1.0 / (2.0 * params.alpha) : 1.0 / params.alpha;
  const double factor = std::pow(c, index);
  for (auto& x : scaled) x *= factor;
  CheckReport r = ks_two_sample(subordinated, std::move(scaled), level,
                                wrong_index ? "self_similarity_wrong_index" : "self_similarity");
  r.seed = seed;
  r.negative_control = wrong_index;
  r.details += format("; alpha=%g lambda=%g c=%g", params.alpha, params.lambda, c);
  return r;
}

CheckReport check_limit_theorem(RandomSource& src, const ProcessParams& params, double t, std::uint64_t n,
                                double level) {
  params.validate();
  const std::uint64_t seed = src.seed();
  std::vector<double> rescaled = sample_mllp_marginal(src, params, t, n);
  const double factor = std::pow(params.lambda / t, 1.0 / params.alpha);
  for (auto& x : rescaled) x *= factor;
  std::vector<double> stable(n);
  for (auto& x : stable) x = stable_variate(src, params.alpha);
  CheckReport r = ks_two_sample(std::move(rescaled), std::move(stable), level, "limit_theorem");
  r.seed = seed;
  r.details += format("; alpha=%g lambda=%g t=%g", params.alpha, params.lambda, t);
  return r;
}

CheckReport check_stable_attraction(RandomSource& src, const ProcessParams& params, std::uint64_t n_summands,
                                    std::uint64_t n, double level) {
  params.validate();
  if (n_summands < 1) throw DomainError("check_stable_attraction: n_summands must be positive");
  const std::uint64_t seed = src.seed();
  const double factor = std::pow(params.lambda / static_cast<double>(n_summands), 1.0 / params.alpha);
  std::vector<double> sums(n);
  for (auto& x : sums) {
    double total = 0.0;
    for (std::uint64_t i = 0; i < n_summands; ++i) total += ml_variate(src, params.alpha, params.lambda);
    x = factor * total;
  }
  std::vector<double> stable(n);
  for (auto& x : stable) x = stable_variate(src, params.alpha);
  CheckReport r = ks_two_sample(std::move(sums), std::move(stable), level, "stable_attraction");
  r.seed = seed;
  r.details += format("; alpha=%g lambda=%g summands=%g", params.alpha, params.lambda,
                      static_cast<double>(n_summands));
  return r;
}

CheckReport check_fractional_moment(RandomSource& src, const ProcessParams& params, double q, double t,
                                    std::uint64_t n, std::uint64_t batches) {
  const double expected = fractional_moment(q, t, params);
  const std::uint64_t seed = src.seed();
  std::vector<double> powered = sample_mllp_marginal(src, params, t, n);
  for (auto& x : powered) x = std::pow(x, q);
  if (2.0 * q < params.alpha) {
    CheckReport r = se_check("fractional_moment", sample_mean(powered), expected, n, seed);
    r.details += format("; alpha=%g q=%g t=%g", params.alpha, q, t);
    return r;
  }
  if (batches < 1 || batches > n) throw DomainError("check_fractional_moment: need 1 <= batches <= n");
  std::vector<double> means(batches);
  const std::uint64_t per = n / batches;
  for (std::uint64_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::uint64_t i = b * per; i < (b + 1) * per; ++i) s += powered[i];
    means[b] = s / static_cast<double>(per);
  }
  std::nth_element(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(batches / 2), means.end());
  double median = means[batches / 2];
  if (batches % 2 == 0) {
    median = 0.5 * (median + *std::max_element(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(batches / 2)));
  }
  CheckReport r = tolerance_check("fractional_moment_batch_median", median / expected, 1.0, 0.05);
  r.n_samples = n;
  r.seed = seed;
  r.details = format("median of batch means=%.10g expected=%.10g", median, expected) +
              format("; alpha=%g q=%g t=%g", params.alpha, q, t);
  return r;
}

std::string to_json_line(const CheckReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["statistic"] = report.statistic;
  j["threshold"] = report.threshold;
  j["passed"] = report.passed;
  j["negative_control"] = report.negative_control;
  j["ok"] = report.ok();
  j["n_samples"] = report.n_samples;
  j["seed"] = report.seed;
  j["details"] = report.details;
  return j.dump();
}

std::string summary_table(const std::vector<CheckReport>& reports, double level) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-64s %14s %12s  %-6s %s\n", "check", "statistic", "threshold", "result",
                "control");
  out << line;
  std::size_t failures = 0;
  std::size_t stochastic = 0;
  std::size_t bad_null = 0;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-64.64s %14.6g %12.6g  %-6s %s\n", r.name.c_str(), r.statistic, r.threshold,
                  r.ok() ? "ok" : "FAIL", r.negative_control ? "negative" : "");
    out << line;
    if (!r.ok()) ++failures;
    if (!r.negative_control && r.n_samples > 0) {
      ++stochastic;
      if (!r.passed) ++bad_null;
    }
  }
  std::snprintf(line, sizeof line,
                "%zu checks, %zu not ok; %zu stochastic checks at level %g: expected false positives %.2f, "
                "observed %zu\n",
                reports.size(), failures, stochastic, level, level * static_cast<double>(stochastic), bad_null);
  out << line;
  return out.str();
}

}  // namespace mllp
