#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mllp/process.hpp"

namespace mllp {

/// Outcome of one statistical or numerical check.
struct CheckReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::string details;
  /// A negative control is expected to fail; ok() is then true when passed is false.
  bool negative_control = false;

  bool ok() const { return passed != negative_control; }
};

struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sample mean and its standard error (sample standard deviation / sqrt(n)). Throws EmptySample.
Estimate sample_mean(const std::vector<double>& values);

/// Unbiased sample variance with its large-sample standard error sqrt((m4 - s^4) / n).
Estimate sample_variance(const std::vector<double>& values);

/// Mean of exp(-u x_i) with its standard error. Throws EmptySample.
Estimate empirical_laplace(const std::vector<double>& sample, double u);

/// c(level) * sqrt((n + m) / (n m)), with m = 0 meaning the one-sample value c(level) / sqrt(n).
/// c(level) = sqrt(-ln(level / 2) / 2) is the asymptotic Kolmogorov quantile.
double ks_critical_value(double level, std::uint64_t n, std::uint64_t m = 0);

/// Asymptotic Kolmogorov tail probability P(K > x).
double kolmogorov_survival(double x);

CheckReport ks_two_sample(std::vector<double> a, std::vector<double> b, double level,
                          const std::string& name = "ks_two_sample");

/// Throws EmptySample, and NonMonotoneCdf if the CDF decreases along the sorted sample
/// (beyond 1e-12) or leaves [0, 1].
CheckReport ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf, double level,
                          const std::string& name = "ks_one_sample");

/// |(estimate - expected) / std_error| <= threshold; a zero standard error requires equality.
CheckReport se_check(const std::string& name, const Estimate& est, double expected, std::uint64_t n,
                     std::uint64_t seed, double threshold = 3.0);

/// |value - expected| <= tolerance, for deterministic numerical checks.
CheckReport tolerance_check(const std::string& name, double value, double expected, double tolerance);

/**
 * M(N_{1/c}(1)) against c^(1/alpha) M(1) by two-sample KS. With wrong_index the comparison
 * uses c^(1/(2 alpha)) and is reported as a negative control.
 */
CheckReport check_self_similarity(RandomSource& src, const ProcessParams& params, double c, std::uint64_t n,
                                  double level, bool wrong_index = false);

/// lambda^(1/alpha) M(t) / t^(1/alpha) against standard stable draws by two-sample KS.
CheckReport check_limit_theorem(RandomSource& src, const ProcessParams& params, double t, std::uint64_t n,
                                double level);

/// lambda^(1/alpha) n_summands^(-1/alpha) (X_1 + ... + X_n_summands), X_i Mittag-Leffler, against stable draws.
CheckReport check_stable_attraction(RandomSource& src, const ProcessParams& params, std::uint64_t n_summands,
                                    std::uint64_t n, double level);

/**
 * Mean of X^q over n draws of M(t) against the closed-form fractional moment. When 2q < alpha the
 * variance of X^q is finite and a 3-SE band is used; otherwise the median of `batches` batch means
 * must lie within 5% of the target.
 */
CheckReport check_fractional_moment(RandomSource& src, const ProcessParams& params, double q, double t,
                                    std::uint64_t n, std::uint64_t batches = 100);

/// Loads the JSON check list at config_path and runs every entry. Throws ConfigError.
std::vector<CheckReport> run_suite(std::uint64_t seed, const std::string& config_path);

/// One JSON object per line, no timing data, so equal runs give equal bytes.
std::string to_json_line(const CheckReport& report);

/// Fixed-width summary with the expected number of false positives at the given level.
std::string summary_table(const std::vector<CheckReport>& reports, double level);

}  // namespace mllp
