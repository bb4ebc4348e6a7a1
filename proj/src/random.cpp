#include "mllp/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mllp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) {
    word = splitmix64(sm);
  }
}

std::uint64_t RandomSource::next_u64() {
  auto& s = state_;
  const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
  const std::uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

double RandomSource::uniform01() {
  // 52 bits so that the half-step offset is exact; with 53 bits the top value rounds to 1.0.
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (0xD1B54A32D192ED03ULL * (index + 1));
  splitmix64(state);
  return splitmix64(state);
}

double exponential(RandomSource& src, double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential: rate must be positive");
  return exponential_from_uniform(src.uniform01(), rate);
}

double standard_normal(RandomSource& src) {
  for (;;) {
    const double v1 = 2.0 * src.uniform01() - 1.0;
    const double v2 = 2.0 * src.uniform01() - 1.0;
    const double s = v1 * v1 + v2 * v2;
    if (s < 1.0 && s > 0.0) {
      return v1 * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

namespace {

// Marsaglia-Tsang for shape >= 1, unit rate.
double gamma_unit_large(RandomSource& src, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(src);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = src.uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double gamma_variate(RandomSource& src, double rate, double shape) {
  require(rate > 0.0 && std::isfinite(rate), "gamma_variate: rate must be positive");
  require(shape > 0.0 && std::isfinite(shape), "gamma_variate: shape must be positive");
  if (shape >= 1.0) {
    return gamma_unit_large(src, shape) / rate;
  }
  const double boosted = gamma_unit_large(src, shape + 1.0);
  const double u = src.uniform01();
  return std::exp(std::log(boosted) + std::log(u) / shape) / rate;
}

double stable_variate(RandomSource& src, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "stable_variate: alpha must lie in (0, 1)");
  const double theta = std::numbers::pi * src.uniform01();
  const double w = exponential(src, 1.0);
  const double ratio = (1.0 - alpha) / alpha;
  const double log_s = std::log(std::sin(alpha * theta)) + ratio * std::log(std::sin((1.0 - alpha) * theta)) -
                       std::log(std::sin(theta)) / alpha - ratio * std::log(w);
  return std::exp(log_s);
}

double tempered_stable_variate(RandomSource& src, double alpha, double mu, double t_scale, TemperedStats* stats,
                               const TemperedOptions& options) {
  require(alpha > 0.0 && alpha < 1.0, "tempered_stable_variate: alpha must lie in (0, 1)");
  require(mu > 0.0 && std::isfinite(mu), "tempered_stable_variate: mu must be positive");
  require(t_scale > 0.0 && std::isfinite(t_scale), "tempered_stable_variate: t_scale must be positive");
  require(options.max_piece_exponent > 0.0, "tempered_stable_variate: max_piece_exponent must be positive");

  const double exponent = t_scale * std::pow(mu, alpha);
  const double pieces_real = std::ceil(exponent / options.max_piece_exponent);
  if (pieces_real > 1e9) {
    throw DomainError("tempered_stable_variate: t_scale * mu^alpha too large");
  }
  const auto pieces = static_cast<std::uint64_t>(std::max(1.0, pieces_real));
  const double piece_t = t_scale / static_cast<double>(pieces);
  const double scale = std::pow(piece_t, 1.0 / alpha);
  // Acceptance probability of one piece is exp(-piece_t mu^alpha).
  const bool low_efficiency = piece_t * std::pow(mu, alpha) > -std::log(1e-6);

  double total = 0.0;
  for (std::uint64_t i = 0; i < pieces; ++i) {
    if (stats != nullptr && low_efficiency) ++stats->low_efficiency_events;
    for (;;) {
      const double s = scale * stable_variate(src, alpha);
      if (stats != nullptr) ++stats->proposals;
      if (src.uniform01() <= std::exp(-mu * s)) {
        if (stats != nullptr) ++stats->accepted;
        total += s;
        break;
      }
    }
  }
  return total;
}

double ml_variate(RandomSource& src, double alpha, double lambda) {
  require(alpha > 0.0 && alpha < 1.0, "ml_variate: alpha must lie in (0, 1)");
  require(lambda > 0.0 && std::isfinite(lambda), "ml_variate: lambda must be positive");
  const double g = exponential(src, lambda);
  return std::pow(g, 1.0 / alpha) * stable_variate(src, alpha);
}

std::uint64_t poisson_variate(RandomSource& src, double mean) {
  require(mean >= 0.0 && std::isfinite(mean), "poisson_variate: mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    double p = std::exp(-mean);
    double cumulative = p;
    const double u = src.uniform01();
    std::uint64_t k = 0;
    while (u > cumulative) {
      ++k;
      p *= mean / static_cast<double>(k);
      cumulative += p;
      if (p == 0.0) break;  // u lies in the rounding gap above the final cumulative sum
    }
    return k;
  }
  // PTRS: Hormann, "The transformed rejection method for generating Poisson random variables" (1993).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = src.uniform01() - 0.5;
    const double v = src.uniform01();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) {
      return static_cast<std::uint64_t>(k);
    }
    if (k < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::uint64_t negbin_variate(RandomSource& src, double t_shape, double p) {
  require(t_shape > 0.0 && std::isfinite(t_shape), "negbin_variate: t_shape must be positive");
  require(p > 0.0 && p < 1.0, "negbin_variate: p must lie in (0, 1)");
  const double intensity = gamma_variate(src, p / (1.0 - p), t_shape);
  return poisson_variate(src, intensity);
}

}  // namespace mllp
