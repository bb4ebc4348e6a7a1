#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mllp/analytics.hpp"
#include "mllp/verify.hpp"

namespace mllp {

namespace {

using json = nlohmann::ordered_json;

// One point of a check's parameter grid, with the check's scalar settings as fallback.
class Point {
 public:
  Point(std::string where, const json& check, std::vector<std::pair<std::string, double>> grid)
      : where_(std::move(where)), check_(check), grid_(std::move(grid)) {}

  double number(const std::string& key) const {
    for (const auto& [k, v] : grid_) {
      if (k == key) return v;
    }
    if (!check_.contains(key)) throw ConfigError(where_ + "." + key + ": missing");
    const json& v = check_.at(key);
    if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t count(const std::string& key) const {
    const double v = number(key);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
      throw ConfigError(where_ + "." + key + ": expected a positive integer");
    }
    return static_cast<std::uint64_t>(v);
  }

  bool flag(const std::string& key) const {
    if (!check_.contains(key)) return false;
    const json& v = check_.at(key);
    if (!v.is_boolean()) throw ConfigError(where_ + "." + key + ": expected true or false");
    return v.get<bool>();
  }

  bool has(const std::string& key) const {
    for (const auto& kv : grid_) {
      if (kv.first == key) return true;
    }
    return check_.contains(key);
  }

  // "alpha=0.5,lambda=1,...": grid values, then the scalar model parameters in config order.
  // Sample sizes and tolerances are left out.
  std::string label() const {
    static const std::set<std::string> skip = {"n", "steps", "tolerance", "batches", "nodes_per_decade",
                                               "repetitions", "max_failures", "level"};
    std::string out;
    char buf[96];
    auto add = [&](const std::string& k, double v) {
      std::snprintf(buf, sizeof buf, "%s%s=%g", out.empty() ? "" : ",", k.c_str(), v);
      out += buf;
    };
    for (const auto& [k, v] : grid_) add(k, v);
    for (const auto& [k, v] : check_.items()) {
      if (v.is_number() && !skip.count(k)) add(k, v.get<double>());
    }
    return out;
  }

  const std::string& where() const { return where_; }

 private:
  std::string where_;
  const json& check_;
  std::vector<std::pair<std::string, double>> grid_;
};

ProcessParams process_params(const Point& p) {
  ProcessParams params{p.number("alpha"), p.number("lambda"), 1.0};
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(p.where() + ": " + e.what());
  }
  return params;
}

TemperedParams tempered_params(const Point& p) {
  TemperedParams params{process_params(p), p.number("mu")};
  if (!(params.mu > 0.0)) throw ConfigError(p.where() + ".mu: must be positive");
  return params;
}

using Runner = CheckReport (*)(const Point&, RandomSource&, double level);

CheckReport ml_laplace(const Point& p, RandomSource& src, double) {
  const ProcessParams params = process_params(p);
  const double u = p.number("u");
  const std::uint64_t n = p.count("n");
  std::vector<double> draws(n);
  for (auto& x : draws) x = ml_variate(src, params.alpha, params.lambda);
  return se_check("", empirical_laplace(draws, u), mllp_laplace(u, 1.0, params), n, src.seed());
}

CheckReport path_laplace(const Point& p, RandomSource& src, double) {
  const ProcessParams params = process_params(p);
  const double u = p.number("u");
  const double t = p.number("t");
  const std::uint64_t n = p.count("n");
  const TimeGrid grid(t, p.count("steps"));
  std::vector<double> endpoints(n);
  for (auto& x : endpoints) x = simulate_mllp_path(src, params, grid).endpoint();
  return se_check("", empirical_laplace(endpoints, u), mllp_laplace(u, t, params), n, src.seed());
}

CheckReport ml_cdf_ks(const Point& p, RandomSource& src, double level) {
  const ProcessParams params = process_params(p);
  const std::uint64_t n = p.count("n");
  std::vector<double> draws(n);
  for (auto& x : draws) x = ml_variate(src, params.alpha, params.lambda);
  const auto [lo, hi] = std::minmax_element(draws.begin(), draws.end());
  const TabulatedCdf cdf(*lo, *hi * 1.0000001, 1.0, params, static_cast<int>(p.number("nodes_per_decade", 200)));
  CheckReport r = ks_one_sample(std::move(draws), std::cref(cdf), level);
  r.seed = src.seed();
  return r;
}

CheckReport grid_invariance(const Point& p, RandomSource& src, double level) {
  const ProcessParams params = process_params(p);
  const std::uint64_t n = p.count("n");
  const double t = p.number("t");
  const TimeGrid coarse(t, 1);
  const TimeGrid fine(t, p.count("steps"));
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (auto& x : a) x = simulate_mllp_path(src, params, coarse).endpoint();
  for (auto& x : b) x = simulate_mllp_path(src, params, fine).endpoint();
  CheckReport r = ks_two_sample(std::move(a), std::move(b), level);
  r.seed = src.seed();
  return r;
}

CheckReport limit_theorem(const Point& p, RandomSource& src, double level) {
  return check_limit_theorem(src, process_params(p), p.number("t"), p.count("n"), level);
}

CheckReport stable_attraction(const Point& p, RandomSource& src, double level) {
  return check_stable_attraction(src, process_params(p), p.count("n_summands"), p.count("n"), level);
}

CheckReport self_similarity(const Point& p, RandomSource& src, double level) {
  const double c = p.number("c");
  if (!(c > 1.0)) throw ConfigError(p.where() + ".c: must exceed 1");
  return check_self_similarity(src, process_params(p), c, p.count("n"), level, p.flag("wrong_index"));
}

CheckReport nb_laplace(const Point& p, RandomSource& src, double) {
  const ProcessParams params = process_params(p);
  const double c = p.number("c");
  if (!(c > 1.0)) throw ConfigError(p.where() + ".c: must exceed 1");
  const double u = p.number("u");
  const std::uint64_t n = p.count("n");
  const std::vector<double> draws = simulate_nb_subordinated(src, params, c, n);
  const double expected = params.lambda / (params.lambda + c * std::pow(u, params.alpha));
  return se_check("", empirical_laplace(draws, u), expected, n, src.seed());
}

CheckReport fractional_moment_check(const Point& p, RandomSource& src, double) {
  const ProcessParams params = process_params(p);
  const double q = p.number("q_over_alpha") * params.alpha;
  return check_fractional_moment(src, params, q, p.number("t"), p.count("n"),
                                 static_cast<std::uint64_t>(p.number("batches", 100)));
}

std::vector<double> tempered_endpoints(const Point& p, RandomSource& src, const TemperedParams& params) {
  return sample_tempered_marginal(src, params, p.number("t"), p.count("n"));
}

CheckReport tempered_mean(const Point& p, RandomSource& src, double) {
  const TemperedParams params = tempered_params(p);
  const auto draws = tempered_endpoints(p, src, params);
  return se_check("", sample_mean(draws), tempered_moments(p.number("t"), params).mean, draws.size(), src.seed());
}

CheckReport tempered_variance(const Point& p, RandomSource& src, double) {
  const TemperedParams params = tempered_params(p);
  const auto draws = tempered_endpoints(p, src, params);
  return se_check("", sample_variance(draws), tempered_moments(p.number("t"), params).variance, draws.size(),
                  src.seed());
}

CheckReport tempered_laplace_check(const Point& p, RandomSource& src, double) {
  const TemperedParams params = tempered_params(p);
  const double u = p.number("u");
  const auto draws = tempered_endpoints(p, src, params);
  return se_check("", empirical_laplace(draws, u), tempered_laplace(u, p.number("t"), params), draws.size(),
                  src.seed());
}

CheckReport normalization(const Point& p, RandomSource&, double) {
  const ProcessParams params = process_params(p);
  return tolerance_check("", integrate_mllp_density(p.number("t"), params).value, 1.0, p.number("tolerance"));
}

CheckReport tempered_normalization(const Point& p, RandomSource&, double) {
  const TemperedParams params = tempered_params(p);
  return tolerance_check("", integrate_tempered_density(p.number("t"), params).value, 1.0, p.number("tolerance"));
}

CheckReport ks_calibration(const Point& p, RandomSource& src, double level) {
  const std::uint64_t reps = p.count("repetitions");
  const std::uint64_t n = p.count("n");
  std::uint64_t failures = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (auto& x : a) x = src.uniform01();
    for (auto& x : b) x = src.uniform01();
    if (!ks_two_sample(std::move(a), std::move(b), level).passed) ++failures;
  }
  CheckReport r;
  r.statistic = static_cast<double>(failures);
  r.threshold = p.number("max_failures");
  r.passed = r.statistic <= r.threshold;
  r.n_samples = 2 * n * reps;
  r.seed = src.seed();
  char buf[128];
  std::snprintf(buf, sizeof buf, "%llu of %llu null two-sample KS runs rejected",
                static_cast<unsigned long long>(failures), static_cast<unsigned long long>(reps));
  r.details = buf;
  return r;
}

struct CheckType {
  Runner run;
  std::set<std::string> keys;  // allowed scalar or grid keys besides type/name/grid/level/negative_control
};

const std::map<std::string, CheckType>& registry() {
  static const std::map<std::string, CheckType> types = {
      {"ml_laplace", {ml_laplace, {"alpha", "lambda", "u", "n"}}},
      {"path_laplace", {path_laplace, {"alpha", "lambda", "u", "t", "n", "steps"}}},
      {"ml_cdf_ks", {ml_cdf_ks, {"alpha", "lambda", "n", "nodes_per_decade"}}},
      {"grid_invariance", {grid_invariance, {"alpha", "lambda", "t", "n", "steps"}}},
      {"limit_theorem", {limit_theorem, {"alpha", "lambda", "t", "n"}}},
      {"stable_attraction", {stable_attraction, {"alpha", "lambda", "n_summands", "n"}}},
      {"self_similarity", {self_similarity, {"alpha", "lambda", "c", "n", "wrong_index"}}},
      {"nb_laplace", {nb_laplace, {"alpha", "lambda", "c", "u", "n"}}},
      {"fractional_moment", {fractional_moment_check, {"alpha", "lambda", "q_over_alpha", "t", "n", "batches"}}},
      {"tempered_mean", {tempered_mean, {"alpha", "lambda", "mu", "t", "n"}}},
      {"tempered_variance", {tempered_variance, {"alpha", "lambda", "mu", "t", "n"}}},
      {"tempered_laplace", {tempered_laplace_check, {"alpha", "lambda", "mu", "t", "u", "n"}}},
      {"normalization", {normalization, {"alpha", "lambda", "t", "tolerance"}}},
      {"tempered_normalization", {tempered_normalization, {"alpha", "lambda", "mu", "t", "tolerance"}}},
      {"ks_calibration", {ks_calibration, {"repetitions", "n", "max_failures"}}},
  };
  return types;
}

std::vector<std::vector<std::pair<std::string, double>>> expand_grid(const json& check, const std::string& where,
                                                                     const std::set<std::string>& allowed) {
  std::vector<std::vector<std::pair<std::string, double>>> points{{}};
  if (!check.contains("grid")) return points;
  const json& grid = check.at("grid");
  if (!grid.is_object()) throw ConfigError(where + ".grid: expected an object");
  for (const auto& [key, values] : grid.items()) {
    const std::string at = where + ".grid." + key;
    if (!allowed.count(key)) throw ConfigError(at + ": unknown key");
    if (!values.is_array()) throw ConfigError(at + ": expected an array of numbers");
    std::vector<std::vector<std::pair<std::string, double>>> next;
    for (const auto& point : points) {
      for (const auto& v : values) {
        if (!v.is_number()) throw ConfigError(at + ": expected an array of numbers");
        auto extended = point;
        extended.emplace_back(key, v.get<double>());
        next.push_back(std::move(extended));
      }
    }
    points = std::move(next);
  }
  return points;
}

}  // namespace

std::vector<CheckReport> run_suite(std::uint64_t seed, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("config: cannot read '" + config_path + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!config.is_object()) throw ConfigError("config: expected a JSON object at top level");
  for (const auto& [key, value] : config.items()) {
    if (key != "level" && key != "checks") throw ConfigError(key + ": unknown key");
  }
  double level = 0.01;
  if (config.contains("level")) {
    if (!config["level"].is_number()) throw ConfigError("level: expected a number");
    level = config["level"].get<double>();
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("level: must lie in (0, 1)");
  }
  if (!config.contains("checks")) throw ConfigError("checks: missing");
  const json& checks = config["checks"];
  if (!checks.is_array()) throw ConfigError("checks: expected an array");

  // Validate everything before running anything.
  struct Planned {
    const CheckType* type;
    std::string name;
    std::string where;
    double level;
    bool negative_control;
    std::vector<std::vector<std::pair<std::string, double>>> points;
  };
  std::vector<Planned> plan;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string where = "checks[" + std::to_string(i) + "]";
    const json& check = checks[i];
    if (!check.is_object()) throw ConfigError(where + ": expected an object");
    if (!check.contains("type") || !check["type"].is_string()) throw ConfigError(where + ".type: missing");
    const std::string type_name = check["type"].get<std::string>();
    const auto found = registry().find(type_name);
    if (found == registry().end()) throw ConfigError(where + ".type: unknown check type '" + type_name + "'");
    const CheckType& type = found->second;
    for (const auto& [key, value] : check.items()) {
      static const std::set<std::string> common = {"type", "name", "grid", "level", "negative_control"};
      if (!common.count(key) && !type.keys.count(key)) throw ConfigError(where + "." + key + ": unknown key");
    }
    Planned p{&type, type_name, where, level, false, expand_grid(check, where, type.keys)};
    if (check.contains("name")) {
      if (!check["name"].is_string()) throw ConfigError(where + ".name: expected a string");
      p.name = check["name"].get<std::string>();
    }
    if (check.contains("level")) {
      if (!check["level"].is_number()) throw ConfigError(where + ".level: expected a number");
      p.level = check["level"].get<double>();
      if (!(p.level > 0.0 && p.level < 1.0)) throw ConfigError(where + ".level: must lie in (0, 1)");
    }
    if (check.contains("negative_control")) {
      if (!check["negative_control"].is_boolean()) throw ConfigError(where + ".negative_control: expected true or false");
      p.negative_control = check["negative_control"].get<bool>();
    }
    plan.push_back(std::move(p));
  }

  std::vector<CheckReport> reports;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const Planned& p = plan[i];
    const std::uint64_t check_seed = derive_seed(seed, i);
    for (std::size_t j = 0; j < p.points.size(); ++j) {
      const Point point(p.where, checks[i], p.points[j]);
      RandomSource src(derive_seed(check_seed, j));
      CheckReport r;
      try {
        r = p.type->run(point, src, p.level);
      } catch (const DomainError& e) {
        throw ConfigError(p.where + ": " + e.what());
      }
      const std::string label = point.label();
      r.name = label.empty() ? p.name : p.name + "[" + label + "]";
      r.negative_control = r.negative_control || p.negative_control;
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

}  // namespace mllp
