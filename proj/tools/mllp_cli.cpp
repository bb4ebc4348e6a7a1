// mllp: simulation, analytic tables and the verification suite from the command line.
//
// Exit status: 0 success, 1 a verification check failed (or --strict saw a failed row),
// 2 usage, configuration or I/O error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mllp/analytics.hpp"
#include "mllp/io.hpp"
#include "mllp/process.hpp"
#include "mllp/verify.hpp"

namespace {

using mllp::format_double;
using mllp::Table;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<double> alpha;
  double lambda = 1.0;
  double beta = 1.0;
  std::optional<double> mu;
  bool tempered = false;
  std::string out = "-";
  std::string format = "csv";
  bool strict = false;
  std::optional<std::uint64_t> seed;
};

struct Range {
  std::vector<double> values;
  std::optional<double> min;
  std::optional<double> max;
  std::size_t n = 50;
  bool log_spacing = false;
};

void add_process_flags(CLI::App* cmd, Common& c, bool with_beta) {
  cmd->add_option("--alpha", c.alpha, "stability index in (0, 1]")->required();
  cmd->add_option("--lambda", c.lambda, "gamma subordinator rate")->capture_default_str();
  if (with_beta) cmd->add_option("--beta", c.beta, "gamma subordinator shape per unit time")->capture_default_str();
  cmd->add_option("--mu", c.mu, "tempering parameter (implies the tempered process)");
  cmd->add_flag("--tempered", c.tempered, "use the tempered process (requires --mu)");
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output file, - for standard output")->capture_default_str();
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_range_flags(CLI::App* cmd, Range& r, const std::string& var, const std::string& what) {
  cmd->add_option("--" + var, r.values, "explicit " + what + " values (repeat or comma-separate)")->delimiter(',');
  cmd->add_option("--" + var + "-min", r.min, "range start");
  cmd->add_option("--" + var + "-max", r.max, "range end");
  cmd->add_option("--n", r.n, "number of range points")->capture_default_str();
  cmd->add_flag("--log-spacing", r.log_spacing, "geometric instead of linear spacing");
}

std::vector<double> resolve(const Range& r, const std::string& var, bool positive) {
  std::vector<double> values = r.values;
  if (values.empty()) {
    if (!r.min || !r.max) throw UsageError("give --" + var + " or both --" + var + "-min and --" + var + "-max");
    const double lo = *r.min;
    const double hi = *r.max;
    if (!(hi >= lo)) throw UsageError("--" + var + "-max must not be below --" + var + "-min");
    if (r.n < 1) throw UsageError("--n must be at least 1");
    if (r.log_spacing && !(lo > 0.0)) throw UsageError("--log-spacing needs a positive range");
    for (std::size_t i = 0; i < r.n; ++i) {
      const double f = r.n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(r.n - 1);
      values.push_back(r.log_spacing ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                     : lo + f * (hi - lo));
    }
    values.front() = lo;
    values.back() = r.n == 1 ? lo : hi;
  }
  for (double v : values) {
    if (!std::isfinite(v) || (positive ? !(v > 0.0) : !(v >= 0.0))) {
      throw UsageError("--" + var + " values must be " + (positive ? "positive" : "nonnegative") + " and finite");
    }
  }
  return values;
}

bool is_tempered(const Common& c) {
  if (c.tempered && !c.mu) throw UsageError("--tempered requires --mu");
  return c.mu.has_value();
}

mllp::ProcessParams process_params(const Common& c, bool allow_unit_alpha) {
  mllp::ProcessParams p{*c.alpha, c.lambda, c.beta};
  p.validate(allow_unit_alpha);
  return p;
}

mllp::TemperedParams tempered_params(const Common& c) {
  mllp::TemperedParams p{process_params(c, false), *c.mu};
  p.validate();
  return p;
}

struct SeedChoice {
  std::uint64_t value;
  std::string source;
};

SeedChoice choose_seed(const Common& c) {
  if (c.seed) return {*c.seed, "flag"};
  if (const char* env = std::getenv("MLLP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*env == '\0' || *end != '\0') throw UsageError("MLLP_SEED must be a decimal integer");
    return {static_cast<std::uint64_t>(v), "env:MLLP_SEED"};
  }
  return {1, "default"};
}

void emit(const Common& c, const Table& table) {
  std::ostringstream body;
  if (c.format == "json") {
    body << mllp::table_to_json(table);
  } else {
    mllp::write_csv(body, table);
  }
  if (c.out == "-") {
    std::cout << body.str();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open '" + c.out + "' for writing");
  f << body.str();
  if (!f) throw std::ios_base::failure("write to '" + c.out + "' failed");
}

void write_manifest(const Common& c, const std::string& subcommand, const std::vector<std::string>& argv,
                    nlohmann::ordered_json params, const std::optional<SeedChoice>& seed) {
  if (c.out == "-") return;
  nlohmann::ordered_json m;
  m["tool"] = "mllp";
  m["version"] = MLLP_VERSION;
  m["subcommand"] = subcommand;
  m["argv"] = argv;
  m["params"] = std::move(params);
  if (seed) {
    m["seed"] = seed->value;
    m["seed_source"] = seed->source;
  }
  m["output"] = c.out;
  m["format"] = c.format;
  const std::string path = c.out + ".manifest.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  f << m.dump(2) << "\n";
}

nlohmann::ordered_json params_json(const Common& c) {
  nlohmann::ordered_json j;
  j["alpha"] = *c.alpha;
  j["lambda"] = c.lambda;
  j["beta"] = c.beta;
  if (c.mu) j["mu"] = *c.mu;
  return j;
}

// Evaluates one row; failures become a nan sentinel and are reported on stderr.
template <class F>
std::string guarded(F&& f, const std::string& where, bool& failed) {
  try {
    return format_double(f());
  } catch (const mllp::SeriesError& e) {
    std::cerr << "mllp: " << where << ": " << e.what() << "\n";
  } catch (const mllp::IntegrationFailure& e) {
    std::cerr << "mllp: " << where << ": " << e.what() << "\n";
  }
  failed = true;
  return "nan";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mittag-Leffler Levy process toolkit"};
  app.set_version_flag("--version", MLLP_VERSION);
  app.require_subcommand(1);
  const std::vector<std::string> args(argv + 1, argv + argc);

  Common c;

  // simulate
  double horizon = 1.0;
  std::size_t steps = 1000;
  std::size_t paths = 1;
  auto* simulate = app.add_subcommand("simulate", "simulate sample paths by gamma subordination");
  add_process_flags(simulate, c, true);
  simulate->add_option("--horizon", horizon, "final time")->capture_default_str();
  simulate->add_option("--steps", steps, "grid steps per path")->capture_default_str();
  simulate->add_option("--paths", paths, "number of paths")->capture_default_str();
  simulate->add_option("--seed", c.seed, "64-bit seed (default: MLLP_SEED or 1)");
  add_output_flags(simulate, c);

  // density
  double t = 1.0;
  Range xs;
  auto* density = app.add_subcommand("density", "marginal density f(x) at time t");
  add_process_flags(density, c, false);
  density->add_option("--t", t, "time")->capture_default_str();
  add_range_flags(density, xs, "x", "x");
  add_output_flags(density, c);
  density->add_flag("--strict", c.strict, "exit 1 if any row fails to evaluate");

  // levy
  auto* levy = app.add_subcommand("levy", "Levy density nu(x)");
  add_process_flags(levy, c, false);
  add_range_flags(levy, xs, "x", "x");
  add_output_flags(levy, c);
  levy->add_flag("--strict", c.strict, "exit 1 if any row fails to evaluate");

  // moments
  Range qs;
  std::vector<double> times;
  auto* moments = app.add_subcommand("moments", "fractional moments E M(t)^q, or tempered mean and variance");
  add_process_flags(moments, c, false);
  moments->add_option("--t", times, "time(s)")->delimiter(',');
  add_range_flags(moments, qs, "q", "moment order");
  add_output_flags(moments, c);
  moments->add_flag("--strict", c.strict, "exit 1 if any row fails to evaluate");

  // laplace
  Range us;
  auto* laplace = app.add_subcommand("laplace", "Laplace transform E exp(-u M(t))");
  add_process_flags(laplace, c, true);
  laplace->add_option("--t", t, "time")->capture_default_str();
  add_range_flags(laplace, us, "u", "u");
  add_output_flags(laplace, c);

  // verify
  std::string config_path;
  auto* verify = app.add_subcommand("verify", "run the Monte Carlo verification suite");
  verify->add_option("--config", config_path, "suite configuration (JSON)")->required();
  verify->add_option("--seed", c.seed, "64-bit master seed (default: MLLP_SEED or 1)");
  verify->add_option("--out", c.out, "JSON-lines report file, - for standard output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) {
      if (steps < 1 || paths < 1) throw UsageError("--steps and --paths must be at least 1");
      const SeedChoice seed = choose_seed(c);
      const mllp::TimeGrid grid(horizon, steps);
      const bool tempered = is_tempered(c);
      Table table;
      table.header = paths > 1 ? std::vector<std::string>{"path", "t", "value"} : std::vector<std::string>{"t", "value"};
      std::optional<mllp::TemperedParams> tp;
      std::optional<mllp::ProcessParams> pp;
      if (tempered) {
        tp = tempered_params(c);
      } else {
        pp = process_params(c, false);
      }
      for (std::size_t p = 0; p < paths; ++p) {
        mllp::RandomSource src(paths > 1 ? mllp::derive_seed(seed.value, p) : seed.value);
        const mllp::SamplePath path = tempered ? mllp::simulate_tempered_mllp_path(src, *tp, grid)
                                               : mllp::simulate_mllp_path(src, *pp, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          std::vector<std::string> row;
          if (paths > 1) row.push_back(std::to_string(p));
          row.push_back(format_double(grid.at(i)));
          row.push_back(format_double(path.values[i]));
          table.rows.push_back(std::move(row));
        }
      }
      emit(c, table);
      auto params = params_json(c);
      params["horizon"] = horizon;
      params["steps"] = steps;
      params["paths"] = paths;
      params["tempered"] = tempered;
      write_manifest(c, "simulate", args, params, seed);
      return kOk;
    }

    if (*density || *levy) {
      const bool is_density = density->parsed();
      const std::vector<double> x = resolve(xs, "x", true);
      const bool tempered = is_tempered(c);
      std::optional<mllp::TemperedParams> tp;
      std::optional<mllp::ProcessParams> pp;
      if (tempered) {
        tp = tempered_params(c);
      } else {
        pp = process_params(c, true);
      }
      if (!(t > 0.0)) throw UsageError("--t must be positive");
      Table table;
      table.header = {"x", is_density ? "f" : "nu"};
      bool failed = false;
      for (double v : x) {
        const std::string where = "x=" + format_double(v);
        std::string cell;
        if (is_density) {
          cell = guarded([&] { return tempered ? mllp::tempered_density(v, t, *tp).value
                                               : mllp::mllp_density(v, t, *pp).value; },
                         where, failed);
        } else {
          cell = guarded([&] { return tempered ? mllp::tempered_levy_density(v, *tp)
                                               : mllp::mllp_levy_density(v, *pp); },
                         where, failed);
        }
        table.rows.push_back({format_double(v), cell});
      }
      emit(c, table);
      auto params = params_json(c);
      if (is_density) params["t"] = t;
      write_manifest(c, is_density ? "density" : "levy", args, params, std::nullopt);
      return failed && c.strict ? kCheckFailed : kOk;
    }

    if (*moments) {
      const bool tempered = is_tempered(c);
      if (times.empty()) times = {1.0};
      for (double v : times) {
        if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("--t values must be positive");
      }
      Table table;
      if (tempered) {
        const mllp::TemperedParams tp = tempered_params(c);
        table.header = {"t", "mean", "variance"};
        for (double v : times) {
          const mllp::Moments m = mllp::tempered_moments(v, tp);
          table.rows.push_back({format_double(v), format_double(m.mean), format_double(m.variance)});
        }
      } else {
        const mllp::ProcessParams pp = process_params(c, true);
        const std::vector<double> q = resolve(qs, "q", true);
        const bool many_times = times.size() > 1;
        table.header = many_times ? std::vector<std::string>{"t", "q", "moment"}
                                  : std::vector<std::string>{"q", "moment"};
        for (double v : times) {
          for (double order : q) {
            std::vector<std::string> row;
            if (many_times) row.push_back(format_double(v));
            row.push_back(format_double(order));
            row.push_back(format_double(mllp::fractional_moment(order, v, pp)));
            table.rows.push_back(std::move(row));
          }
        }
      }
      emit(c, table);
      auto params = params_json(c);
      params["t"] = times;
      write_manifest(c, "moments", args, params, std::nullopt);
      return kOk;
    }

    if (*laplace) {
      const std::vector<double> u = resolve(us, "u", false);
      const bool tempered = is_tempered(c);
      if (!(t > 0.0)) throw UsageError("--t must be positive");
      Table table;
      table.header = {"u", "laplace"};
      for (double v : u) {
        const double value = tempered ? mllp::tempered_laplace(v, t, tempered_params(c))
                                      : mllp::mllp_laplace(v, t, process_params(c, true));
        table.rows.push_back({format_double(v), format_double(value)});
      }
      emit(c, table);
      auto params = params_json(c);
      params["t"] = t;
      write_manifest(c, "laplace", args, params, std::nullopt);
      return kOk;
    }

    if (*verify) {
      const SeedChoice seed = choose_seed(c);
      const std::vector<mllp::CheckReport> reports = mllp::run_suite(seed.value, config_path);
      std::ostringstream lines;
      for (const auto& r : reports) lines << mllp::to_json_line(r) << "\n";
      bool all_ok = true;
      for (const auto& r : reports) all_ok = all_ok && r.ok();
      const std::string table = mllp::summary_table(reports, 0.01);
      if (c.out == "-") {
        std::cout << lines.str();
        std::cerr << table;
      } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) throw std::ios_base::failure("cannot open '" + c.out + "' for writing");
        f << lines.str();
        std::cout << table;
      }
      return all_ok ? kOk : kCheckFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "mllp: " << e.what() << "\n";
    return kUsage;
  } catch (const mllp::ConfigError& e) {
    std::cerr << "mllp: config error: " << e.what() << "\n";
    return kUsage;
  } catch (const mllp::DomainError& e) {
    std::cerr << "mllp: invalid parameter: " << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "mllp: I/O error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "mllp: error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
