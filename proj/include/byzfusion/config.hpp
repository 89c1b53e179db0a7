#pragma once

// Scenario configuration: a flat document of `section.key = value` lines.
// `#` starts a comment. Unknown or repeated keys are errors, and every value
// is re-validated through the domain types once the document is loaded.
//
//   sensor.pd      = 0.6
//   sensor.pf      = 0.4
//   network.alpha  = 0.4
//   network.p0     = 0.5      # network.p1 defaults to 1 - p0
//   network.n      = 20
//   attack.p10     = 1
//   attack.p01     = 1
//   model.theta    = 2        # Gaussian sensing model, optional
//   model.lambda   = 1
//   simulate.trials = 100000
//   simulate.seed   = 7
//   simulate.mode   = per-node-bernoulli
//   exponent.n_values = 50,100,150
//   sweep.step     = 0.05

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "byzfusion/adversary.hpp"
#include "byzfusion/detection_model.hpp"
#include "byzfusion/errors.hpp"
#include "byzfusion/fusion_oracle.hpp"

namespace byzfusion {

/// Environment variable consulted for the simulation seed when neither a
/// flag nor the config document sets one.
inline constexpr const char* kSeedEnvironmentVariable = "BYZFUSION_SEED";

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view key, std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ValidationError(std::string(key) + ": expected a real number (got '" + s + "')");
  }
  return v;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(std::string(key) + ": expected an integer (got '" + std::string(text) + "')");
  }
  return v;
}

}  // namespace detail

/// Parsed scenario. Every field is optional; commands pull what they need
/// through the resolve_* accessors, which apply defaults and re-validate.
struct RunConfig {
  std::optional<double> pd, pf;
  std::optional<double> alpha, p0, p1;
  std::optional<std::int64_t> n;
  std::optional<double> p10, p01;
  std::optional<double> theta, lambda;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<SamplingMode> mode;
  std::optional<std::vector<std::int64_t>> n_values;
  std::optional<double> step;

  /// Assigns one key from its textual value. Rejects unknown keys.
  void set(std::string_view key, std::string_view text) {
    text = detail::trim(text);
    if (key == "sensor.pd") pd = detail::parse_real(key, text);
    else if (key == "sensor.pf") pf = detail::parse_real(key, text);
    else if (key == "network.alpha") alpha = detail::parse_real(key, text);
    else if (key == "network.p0") p0 = detail::parse_real(key, text);
    else if (key == "network.p1") p1 = detail::parse_real(key, text);
    else if (key == "network.n") n = detail::parse_integer<std::int64_t>(key, text);
    else if (key == "attack.p10") p10 = detail::parse_real(key, text);
    else if (key == "attack.p01") p01 = detail::parse_real(key, text);
    else if (key == "model.theta") theta = detail::parse_real(key, text);
    else if (key == "model.lambda") lambda = detail::parse_real(key, text);
    else if (key == "simulate.trials") trials = detail::parse_integer<std::int64_t>(key, text);
    else if (key == "simulate.seed") seed = detail::parse_integer<std::uint64_t>(key, text);
    else if (key == "simulate.mode") mode = parse_sampling_mode(text);
    else if (key == "exponent.n_values") {
      std::vector<std::int64_t> values;
      std::string_view rest = text;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        values.push_back(detail::parse_integer<std::int64_t>(key, detail::trim(rest.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      if (values.empty()) throw ValidationError("exponent.n_values: empty list");
      n_values = std::move(values);
    } else if (key == "sweep.step") step = detail::parse_real(key, text);
    else throw ValidationError("unknown configuration key '" + std::string(key) + "'");
  }

  /// Copies every field that `other` sets over this one.
  void overlay(const RunConfig& other) {
    const auto take = [](auto& dst, const auto& src) {
      if (src) dst = src;
    };
    take(pd, other.pd);
    take(pf, other.pf);
    take(alpha, other.alpha);
    take(p0, other.p0);
    take(p1, other.p1);
    take(n, other.n);
    take(p10, other.p10);
    take(p01, other.p01);
    take(theta, other.theta);
    take(lambda, other.lambda);
    take(trials, other.trials);
    take(seed, other.seed);
    take(mode, other.mode);
    take(n_values, other.n_values);
    take(step, other.step);
  }

  [[nodiscard]] bool has_sensor() const { return pd || pf; }
  [[nodiscard]] bool has_attack() const { return p10 || p01; }
  [[nodiscard]] bool has_model() const { return theta || lambda; }

  [[nodiscard]] std::optional<SensorOperatingPoint> sensor() const {
    if (!has_sensor()) return std::nullopt;
    if (!pd || !pf) throw ValidationError("sensor: sensor.pd and sensor.pf must be given together");
    return SensorOperatingPoint(*pd, *pf);
  }

  [[nodiscard]] std::optional<AttackStrategy> attack() const {
    if (!has_attack()) return std::nullopt;
    if (!p10 || !p01) throw ValidationError("attack: attack.p10 and attack.p01 must be given together");
    return AttackStrategy(*p10, *p01);
  }

  [[nodiscard]] std::optional<GaussianSensingModel> model() const {
    if (!has_model()) return std::nullopt;
    if (!theta || !lambda) throw ValidationError("model: model.theta and model.lambda must be given together");
    return GaussianSensingModel(*theta, *lambda);
  }

  /// Sensor from sensor.*; otherwise the operating point of model.*.
  [[nodiscard]] SensorOperatingPoint resolve_sensor() const {
    if (auto s = sensor()) return *s;
    if (auto m = model()) return local_operating_point(*m);
    throw ValidationError("sensor: set sensor.pd/sensor.pf (or model.theta/model.lambda)");
  }

  /// Model from model.*; otherwise the Gaussian model reproducing the sensor.
  [[nodiscard]] GaussianSensingModel resolve_model() const {
    if (auto m = model()) return *m;
    return sensing_model_for(resolve_sensor());
  }

  [[nodiscard]] double resolve_alpha() const {
    const double a = alpha.value_or(0.0);
    validate_fraction(a, "network.alpha");
    return a;
  }

  /// Attack from attack.*; otherwise the optimal attack at the configured alpha.
  [[nodiscard]] AttackStrategy resolve_attack() const {
    if (auto a = attack()) return *a;
    return optimal_attack(resolve_alpha()).representative;
  }

  [[nodiscard]] NetworkParams resolve_network(std::int64_t default_n = 1) const {
    const double prior0 = p0 ? *p0 : (p1 ? 1.0 - *p1 : 0.5);
    const double prior1 = p1 ? *p1 : 1.0 - prior0;
    return {resolve_alpha(), prior0, prior1, n.value_or(default_n)};
  }

  [[nodiscard]] std::vector<std::int64_t> resolve_n_values() const {
    if (n_values) return *n_values;
    std::vector<std::int64_t> values;
    for (std::int64_t v = 50; v <= 400; v += 50) values.push_back(v);
    return values;
  }

  /// Flag or config seed, then the environment variable, then 1.
  [[nodiscard]] std::uint64_t resolve_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv(kSeedEnvironmentVariable); env && *env) {
      return detail::parse_integer<std::uint64_t>(kSeedEnvironmentVariable, env);
    }
    return 1;
  }

  /// Constructs every partially or fully specified domain type so that a
  /// malformed document fails on load rather than mid-run.
  void validate() const {
    (void)sensor();
    (void)attack();
    (void)model();
    if (alpha) validate_fraction(*alpha, "network.alpha");
    if (p0 || p1 || n) (void)resolve_network();
    if (trials && *trials < 1) throw ValidationError("simulate.trials: requires trials >= 1");
    if (n_values) {
      for (std::size_t i = 0; i < n_values->size(); ++i) {
        if ((*n_values)[i] < 1 || (i > 0 && (*n_values)[i] <= (*n_values)[i - 1])) {
          throw ValidationError("exponent.n_values: must be positive and strictly increasing");
        }
      }
    }
    if (step && !(*step > 0.0 && *step < 1.0)) throw ValidationError("sweep.step: requires 0 < step < 1");
  }
};

/// Parses a configuration document. `origin` names the source in messages.
inline RunConfig parse_config(std::string_view text, std::string_view origin = "config") {
  RunConfig config;
  std::vector<std::string> seen;
  std::istringstream lines{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) {
      throw ValidationError(where + "expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ValidationError(where + "duplicate key '" + key + "'");
    }
    seen.push_back(key);
    try {
      config.set(key, line.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  config.validate();
  return config;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace byzfusion
