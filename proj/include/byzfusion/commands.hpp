#pragma once

// Report builders behind the command-line subcommands, plus CSV/JSON
// rendering. Each cmd_* returns a plain record; render() turns it into text.
//
// CSV output starts with the schema line `# byzantine-fusion v1`. All logs
// are natural logs, so information and exponents are in nats.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "byzfusion/adversary.hpp"
#include "byzfusion/chernoff.hpp"
#include "byzfusion/config.hpp"
#include "byzfusion/detection_model.hpp"
#include "byzfusion/errors.hpp"
#include "byzfusion/format.hpp"
#include "byzfusion/fusion_oracle.hpp"
#include "byzfusion/json.hpp"

namespace byzfusion {

inline constexpr std::string_view kCsvSchemaLine = "# byzantine-fusion v1";
inline constexpr double kDefaultGridStep = 0.05;

enum class OutputFormat { kCsv, kJson };

inline OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  throw ValidationError("format: expected csv or json (got '" + std::string(text) + "')");
}

/// Runs body(i) for i in [0, count) on up to `workers` threads.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

namespace detail {

inline json::Value optional_number(const std::optional<double>& v) {
  return v ? json::Value(*v) : json::Value(nullptr);
}

inline std::string csv_optional(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline std::string csv_document(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows,
                                const std::vector<std::string>& comments = {}) {
  std::string out(kCsvSchemaLine);
  out += '\n';
  for (const std::string& c : comments) out += "# " + c + '\n';
  const auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  join(header);
  for (const auto& row : rows) join(row);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// chernoff

struct ChernoffReport {
  SensorOperatingPoint sensor;
  double alpha;
  AttackStrategy attack;
  FusedMarginals marginals;
  ChernoffResult result;
  bool blinded;
};

inline ChernoffReport cmd_chernoff(const SensorOperatingPoint& sensor, double alpha,
                                   const AttackStrategy& attack) {
  const FusedMarginals m = marginalize(alpha, attack, sensor);
  return {sensor, alpha, attack, m, chernoff_information(m, sensor), is_blinded(alpha, attack, sensor)};
}

inline std::string render(const ChernoffReport& r, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    return json::Value(json::Object{
                           {"pd", r.sensor.pd()},
                           {"pf", r.sensor.pf()},
                           {"alpha", r.alpha},
                           {"p10", r.attack.p10()},
                           {"p01", r.attack.p01()},
                           {"pi10", r.marginals.pi10()},
                           {"pi11", r.marginals.pi11()},
                           {"t_star", r.result.t_star},
                           {"c", r.result.c},
                           {"bracket_lo", detail::optional_number(r.result.bracket_lo)},
                           {"bracket_hi", detail::optional_number(r.result.bracket_hi)},
                           {"blinded", r.blinded},
                       })
        .dump();
  }
  return detail::csv_document(
      {"pd", "pf", "alpha", "p10", "p01", "pi10", "pi11", "t_star", "c", "bracket_lo", "bracket_hi", "blinded"},
      {{format_double(r.sensor.pd()), format_double(r.sensor.pf()), format_double(r.alpha),
        format_double(r.attack.p10()), format_double(r.attack.p01()), format_double(r.marginals.pi10()),
        format_double(r.marginals.pi11()), format_double(r.result.t_star), format_double(r.result.c),
        detail::csv_optional(r.result.bracket_lo), detail::csv_optional(r.result.bracket_hi),
        r.blinded ? "true" : "false"}});
}

// ---------------------------------------------------------------------------
// sweep

struct SweepSpec {
  SensorOperatingPoint sensor;
  double alpha;
  double grid_step = kDefaultGridStep;
  OutputFormat output_format = OutputFormat::kCsv;

  /// Number of grid intervals per axis; the step must divide 1 within 1e-12.
  [[nodiscard]] std::int64_t intervals() const {
    if (!(grid_step > 0.0 && grid_step < 1.0)) {
      throw ValidationError("sweep.step: requires 0 < step < 1 (got " + format_double(grid_step) + ")");
    }
    const double count = std::round(1.0 / grid_step);
    if (std::abs(count * grid_step - 1.0) > 1e-12) {
      throw ValidationError("sweep.step: " + format_double(grid_step) + " does not divide 1");
    }
    return static_cast<std::int64_t>(count);
  }
};

struct SweepRow {
  double p10;
  double p01;
  double pi10;
  double pi11;
  double c;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // lexicographic in (p10, p01)
};

/// Chernoff information over the (p10, p01) grid of [0,1]^2.
inline SweepTable cmd_sweep(const SweepSpec& spec, unsigned workers = 1) {
  validate_fraction(spec.alpha);
  const std::int64_t m = spec.intervals();
  const auto side = static_cast<std::size_t>(m + 1);
  std::vector<SweepRow> rows(side * side);
  parallel_for(rows.size(), workers, [&](std::size_t index) {
    const double p10 = static_cast<double>(index / side) / static_cast<double>(m);
    const double p01 = static_cast<double>(index % side) / static_cast<double>(m);
    const FusedMarginals fm = marginalize(spec.alpha, AttackStrategy(p10, p01), spec.sensor);
    rows[index] = {p10, p01, fm.pi10(), fm.pi11(), chernoff_information(fm).c};
  });
  return {spec, std::move(rows)};
}

inline std::string render(const SweepTable& t, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json::Array rows;
    rows.reserve(t.rows.size());
    for (const SweepRow& r : t.rows) {
      rows.emplace_back(json::Object{{"p10", r.p10}, {"p01", r.p01}, {"pi10", r.pi10}, {"pi11", r.pi11}, {"c", r.c}});
    }
    return json::Value(json::Object{
                           {"pd", t.spec.sensor.pd()},
                           {"pf", t.spec.sensor.pf()},
                           {"alpha", t.spec.alpha},
                           {"step", t.spec.grid_step},
                           {"rows", std::move(rows)},
                       })
        .dump();
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(t.rows.size());
  for (const SweepRow& r : t.rows) {
    rows.push_back({format_double(r.p10), format_double(r.p01), format_double(r.pi10), format_double(r.pi11),
                    format_double(r.c)});
  }
  return detail::csv_document({"p10", "p01", "pi10", "pi11", "c"}, rows);
}

/// Reads back the rows of a CSV sweep produced by render().
inline std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvSchemaLine) {
    throw ValidationError("sweep csv: missing schema line '" + std::string(kCsvSchemaLine) + "'");
  }
  if (!std::getline(in, line) || line != "p10,p01,pi10,pi11,c") {
    throw ValidationError("sweep csv: unexpected header '" + line + "'");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 5> cells{};
    std::size_t start = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t comma = line.find(',', start);
      if ((i + 1 < cells.size()) == (comma == std::string::npos)) {
        throw ValidationError("sweep csv: expected 5 columns in '" + line + "'");
      }
      cells[i] = detail::parse_real("sweep csv", std::string_view(line).substr(start, comma - start));
      start = comma + 1;
    }
    rows.push_back({cells[0], cells[1], cells[2], cells[3], cells[4]});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// blind

struct BlindReport {
  std::optional<AttackStrategy> attack;
  std::optional<double> blinding_fraction;  // +inf for the honest strategy
  std::optional<double> alpha;
  std::optional<OptimalAttack> optimal;
};

inline BlindReport cmd_blind(std::optional<double> alpha, std::optional<AttackStrategy> attack) {
  if (!alpha && !attack) {
    throw ValidationError("blind: give an attack (attack.p10, attack.p01) or a Byzantine fraction (network.alpha)");
  }
  BlindReport report;
  if (attack) {
    report.attack = attack;
    report.blinding_fraction = blinding_fraction(*attack);
  }
  if (alpha) {
    report.alpha = alpha;
    report.optimal = optimal_attack(*alpha);
  }
  return report;
}

inline std::string render(const BlindReport& r, OutputFormat format) {
  std::vector<std::string> header;
  std::vector<std::string> row;
  json::Object obj;
  const auto add = [&](const char* key, json::Value jv, std::string cell) {
    header.emplace_back(key);
    row.push_back(std::move(cell));
    obj.emplace_back(key, std::move(jv));
  };
  if (r.attack) {
    add("p10", r.attack->p10(), format_double(r.attack->p10()));
    add("p01", r.attack->p01(), format_double(r.attack->p01()));
    add("blinding_fraction", *r.blinding_fraction, format_double(*r.blinding_fraction));
  }
  if (r.optimal) {
    add("alpha", *r.alpha, format_double(*r.alpha));
    add("regime", to_string(r.optimal->regime), to_string(r.optimal->regime));
    add("optimal_p10", r.optimal->representative.p10(), format_double(r.optimal->representative.p10()));
    add("optimal_p01", r.optimal->representative.p01(), format_double(r.optimal->representative.p01()));
    add("blinding_line_sum", detail::optional_number(r.optimal->blinding_line_sum),
        detail::csv_optional(r.optimal->blinding_line_sum));
  }
  if (format == OutputFormat::kJson) return json::Value(std::move(obj)).dump();
  return detail::csv_document(header, {row});
}

// ---------------------------------------------------------------------------
// exponent

struct ExponentReport {
  FusedMarginals marginals;
  ExponentFit fit;
  double analytic_c;
  double relative_gap;  // |slope - C| / C
};

inline ExponentReport cmd_exponent(const RunConfig& config) {
  const SensorOperatingPoint sensor = config.resolve_sensor();
  const NetworkParams network = config.resolve_network();
  const FusedMarginals m = marginalize(network.alpha(), config.resolve_attack(), sensor);
  const std::vector<std::int64_t> n_values = config.resolve_n_values();
  ExponentFit fit = fit_error_exponent(network, m, n_values);
  const double c = chernoff_information(m).c;
  const double gap = std::abs(fit.slope - c) / c;
  return {m, std::move(fit), c, gap};
}

inline std::string render(const ExponentReport& r, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json::Array rows;
    for (const auto& [n, ln_pe] : r.fit.points) {
      rows.emplace_back(json::Object{{"n", n}, {"ln_pe", ln_pe}, {"rate", -ln_pe / static_cast<double>(n)}});
    }
    return json::Value(json::Object{
                           {"pi10", r.marginals.pi10()},
                           {"pi11", r.marginals.pi11()},
                           {"slope", r.fit.slope},
                           {"intercept", r.fit.intercept},
                           {"r_squared", r.fit.r_squared},
                           {"c", r.analytic_c},
                           {"relative_gap", r.relative_gap},
                           {"rows", std::move(rows)},
                       })
        .dump();
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [n, ln_pe] : r.fit.points) {
    rows.push_back({std::to_string(n), format_double(ln_pe), format_double(-ln_pe / static_cast<double>(n))});
  }
  return detail::csv_document({"n", "ln_pe", "rate"}, rows,
                              {"pi10=" + format_double(r.marginals.pi10()),
                               "pi11=" + format_double(r.marginals.pi11()),
                               "slope=" + format_double(r.fit.slope),
                               "intercept=" + format_double(r.fit.intercept),
                               "r_squared=" + format_double(r.fit.r_squared),
                               "c=" + format_double(r.analytic_c),
                               "relative_gap=" + format_double(r.relative_gap)});
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateReport {
  SimulationReport simulation;
  double std_error;
  double ci_lo;  // pe_hat -/+ 1.96 std_error, clipped to [0,1]
  double ci_hi;
  std::optional<double> exact_pe;  // per-node-bernoulli mode with n within the exact oracle's bound
  std::optional<double> z_score;
};

inline SimulateReport cmd_simulate(const RunConfig& config, unsigned workers = 1) {
  const SensorOperatingPoint sensor = config.resolve_sensor();
  const GaussianSensingModel model = config.resolve_model();
  const NetworkParams network = config.resolve_network();
  const AttackStrategy attack = config.resolve_attack();
  SimulationOptions options;
  options.trials = config.trials.value_or(options.trials);
  options.seed = config.resolve_seed();
  options.mode = config.mode.value_or(options.mode);
  options.workers = workers;
  const SimulationReport sim = simulate(network, sensor, attack, model, options);

  SimulateReport report{sim, sim.std_error(), 0.0, 0.0, std::nullopt, std::nullopt};
  report.ci_lo = std::max(0.0, sim.pe_hat - 1.96 * report.std_error);
  report.ci_hi = std::min(1.0, sim.pe_hat + 1.96 * report.std_error);
  // a fixed Byzantine count is not the i.i.d. mixture the oracle sums over
  if (options.mode == SamplingMode::kPerNodeBernoulli && network.n() <= kMaxExactSensors) {
    const double exact = exact_error_probability(network, marginalize(network.alpha(), attack, sensor));
    report.exact_pe = exact;
    const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(sim.trials));
    report.z_score = sigma > 0.0 ? (sim.pe_hat - exact) / sigma : 0.0;
  }
  return report;
}

inline std::string render(const SimulateReport& r, OutputFormat format) {
  const SimulationReport& s = r.simulation;
  if (format == OutputFormat::kJson) {
    return json::Value(json::Object{
                           {"trials", s.trials},
                           {"trials_h0", s.trials_h0},
                           {"trials_h1", s.trials_h1},
                           {"errors_h0", s.errors_h0},
                           {"errors_h1", s.errors_h1},
                           {"pe_hat", s.pe_hat},
                           {"std_error", r.std_error},
                           {"ci95_lo", r.ci_lo},
                           {"ci95_hi", r.ci_hi},
                           {"exact_pe", detail::optional_number(r.exact_pe)},
                           {"z_score", detail::optional_number(r.z_score)},
                           {"seed", s.seed},
                           {"sampling_mode", to_string(s.sampling_mode)},
                       })
        .dump();
  }
  return detail::csv_document(
      {"trials", "trials_h0", "trials_h1", "errors_h0", "errors_h1", "pe_hat", "std_error", "ci95_lo", "ci95_hi",
       "exact_pe", "z_score", "seed", "sampling_mode"},
      {{std::to_string(s.trials), std::to_string(s.trials_h0), std::to_string(s.trials_h1),
        std::to_string(s.errors_h0), std::to_string(s.errors_h1), format_double(s.pe_hat),
        format_double(r.std_error), format_double(r.ci_lo), format_double(r.ci_hi),
        detail::csv_optional(r.exact_pe), detail::csv_optional(r.z_score), std::to_string(s.seed),
        to_string(s.sampling_mode)}});
}

}  // namespace byzfusion
