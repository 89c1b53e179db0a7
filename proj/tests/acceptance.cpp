// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "byzfusion/byzfusion.hpp"
#include "random_inputs.hpp"

using namespace byzfusion;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

constexpr int kRandomPairs = 10000;

// criteria 1 and 2 share the randomized suite
struct OptimizerSuite {
  double max_gap = 0.0;
  double max_residual = 0.0;
  int range_violations = 0;
  double elapsed = 0.0;
};

OptimizerSuite run_optimizer_suite() {
  OptimizerSuite s;
  testing::InputGenerator gen(20240601);
  const auto start = Clock::now();
  for (int i = 0; i < kRandomPairs; ++i) {
    const FusedMarginals m = gen.ordered_marginals();
    const double closed = closed_form_t_star(m);
    const double numeric = numeric_t_star(m, 1e-12);
    s.max_gap = std::max(s.max_gap, std::abs(closed - numeric));
    s.max_residual = std::max(s.max_residual, std::abs(stationarity_residual(closed, m)));
    if (!(closed >= 0.0 && closed <= 1.0)) ++s.range_violations;
  }
  s.elapsed = seconds_since(start);
  return s;
}

Outcome criterion3() {
  testing::InputGenerator gen(77);
  int violations = 0;
  double min_margin = 1.0;
  for (int i = 0; i < kRandomPairs; ++i) {
    const SensorOperatingPoint sensor = gen.sensor();
    const double alpha = gen.uniform(0.0, 0.49);
    const FusedMarginals m = marginalize(alpha, gen.attack(), sensor);
    try {
      const double t = closed_form_t_star(m);
      const TStarBracket b = t_star_bounds(m, sensor);
      if (!(b.lo < t && t < b.hi)) ++violations;
      min_margin = std::min({min_margin, t - b.lo, b.hi - t});
    } catch (const Error&) {
      ++violations;
    }
  }
  return {violations == 0, fmt("%.0f configurations, %.0f violations, min margin %.3g", kRandomPairs, violations,
                               min_margin)};
}

Outcome criterion4() {
  const SensorOperatingPoint base(0.6, 0.4);
  const FusedMarginals m = marginalize(0.5, AttackStrategy(1, 1), base);
  double worst_gap = std::abs(m.pi11() - m.pi10());
  double worst_c = chernoff_information(m).c;
  testing::InputGenerator gen(4);
  for (int i = 0; i < 1000; ++i) {
    const FusedMarginals r = marginalize(0.5, AttackStrategy(1, 1), gen.sensor());
    worst_gap = std::max(worst_gap, std::abs(r.pi11() - r.pi10()));
    worst_c = std::max(worst_c, chernoff_information(r).c);
  }
  return {worst_gap <= 1e-15 && worst_c <= 1e-12,
          fmt("1001 sensors, max |pi11-pi10| %.3g, max C %.3g", worst_gap, worst_c)};
}

// Grid argmin unique at (1,1) and C non-increasing along both axes.
bool sweep_structure(const SweepTable& t, std::string& why) {
  const std::size_t side = static_cast<std::size_t>(t.spec.intervals() + 1);
  const auto at = [&](std::size_t i, std::size_t j) { return t.rows[i * side + j].c; };
  const double corner = at(side - 1, side - 1);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      if ((i != side - 1 || j != side - 1) && !(at(i, j) > corner)) {
        why = fmt("argmin not unique at (1,1): C(%.2f,%.2f) = %.3g", t.rows[i * side + j].p10,
                  t.rows[i * side + j].p01, at(i, j));
        return false;
      }
      if (i + 1 < side && at(i + 1, j) > at(i, j)) {
        why = fmt("increase along p10 at row %.0f column %.0f", i, j);
        return false;
      }
      if (j + 1 < side && at(i, j + 1) > at(i, j)) {
        why = fmt("increase along p01 at row %.0f column %.0f", i, j);
        return false;
      }
    }
  }
  return true;
}

Outcome criterion5() {
  const SweepTable t = cmd_sweep({SensorOperatingPoint(0.6, 0.4), 0.4, 0.05});
  std::string why;
  const bool ok = sweep_structure(t, why);
  return {ok, ok ? fmt("%.0f grid points, argmin (1,1), C(1,1) = %.6g", t.rows.size(), t.rows.back().c) : why};
}

Outcome criterion6() {
  const SweepTable t = cmd_sweep({SensorOperatingPoint(0.6, 0.4), 0.8, 0.05});
  int on_line = 0;
  int bad = 0;
  double max_on = 0.0;
  double min_off = 1.0;
  for (const SweepRow& r : t.rows) {
    const double dist = std::abs(r.p10 + r.p01 - 1.25);
    if (dist < 1e-9) {
      ++on_line;
      max_on = std::max(max_on, r.c);
      if (!(r.c <= 1e-12)) ++bad;
    } else if (dist >= 0.05 - 1e-9) {
      min_off = std::min(min_off, r.c);
      if (!(r.c > 0.0)) ++bad;
    }
  }
  return {bad == 0 && on_line > 0,
          fmt("%.0f points on the line with max C %.3g; min C off the line %.3g", on_line, max_on, min_off)};
}

Outcome criterion7() {
  int checked = 0;
  for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.49}) {
    for (const SensorOperatingPoint s :
         {SensorOperatingPoint(0.6, 0.4), SensorOperatingPoint(0.8, 0.2), SensorOperatingPoint(0.9, 0.1)}) {
      const SweepTable t = cmd_sweep({s, alpha, 0.05});
      std::string why;
      if (!sweep_structure(t, why)) {
        return {false, fmt("alpha %.2f pd %.1f: ", alpha, s.pd()) + why};
      }
      ++checked;
    }
  }
  return {true, fmt("%.0f (alpha, sensor) grids with argmin (1,1)", checked)};
}

Outcome criterion8() {
  const auto start = Clock::now();
  std::vector<std::int64_t> short_ns;
  for (std::int64_t n = 50; n <= 400; n += 50) short_ns.push_back(n);
  const FusedMarginals attacked = marginalize(0.2, AttackStrategy(1, 1), SensorOperatingPoint(0.8, 0.2));
  const ExponentFit a = fit_error_exponent(NetworkParams(0.2, 1), attacked, short_ns);
  const double ca = chernoff_information(attacked).c;
  const double gap_a = std::abs(a.slope - ca) / ca;

  std::vector<std::int64_t> long_ns;
  for (std::int64_t n = 2000; n <= 10000; n += 1000) long_ns.push_back(n);
  const FusedMarginals near_blind(0.48, 0.52);
  const ExponentFit b = fit_error_exponent(NetworkParams(0.0, 1), near_blind, long_ns);
  const double cb = chernoff_information(near_blind).c;
  const double gap_b = std::abs(b.slope - cb) / cb;
  const double elapsed = seconds_since(start);
  return {gap_a < 0.05 && gap_b < 0.10 && elapsed < 30.0,
          fmt("relative gap %.4f (pi 0.32/0.68), %.4f (pi 0.48/0.52), %.2f s", gap_a, gap_b, elapsed)};
}

Outcome criterion9() {
  testing::InputGenerator gen(9);
  int outside = 0;
  double worst_z = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SensorOperatingPoint sensor = gen.sensor(0.05);
    const double alpha = gen.uniform(0.0, 0.7);
    const AttackStrategy attack = gen.attack();
    const double p0 = gen.uniform(0.2, 0.8);
    const NetworkParams network(alpha, p0, 1.0 - p0, 1 + static_cast<std::int64_t>(gen.uniform(0.0, 30.0)));
    SimulationOptions opts;
    opts.trials = 100000;
    opts.seed = 1000 + static_cast<std::uint64_t>(i);
    const SimulationReport r = simulate(network, sensor, attack, sensing_model_for(sensor), opts);
    const double exact = exact_error_probability(network, marginalize(alpha, attack, sensor));
    const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(opts.trials));
    const double z = sigma > 0.0 ? std::abs(r.pe_hat - exact) / sigma : (r.pe_hat == exact ? 0.0 : INFINITY);
    worst_z = std::max(worst_z, z);
    if (!(z <= 4.0)) ++outside;
  }

  RunConfig config = parse_config(
      "sensor.pd = 0.7\nsensor.pf = 0.1\nnetwork.alpha = 0.3\nnetwork.n = 15\n"
      "attack.p10 = 0.9\nattack.p01 = 0.6\nsimulate.trials = 100000\nsimulate.seed = 2024\n");
  bool identical = true;
  for (SamplingMode mode : {SamplingMode::kPerNodeBernoulli, SamplingMode::kFixedFraction}) {
    config.mode = mode;
    const std::string one = render(cmd_simulate(config, 1), OutputFormat::kJson);
    identical = identical && render(cmd_simulate(config, 2), OutputFormat::kJson) == one &&
                render(cmd_simulate(config, 8), OutputFormat::kJson) == one;
  }
  return {outside == 0 && identical,
          fmt("20 configurations, max |z| %.2f; reports under 1/2/8 workers ", worst_z) +
              (identical ? "identical" : "DIFFER")};
}

Outcome criterion10() {
  const SensorOperatingPoint sensor(0.8, 0.2);
  const double designed = robust_design_exponent(0.3, sensor);
  double worst = INFINITY;
  for (int i = 0; i <= 6; ++i) {
    const double alpha = 0.05 * i;
    const double c = chernoff_information(marginalize(alpha, optimal_attack(alpha).representative, sensor)).c;
    worst = std::min(worst, c - designed);
  }
  return {worst >= -1e-12, fmt("C(0.3) = %.10g, min over true alpha of C(alpha) - C(0.3) = %.3g", designed, worst)};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  OptimizerSuite suite;
  report(1, [&] {
    suite = run_optimizer_suite();
    const bool ok = suite.max_gap <= 1e-9 && suite.max_residual <= 1e-10 && suite.elapsed < 10.0;
    return Outcome{ok, fmt("%.0f pairs, max |closed - numeric| %.3g, max stationarity residual %.3g", kRandomPairs,
                           suite.max_gap, suite.max_residual) +
                           fmt(", %.2f s", suite.elapsed)};
  });
  report(2, [&] {
    return Outcome{suite.range_violations == 0,
                   fmt("%.0f pairs, %.0f values of t* outside [0,1]", kRandomPairs, suite.range_violations)};
  });
  report(3, criterion3);
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  report(7, criterion7);
  report(8, criterion8);
  report(9, criterion9);
  report(10, criterion10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
