#pragma once

// Finite-N ground truth for the asymptotic analysis: the optimal Bayesian
// fusion rule over N conditionally i.i.d. one-bit reports, its exact error
// probability, a Monte Carlo run of the whole sensing/flipping/fusion chain,
// and a least-squares estimate of the error exponent.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "byzfusion/detection_model.hpp"
#include "byzfusion/errors.hpp"
#include "byzfusion/format.hpp"

namespace byzfusion {

enum class Hypothesis { kH0, kH1 };

enum class SamplingMode {
  kFixedFraction,      // exactly floor(alpha N) Byzantine nodes
  kPerNodeBernoulli,   // each node Byzantine with probability alpha
};

inline const char* to_string(SamplingMode mode) {
  return mode == SamplingMode::kFixedFraction ? "fixed-fraction" : "per-node-bernoulli";
}

inline SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "fixed-fraction") return SamplingMode::kFixedFraction;
  if (text == "per-node-bernoulli") return SamplingMode::kPerNodeBernoulli;
  throw ValidationError("sampling mode: expected fixed-fraction or per-node-bernoulli (got '" +
                        std::string(text) + "')");
}

/// Largest n accepted by the exact binomial oracle.
inline constexpr std::int64_t kMaxExactSensors = 100000;

struct ExponentFit {
  double slope;  // nats per sensor
  double intercept;
  std::vector<std::pair<std::int64_t, double>> points;  // (n, ln P_E)
  double r_squared;
};

struct SimulationReport {
  std::int64_t trials;
  std::int64_t trials_h0;
  std::int64_t trials_h1;
  std::int64_t errors_h0;
  std::int64_t errors_h1;
  double pe_hat;
  std::uint64_t seed;
  SamplingMode sampling_mode;

  /// Binomial standard error of pe_hat.
  [[nodiscard]] double std_error() const {
    return std::sqrt(pe_hat * (1.0 - pe_hat) / static_cast<double>(trials));
  }

  friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

namespace detail {

/// k ln p, with 0 ln 0 = 0.
inline double xlogy(double k, double p) { return k == 0.0 ? 0.0 : k * std::log(p); }

/// k ln(1 - p), with 0 ln 0 = 0.
inline double xlog1my(double k, double p) { return k == 0.0 ? 0.0 : k * std::log1p(-p); }

/// ln(prior P(k ones | H) / C(n,k)).
inline double log_joint(double log_prior, std::int64_t k, std::int64_t n, double pi) {
  const auto kd = static_cast<double>(k);
  const auto rest = static_cast<double>(n - k);
  return log_prior + xlogy(kd, pi) + xlog1my(rest, pi);
}

inline void require_count(std::int64_t k, std::int64_t n) {
  if (k < 0 || k > n) {
    throw DomainError("fusion_decision: requires 0 <= k <= n (got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ")");
  }
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// MAP decision from the number of 1-reports. Ties go to H0.
inline Hypothesis fusion_decision(std::int64_t k, const NetworkParams& params, const FusedMarginals& m) {
  detail::require_count(k, params.n());
  const double h1 = detail::log_joint(std::log(params.p1()), k, params.n(), m.pi11());
  const double h0 = detail::log_joint(std::log(params.p0()), k, params.n(), m.pi10());
  return h1 > h0 ? Hypothesis::kH1 : Hypothesis::kH0;
}

/// ln P_E of the optimal fusion rule,
///   P_E = sum_k C(n,k) min(p0 pi10^k (1-pi10)^(n-k), p1 pi11^k (1-pi11)^(n-k)),
/// summed in the log domain so that large n does not underflow. Boundary
/// marginals (0 or 1) are allowed; -inf means P_E = 0.
inline double log_exact_error_probability(const NetworkParams& params, const FusedMarginals& m) {
  const std::int64_t n = params.n();
  if (n > kMaxExactSensors) {
    throw SizeError("exact_error_probability: n=" + std::to_string(n) + " above bound " +
                    std::to_string(kMaxExactSensors));
  }
  const double lp0 = std::log(params.p0());
  const double lp1 = std::log(params.p1());
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k <= n; ++k) {
    const double log_binom = lgn - std::lgamma(static_cast<double>(k) + 1.0) -
                             std::lgamma(static_cast<double>(n - k) + 1.0);
    const double a = detail::log_joint(lp0, k, n, m.pi10());
    const double b = detail::log_joint(lp1, k, n, m.pi11());
    const double term = log_binom + std::min(a, b);
    terms.push_back(term);
    peak = std::max(peak, term);
  }
  if (peak == -std::numeric_limits<double>::infinity()) return peak;

  // Neumaier-compensated sum of exp(term - peak).
  double sum = 0.0;
  double comp = 0.0;
  for (double term : terms) {
    const double v = std::exp(term - peak);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return peak + std::log(sum + comp);
}

inline double exact_error_probability(const NetworkParams& params, const FusedMarginals& m) {
  return std::exp(log_exact_error_probability(params, m));
}

/// Least-squares slope of -ln P_E(n) against n, using the exact oracle.
/// The priors come from `params`; its alpha and n are ignored.
inline ExponentFit fit_error_exponent(const NetworkParams& params, const FusedMarginals& m,
                                      std::span<const std::int64_t> n_values) {
  if (std::abs(m.pi11() - m.pi10()) < 1e-12) {
    throw DomainError("fit_error_exponent: pi11 == pi10, the FC is blind and has no error exponent");
  }
  if (n_values.size() < 2) {
    throw DomainError("fit_error_exponent: need at least two sensor counts");
  }
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1 || (i > 0 && n_values[i] <= n_values[i - 1])) {
      throw DomainError("fit_error_exponent: n values must be positive and strictly increasing");
    }
  }

  ExponentFit fit{};
  fit.points.reserve(n_values.size());
  for (std::int64_t n : n_values) {
    const double ln_pe = log_exact_error_probability(params.with_n(n), m);
    if (!std::isfinite(ln_pe)) {
      throw DomainError("fit_error_exponent: P_E(" + std::to_string(n) +
                        ") is zero; marginals on the boundary have no finite exponent");
    }
    fit.points.emplace_back(n, ln_pe);
  }

  const auto count = static_cast<double>(fit.points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [n, ln_pe] : fit.points) {
    mean_x += static_cast<double>(n);
    mean_y += -ln_pe;
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [n, ln_pe] : fit.points) {
    const double dx = static_cast<double>(n) - mean_x;
    const double dy = -ln_pe - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

/// Number of Byzantine nodes in fixed-fraction mode. The small offset keeps
/// decimal fractions such as 0.29 * 100 from flooring one node short.
inline std::int64_t fixed_byzantine_count(double alpha, std::int64_t n) {
  return static_cast<std::int64_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
}

struct SimulationOptions {
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  SamplingMode mode = SamplingMode::kPerNodeBernoulli;
  unsigned workers = 1;
};

/// Trials per independently seeded block. Blocks, not workers, own RNG
/// streams, so the report does not depend on the worker count.
inline constexpr std::int64_t kSimulationBlock = 4096;

/// Monte Carlo run: draw H from the priors, Gaussian observations, local LRT
/// decisions, Byzantine flipping, then the MAP fusion rule on the analytic
/// marginals. pe_hat = p0 errors_h0/trials_h0 + p1 errors_h1/trials_h1.
inline SimulationReport simulate(const NetworkParams& params, const SensorOperatingPoint& sensor,
                                 const AttackStrategy& attack, const GaussianSensingModel& model,
                                 const SimulationOptions& options) {
  if (options.trials < 1) {
    throw ValidationError("simulate: requires trials >= 1 (got " + std::to_string(options.trials) + ")");
  }
  const SensorOperatingPoint implied = local_operating_point(model);
  if (std::abs(implied.pd() - sensor.pd()) > 1e-9 || std::abs(implied.pf() - sensor.pf()) > 1e-9) {
    throw ConsistencyError("simulate: sensing model gives (pd=" + format_double(implied.pd()) +
                           ", pf=" + format_double(implied.pf()) + ") but sensor is (pd=" +
                           format_double(sensor.pd()) + ", pf=" + format_double(sensor.pf()) + ")");
  }

  const FusedMarginals m = marginalize(params.alpha(), attack, sensor);
  const std::int64_t n = params.n();
  const double tau = model.observation_threshold();
  const double theta = model.theta();
  const std::int64_t fixed_byz = fixed_byzantine_count(params.alpha(), n);

  // Fusion decisions depend only on k, so tabulate them once.
  std::vector<Hypothesis> decision(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k <= n; ++k) decision[static_cast<std::size_t>(k)] = fusion_decision(k, params, m);

  struct Tally {
    std::int64_t trials_h0 = 0;
    std::int64_t trials_h1 = 0;
    std::int64_t errors_h0 = 0;
    std::int64_t errors_h1 = 0;
  };

  const std::int64_t blocks = (options.trials + kSimulationBlock - 1) / kSimulationBlock;
  std::vector<Tally> tallies(static_cast<std::size_t>(blocks));

  const auto run_block = [&](std::int64_t block) {
    std::mt19937_64 rng(detail::splitmix64(options.seed ^ detail::splitmix64(static_cast<std::uint64_t>(block))));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::int64_t begin = block * kSimulationBlock;
    const std::int64_t end = std::min(options.trials, begin + kSimulationBlock);
    Tally& tally = tallies[static_cast<std::size_t>(block)];
    for (std::int64_t trial = begin; trial < end; ++trial) {
      const bool h1 = unit(rng) < params.p1();
      const double mean = h1 ? theta : 0.0;
      std::int64_t ones = 0;
      for (std::int64_t i = 0; i < n; ++i) {
        const bool local = mean + noise(rng) > tau;
        const bool byzantine = options.mode == SamplingMode::kFixedFraction ? i < fixed_byz
                                                                            : unit(rng) < params.alpha();
        bool report = local;
        if (byzantine) {
          report = local ? !(unit(rng) < attack.p01()) : (unit(rng) < attack.p10());
        }
        ones += report ? 1 : 0;
      }
      const Hypothesis decided = decision[static_cast<std::size_t>(ones)];
      if (h1) {
        ++tally.trials_h1;
        tally.errors_h1 += decided != Hypothesis::kH1 ? 1 : 0;
      } else {
        ++tally.trials_h0;
        tally.errors_h0 += decided != Hypothesis::kH0 ? 1 : 0;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::int64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::int64_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  }

  SimulationReport report{options.trials, 0, 0, 0, 0, 0.0, options.seed, options.mode};
  for (const Tally& t : tallies) {
    report.trials_h0 += t.trials_h0;
    report.trials_h1 += t.trials_h1;
    report.errors_h0 += t.errors_h0;
    report.errors_h1 += t.errors_h1;
  }
  double pe = 0.0;
  if (report.trials_h0 > 0) {
    pe += params.p0() * static_cast<double>(report.errors_h0) / static_cast<double>(report.trials_h0);
  }
  if (report.trials_h1 > 0) {
    pe += params.p1() * static_cast<double>(report.errors_h1) / static_cast<double>(report.trials_h1);
  }
  report.pe_hat = pe;
  return report;
}

}  // namespace byzfusion
