#pragma once

// Sensor, attacker and network parameters, and the report marginals they
// induce at the fusion center.

#include <cmath>
#include <cstdint>
#include <string>

#include "byzfusion/errors.hpp"
#include "byzfusion/format.hpp"

namespace byzfusion {

/// Local operating point of a sensor: pd = P(v=1|H1), pf = P(v=1|H0).
/// Requires 0 < pf < pd < 1.
class SensorOperatingPoint {
 public:
  SensorOperatingPoint(double pd, double pf) : pd_(pd), pf_(pf) {
    if (!(0.0 < pf && pf < pd && pd < 1.0)) {
      throw ValidationError("SensorOperatingPoint: requires 0 < pf < pd < 1 (got pd=" +
                            format_double(pd) + ", pf=" + format_double(pf) + ")");
    }
  }

  [[nodiscard]] double pd() const noexcept { return pd_; }
  [[nodiscard]] double pf() const noexcept { return pf_; }

  friend bool operator==(const SensorOperatingPoint&, const SensorOperatingPoint&) = default;

 private:
  double pd_;
  double pf_;
};

/// Byzantine flipping probabilities: p10 = P(send 1 | decided 0),
/// p01 = P(send 0 | decided 1). Honest nodes are the (0, 0) strategy.
class AttackStrategy {
 public:
  AttackStrategy(double p10, double p01) : p10_(p10), p01_(p01) {
    if (!(0.0 <= p10 && p10 <= 1.0 && 0.0 <= p01 && p01 <= 1.0)) {
      throw ValidationError("AttackStrategy: requires 0 <= p10 <= 1 and 0 <= p01 <= 1 (got p10=" +
                            format_double(p10) + ", p01=" + format_double(p01) + ")");
    }
  }

  static AttackStrategy honest() { return {0.0, 0.0}; }

  [[nodiscard]] double p10() const noexcept { return p10_; }
  [[nodiscard]] double p01() const noexcept { return p01_; }

  friend bool operator==(const AttackStrategy&, const AttackStrategy&) = default;

 private:
  double p10_;
  double p01_;
};

inline void validate_fraction(double alpha, const char* what = "alpha") {
  if (!(0.0 <= alpha && alpha <= 1.0)) {
    throw ValidationError(std::string(what) + ": requires 0 <= " + what + " <= 1 (got " +
                          format_double(alpha) + ")");
  }
}

/// Byzantine fraction, hypothesis priors and sensor count.
class NetworkParams {
 public:
  static constexpr double kPriorSumTolerance = 1e-12;

  NetworkParams(double alpha, double p0, double p1, std::int64_t n)
      : alpha_(alpha), p0_(p0), p1_(p1), n_(n) {
    validate_fraction(alpha, "network.alpha");
    if (!(0.0 < p0 && p0 < 1.0 && 0.0 < p1 && p1 < 1.0) ||
        std::abs(p0 + p1 - 1.0) > kPriorSumTolerance) {
      throw ValidationError("NetworkParams: requires p0, p1 in (0,1) with p0 + p1 = 1 (got p0=" +
                            format_double(p0) + ", p1=" + format_double(p1) + ")");
    }
    if (n < 1) {
      throw ValidationError("NetworkParams: requires n >= 1 (got " + std::to_string(n) + ")");
    }
  }

  /// Uniform priors.
  NetworkParams(double alpha, std::int64_t n) : NetworkParams(alpha, 0.5, 0.5, n) {}

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double p0() const noexcept { return p0_; }
  [[nodiscard]] double p1() const noexcept { return p1_; }
  [[nodiscard]] std::int64_t n() const noexcept { return n_; }

  [[nodiscard]] NetworkParams with_n(std::int64_t n) const { return {alpha_, p0_, p1_, n}; }

 private:
  double alpha_;
  double p0_;
  double p1_;
  std::int64_t n_;
};

/// Report marginals at the FC: pi10 = P(u=1|H0), pi11 = P(u=1|H1).
/// Closed interval [0,1]; operations that need the open interval check it.
class FusedMarginals {
 public:
  FusedMarginals(double pi10, double pi11) : pi10_(pi10), pi11_(pi11) {
    if (!(0.0 <= pi10 && pi10 <= 1.0 && 0.0 <= pi11 && pi11 <= 1.0)) {
      throw ValidationError("FusedMarginals: requires pi10, pi11 in [0,1] (got pi10=" +
                            format_double(pi10) + ", pi11=" + format_double(pi11) + ")");
    }
  }

  [[nodiscard]] double pi10() const noexcept { return pi10_; }
  [[nodiscard]] double pi11() const noexcept { return pi11_; }
  [[nodiscard]] double pi00() const noexcept { return 1.0 - pi10_; }
  [[nodiscard]] double pi01() const noexcept { return 1.0 - pi11_; }

  [[nodiscard]] bool interior() const noexcept {
    return 0.0 < pi10_ && pi10_ < 1.0 && 0.0 < pi11_ && pi11_ < 1.0;
  }

  friend bool operator==(const FusedMarginals&, const FusedMarginals&) = default;

 private:
  double pi10_;
  double pi11_;
};

/// Unit-variance Gaussian mean-shift sensing: y ~ N(0,1) under H0 and
/// N(theta,1) under H1, decided by a likelihood-ratio threshold lambda.
class GaussianSensingModel {
 public:
  GaussianSensingModel(double theta, double lambda) : theta_(theta), lambda_(lambda) {
    if (!(theta > 0.0 && std::isfinite(theta)) || !(lambda > 0.0 && std::isfinite(lambda))) {
      throw ValidationError("GaussianSensingModel: requires theta > 0 and lambda > 0 (got theta=" +
                            format_double(theta) + ", lambda=" + format_double(lambda) + ")");
    }
  }

  [[nodiscard]] double theta() const noexcept { return theta_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }

  /// Observation threshold equivalent to the LRT: decide 1 iff y > tau.
  [[nodiscard]] double observation_threshold() const noexcept {
    return std::log(lambda_) / theta_ + theta_ / 2.0;
  }

 private:
  double theta_;
  double lambda_;
};

/// Mixes honest and Byzantine reporting into the marginals seen at the FC.
inline FusedMarginals marginalize(double alpha, const AttackStrategy& attack,
                                  const SensorOperatingPoint& sensor) {
  validate_fraction(alpha);
  const double p10 = attack.p10();
  const double p01 = attack.p01();
  const double pf = sensor.pf();
  const double pd = sensor.pd();
  // pf + alpha (p10 (1 - pf) - p01 pf): the honest strategy returns pf, pd bit for bit
  const double pi10 = pf + alpha * (p10 * (1.0 - pf) - p01 * pf);
  const double pi11 = pd + alpha * (p10 * (1.0 - pd) - p01 * pd);
  return {pi10, pi11};
}

/// Standard Gaussian upper tail Q(x) = P(Z > x).
inline double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Inverse of gaussian_q on (0, 1), by bisection down to adjacent doubles.
inline double gaussian_q_inverse(double p) {
  if (!(0.0 < p && p < 1.0)) {
    throw DomainError("gaussian_q_inverse: requires p in (0,1) (got " + format_double(p) + ")");
  }
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    // Q is decreasing.
    if (gaussian_q(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// (pd, pf) produced by the LRT of a Gaussian sensing model.
inline SensorOperatingPoint local_operating_point(const GaussianSensingModel& model) {
  const double tau = model.observation_threshold();
  const double pf = gaussian_q(tau);
  const double pd = gaussian_q(tau - model.theta());
  if (!(0.0 < pf && pf < pd && pd < 1.0)) {
    throw DegenerateModelError("local_operating_point: threshold tau=" + format_double(tau) +
                               " with theta=" + format_double(model.theta()) +
                               " gives pf=" + format_double(pf) + ", pd=" + format_double(pd) +
                               " outside 0 < pf < pd < 1");
  }
  return {pd, pf};
}

/// Gaussian model whose LRT reproduces a given operating point.
inline GaussianSensingModel sensing_model_for(const SensorOperatingPoint& sensor) {
  const double tau = gaussian_q_inverse(sensor.pf());
  const double theta = tau - gaussian_q_inverse(sensor.pd());
  // tau = ln(lambda)/theta + theta/2
  const double lambda = std::exp(theta * (tau - theta / 2.0));
  return {theta, lambda};
}

}  // namespace byzfusion
