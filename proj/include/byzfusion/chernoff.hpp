#pragma once

// Chernoff information between the two report distributions at the FC.
//
// With two outcomes the Chernoff sum is
//
//   f(t) = pi10^t pi11^(1-t) + (1-pi10)^t (1-pi11)^(1-t),   t in [0,1]
//
// and C = -ln min_t f(t). f is convex, and for pi11 > pi10 its minimizer has
// the closed form
//
//   t* = ln(G pi11/(1-pi11)) / ln(((1/pi10)-1)/((1/pi11)-1)),
//   G  = ln(pi11/pi10) / ln((1-pi10)/(1-pi11)).
//
// Everything here is evaluated through the log-ratios
//   L1 = ln(pi11/pi10),  L0 = ln((1-pi10)/(1-pi11)),
// which are computed with log1p of d/pi10 and d/(1-pi11), d = pi11 - pi10, so
// the formulas stay accurate when the two marginals are close.

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "byzfusion/detection_model.hpp"
#include "byzfusion/errors.hpp"
#include "byzfusion/format.hpp"

namespace byzfusion {

/// |pi11 - pi10| below this is treated as identical distributions (C = 0).
inline constexpr double kDegenerateGap = 1e-12;
/// Lower limit on pi11 (G+1) - 1 before the bracket formula is 0/0.
inline constexpr double kBracketDenominatorFloor = 1e-14;
/// Default oracle search tolerance on t.
inline constexpr double kNumericTolerance = 1e-12;

struct ChernoffResult {
  double t_star;
  double c;  // nats
  std::optional<double> bracket_lo;
  std::optional<double> bracket_hi;
};

struct TStarBracket {
  double lo;  // A
  double hi;  // B
};

namespace detail {

/// log1p(x) - x without cancellation for small |x|.
inline double log1p_minus_x(double x) {
  if (std::abs(x) < 0.125) {
    // -x^2/2 + x^3/3 - x^4/4 + ...
    double power = x * x;
    double sum = 0.0;
    for (int k = 2; k < 60; ++k) {
      const double term = ((k % 2 == 0) ? -power : power) / k;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      power *= x;
    }
    return sum;
  }
  return std::log1p(x) - x;
}

inline void require_interior(const FusedMarginals& m, const char* who) {
  if (!m.interior()) {
    throw DomainError(std::string(who) + ": requires marginals in (0,1) (got pi10=" +
                      format_double(m.pi10()) + ", pi11=" + format_double(m.pi11()) + ")");
  }
}

/// Log-ratios for ordered interior marginals pi10 < pi11.
struct LogRatios {
  double d;   // pi11 - pi10
  double x;   // d / pi10
  double y;   // d / (1 - pi11)
  double l1;  // ln(pi11/pi10)
  double l0;  // ln((1-pi10)/(1-pi11))

  explicit LogRatios(const FusedMarginals& m)
      : d(m.pi11() - m.pi10()),
        x(d / m.pi10()),
        y(d / (1.0 - m.pi11())),
        l1(std::log1p(x)),
        l0(std::log1p(y)) {}

  /// pi11 L1 - (1-pi11) L0, i.e. L0 (pi11 (G+1) - 1).
  [[nodiscard]] double upper_gap(const FusedMarginals& m) const {
    const double pi11 = m.pi11();
    if (x <= 1.0 && y <= 1.0) {
      return d * x + pi11 * log1p_minus_x(x) - (1.0 - pi11) * log1p_minus_x(y);
    }
    return pi11 * l1 - (1.0 - pi11) * l0;
  }

  /// (1-pi10) L0 - pi10 L1, i.e. L0 (1 - pi10 (G+1)).
  [[nodiscard]] double lower_gap(const FusedMarginals& m) const {
    const double pi10 = m.pi10();
    if (x <= 1.0 && y <= 1.0) {
      return d * y + (1.0 - pi10) * log1p_minus_x(y) - pi10 * log1p_minus_x(x);
    }
    return (1.0 - pi10) * l0 - pi10 * l1;
  }
};

/// f(t) - 1, accurate near f = 1. Valid for any interior marginals.
inline double objective_minus_one(double t, const FusedMarginals& m) {
  const double pi10 = m.pi10();
  const double pi11 = m.pi11();
  // pi10^t pi11^(1-t) = pi11 exp(t ln(pi10/pi11)), likewise for the complement.
  const double d = pi11 - pi10;
  const double a = t * std::log1p(-d / pi11);
  const double b = t * std::log1p(d / (1.0 - pi11));
  return pi11 * std::expm1(a) + (1.0 - pi11) * std::expm1(b);
}

inline void require_unit_interval(double t, const char* who) {
  if (!(0.0 <= t && t <= 1.0)) {
    throw DomainError(std::string(who) + ": requires 0 <= t <= 1 (got " + format_double(t) + ")");
  }
}

}  // namespace detail

/// The Chernoff sum f(t), evaluated in the log domain. Value in (0, 1].
inline double chernoff_objective(double t, const FusedMarginals& m) {
  detail::require_unit_interval(t, "chernoff_objective");
  detail::require_interior(m, "chernoff_objective");
  const double lo0 = std::log(m.pi10());
  const double lo1 = std::log(m.pi11());
  const double lc0 = std::log1p(-m.pi10());
  const double lc1 = std::log1p(-m.pi11());
  return std::exp(t * lo0 + (1.0 - t) * lo1) + std::exp(t * lc0 + (1.0 - t) * lc1);
}

/// df/dt = (1-pi11) r0^t ln r0 + pi11 r1^t ln r1 with r0 = (1-pi10)/(1-pi11),
/// r1 = pi10/pi11.
inline double chernoff_objective_derivative(double t, const FusedMarginals& m) {
  detail::require_interior(m, "chernoff_objective_derivative");
  const double ln_r0 = std::log1p(-m.pi10()) - std::log1p(-m.pi11());
  const double ln_r1 = std::log(m.pi10()) - std::log(m.pi11());
  return (1.0 - m.pi11()) * std::exp(t * ln_r0) * ln_r0 + m.pi11() * std::exp(t * ln_r1) * ln_r1;
}

/// Relative disagreement between the two sides of the critical-point
/// condition  (((1/pi10)-1)/((1/pi11)-1))^t = G pi11/(1-pi11).
/// Zero exactly at the stationary point. Requires 0 < pi10 < pi11 < 1.
inline double stationarity_residual(double t, const FusedMarginals& m) {
  detail::require_interior(m, "stationarity_residual");
  const double pi10 = m.pi10();
  const double pi11 = m.pi11();
  const double d = pi11 - pi10;
  const double ln_ratio1 = std::log1p(d / pi10);
  const double ln_ratio0 = std::log1p(d / (1.0 - pi11));
  const double g = ln_ratio1 / ln_ratio0;
  const double lhs = std::exp(t * (ln_ratio1 + ln_ratio0));
  const double rhs = g * pi11 / (1.0 - pi11);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

/// Closed-form minimizer of the Chernoff sum for 0 < pi10 < pi11 < 1.
///
/// Throws NearDegenerateError when |pi11 - pi10| < 1e-12 (use the C = 0
/// convention instead) and OrderingError when pi11 < pi10.
inline double closed_form_t_star(const FusedMarginals& m) {
  detail::require_interior(m, "closed_form_t_star");
  const double d = m.pi11() - m.pi10();
  if (std::abs(d) < kDegenerateGap) {
    throw NearDegenerateError("closed_form_t_star: |pi11 - pi10| = " + format_double(std::abs(d)) +
                              " < 1e-12; identical distributions have C = 0 by convention");
  }
  if (d < 0.0) {
    throw OrderingError("closed_form_t_star: requires pi11 > pi10 (got pi10=" +
                        format_double(m.pi10()) + ", pi11=" + format_double(m.pi11()) + ")");
  }
  const detail::LogRatios lr(m);
  // ln(G pi11/(1-pi11)) = log1p(r) with r = (pi11 L1 - (1-pi11) L0) / ((1-pi11) L0).
  const double r = lr.upper_gap(m) / ((1.0 - m.pi11()) * lr.l0);
  // ln(((1/pi10)-1)/((1/pi11)-1)) = L1 + L0.
  return std::log1p(r) / (lr.l1 + lr.l0);
}

/// Derivative-free golden-section minimization of the Chernoff sum over
/// [0,1]. Used as the independent oracle for closed_form_t_star.
///
/// The sum is evaluated in quad precision: near its minimum f is flat to
/// second order, so double-precision comparisons cannot place the argmin
/// closer than about sqrt(eps / f'').
inline double numeric_t_star(const FusedMarginals& m, double tol = kNumericTolerance) {
  detail::require_interior(m, "numeric_t_star");
  if (!(tol > 0.0)) {
    throw DomainError("numeric_t_star: requires tol > 0 (got " + format_double(tol) + ")");
  }
  using quad = __float128;
  const quad lo0 = logq(static_cast<quad>(m.pi10()));
  const quad lo1 = logq(static_cast<quad>(m.pi11()));
  const quad lc0 = log1pq(-static_cast<quad>(m.pi10()));
  const quad lc1 = log1pq(-static_cast<quad>(m.pi11()));
  const auto f = [&](quad t) { return expq(t * lo0 + (1 - t) * lo1) + expq(t * lc0 + (1 - t) * lc1); };

  const quad inv_phi = (sqrtq(static_cast<quad>(5)) - 1) / 2;
  quad a = 0;
  quad b = 1;
  quad c = b - inv_phi * (b - a);
  quad e = a + inv_phi * (b - a);
  quad fc = f(c);
  quad fe = f(e);
  constexpr int kMaxIterations = 400;
  for (int i = 0; i < kMaxIterations; ++i) {
    if (b - a <= tol) {
      return static_cast<double>((a + b) / 2);
    }
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = f(e);
    }
  }
  throw NumericError("numeric_t_star: bracket width " + format_double(static_cast<double>(b - a)) +
                     " above tol=" + format_double(tol) + " after " +
                     std::to_string(kMaxIterations) + " iterations");
}

/// Bounds A < t* < B that hold whenever the marginals come from a sensor
/// with pd > pf under a Byzantine fraction below one half.
inline TStarBracket t_star_bounds(const FusedMarginals& m, const SensorOperatingPoint& sensor) {
  detail::require_interior(m, "t_star_bounds");
  const double d = m.pi11() - m.pi10();
  if (std::abs(d) < kDegenerateGap) {
    throw NearDegenerateError("t_star_bounds: |pi11 - pi10| < 1e-12");
  }
  if (d < 0.0) {
    throw OrderingError("t_star_bounds: requires pi11 > pi10 (Byzantine fraction below 1/2)");
  }
  const detail::LogRatios lr(m);
  const double upper = lr.upper_gap(m);  // L0 (pi11 (G+1) - 1)
  const double lower = lr.lower_gap(m);  // L0 (1 - pi10 (G+1))
  if (upper / lr.l0 < kBracketDenominatorFloor) {
    throw NearDegenerateError("t_star_bounds: pi11 (G+1) - 1 = " + format_double(upper / lr.l0) +
                              " below 1e-14");
  }
  if (lower < 0.0) {
    throw DomainError("t_star_bounds: pi10 (G+1) <= 1 violated");
  }
  const double pi10 = m.pi10();
  const double pi11 = m.pi11();
  const double y = (pi11 / pi10) * ((1.0 - pi11) / (1.0 - pi10)) * (lower / upper);
  const double a = 1.0 / (((1.0 - sensor.pf()) / (1.0 - sensor.pd())) * y + 1.0);
  const double b = 1.0 / ((sensor.pf() / sensor.pd()) * y + 1.0);
  if (!(a < b)) {
    throw DomainError("t_star_bounds: degenerate bracket A=" + format_double(a) +
                      ", B=" + format_double(b));
  }
  return {a, b};
}

namespace detail {

inline double information_at(double t, const FusedMarginals& m) {
  return std::max(0.0, -std::log1p(objective_minus_one(t, m)));
}

}  // namespace detail

/// Chernoff information of the report distributions.
///
/// Identical marginals (within 1e-12) give (t* = 0.5, C = 0). pi11 > pi10
/// uses the closed form; pi11 < pi10 falls back to numeric_t_star. The
/// bracket is filled when a sensor is supplied and t_star_bounds accepts the
/// input.
inline ChernoffResult chernoff_information(const FusedMarginals& m,
                                           const std::optional<SensorOperatingPoint>& sensor = {}) {
  detail::require_interior(m, "chernoff_information");
  const double d = m.pi11() - m.pi10();
  if (std::abs(d) < kDegenerateGap) {
    return {0.5, 0.0, std::nullopt, std::nullopt};
  }
  if (d < 0.0) {
    const double t = numeric_t_star(m, kNumericTolerance);
    return {t, detail::information_at(t, m), std::nullopt, std::nullopt};
  }
  const double t = closed_form_t_star(m);
  ChernoffResult result{t, detail::information_at(t, m), std::nullopt, std::nullopt};
  if (sensor) {
    try {
      const TStarBracket bracket = t_star_bounds(m, *sensor);
      result.bracket_lo = bracket.lo;
      result.bracket_hi = bracket.hi;
    } catch (const DomainError&) {
      // bracket stays absent
    }
  }
  return result;
}

/// C of the marginals induced by (alpha, attack, sensor).
inline ChernoffResult chernoff_information(double alpha, const AttackStrategy& attack,
                                           const SensorOperatingPoint& sensor) {
  return chernoff_information(marginalize(alpha, attack, sensor), sensor);
}

}  // namespace byzfusion
