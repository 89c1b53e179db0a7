#pragma once

// Attacker-side quantities: when the FC is blinded, which flipping strategy
// minimizes the Chernoff information, and the exponent a FC can guarantee
// when it only knows an upper bound on the Byzantine fraction.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "byzfusion/chernoff.hpp"
#include "byzfusion/detection_model.hpp"

namespace byzfusion {

/// Smallest Byzantine fraction that can blind the FC (attack (1,1)).
inline constexpr double kBlindingThreshold = 0.5;

enum class AttackRegime { kSubBlinding, kBlinding };

inline const char* to_string(AttackRegime regime) {
  return regime == AttackRegime::kSubBlinding ? "sub-blinding" : "blinding";
}

struct OptimalAttack {
  AttackStrategy representative;
  AttackRegime regime;
  /// p10 + p01 = 1/alpha along the optimal line; present only when blinding.
  std::optional<double> blinding_line_sum;
};

/// Byzantine fraction alpha = 1/(p10 + p01) at which this attack makes the
/// marginals coincide; +inf for the honest strategy. The sum is formed
/// without rounding.
inline double blinding_fraction(const AttackStrategy& attack) {
  const __float128 sum = static_cast<__float128>(attack.p10()) + static_cast<__float128>(attack.p01());
  if (sum == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(1 / sum);
}

/// True iff |pi11 - pi10| <= tol. The marginal gap equals
/// (pd - pf) |1 - alpha (p10 + p01)|, and both forms are checked against each
/// other.
inline bool is_blinded(double alpha, const AttackStrategy& attack, const SensorOperatingPoint& sensor,
                       double tol = 1e-12) {
  const FusedMarginals m = marginalize(alpha, attack, sensor);
  const double gap = std::abs(m.pi11() - m.pi10());
  const double line_gap =
      std::abs(alpha * (attack.p10() + attack.p01()) - 1.0) * (sensor.pd() - sensor.pf());
  if (std::abs(gap - line_gap) > 1e-14) {
    throw std::logic_error("is_blinded: marginal gap " + format_double(gap) +
                           " disagrees with blinding-line residual " + format_double(line_gap));
  }
  return gap <= tol;
}

namespace detail {

/// Point of the blinding line at the symmetric point 1/(2 alpha), moved by a
/// few ulps in p01 until blinding_fraction reproduces alpha exactly. Doubles
/// of the form 1/(q + q) are too sparse above alpha = 1/sqrt(2) to hit every
/// alpha, while sums of two distinct doubles are not.
inline AttackStrategy blinding_representative(double alpha) {
  const double q = std::min(1.0, 1.0 / (2.0 * alpha));
  AttackStrategy best{q, q};
  double best_err = std::abs(blinding_fraction(best) - alpha);
  double below = q;
  double above = q;
  for (int step = 0; step < 16 && best_err != 0.0; ++step) {
    below = std::nextafter(below, 0.0);
    above = std::nextafter(above, 2.0);
    for (double p01 : {below, above}) {
      if (p01 > 1.0) continue;
      const AttackStrategy candidate{q, p01};
      const double err = std::abs(blinding_fraction(candidate) - alpha);
      if (err < best_err) {
        best = candidate;
        best_err = err;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Flipping strategy minimizing the Chernoff information for a given
/// Byzantine fraction. Below one half that is always (1,1); from one half up
/// every strategy with alpha (p10 + p01) = 1 drives C to zero and the
/// (near) symmetric point of that line is returned.
inline OptimalAttack optimal_attack(double alpha) {
  validate_fraction(alpha);
  if (alpha < kBlindingThreshold) {
    return {AttackStrategy{1.0, 1.0}, AttackRegime::kSubBlinding, std::nullopt};
  }
  return {detail::blinding_representative(alpha), AttackRegime::kBlinding, 1.0 / alpha};
}

/// Exponent a FC guarantees when the true Byzantine fraction is at most
/// alpha_tilde: the Chernoff information under the optimal attack at
/// alpha_tilde, and zero once alpha_tilde can blind.
inline double robust_design_exponent(double alpha_tilde, const SensorOperatingPoint& sensor) {
  validate_fraction(alpha_tilde, "alpha_tilde");
  if (alpha_tilde >= kBlindingThreshold) return 0.0;
  const OptimalAttack attack = optimal_attack(alpha_tilde);
  return chernoff_information(marginalize(alpha_tilde, attack.representative, sensor)).c;
}

}  // namespace byzfusion
