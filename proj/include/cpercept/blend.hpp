#pragma once

#include "cpercept/opacity.hpp"

namespace cpercept {

inline constexpr double kDefaultInverseEpsilon = 1e-4;

/// Observed luminance L_O = y L_P + (1 - y) I_a.
///
/// All inputs must lie in [0,1] (DomainError otherwise). The result is kept
/// inside [min(l_p, i_a), max(l_p, i_a)].
double forward(double l_p, double i_a, double y);

/// Recovers L_P = (L_O - (1 - y) I_a) / y. The result is not clamped.
///
/// Throws SingularityError when y < epsilon, DomainError for other bad inputs.
double invert(double l_o, double i_a, double y, double epsilon = kDefaultInverseEpsilon);

/// Largest amplification 1/y the inverse applies over s in [0,1] for an
/// affine model: 1 / min(a0, a1). Throws DomainError unless a0, a1 > 0.
double inverse_range_bound(const AffineOpacity& model);

struct LuminanceSample {
  double l_p;
  double i_a;
  double l_o;
};

inline LuminanceSample observe(double l_p, double i_a, double y) {
  return {l_p, i_a, forward(l_p, i_a, y)};
}

}  // namespace cpercept
