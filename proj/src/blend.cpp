#include "cpercept/blend.hpp"

#include <algorithm>
#include <sstream>

#include "cpercept/errors.hpp"

namespace cpercept {
namespace {

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << v << " is outside [0,1]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double forward(double l_p, double i_a, double y) {
  require_unit(l_p, "l_p");
  require_unit(i_a, "i_a");
  require_unit(y, "y");
  const double blended = y * l_p + (1.0 - y) * i_a;
  // Rounding can step one ulp past the bracket.
  return std::clamp(blended, std::min(l_p, i_a), std::max(l_p, i_a));
}

double invert(double l_o, double i_a, double y, double epsilon) {
  require_unit(l_o, "l_o");
  require_unit(i_a, "i_a");
  if (!(epsilon > 0.0)) throw DomainError("inverse epsilon must be positive");
  if (!(y <= 1.0)) throw DomainError("opacity y is above 1");
  if (!(y >= epsilon)) {
    std::ostringstream msg;
    msg << "opacity " << y << " is below epsilon " << epsilon << "; the inverse diverges";
    throw SingularityError(msg.str(), y, epsilon);
  }
  return (l_o - (1.0 - y) * i_a) / y;
}

double inverse_range_bound(const AffineOpacity& model) {
  if (!(model.a0 > 0.0 && model.a1 > 0.0)) throw DomainError("affine coefficients must be positive");
  // y is linear in s, so its minimum over [0,1] sits at an endpoint.
  return 1.0 / std::min(model.a0, model.a1);
}

}  // namespace cpercept
