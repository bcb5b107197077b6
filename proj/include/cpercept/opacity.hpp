#pragma once

// Opacity of the foreground as a function of its relative size s in [0,1].
//
//   power:  y = s^f(s), f a Bezier exponent polynomial (y(0) = 0, y(1) = 1)
//   affine: y = a0 (1 - s) + a1 s

#include <string>
#include <variant>
#include <vector>

#include "cpercept/bezier.hpp"

namespace cpercept {

struct PowerOpacity {
  BezierPolynomial exponent;
  bool operator==(const PowerOpacity&) const = default;
};

struct AffineOpacity {
  double a0;
  double a1;
  bool operator==(const AffineOpacity&) const = default;
};

class OpacityModel {
 public:
  using Variant = std::variant<PowerOpacity, AffineOpacity>;

  OpacityModel(PowerOpacity power) : model_(std::move(power)) {}
  OpacityModel(AffineOpacity affine) : model_(affine) {}

  bool is_power() const noexcept { return std::holds_alternative<PowerOpacity>(model_); }
  bool is_affine() const noexcept { return std::holds_alternative<AffineOpacity>(model_); }
  const PowerOpacity* as_power() const noexcept { return std::get_if<PowerOpacity>(&model_); }
  const AffineOpacity* as_affine() const noexcept { return std::get_if<AffineOpacity>(&model_); }
  const Variant& variant() const noexcept { return model_; }

  std::string kind() const { return is_power() ? "power" : "affine"; }

  bool operator==(const OpacityModel&) const = default;

 private:
  Variant model_;
};

/// Quadratic exponent B = (0.20, 0.25, 1.00), i.e. f(s) = 0.7 s^2 + 0.1 s + 0.2.
OpacityModel default_power_model();
/// y = 0.6 (1 - s) + 1.0 s.
OpacityModel default_affine_model();

/// Opacity at size s. Never clamps.
///
/// Throws DomainError for s outside [0,1] (or a non-positive exponent at s = 0),
/// and RangeError when the result leaves [0,1].
double opacity(const OpacityModel& model, double s);

enum class FitObjective {
  Minimax,       ///< smallest maximum deviation over the samples
  LeastSquares,  ///< smallest sum of squared deviations
};

struct AffineFitOptions {
  double s_min = 0.05;
  double s_max = 1.0;
  int samples = 96;
  FitObjective objective = FitObjective::Minimax;
};

/// Fits a0 (1 - s) + a1 s to `model` over `samples` uniform points in
/// [s_min, s_max]. Throws DomainError on a degenerate sample set.
AffineOpacity fit_affine(const OpacityModel& model, const AffineFitOptions& options = {});

/// max |a(s) - b(s)| over `points` uniform samples of [s_lo, s_hi].
double max_abs_difference(const OpacityModel& a, const OpacityModel& b, double s_lo, double s_hi,
                          int points);

/// True when opacity is non-decreasing over `points` uniform samples of [0,1].
bool is_monotone(const OpacityModel& model, int points = 1001);

/// Human-readable violations of the intake rules: positive Bezier coefficients
/// for power models, 0 < a0 <= a1 <= 1 for affine ones, and monotone opacity.
/// Empty when the model is acceptable.
std::vector<std::string> model_findings(const OpacityModel& model);

}  // namespace cpercept

namespace nlohmann {
// {"kind":"power","bezier":[...]} or {"kind":"affine","a0":x,"a1":y}
template <>
struct adl_serializer<cpercept::OpacityModel> {
  static cpercept::OpacityModel from_json(const json& j);
  static void to_json(json& j, const cpercept::OpacityModel& model);
};
}  // namespace nlohmann
