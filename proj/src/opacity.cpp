#include "cpercept/opacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include "cpercept/errors.hpp"

namespace cpercept {
namespace {

struct Line {
  double intercept;
  double slope;
};

struct Point {
  double s;
  double y;
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.s - o.s) * (b.y - o.y) - (a.y - o.y) * (b.s - o.s);
}

// Points must be sorted by s with distinct abscissae.
Line least_squares_line(std::span<const Point> pts) {
  double mean_s = 0.0, mean_y = 0.0;
  for (const auto& p : pts) {
    mean_s += p.s;
    mean_y += p.y;
  }
  mean_s /= double(pts.size());
  mean_y /= double(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : pts) {
    sxy += (p.s - mean_s) * (p.y - mean_y);
    sxx += (p.s - mean_s) * (p.s - mean_s);
  }
  const double slope = sxy / sxx;
  return {mean_y - slope * mean_s, slope};
}

// Best uniform approximation by a line. The optimum is parallel to an edge of
// the convex hull, and the vertical spread of the residuals is convex in the
// slope, so a binary search over the sorted edge slopes finds it.
Line minimax_line(std::span<const Point> pts) {
  std::vector<Point> lower, upper;
  for (const auto& p : pts) {
    while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), p) <= 0.0) lower.pop_back();
    lower.push_back(p);
    while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), p) >= 0.0) upper.pop_back();
    upper.push_back(p);
  }

  std::vector<double> slopes;
  auto add_edges = [&slopes](const std::vector<Point>& chain) {
    for (std::size_t i = 1; i < chain.size(); ++i) {
      slopes.push_back((chain[i].y - chain[i - 1].y) / (chain[i].s - chain[i - 1].s));
    }
  };
  add_edges(lower);
  add_edges(upper);
  std::sort(slopes.begin(), slopes.end());
  slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());

  std::vector<Point> hull = lower;
  hull.insert(hull.end(), upper.begin(), upper.end());
  auto residual_bounds = [&hull](double slope) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : hull) {
      const double r = p.y - slope * p.s;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return std::pair{lo, hi};
  };
  auto spread = [&](double slope) {
    const auto [lo, hi] = residual_bounds(slope);
    return hi - lo;
  };

  std::size_t first = 0, last = slopes.size() - 1;
  while (first < last) {
    const std::size_t mid = first + (last - first) / 2;
    if (spread(slopes[mid + 1]) < spread(slopes[mid])) {
      first = mid + 1;
    } else {
      last = mid;
    }
  }
  const double slope = slopes[first];
  const auto [lo, hi] = residual_bounds(slope);
  return {0.5 * (lo + hi), slope};
}

void check_unit(double s, const char* name) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << s << " is outside [0,1]";
    throw DomainError(msg.str());
  }
}

}  // namespace

OpacityModel default_power_model() { return PowerOpacity{BezierPolynomial{0.20, 0.25, 1.00}}; }

OpacityModel default_affine_model() { return AffineOpacity{0.6, 1.0}; }

double opacity(const OpacityModel& model, double s) {
  check_unit(s, "s");
  double y = 0.0;
  if (const auto* power = model.as_power()) {
    const double exponent = eval(power->exponent, s);
    if (s == 0.0) {
      // Continuity from the right: 0^f = 0 for f > 0.
      if (!(exponent > 0.0)) throw DomainError("exponent polynomial is not positive at s = 0");
      return 0.0;
    }
    y = std::pow(s, exponent);
  } else {
    const auto& affine = *model.as_affine();
    y = affine.a0 * (1.0 - s) + affine.a1 * s;
  }
  if (!(y >= 0.0 && y <= 1.0)) {
    std::ostringstream msg;
    msg << "opacity " << y << " at s = " << s << " is outside [0,1]";
    throw RangeError(msg.str(), s);
  }
  return y;
}

AffineOpacity fit_affine(const OpacityModel& model, const AffineFitOptions& options) {
  check_unit(options.s_min, "s_min");
  check_unit(options.s_max, "s_max");
  if (!(options.s_min < options.s_max)) throw DomainError("fit range is empty: s_min must be below s_max");
  if (options.samples < 2) throw DomainError("fit needs at least two samples");

  std::vector<Point> pts(std::size_t(options.samples));
  const double span = options.s_max - options.s_min;
  for (int i = 0; i < options.samples; ++i) {
    const double s = (i == options.samples - 1) ? options.s_max
                                                : options.s_min + span * double(i) / double(options.samples - 1);
    pts[std::size_t(i)] = {s, opacity(model, s)};
  }

  const Line line = options.objective == FitObjective::Minimax ? minimax_line(pts) : least_squares_line(pts);
  return {line.intercept, line.intercept + line.slope};
}

double max_abs_difference(const OpacityModel& a, const OpacityModel& b, double s_lo, double s_hi, int points) {
  if (points < 2) throw DomainError("need at least two grid points");
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double s = (i == points - 1) ? s_hi : s_lo + (s_hi - s_lo) * double(i) / double(points - 1);
    worst = std::max(worst, std::abs(opacity(a, s) - opacity(b, s)));
  }
  return worst;
}

bool is_monotone(const OpacityModel& model, int points) {
  double previous = opacity(model, 0.0);
  for (int i = 1; i < points; ++i) {
    const double y = opacity(model, double(i) / double(points - 1));
    if (y < previous) return false;
    previous = y;
  }
  return true;
}

std::vector<std::string> model_findings(const OpacityModel& model) {
  std::vector<std::string> findings;
  if (const auto* power = model.as_power()) {
    const auto b = power->exponent.coefficients();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!(std::isfinite(b[i]) && b[i] > 0.0)) {
        std::ostringstream msg;
        msg << "exponent coefficient b" << i << " = " << b[i] << " is not positive";
        findings.push_back(msg.str());
      }
    }
  } else {
    const auto& affine = *model.as_affine();
    if (!(std::isfinite(affine.a0) && std::isfinite(affine.a1) && affine.a0 > 0.0 && affine.a0 <= affine.a1 &&
          affine.a1 <= 1.0)) {
      std::ostringstream msg;
      msg << "affine coefficients (" << affine.a0 << ", " << affine.a1 << ") violate 0 < a0 <= a1 <= 1";
      findings.push_back(msg.str());
    }
  }
  if (!findings.empty()) return findings;

  try {
    if (!is_monotone(model)) findings.emplace_back("opacity is not non-decreasing in s");
  } catch (const std::exception& e) {
    findings.emplace_back(e.what());
  }
  return findings;
}

}  // namespace cpercept

namespace nlohmann {

cpercept::OpacityModel adl_serializer<cpercept::OpacityModel>::from_json(const json& j) {
  using cpercept::ValidationError;
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("opacity model needs a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "power") {
    if (!j.contains("bezier")) throw ValidationError("power model needs \"bezier\"");
    return cpercept::PowerOpacity{j["bezier"].get<cpercept::BezierPolynomial>()};
  }
  if (kind == "affine") {
    if (!j.contains("a0") || !j["a0"].is_number() || !j.contains("a1") || !j["a1"].is_number()) {
      throw ValidationError("affine model needs numeric \"a0\" and \"a1\"");
    }
    return cpercept::AffineOpacity{j["a0"].get<double>(), j["a1"].get<double>()};
  }
  throw ValidationError("unknown opacity model kind \"" + kind + "\"");
}

void adl_serializer<cpercept::OpacityModel>::to_json(json& j, const cpercept::OpacityModel& model) {
  if (const auto* power = model.as_power()) {
    j = json{{"kind", "power"}, {"bezier", power->exponent}};
  } else {
    const auto& affine = *model.as_affine();
    j = json{{"kind", "affine"}, {"a0", affine.a0}, {"a1", affine.a1}};
  }
}

}  // namespace nlohmann
