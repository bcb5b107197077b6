#include "cpercept/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpercept/errors.hpp"

namespace cpercept {
namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * double(n - k + i) / double(i);
  }
  return std::round(result);
}

}  // namespace

BezierPolynomial::BezierPolynomial(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw DomainError("Bezier polynomial needs at least one coefficient");
}

BezierPolynomial::BezierPolynomial(std::initializer_list<double> coefficients)
    : BezierPolynomial(std::vector<double>(coefficients)) {}

double MonomialPolynomial::operator()(double s) const noexcept {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double eval(const BezierPolynomial& poly, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("s = " + std::to_string(s) + " is outside [0,1]");
  const auto b = poly.coefficients();
  if (s == 0.0) return b.front();
  if (s == 1.0) return b.back();

  std::vector<double> work(b.begin(), b.end());
  const double t = 1.0 - s;
  for (std::size_t level = work.size() - 1; level > 0; --level) {
    for (std::size_t i = 0; i < level; ++i) work[i] = t * work[i] + s * work[i + 1];
  }
  return work[0];
}

MonomialPolynomial to_monomial(const BezierPolynomial& poly) {
  // c[j] = C(n,j) * sum_{i<=j} (-1)^(j-i) C(j,i) B[i]
  const std::size_t n = poly.degree();
  const auto b = poly.coefficients();
  MonomialPolynomial out;
  out.coefficients.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i <= j; ++i) {
      const double term = binomial(j, i) * b[i];
      sum += ((j - i) % 2 == 0) ? term : -term;
    }
    out.coefficients[j] = binomial(n, j) * sum;
  }
  return out;
}

BezierPolynomial elevate_degree(const BezierPolynomial& poly) {
  const auto b = poly.coefficients();
  const std::size_t n = poly.degree();
  std::vector<double> out(n + 2);
  out.front() = b.front();
  out.back() = b.back();
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = double(i) / double(n + 1);
    out[i] = w * b[i - 1] + (1.0 - w) * b[i];
  }
  return BezierPolynomial(std::move(out));
}

bool all_coefficients_positive(const BezierPolynomial& poly) noexcept {
  const auto b = poly.coefficients();
  return std::all_of(b.begin(), b.end(), [](double v) { return v > 0.0; });
}

double min_on_unit_interval(const BezierPolynomial& poly, int points) {
  if (points < 2) throw DomainError("need at least two grid points");
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) lo = std::min(lo, eval(poly, double(i) / double(points - 1)));
  return lo;
}

}  // namespace cpercept

namespace nlohmann {

cpercept::BezierPolynomial adl_serializer<cpercept::BezierPolynomial>::from_json(const json& j) {
  if (!j.is_array()) throw cpercept::ValidationError("Bezier coefficients must be a JSON array");
  std::vector<double> coefficients;
  coefficients.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw cpercept::ValidationError("Bezier coefficients must be numbers");
    coefficients.push_back(v.get<double>());
  }
  if (coefficients.empty()) throw cpercept::ValidationError("Bezier coefficient array is empty");
  return cpercept::BezierPolynomial(std::move(coefficients));
}

void adl_serializer<cpercept::BezierPolynomial>::to_json(json& j, const cpercept::BezierPolynomial& poly) {
  j = json::array();
  for (double c : poly.coefficients()) j.push_back(c);
}

}  // namespace nlohmann
