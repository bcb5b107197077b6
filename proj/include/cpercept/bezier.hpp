#pragma once

// Exponent polynomials in Bernstein (Bezier) form.
//
// f(s) = sum_i C(n,i) B[i] (1-s)^(n-i) s^i, s in [0,1]. The binomial factor
// belongs to the basis; the stored coefficients are the control values B[i],
// so f(0) = B[0] and f(1) = B[n].

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "json.hpp"

namespace cpercept {

class BezierPolynomial {
 public:
  /// Throws DomainError when `coefficients` is empty.
  explicit BezierPolynomial(std::vector<double> coefficients);
  BezierPolynomial(std::initializer_list<double> coefficients);

  std::size_t degree() const noexcept { return coefficients_.size() - 1; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  double operator[](std::size_t i) const { return coefficients_.at(i); }

  bool operator==(const BezierPolynomial&) const = default;

 private:
  std::vector<double> coefficients_;
};

/// c[0] + c[1] s + ... + c[n] s^n
struct MonomialPolynomial {
  std::vector<double> coefficients;

  std::size_t degree() const noexcept { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  /// Horner evaluation; no domain restriction.
  double operator()(double s) const noexcept;
};

/// de Casteljau evaluation. Exact at s = 0 and s = 1. Throws DomainError for s outside [0,1].
double eval(const BezierPolynomial& poly, double s);

MonomialPolynomial to_monomial(const BezierPolynomial& poly);

/// Same curve, one degree higher. Endpoints are copied unchanged.
BezierPolynomial elevate_degree(const BezierPolynomial& poly);

bool all_coefficients_positive(const BezierPolynomial& poly) noexcept;

/// min over a uniform grid of `points` samples on [0,1].
double min_on_unit_interval(const BezierPolynomial& poly, int points = 1001);

}  // namespace cpercept

namespace nlohmann {
// JSON form is a plain array of numbers; the degree is implied by its length.
template <>
struct adl_serializer<cpercept::BezierPolynomial> {
  static cpercept::BezierPolynomial from_json(const json& j);
  static void to_json(json& j, const cpercept::BezierPolynomial& poly);
};
}  // namespace nlohmann
