#pragma once

#include <stdexcept>
#include <string>

namespace cpercept {

/// An argument lies outside the domain of the operation (e.g. s outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computed opacity fell outside [0,1]. Carries the size that produced it.
class RangeError : public std::range_error {
 public:
  RangeError(const std::string& what, double s) : std::range_error(what), s_(s) {}
  double offending_s() const noexcept { return s_; }

 private:
  double s_;
};

/// Inverting the blend with an opacity below the configured epsilon.
class SingularityError : public std::domain_error {
 public:
  SingularityError(const std::string& what, double y, double epsilon)
      : std::domain_error(what), y_(y), epsilon_(epsilon) {}
  double opacity() const noexcept { return y_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  double y_;
  double epsilon_;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input text; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cpercept
