#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <string>
#include <variant>

namespace effint {

using Rational = boost::multiprecision::cpp_rational;

// Numeric value that stays an exact rational while every input is rational
// and degrades to double once an inexact operation enters. Comparisons are
// always exact: a double is a dyadic rational, so mixed comparisons convert
// the double side exactly instead of rounding the rational side.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(int n) : v_(Rational(n)) {}
  Scalar(long long n) : v_(Rational(n)) {}

  static Scalar rat(long long num, long long den);
  static Scalar exact(Rational r) { return Scalar(std::move(r)); }
  static Scalar approx(double d);

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }
  double dbl() const;
  const Rational& exact_value() const;  // requires is_exact()
  Rational as_rational() const;         // exact value, or exact dyadic of the double

  Scalar operator-() const;
  Scalar abs() const;
  Scalar pow_int(long long e) const;  // e < 0 requires nonzero base

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

  static Scalar min(const Scalar& a, const Scalar& b) { return a <= b ? a : b; }
  static Scalar max(const Scalar& a, const Scalar& b) { return a >= b ? a : b; }

  bool is_zero() const;
  int sign() const;

  // "p/q" or "p" when exact, shortest round-trip decimal otherwise.
  std::string str() const;
  // Accepts "p/q", integers, and decimal/exponent literals (those parse as
  // doubles). Returns nullopt on malformed input.
  static std::optional<Scalar> parse(const std::string& s);

 private:
  explicit Scalar(Rational r) : v_(std::move(r)) {}
  std::variant<Rational, double> v_;
};

std::string double_str(double d);  // shortest round-trip

}  // namespace effint
