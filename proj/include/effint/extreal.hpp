#pragma once

#include <compare>
#include <optional>
#include <string>

#include "effint/scalar.hpp"

namespace effint {

// Element of the extended real line. Total order; addition of a finite
// scalar leaves the infinities fixed.
class ExtReal {
 public:
  ExtReal() : kind_(Kind::Fin), v_() {}
  ExtReal(Scalar s) : kind_(Kind::Fin), v_(std::move(s)) {}  // NOLINT(runtime/explicit)

  static ExtReal neg_inf() { return ExtReal(Kind::Neg); }
  static ExtReal pos_inf() { return ExtReal(Kind::Pos); }

  bool is_finite() const { return kind_ == Kind::Fin; }
  bool is_neg_inf() const { return kind_ == Kind::Neg; }
  bool is_pos_inf() const { return kind_ == Kind::Pos; }

  const Scalar& value() const;
  double dbl() const;

  ExtReal operator-() const;
  friend ExtReal operator+(const ExtReal& a, const Scalar& b);
  friend ExtReal operator-(const ExtReal& a, const Scalar& b);

  friend bool operator==(const ExtReal& a, const ExtReal& b);
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b);

  std::string str() const;  // "-inf", "inf", or the scalar
  static std::optional<ExtReal> parse(const std::string& s);

 private:
  enum class Kind { Neg, Fin, Pos };
  explicit ExtReal(Kind k) : kind_(k), v_() {}
  Kind kind_;
  Scalar v_;
};

// Reference point of the open interval (a, b): the average when both ends
// are finite, one unit inside a single finite end, 0 when neither end is
// finite.
Scalar default_anchor(const ExtReal& a, const ExtReal& b);

}  // namespace effint
