#include "effint/extreal.hpp"

#include <cassert>
#include <limits>

namespace effint {

const Scalar& ExtReal::value() const {
  assert(is_finite());
  return v_;
}

double ExtReal::dbl() const {
  switch (kind_) {
    case Kind::Neg: return -std::numeric_limits<double>::infinity();
    case Kind::Pos: return std::numeric_limits<double>::infinity();
    default: return v_.dbl();
  }
}

ExtReal ExtReal::operator-() const {
  switch (kind_) {
    case Kind::Neg: return pos_inf();
    case Kind::Pos: return neg_inf();
    default: return ExtReal(-v_);
  }
}

ExtReal operator+(const ExtReal& a, const Scalar& b) {
  if (!a.is_finite()) return a;
  return ExtReal(a.v_ + b);
}

ExtReal operator-(const ExtReal& a, const Scalar& b) { return a + (-b); }

bool operator==(const ExtReal& a, const ExtReal& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != ExtReal::Kind::Fin) return true;
  return a.v_ == b.v_;
}

std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
  auto rank = [](ExtReal::Kind k) { return k == ExtReal::Kind::Neg ? -1 : (k == ExtReal::Kind::Pos ? 1 : 0); };
  int ra = rank(a.kind_), rb = rank(b.kind_);
  if (ra != rb) return ra <=> rb;
  if (a.kind_ != ExtReal::Kind::Fin) return std::partial_ordering::equivalent;
  return a.v_ < b.v_   ? std::partial_ordering::less
         : a.v_ > b.v_ ? std::partial_ordering::greater
                       : std::partial_ordering::equivalent;
}

std::string ExtReal::str() const {
  switch (kind_) {
    case Kind::Neg: return "-inf";
    case Kind::Pos: return "inf";
    default: return v_.str();
  }
}

std::optional<ExtReal> ExtReal::parse(const std::string& s) {
  if (s == "-inf") return neg_inf();
  if (s == "inf" || s == "+inf") return pos_inf();
  auto sc = Scalar::parse(s);
  if (!sc) return std::nullopt;
  return ExtReal(*sc);
}

Scalar default_anchor(const ExtReal& a, const ExtReal& b) {
  assert(a < b);
  if (a.is_finite() && b.is_finite())
    return (a.value() + b.value()) / Scalar(2);
  if (a.is_finite()) return a.value() + Scalar(1);
  if (b.is_finite()) return b.value() - Scalar(1);
  return Scalar(0);
}

}  // namespace effint
