#include "effint/scalar.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace effint {

Scalar Scalar::rat(long long num, long long den) {
  assert(den != 0);
  return Scalar(Rational(num, den));
}

Scalar Scalar::approx(double d) {
  assert(std::isfinite(d));
  Scalar s(0);
  s.v_ = d;
  return s;
}

double Scalar::dbl() const {
  if (is_exact()) return static_cast<double>(std::get<Rational>(v_));
  return std::get<double>(v_);
}

const Rational& Scalar::exact_value() const {
  assert(is_exact());
  return std::get<Rational>(v_);
}

Rational Scalar::as_rational() const {
  if (is_exact()) return std::get<Rational>(v_);
  return Rational(std::get<double>(v_));
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-std::get<Rational>(v_)));
  return approx(-std::get<double>(v_));
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

Scalar Scalar::pow_int(long long e) const {
  if (e == 0) return Scalar(1);
  if (is_exact()) {
    const Rational& r = std::get<Rational>(v_);
    assert(!(e < 0 && r == 0));
    Rational acc(1);
    Rational base = e < 0 ? Rational(1) / r : r;
    long long n = e < 0 ? -e : e;
    while (n > 0) {
      if (n & 1) acc *= base;
      base *= base;
      n >>= 1;
    }
    return Scalar(std::move(acc));
  }
  return approx(std::pow(std::get<double>(v_), static_cast<double>(e)));
}

namespace {
template <class Op>
Scalar binop(const Scalar& a, const Scalar& b, Op op) {
  if (a.is_exact() && b.is_exact())
    return Scalar::exact(op(a.exact_value(), b.exact_value()));
  return Scalar::approx(op(a.dbl(), b.dbl()));
}
}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return binop(a, b, [](const auto& x, const auto& y) { return x + y; });
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  return binop(a, b, [](const auto& x, const auto& y) { return x - y; });
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  return binop(a, b, [](const auto& x, const auto& y) { return x * y; });
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  assert(!b.is_zero());
  return binop(a, b, [](const auto& x, const auto& y) { return x / y; });
}

bool operator==(const Scalar& a, const Scalar& b) {
  return a.as_rational() == b.as_rational();
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  Rational x = a.as_rational(), y = b.as_rational();
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Scalar::is_zero() const {
  if (is_exact()) return std::get<Rational>(v_) == 0;
  return std::get<double>(v_) == 0.0;
}

int Scalar::sign() const {
  if (is_exact()) {
    const Rational& r = std::get<Rational>(v_);
    return r == 0 ? 0 : (r < 0 ? -1 : 1);
  }
  double d = std::get<double>(v_);
  return d == 0.0 ? 0 : (d < 0 ? -1 : 1);
}

std::string double_str(double d) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

std::string Scalar::str() const {
  if (is_exact()) {
    const Rational& r = std::get<Rational>(v_);
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
  }
  return double_str(std::get<double>(v_));
}

std::optional<Scalar> Scalar::parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    try {
      Rational num(s.substr(0, slash));
      Rational den(s.substr(slash + 1));
      if (den == 0) return std::nullopt;
      return exact(num / den);
    } catch (...) {
      return std::nullopt;
    }
  }
  bool integral = true;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '-' || c == '+') {
      if (i != 0) integral = false;
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      integral = false;
    }
  }
  if (integral) {
    try {
      return exact(Rational(s));
    } catch (...) {
      return std::nullopt;
    }
  }
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(d)) return std::nullopt;
  return approx(d);
}

}  // namespace effint
