#include "effint/interval.hpp"

#include <cassert>

namespace effint {

Interval Interval::make(ExtReal lo, bool lo_closed, ExtReal hi, bool hi_closed) {
  assert(lo < hi);
  if (!lo.is_finite()) lo_closed = false;
  if (!hi.is_finite()) hi_closed = false;
  return Interval(std::move(lo), lo_closed, std::move(hi), hi_closed);
}

bool Interval::contains(const Scalar& x) const {
  ExtReal p{x};
  if (p < lo_ || p > hi_) return false;
  if (p == lo_) return lo_closed_;
  if (p == hi_) return hi_closed_;
  return true;
}

bool Interval::is_subset_of(const Interval& o) const {
  bool lo_ok = lo_ > o.lo_ || (lo_ == o.lo_ && (o.lo_closed_ || !lo_closed_));
  bool hi_ok = hi_ < o.hi_ || (hi_ == o.hi_ && (o.hi_closed_ || !hi_closed_));
  return lo_ok && hi_ok;
}

bool Interval::disjoint_from(const Interval& o) const {
  if (hi_ < o.lo_ || o.hi_ < lo_) return true;
  if (hi_ == o.lo_) return !(hi_closed_ && o.lo_closed_);
  if (o.hi_ == lo_) return !(o.hi_closed_ && lo_closed_);
  return false;
}

Interval Interval::closure() const {
  return make(lo_, lo_.is_finite(), hi_, hi_.is_finite());
}

std::optional<Interval> Interval::intersect(const Interval& o) const {
  ExtReal lo = lo_;
  bool lc = lo_closed_;
  if (o.lo_ > lo || (o.lo_ == lo && !o.lo_closed_)) {
    lo = o.lo_;
    lc = lo == lo_ ? (lo_closed_ && o.lo_closed_) : o.lo_closed_;
  }
  ExtReal hi = hi_;
  bool hc = hi_closed_;
  if (o.hi_ < hi || (o.hi_ == hi && !o.hi_closed_)) {
    hi = o.hi_;
    hc = hi == hi_ ? (hi_closed_ && o.hi_closed_) : o.hi_closed_;
  }
  if (!(lo < hi)) return std::nullopt;
  return make(lo, lc, hi, hc);
}

std::optional<Scalar> Interval::shared_endpoint(const Interval& o) const {
  if (hi_ == o.lo_ && hi_closed_ && o.lo_closed_) return hi_.value();
  if (o.hi_ == lo_ && o.hi_closed_ && lo_closed_) return lo_.value();
  return std::nullopt;
}

ExtReal Interval::length() const {
  if (!lo_.is_finite() || !hi_.is_finite()) return ExtReal::pos_inf();
  return ExtReal(hi_.value() - lo_.value());
}

bool operator==(const Interval& a, const Interval& b) {
  return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.lo_closed_ == b.lo_closed_ &&
         a.hi_closed_ == b.hi_closed_;
}

std::string Interval::str() const {
  std::string s;
  s += lo_closed_ ? '[' : '(';
  s += lo_.str();
  s += ", ";
  s += hi_.str();
  s += hi_closed_ ? ']' : ')';
  return s;
}

bool entirely_left_of(const Interval& a, const Interval& b) {
  if (a.hi() < b.lo()) return true;
  if (a.hi() == b.lo()) return !(a.hi_closed() && b.lo_closed());
  return false;
}

}  // namespace effint
