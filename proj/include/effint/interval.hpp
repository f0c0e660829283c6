#pragma once

#include <optional>
#include <string>

#include "effint/extreal.hpp"

namespace effint {

// Nondegenerate interval of the real line (lo < hi) with endpoint
// membership flags. Infinite endpoints are always open.
class Interval {
 public:
  static Interval make(ExtReal lo, bool lo_closed, ExtReal hi, bool hi_closed);
  static Interval open(ExtReal lo, ExtReal hi) { return make(std::move(lo), false, std::move(hi), false); }
  static Interval closed(Scalar lo, Scalar hi) { return make(ExtReal(std::move(lo)), true, ExtReal(std::move(hi)), true); }
  static Interval real_line() { return open(ExtReal::neg_inf(), ExtReal::pos_inf()); }

  const ExtReal& lo() const { return lo_; }
  const ExtReal& hi() const { return hi_; }
  bool lo_closed() const { return lo_closed_; }
  bool hi_closed() const { return hi_closed_; }

  bool contains(const Scalar& x) const;
  bool is_subset_of(const Interval& other) const;
  bool disjoint_from(const Interval& other) const;
  bool meets(const Interval& other) const { return !disjoint_from(other); }

  Interval interior() const { return make(lo_, false, hi_, false); }
  Interval closure() const;  // infinite endpoints stay open

  // Nondegenerate intersection; nullopt when the point sets meet in at most
  // one point (use shared_endpoint for that case).
  std::optional<Interval> intersect(const Interval& other) const;
  // The single shared point when the intersection is a singleton.
  std::optional<Scalar> shared_endpoint(const Interval& other) const;

  Scalar anchor() const { return default_anchor(lo_, hi_); }
  ExtReal length() const;
  bool is_bounded() const { return lo_.is_finite() && hi_.is_finite(); }

  friend bool operator==(const Interval& a, const Interval& b);
  std::string str() const;

 private:
  Interval(ExtReal lo, bool lc, ExtReal hi, bool hc)
      : lo_(std::move(lo)), hi_(std::move(hi)), lo_closed_(lc), hi_closed_(hc) {}
  ExtReal lo_, hi_;
  bool lo_closed_, hi_closed_;
};

// Strict spatial order: a lies entirely to the left of b.
bool entirely_left_of(const Interval& a, const Interval& b);

}  // namespace effint
