#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "effint/interval.hpp"
#include "effint/options.hpp"

namespace effint {

// Totally disconnected compact set built by repeatedly deleting an open
// centered gap from every kept interval. Level k >= 1 deletes from each of
// the 2^(k-1) kept intervals of level k-1 a gap occupying a fixed fraction
// of its length, so all kept intervals of one level share one length.
struct CantorSpec {
  // Kept child keeps fraction r of the parent per side; gap is 1-2r.
  // The limit set is Lebesgue-null.
  struct ConstantRatio {
    Scalar r;  // in (0, 1/2)
    friend bool operator==(const ConstantRatio&, const ConstantRatio&) = default;
  };
  // Gap at level k occupies fraction gamma0 * q^(k-1) of its parent. The
  // total deleted fraction is summable, so the limit set has positive
  // Lebesgue measure.
  struct GeometricGaps {
    Scalar gamma0, q;  // both in (0, 1)
    friend bool operator==(const GeometricGaps&, const GeometricGaps&) = default;
  };

  Scalar lo, hi;  // closed bounded base [lo, hi]
  std::variant<ConstantRatio, GeometricGaps> rule;

  static CantorSpec standard();  // [0, 1] with r = 1/3

  bool limit_is_null() const { return std::holds_alternative<ConstantRatio>(rule); }
  Scalar gap_fraction(long long level) const;   // level >= 1
  Scalar kept_fraction(long long level) const;  // (1 - gap_fraction) / 2
  Scalar base_length() const { return hi - lo; }
  Interval base_interval() const { return Interval::closed(lo, hi); }

  friend bool operator==(const CantorSpec&, const CantorSpec&) = default;
  std::string str() const;
};

// Gaps are indexed level-major, left to right within a level: index 0 is the
// level-1 gap, indexes 1..2 the level-2 gaps, and so on.
struct GapRef {
  long long level = 1;
  std::uint64_t pos = 0;  // within level, < 2^(level-1)
  friend bool operator==(const GapRef&, const GapRef&) = default;
};

GapRef gap_by_index(std::uint64_t index);
std::uint64_t gap_index(const GapRef& ref);
// Endpoints of a gap; exact when the spec parameters are exact.
std::pair<Scalar, Scalar> gap_bounds(const CantorSpec& spec, const GapRef& ref);
Scalar gap_length(const CantorSpec& spec, long long level);
Scalar node_length(const CantorSpec& spec, long long level);

// Where a point sits relative to the construction.
struct CantorLocation {
  enum class Kind {
    OutsideBase,   // strictly left of lo or right of hi
    InGap,         // open gap interior
    GapLeftEnd,    // equals a gap's left endpoint (a limit-set point)
    GapRightEnd,   // equals a gap's right endpoint (a limit-set point)
    InLimitSet,    // limit-set point that is no gap endpoint (includes lo, hi)
  };
  Kind kind;
  std::optional<GapRef> gap;  // set for the three gap kinds
};

// Exact when the descent terminates in a gap, at a gap endpoint, or enters a
// position cycle (which proves limit-set membership). Throws
// UndecidableAtDepth when the descent is still unresolved after
// opts.cantor_depth levels and no cycle was found.
CantorLocation locate_point(const CantorSpec& spec, const Scalar& x, const Options& opts);

// Equal-mass staircase distribution function: 0 at lo, 1 at hi, constant on
// gaps, splitting mass in half at every level.
struct StairValue {
  Scalar value;
  double err = 0.0;  // value is within [value, value + err]
  bool exact = true;
};
StairValue staircase_cdf(const CantorSpec& spec, const Scalar& x, const Options& opts);

// How the limit set meets a closed bracket [u, v].
enum class LimitOverlap { Empty, FinitelyMany, Uncountable };
LimitOverlap limit_overlap(const CantorSpec& spec, const Scalar& u, const Scalar& v,
                           const Options& opts);

// Lebesgue measure of (limit set) ∩ [u, v]. Zero exactly for ConstantRatio.
struct Approx {
  double value = 0.0;
  double err = 0.0;
};
Approx limit_measure_between(const CantorSpec& spec, const Scalar& u, const Scalar& v,
                             const Options& opts);
Approx limit_measure_total(const CantorSpec& spec, const Options& opts);

// Sum over gaps g of |g|^alpha * |g ∩ [u,v]|^beta, with alpha >= 0,
// beta >= 0; beta = 0 counts only gaps wholly inside the bracket. Sets
// *diverges when the bracket contains infinitely many gaps and the exponent
// sum is 0 (each term then contributes at least 1).
struct GapSum {
  double value = 0.0;
  double err = 0.0;
  bool diverges = false;
};
GapSum gap_power_sum(const CantorSpec& spec, const Scalar& u, const Scalar& v, int alpha,
                     int beta, const Options& opts);

// True when [u, v] contains a whole kept interval of some level (hence
// uncountably many limit points and infinitely many gaps).
bool bracket_contains_node(const CantorSpec& spec, const Scalar& u, const Scalar& v,
                           const Options& opts);

}  // namespace effint
