#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "effint/cantor.hpp"
#include "effint/interval.hpp"
#include "effint/options.hpp"

namespace effint {

struct ExplicitFamily {
  std::vector<Interval> members;  // pairwise disjoint, construction-checked
  bool operator==(const ExplicitFamily&) const = default;
};

// Open intervals between consecutive breakpoints of a strictly monotone
// sequence t(0), t(1), ... converging to `limit` from one side:
//   Harmonic:  t(k) = limit + coef / (k + offset), offset >= 1
//   Geometric: t(k) = limit + coef * ratio^k,      ratio in (0,1)
// coef < 0 gives an ascending chain, coef > 0 a descending one.
struct ChainFamily {
  struct Harmonic {
    long long offset = 1;
    bool operator==(const Harmonic&) const = default;
  };
  struct Geometric {
    Scalar ratio = Scalar::rat(1, 2);
    bool operator==(const Geometric&) const = default;
  };
  Scalar limit;
  Scalar coef;
  std::variant<Harmonic, Geometric> rule = Harmonic{};
  long long count = -1;  // member count; -1 = unbounded

  Scalar breakpoint(long long k) const;
  Interval member(long long i) const;  // open; i in [0, count)
  bool ascending() const { return coef.sign() < 0; }
  bool operator==(const ChainFamily&) const = default;
};

// Complementary intervals of a Cantor construction: the bounded gaps and,
// optionally, the two unbounded rays. closed_members takes closures.
struct CantorGapsFamily {
  CantorSpec spec;
  bool closed_members = false;
  bool include_rays = false;
  bool operator==(const CantorGapsFamily&) const = default;
};

// A countable collection of pairwise disjoint intervals, enumerable in a
// canonical order, optionally filtered by a window: a member survives iff
// its interior lies inside the window.
class IntervalFamily {
 public:
  using Rep = std::variant<ExplicitFamily, ChainFamily, CantorGapsFamily>;

  explicit IntervalFamily(Rep rep, std::optional<Interval> window = std::nullopt);

  const Rep& rep() const { return rep_; }
  const std::optional<Interval>& window() const { return window_; }

  bool is_finite() const;
  // First n surviving members in canonical order (fewer if exhausted).
  std::vector<Interval> prefix(std::size_t n, const Options& opts) const;
  // All members of a finite family.
  std::vector<Interval> members(const Options& opts) const;
  // Smallest interval containing every surviving member.
  Interval hull() const;
  std::optional<Interval> member_containing(const Scalar& x, const Options& opts) const;
  bool covers(const Scalar& x, const Options& opts) const {
    return member_containing(x, opts).has_value();
  }
  bool keeps(const Interval& m) const;  // window filter
  bool operator==(const IntervalFamily&) const = default;
  std::string str() const;

 private:
  Rep rep_;
  std::optional<Interval> window_;
};

// Convenience wrappers.
IntervalFamily explicit_family(std::vector<Interval> members);
Interval cantor_gap_member(const CantorGapsFamily& fam, const GapRef& g);

}  // namespace effint
