#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "effint/cantor.hpp"
#include "effint/family.hpp"
#include "effint/setops.hpp"

namespace effint {

// Open set carrying a density: a finite union of intervals (taken as their
// interiors), or the union of a family's member interiors.
struct OpenSupport {
  std::variant<std::vector<Interval>, IntervalFamily> parts;

  OpenSupport() : parts(std::vector<Interval>{}) {}
  OpenSupport(Interval iv) : parts(std::vector<Interval>{std::move(iv)}) {}
  OpenSupport(std::vector<Interval> ivs) : parts(std::move(ivs)) {}
  OpenSupport(IntervalFamily fam) : parts(std::move(fam)) {}

  bool is_family() const { return std::holds_alternative<IntervalFamily>(parts); }
  const IntervalFamily* family() const { return std::get_if<IntervalFamily>(&parts); }
  const std::vector<Interval>* intervals() const {
    return std::get_if<std::vector<Interval>>(&parts);
  }

  Interval hull() const;
  bool covers(const Scalar& x, const Options& opts) const;
  std::vector<SetUnit> units() const;
  // Clip to a bracket; nullopt when nothing survives. Families clip by
  // narrowing the window.
  std::optional<OpenSupport> clip(const Interval& bracket) const;

  bool operator==(const OpenSupport&) const = default;
  std::string str() const;
};

// Closed-form density tags. Values are strictly positive on the support.
namespace density {
struct Constant {
  Scalar c;  // > 0
  bool operator==(const Constant&) const = default;
};
// coef * x^p; support must sit in (0, inf). p = -1 integrates to a log.
struct PowerLaw {
  Scalar coef;
  Scalar p;
  bool operator==(const PowerLaw&) const = default;
};
struct Reciprocal {  // 1/x on support in (0, inf); alias for PowerLaw{1,-1}
  bool operator==(const Reciprocal&) const = default;
};
// c / (1 + |x - center|)^2: integrable over unbounded supports with rational
// closed forms; total mass over the line is 2c.
struct RationalTaper {
  Scalar c;
  Scalar center;
  bool operator==(const RationalTaper&) const = default;
};
// Family supports only: each member carries `mass`, spread uniformly over the
// member. Any bracket containing infinitely many members has infinite
// measure. Members must be bounded.
struct MemberUniform {
  Scalar mass;  // > 0
  bool operator==(const MemberUniform&) const = default;
};
// Ratio-only tag (never a stored measure density): on member n of a family
// support the value is coef * len(member)^power.
struct MemberLength {
  Scalar coef;
  int power = 1;
  bool operator==(const MemberLength&) const = default;
};
}  // namespace density

using DensityTag = std::variant<density::Constant, density::PowerLaw, density::Reciprocal,
                                density::RationalTaper, density::MemberUniform,
                                density::MemberLength>;

// Reciprocal -> PowerLaw{1,-1}; everything else unchanged.
DensityTag canonical_tag(const DensityTag& t);
std::string tag_str(const DensityTag& t);

struct DensityPiece {
  OpenSupport support;
  DensityTag density;
  bool operator==(const DensityPiece&) const = default;
};

// c * indicator(sub) on `support`, folded to Constant(c) on the
// intersection. sub components must each land inside one support component.
DensityPiece indicator_scaled(const Scalar& c, const OpenSupport& sub,
                              const OpenSupport& support);

// Equal-mass staircase measure of a gap construction, scaled to total `mass`
// over the base and optionally restricted to a bracket.
struct CantorPiece {
  CantorSpec spec;
  Scalar mass;  // > 0, total over the unclipped base
  std::optional<Interval> clip;
  bool operator==(const CantorPiece&) const = default;
};

using Piece = std::variant<DensityPiece, CantorPiece>;

struct ScaleMeasure {
  std::vector<Piece> pieces;

  static ScaleMeasure zero() { return {}; }
  static ScaleMeasure lebesgue(Interval on);

  bool is_zero() const { return pieces.empty(); }
  ScaleMeasure operator+(const ScaleMeasure& other) const;

  bool operator==(const ScaleMeasure&) const = default;
  std::string str() const;
};

// Total mass of the bracket. Exact Scalar when every contribution has a
// rational closed form; otherwise a double-backed Scalar whose error is
// bounded by the staircase depth (2^{1-depth} per Cantor piece).
ExtReal measure_of(const ScaleMeasure& mu, const Interval& bracket, const Options& opts);

// measure_of that retries Cantor pieces at increasing depth until the error
// bound is below tol; throws ApproximationDepthExceeded when depth 4x the
// configured maximum still cannot meet it.
ExtReal measure_of_tol(const ScaleMeasure& mu, const Interval& bracket, double tol,
                       const Options& opts);

// Restriction to a bracket: supports clipped, staircase pieces re-clipped;
// pieces that vanish are dropped.
ScaleMeasure restrict_measure(const ScaleMeasure& mu, const Interval& bracket,
                              const Options& opts);

// Canonical form: tags canonicalized, supports taken open and split per
// interval, touching intervals with equal tags fused (sound: every piece kind
// is nonatomic), family supports with a null trap set rewritten as plain
// cover intervals when the density reads off position alone, pieces sorted.
// Two measures are piece-identical iff canonical forms compare equal.
ScaleMeasure canonical_measure(const ScaleMeasure& mu, const Options& opts = default_options());
bool piece_identical(const ScaleMeasure& a, const ScaleMeasure& b,
                     const Options& opts = default_options());

// Density-piece supports as set units (staircase pieces carry no open mass).
std::vector<SetUnit> support_units(const ScaleMeasure& mu);

// Open intervals on which the measure visibly charges every sub-bracket.
// Families flatten to their carved cover (gaps are dense in the carved
// region); staircase pieces charge no interval at all.
std::vector<Interval> charged_intervals(const ScaleMeasure& mu, const Options& opts);

// A point witnessing a positive-length hole of `window` left uncharged, or
// nullopt when the charged cover is hole-free there. Unbounded window ends
// are probed two units past the outermost support coordinate.
std::optional<Scalar> coverage_gap(const ScaleMeasure& mu, const Interval& window,
                                   const Options& opts);

// Why `mu` fails to be Radon on `region` (a compact bracket interior to the
// region with infinite mass), or nullopt. Also rejects signed tags and
// ratio-only tags outright.
std::optional<std::string> radon_violation(const ScaleMeasure& mu, const Interval& region);

}  // namespace effint
