#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "effint/relations.hpp"
#include "effint/scale.hpp"

namespace effint {

// Symmetrizing measure of the form: fully supported and Radon on the state
// interval.
struct SpeedMeasure {
  ScaleMeasure measure;
  bool operator==(const SpeedMeasure&) const = default;
};

// Killing measure: Radon on the state interval and absolutely continuous
// w.r.t. the speed measure off the carried intervals.
struct KillingMeasure {
  ScaleMeasure measure;
  bool operator==(const KillingMeasure&) const = default;
};

// How a family entry assigns scales to its members.
enum class MemberScaleRule {
  Natural,            // each member carries the natural scale
  MemberNormalized,   // each member carries a uniform scale of fixed total mass
};

struct ExplicitPair {
  Interval interval;
  ScaleFunction scale;  // scale.domain must equal the interval
};

struct FamilyPairs {
  IntervalFamily family;
  MemberScaleRule rule = MemberScaleRule::Natural;
  Scalar member_mass = Scalar(1);  // used by MemberNormalized
};

using PairEntry = std::variant<ExplicitPair, FamilyPairs>;

SetUnit pair_unit(const PairEntry& p);

// The scale function a family rule induces on one member.
ScaleFunction member_scale(const FamilyPairs& fp, const Interval& member, const Options& opts);

// A countable collection of disjoint intervals, each carrying an adapted
// scale, living inside a state interval with a speed measure and an optional
// killing measure. Points outside the intervals are traps.
struct EffectiveSystem {
  Interval state = Interval::real_line();
  SpeedMeasure speed;
  std::vector<PairEntry> pairs;
  std::optional<KillingMeasure> killing;
};

struct PairCheck {
  Tri inside = Tri::True;   // the unit sits inside the state interval
  Tri adapted = Tri::True;  // endpoint membership matches the scale limits
  std::string detail;
};

struct ValidationReport {
  Tri disjoint = Tri::True;
  std::optional<std::pair<std::size_t, std::size_t>> overlap_witness;
  std::vector<PairCheck> pair_checks;
  Tri speed_supported = Tri::True;
  Tri speed_radon = Tri::True;
  Tri killing_dominated = Tri::True;  // trivially true without killing
  std::string note;

  Tri verdict() const;
};

// Checks disjointness, adaptedness of every scale (endpoint membership vs.
// scale limits, relative to the state interval), speed-measure support and
// local finiteness, and confinement of any speed-singular killing mass to
// the carried intervals.
ValidationReport validate(const EffectiveSystem& sys, const Options& opts);

enum class BoundaryKind { Reflecting, Unapproachable, AbsorbingDirichlet };
const char* boundary_name(BoundaryKind k);

struct BoundaryEntry {
  std::size_t pair_index = 0;
  // The classified interval (an exemplar when generic).
  Interval member = Interval::real_line();
  bool generic = false;  // true: flags hold for every bounded member of a family
  BoundaryKind lo = BoundaryKind::Reflecting;
  BoundaryKind hi = BoundaryKind::Reflecting;
};

// Endpoint behavior per interval: closed endpoints reflect, open endpoints
// interior to the state are unapproachable, and an open endpoint shared with
// an open state boundary absorbs exactly when the scale limit and the nearby
// speed mass are both finite.
std::vector<BoundaryEntry> boundary_classify(const EffectiveSystem& sys, const Options& opts);

// Sum of the per-interval scale measures.
ScaleMeasure scale_measure_of(const EffectiveSystem& sys);

}  // namespace effint
