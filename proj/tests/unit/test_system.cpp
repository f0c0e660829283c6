#include <string>

#include "doctest.h"
#include "effint/system.hpp"

using namespace effint;

namespace {

Options opts;

Interval pos_axis() { return Interval::open(ExtReal(Scalar(0)), ExtReal::pos_inf()); }

Interval half_line_closed() {
  return Interval::make(ExtReal(Scalar(0)), true, ExtReal::pos_inf(), false);
}

EffectiveSystem line_system() {
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  sys.pairs = {ExplicitPair{Interval::real_line(),
                            ScaleFunction::natural(Interval::real_line(), Scalar(0))}};
  return sys;
}

IntervalFamily gap_family() {
  return IntervalFamily(CantorGapsFamily{CantorSpec::standard(), true, true});
}

// State R; the trap is the middle-thirds limit set, members are the closures
// of its complementary intervals.
EffectiveSystem trap_system() {
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  sys.pairs = {FamilyPairs{gap_family()}};
  return sys;
}

// Two touching half-open intervals around an excluded interior point.
EffectiveSystem split_system() {
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  Interval left = Interval::make(ExtReal(Scalar(-1)), true, ExtReal(Scalar(0)), false);
  Interval right = Interval::make(ExtReal(Scalar(0)), false, ExtReal(Scalar(1)), true);
  sys.pairs = {ExplicitPair{left, ScaleFunction::natural(left, Scalar::rat(-1, 2))},
               ExplicitPair{right, ScaleFunction::natural(right, Scalar::rat(1, 2))}};
  return sys;
}

ScaleFunction log_scale() {
  ScaleMeasure mu;
  mu.pieces.push_back(DensityPiece{OpenSupport(pos_axis()), density::Reciprocal{}});
  return ScaleFunction::from_measure(pos_axis(), Scalar(1), mu, opts);
}

ScaleMeasure linear_speed() {  // x dx on (0, inf)
  ScaleMeasure m;
  m.pieces.push_back(
      DensityPiece{OpenSupport(pos_axis()), density::PowerLaw{Scalar(1), Scalar(1)}});
  return m;
}

ScaleMeasure staircase() {
  ScaleMeasure m;
  m.pieces.push_back(CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt});
  return m;
}

}  // namespace

TEST_CASE("the whole-line pair with the natural scale is a valid system") {
  ValidationReport rep = validate(line_system(), opts);
  CHECK(rep.verdict() == Tri::True);
  CHECK(rep.disjoint == Tri::True);
  REQUIRE(rep.pair_checks.size() == 1);
  CHECK(rep.pair_checks[0].adapted == Tri::True);
}

TEST_CASE("gap closures of the middle-thirds set form a valid system") {
  ValidationReport rep = validate(trap_system(), opts);
  CHECK(rep.verdict() == Tri::True);
}

TEST_CASE("touching half-open intervals fail adaptedness at the shared point") {
  ValidationReport rep = validate(split_system(), opts);
  CHECK(rep.verdict() == Tri::False);
  REQUIRE(rep.pair_checks.size() == 2);
  CHECK(rep.pair_checks[0].adapted == Tri::False);
  CHECK(rep.pair_checks[1].adapted == Tri::False);
  CHECK(rep.pair_checks[0].detail.find("excluded") != std::string::npos);
  CHECK(rep.pair_checks[0].detail.find("0") != std::string::npos);
}

TEST_CASE("pair order does not change the verdict") {
  EffectiveSystem sys = split_system();
  std::swap(sys.pairs[0], sys.pairs[1]);
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.pair_checks[0].adapted == Tri::False);
  CHECK(rep.pair_checks[1].adapted == Tri::False);
}

TEST_CASE("closed endpoint with a divergent scale fails adaptedness") {
  EffectiveSystem sys;
  sys.state = half_line_closed();
  sys.speed.measure = linear_speed();
  sys.pairs = {ExplicitPair{pos_axis(), ScaleFunction::natural(pos_axis(), Scalar(1))}};
  // natural scale reaches 0 at finite distance but the interval excludes 0
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.pair_checks[0].detail.find("finite") != std::string::npos);

  sys.pairs = {ExplicitPair{pos_axis(), log_scale()}};
  CHECK(validate(sys, opts).verdict() == Tri::True);  // divergent scale matches exclusion

  sys.pairs = {
      ExplicitPair{half_line_closed(), ScaleFunction::natural(half_line_closed(), Scalar(0))}};
  sys.speed.measure = ScaleMeasure::lebesgue(half_line_closed());
  CHECK(validate(sys, opts).verdict() == Tri::True);  // included endpoint, finite scale
}

TEST_CASE("open state boundary leaves the matching pair endpoint unconstrained") {
  EffectiveSystem sys;
  sys.state = pos_axis();
  sys.speed.measure = linear_speed();
  sys.pairs = {ExplicitPair{pos_axis(), log_scale()}};
  CHECK(validate(sys, opts).verdict() == Tri::True);

  sys.pairs = {ExplicitPair{pos_axis(), ScaleFunction::natural(pos_axis(), Scalar(1))}};
  CHECK(validate(sys, opts).verdict() == Tri::True);
}

TEST_CASE("overlapping pairs are rejected with a witness") {
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  Interval a = Interval::closed(Scalar(0), Scalar(2));
  Interval b = Interval::closed(Scalar(1), Scalar(3));
  sys.pairs = {ExplicitPair{a, ScaleFunction::natural(a, Scalar(1))},
               ExplicitPair{b, ScaleFunction::natural(b, Scalar(2))}};
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.disjoint == Tri::False);
  REQUIRE(rep.overlap_witness.has_value());
  CHECK(rep.overlap_witness->first == 0);
  CHECK(rep.overlap_witness->second == 1);
}

TEST_CASE("a pair escaping the state interval is flagged") {
  EffectiveSystem sys;
  sys.state = half_line_closed();
  sys.speed.measure = ScaleMeasure::lebesgue(half_line_closed());
  Interval off = Interval::closed(Scalar(-2), Scalar(-1));
  sys.pairs = {ExplicitPair{off, ScaleFunction::natural(off, Scalar::rat(-3, 2))}};
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.pair_checks[0].inside == Tri::False);
}

TEST_CASE("a chain of open intervals accumulating inside the state fails adaptedness") {
  // members (1/(k+2), 1/(k+1)) descending to 0 inside the line
  ChainFamily ch;
  ch.limit = Scalar(0);
  ch.coef = Scalar(1);
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  sys.pairs = {FamilyPairs{IntervalFamily(ch)}};
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.pair_checks[0].adapted == Tri::False);
}

TEST_CASE("per-member normalization needs bounded members") {
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  FamilyPairs fp{explicit_family({pos_axis()}), MemberScaleRule::MemberNormalized, Scalar(1)};
  sys.pairs = {fp};
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.pair_checks[0].detail.find("bounded") != std::string::npos);
}

TEST_CASE("speed must charge every part of the state interval") {
  EffectiveSystem sys = line_system();
  sys.speed.measure = ScaleMeasure::lebesgue(pos_axis());
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.speed_supported == Tri::False);
  CHECK(rep.note.find("vanishes") != std::string::npos);
}

TEST_CASE("speed must be finite on compacts inside the state interval") {
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  sys.speed.measure.pieces.push_back(DensityPiece{
      OpenSupport(pos_axis()), density::PowerLaw{Scalar(1), Scalar(-2)}});  // blows up at 0
  sys.pairs = line_system().pairs;
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.speed_radon == Tri::False);
}

TEST_CASE("killing dominated by speed off the members is accepted") {
  EffectiveSystem sys = trap_system();
  sys.killing = KillingMeasure{ScaleMeasure::lebesgue(Interval::closed(Scalar(2), Scalar(3)))};
  CHECK(validate(sys, opts).verdict() == Tri::True);
}

TEST_CASE("killing that charges the trap is rejected") {
  EffectiveSystem sys = trap_system();
  sys.killing = KillingMeasure{staircase()};
  ValidationReport rep = validate(sys, opts);
  CHECK(rep.verdict() == Tri::False);
  CHECK(rep.killing_dominated == Tri::False);
  CHECK(rep.note.find("trap") != std::string::npos);
}

TEST_CASE("singular killing inside a member is accepted") {
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  Interval wide = Interval::closed(Scalar(-2), Scalar(2));
  sys.pairs = {ExplicitPair{wide, ScaleFunction::natural(wide, Scalar(0))}};
  sys.killing = KillingMeasure{staircase()};  // mass on [0, 1], inside the member
  CHECK(validate(sys, opts).verdict() == Tri::True);
}

TEST_CASE("boundary kinds for the trap system members") {
  std::vector<BoundaryEntry> rows = boundary_classify(trap_system(), opts);
  REQUIRE(!rows.empty());
  bool saw_left_ray = false, saw_right_ray = false, saw_generic = false;
  for (const BoundaryEntry& r : rows) {
    if (r.member.lo().is_neg_inf()) {
      saw_left_ray = true;
      CHECK(r.lo == BoundaryKind::Unapproachable);
      CHECK(r.hi == BoundaryKind::Reflecting);
    } else if (r.member.hi().is_pos_inf()) {
      saw_right_ray = true;
      CHECK(r.lo == BoundaryKind::Reflecting);
      CHECK(r.hi == BoundaryKind::Unapproachable);
    } else {
      saw_generic = true;
      CHECK(r.generic);
      CHECK(r.lo == BoundaryKind::Reflecting);
      CHECK(r.hi == BoundaryKind::Reflecting);
    }
  }
  CHECK(saw_left_ray);
  CHECK(saw_right_ray);
  CHECK(saw_generic);
}

TEST_CASE("finite scale limit with finite nearby speed gives an absorbing endpoint") {
  EffectiveSystem sub;
  sub.state = pos_axis();
  sub.speed.measure = linear_speed();
  sub.pairs = {ExplicitPair{pos_axis(), ScaleFunction::natural(pos_axis(), Scalar(1))}};
  std::vector<BoundaryEntry> rows = boundary_classify(sub, opts);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lo == BoundaryKind::AbsorbingDirichlet);
  CHECK(rows[0].hi == BoundaryKind::Unapproachable);

  EffectiveSystem full;
  full.state = pos_axis();
  full.speed.measure = linear_speed();
  full.pairs = {ExplicitPair{pos_axis(), log_scale()}};
  rows = boundary_classify(full, opts);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lo == BoundaryKind::Unapproachable);  // scale runs off to -inf
  CHECK(rows[0].hi == BoundaryKind::Unapproachable);
}

TEST_CASE("no absorbing endpoints arise at interior finite endpoints") {
  // valid system: [0,1] closed inside the line; both ends reflecting
  EffectiveSystem sys;
  sys.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  Interval unit = Interval::closed(Scalar(0), Scalar(1));
  sys.pairs = {ExplicitPair{unit, ScaleFunction::natural(unit, Scalar::rat(1, 2))}};
  REQUIRE(validate(sys, opts).verdict() == Tri::True);
  std::vector<BoundaryEntry> rows = boundary_classify(sys, opts);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lo == BoundaryKind::Reflecting);
  CHECK(rows[0].hi == BoundaryKind::Reflecting);
}

TEST_CASE("scale measure of a system collects pair contributions") {
  ScaleMeasure lam = scale_measure_of(trap_system());
  REQUIRE(lam.pieces.size() == 1);
  const auto* dp = std::get_if<DensityPiece>(&lam.pieces[0]);
  REQUIRE(dp);
  CHECK(dp->support.is_family());
  CHECK(std::holds_alternative<density::Constant>(dp->density));

  EffectiveSystem norm;
  norm.speed.measure = ScaleMeasure::lebesgue(Interval::real_line());
  norm.pairs = {FamilyPairs{gap_family(), MemberScaleRule::MemberNormalized, Scalar(2)}};
  lam = scale_measure_of(norm);
  REQUIRE(lam.pieces.size() == 1);
  const auto* mu = std::get_if<density::MemberUniform>(
      &std::get<DensityPiece>(lam.pieces[0]).density);
  REQUIRE(mu);
  CHECK(mu->mass == Scalar(2));
}

TEST_CASE("per-member normalized scale climbs the member mass linearly") {
  Interval m = Interval::open(ExtReal(Scalar::rat(1, 2)), ExtReal(Scalar(1)));
  FamilyPairs fp{explicit_family({m}), MemberScaleRule::MemberNormalized, Scalar(1)};
  ScaleFunction s = member_scale(fp, m, opts);
  CHECK(s(Scalar::rat(3, 4), opts) - s(Scalar::rat(5, 8), opts) == Scalar::rat(1, 4));
}
