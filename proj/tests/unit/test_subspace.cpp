#include <cmath>

#include "doctest.h"
#include "effint/energy.hpp"
#include "effint/subspace.hpp"
#include "effint/testfn.hpp"

using namespace effint;

namespace {

const Options opts;

EffectiveSystem line_system() {
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(ExplicitPair{
      Interval::real_line(), ScaleFunction::natural(Interval::real_line(), Scalar(0))});
  return sys;
}

EffectiveSystem trap_system() {
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(
      FamilyPairs{IntervalFamily(CantorGapsFamily{CantorSpec::standard(), true, true})});
  return sys;
}

// line whose scale skips a positive-length nowhere dense set: Lebesgue
// measure restricted to the gaps (and rays) of a fat construction
EffectiveSystem gapped_scale_system() {
  CantorSpec fat{Scalar(0), Scalar(1),
                 CantorSpec::GeometricGaps{Scalar::rat(1, 4), Scalar::rat(1, 2)}};
  ScaleMeasure mu;
  mu.pieces.push_back(DensityPiece{
      OpenSupport(IntervalFamily(CantorGapsFamily{fat, false, true})),
      density::Constant{Scalar(1)}});
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(ExplicitPair{
      Interval::real_line(),
      ScaleFunction::from_measure(Interval::real_line(), Scalar(2), mu, opts)});
  return sys;
}

EffectiveSystem devil_scale_system() {
  ScaleMeasure mu = ScaleMeasure::lebesgue(Interval::real_line());
  mu.pieces.push_back(CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt});
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(ExplicitPair{
      Interval::real_line(),
      ScaleFunction::from_measure(Interval::real_line(), Scalar(0), mu, opts)});
  return sys;
}

EffectiveSystem split_pair_system() {
  Interval a = Interval::make(ExtReal(Scalar(-1)), true, ExtReal(Scalar(0)), false);
  Interval b = Interval::make(ExtReal(Scalar(0)), false, ExtReal(Scalar(1)), true);
  EffectiveSystem sys;
  sys.state = Interval::closed(Scalar(-1), Scalar(1));
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(ExplicitPair{a, ScaleFunction::natural(a, Scalar::rat(-1, 2))});
  sys.pairs.push_back(ExplicitPair{b, ScaleFunction::natural(b, Scalar::rat(1, 2))});
  return sys;
}

}  // namespace

TEST_CASE("a system is a subspace of itself") {
  for (const EffectiveSystem& s : {line_system(), trap_system(), gapped_scale_system()}) {
    SubspaceReport r = check_subspace(s, s, opts);
    CHECK(r.verdict() == Tri::True);
    CHECK(r.cond_coarser == Tri::True);
    CHECK(r.cond_scale == Tri::True);
    CHECK_FALSE(r.cond_killing.has_value());
  }
}

TEST_CASE("the natural line sits inside the gap-family system") {
  SubspaceReport r = check_subspace(line_system(), trap_system(), opts);
  CHECK(r.cond_coarser == Tri::True);
  CHECK(r.cond_scale == Tri::True);
  CHECK(r.verdict() == Tri::True);
}

TEST_CASE("the gap-family system is not a subspace of the line") {
  SubspaceReport r = check_subspace(trap_system(), line_system(), opts);
  CHECK(r.cond_coarser == Tri::False);
  CHECK(r.verdict() == Tri::False);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->is_subset_of(Interval::real_line()));
}

TEST_CASE("a scale that skips an interval still gives a subspace") {
  SubspaceReport r = check_subspace(gapped_scale_system(), line_system(), opts);
  CHECK(r.cond_scale == Tri::True);
  CHECK(r.verdict() == Tri::True);
}

TEST_CASE("a general density breaks the subspace relation") {
  ScaleMeasure mu;
  mu.pieces.push_back(DensityPiece{OpenSupport(Interval::real_line()),
                                   density::Constant{Scalar(2)}});
  EffectiveSystem cand;
  cand.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  cand.pairs.push_back(ExplicitPair{
      Interval::real_line(),
      ScaleFunction::from_measure(Interval::real_line(), Scalar(0), mu, opts)});
  SubspaceReport r = check_subspace(cand, line_system(), opts);
  CHECK(r.cond_scale == Tri::False);
  CHECK(r.verdict() == Tri::False);
}

TEST_CASE("a staircase component in the candidate scale is singular overhead") {
  SubspaceReport r = check_subspace(devil_scale_system(), line_system(), opts);
  CHECK(r.cond_scale == Tri::False);
  CHECK(r.verdict() == Tri::False);
  CHECK(!r.scale_note.empty());
}

TEST_CASE("killing measures must agree piece for piece") {
  EffectiveSystem with_kill = line_system();
  with_kill.killing = KillingMeasure{ScaleMeasure::lebesgue(Interval::closed(Scalar(2), Scalar(3)))};

  SUBCASE("matching killing passes") {
    SubspaceReport r = check_subspace(with_kill, with_kill, opts);
    REQUIRE(r.cond_killing.has_value());
    CHECK(*r.cond_killing == Tri::True);
    CHECK(r.verdict() == Tri::True);
  }
  SUBCASE("killing on one side only fails") {
    SubspaceReport r = check_subspace(with_kill, line_system(), opts);
    REQUIRE(r.cond_killing.has_value());
    CHECK(*r.cond_killing == Tri::False);
    CHECK(r.verdict() == Tri::False);
  }
}

TEST_CASE("mismatched state or speed is an input error") {
  EffectiveSystem half;
  Interval pos = Interval::open(ExtReal(Scalar(0)), ExtReal::pos_inf());
  half.state = pos;
  half.speed = SpeedMeasure{ScaleMeasure::lebesgue(pos)};
  half.pairs.push_back(ExplicitPair{pos, ScaleFunction::natural(pos, Scalar(1))});
  CHECK_THROWS_AS(check_subspace(half, line_system(), opts), StateSpaceMismatch);

  EffectiveSystem heavy = line_system();
  ScaleMeasure two;
  two.pieces.push_back(
      DensityPiece{OpenSupport(Interval::real_line()), density::Constant{Scalar(2)}});
  heavy.speed = SpeedMeasure{two};
  CHECK_THROWS_AS(check_subspace(heavy, line_system(), opts), SpeedMismatch);
}

TEST_CASE("equality is reflexive and order-insensitive") {
  CHECK(check_equality(line_system(), line_system(), opts) == Tri::True);
  CHECK(check_equality(trap_system(), trap_system(), opts) == Tri::True);

  EffectiveSystem fwd = split_pair_system();
  EffectiveSystem rev = fwd;
  std::swap(rev.pairs[0], rev.pairs[1]);
  CHECK(check_equality(fwd, rev, opts) == Tri::True);
}

TEST_CASE("anchors do not enter system equality") {
  EffectiveSystem a = line_system();
  EffectiveSystem b = line_system();
  std::get<ExplicitPair>(b.pairs[0]).scale.anchor = Scalar(7);
  CHECK(check_equality(a, b, opts) == Tri::True);
}

TEST_CASE("same scale different intervals is not equality") {
  CHECK(check_equality(trap_system(), line_system(), opts) == Tri::False);
  CHECK(check_equality(line_system(), trap_system(), opts) == Tri::False);
}

TEST_CASE("subspace both ways pins the same system on explicit pairs") {
  EffectiveSystem a = line_system();
  EffectiveSystem b = line_system();
  std::get<ExplicitPair>(b.pairs[0]).scale.anchor = Scalar(-3);
  CHECK(check_subspace(a, b, opts).verdict() == Tri::True);
  CHECK(check_subspace(b, a, opts).verdict() == Tri::True);
  CHECK(check_equality(a, b, opts) == Tri::True);
}

TEST_CASE("subspace systems agree on the energy of shared functions") {
  TestFunction tent = TestFunction::tent(Scalar(0), Scalar(1), Scalar(1));
  REQUIRE(check_subspace(line_system(), trap_system(), opts).verdict() == Tri::True);
  EnergyReport ep = energy(trap_system(), tent, 1e-9, opts);
  EnergyReport ec = energy(line_system(), tent, 1e-9, opts);
  double rel = std::abs(ep.value.value().dbl() - ec.value.value().dbl()) /
               std::max(1.0, std::abs(ec.value.value().dbl()));
  CHECK(rel <= 1e-6);
}
