#include <cmath>

#include "doctest.h"
#include "effint/energy.hpp"
#include "effint/system.hpp"
#include "effint/testfn.hpp"

using namespace effint;

namespace {

const Options opts;
const double tol = 1e-6;

EffectiveSystem line_system() {
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(ExplicitPair{
      Interval::real_line(), ScaleFunction::natural(Interval::real_line(), Scalar(0))});
  return sys;
}

IntervalFamily gap_family() {
  return IntervalFamily(CantorGapsFamily{CantorSpec::standard(), true, true});
}

EffectiveSystem trap_system() {
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(FamilyPairs{gap_family()});
  return sys;
}

ScaleMeasure staircase() {
  ScaleMeasure mu;
  mu.pieces.push_back(CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt});
  return mu;
}

// [0, 1] pair whose scale mixes a Lebesgue part with a staircase part
EffectiveSystem mixed_pair_system() {
  Interval u = Interval::closed(Scalar(0), Scalar(1));
  ScaleMeasure mu = ScaleMeasure::lebesgue(u) + staircase();
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(ExplicitPair{u, ScaleFunction::from_measure(u, Scalar(0), mu, opts)});
  return sys;
}

// whole line carrying the scale x + c(x), c the staircase function
EffectiveSystem mixed_line_system() {
  ScaleMeasure mu = ScaleMeasure::lebesgue(Interval::real_line()) + staircase();
  EffectiveSystem sys;
  sys.speed = SpeedMeasure{ScaleMeasure::lebesgue(Interval::real_line())};
  sys.pairs.push_back(ExplicitPair{
      Interval::real_line(),
      ScaleFunction::from_measure(Interval::real_line(), Scalar(0), mu, opts)});
  return sys;
}

ScaleFunction mixed_line_scale() {
  ScaleMeasure mu = ScaleMeasure::lebesgue(Interval::real_line()) + staircase();
  return ScaleFunction::from_measure(Interval::real_line(), Scalar(0), mu, opts);
}

}  // namespace

TEST_CASE("tent on the natural line has exact energy") {
  EnergyReport r = energy(line_system(), TestFunction::tent(Scalar(0), Scalar(1), Scalar(1)),
                          tol, opts);
  CHECK(r.value.is_finite());
  CHECK(r.value.value() == Scalar(1));
  CHECK(r.err == 0.0);
  CHECK(r.warnings.empty());
}

TEST_CASE("energy scales with the square of the height") {
  EnergyReport r = energy(line_system(), TestFunction::tent(Scalar(0), Scalar(1), Scalar(3)),
                          tol, opts);
  CHECK(r.value.value() == Scalar(9));
}

TEST_CASE("bump on the natural line matches the frozen integral") {
  SmoothBump b{Scalar(0), Scalar(1)};
  EnergyReport r = energy(line_system(), TestFunction{b}, tol, opts);
  CHECK(r.value.is_finite());
  CHECK(r.value.value().dbl() == doctest::Approx(1.51323088464916744).epsilon(1e-6));
  CHECK(r.err <= 1e-5);
}

TEST_CASE("wider bumps cost less") {
  SmoothBump b{Scalar(0), Scalar(2)};
  EnergyReport r = energy(line_system(), TestFunction{b}, tol, opts);
  CHECK(r.value.value().dbl() == doctest::Approx(0.75661544232458372).epsilon(1e-6));
}

TEST_CASE("tent across the gap family charges only the members") {
  EnergyReport r = energy(trap_system(), TestFunction::tent(Scalar(0), Scalar(1), Scalar(1)),
                          tol, opts);
  CHECK(r.value.is_finite());
  CHECK(r.value.value().dbl() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.err <= 1e-9);
}

TEST_CASE("bump across the gap family keeps the full-line value") {
  SmoothBump b{Scalar(0), Scalar(2)};
  EnergyReport r = energy(trap_system(), TestFunction{b}, tol, opts);
  CHECK(r.value.value().dbl() == doctest::Approx(0.75661544232458372).epsilon(1e-6));
}

TEST_CASE("bump inside one ray member reduces to a plain integral") {
  SmoothBump b{Scalar(5), Scalar(1)};
  EnergyReport r = energy(trap_system(), TestFunction{b}, tol, opts);
  CHECK(r.value.value().dbl() == doctest::Approx(1.51323088464916744).epsilon(1e-6));
}

TEST_CASE("staircase function is rejected on the natural line") {
  TestFunction u{CdfOfMeasure{staircase()}};
  CHECK_THROWS_AS(energy(line_system(), u, tol, opts), NotAbsolutelyContinuous);
}

TEST_CASE("staircase function costs nothing on the gap system") {
  TestFunction u{CdfOfMeasure{staircase()}};
  EnergyReport r = energy(trap_system(), u, tol, opts);
  CHECK(r.value.value().is_zero());
  CHECK(r.err == 0.0);
}

TEST_CASE("staircase function against a mixed scale pays only the singular part") {
  TestFunction u{CdfOfMeasure{staircase()}};
  EnergyReport r = energy(mixed_pair_system(), u, tol, opts);
  CHECK(r.value.value() == Scalar::rat(1, 2));
}

TEST_CASE("tent against a mixed scale pays only the smooth part") {
  EnergyReport r = energy(mixed_pair_system(),
                          TestFunction::tent(Scalar(0), Scalar(1), Scalar(1)), tol, opts);
  CHECK(r.value.value() == Scalar::rat(1, 2));
}

TEST_CASE("composite with the pair's own natural scale is exact") {
  TestFunction tent = TestFunction::tent(Scalar(0), Scalar(1), Scalar(1));
  CompositeWithScale cw{std::get<PiecewiseLinear>(tent.rep),
                        ScaleFunction::natural(Interval::real_line(), Scalar(-2))};
  EnergyReport r = energy(line_system(), TestFunction{cw}, tol, opts);
  CHECK(r.value.value() == Scalar(1));
  CHECK(r.err == 0.0);
}

TEST_CASE("composite with a staircase-bearing scale") {
  TestFunction tent = TestFunction::tent(Scalar(0), Scalar(3), Scalar(1));
  CompositeWithScale cw{std::get<PiecewiseLinear>(tent.rep), mixed_line_scale()};

  SUBCASE("matches the mixed system exactly") {
    EnergyReport r = energy(mixed_line_system(), TestFunction{cw}, tol, opts);
    CHECK(r.value.value() == Scalar::rat(1, 3));
  }
  SUBCASE("is rejected on the plain line") {
    CHECK_THROWS_AS(energy(line_system(), TestFunction{cw}, tol, opts),
                    NotAbsolutelyContinuous);
  }
}

TEST_CASE("half-line system warns when the function misses an absorbing end") {
  Interval pos = Interval::open(ExtReal(Scalar(0)), ExtReal::pos_inf());
  EffectiveSystem sys;
  sys.state = pos;
  ScaleMeasure xdx;
  xdx.pieces.push_back(
      DensityPiece{OpenSupport(pos), density::PowerLaw{Scalar(1), Scalar(1)}});
  sys.speed = SpeedMeasure{xdx};
  sys.pairs.push_back(ExplicitPair{pos, ScaleFunction::natural(pos, Scalar(1))});

  PiecewiseLinear p{{Knot{Scalar(0), Scalar(1)}, Knot{Scalar(2), Scalar(0)}}};
  EnergyReport r = energy(sys, TestFunction{p}, tol, opts);
  CHECK(r.value.value() == Scalar::rat(1, 4));
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("absorbing") != std::string::npos);
}

TEST_CASE("integrable density with a divergent square has infinite energy") {
  ScaleMeasure mu;
  mu.pieces.push_back(
      DensityPiece{OpenSupport(Interval::open(ExtReal(Scalar(0)), ExtReal(Scalar(1)))),
                   density::PowerLaw{Scalar(1), Scalar::rat(-1, 2)}});
  TestFunction u{CdfOfMeasure{mu}};
  EnergyReport r = energy(line_system(), u, tol, opts);
  CHECK(r.value.is_pos_inf());
}
