#include <cmath>

#include "doctest.h"
#include "effint/measure.hpp"

using namespace effint;

namespace {

Options opts;

Interval seg(const Scalar& a, const Scalar& b) {
  return Interval::closed(a, b);
}

ScaleMeasure bessel3_measure() {  // x^-2 dx on (0, inf)
  Interval pos = Interval::open(ExtReal(Scalar(0)), ExtReal::pos_inf());
  return {{DensityPiece{OpenSupport(pos), density::PowerLaw{Scalar(1), Scalar(-2)}}}};
}

IntervalFamily cantor_trap_family() {
  CantorGapsFamily cg{CantorSpec::standard(), true, true};
  return IntervalFamily(cg);
}

IntervalFamily open_gaps_family() {
  CantorGapsFamily cg{CantorSpec::standard(), false, false};
  return IntervalFamily(cg);
}

}  // namespace

TEST_CASE("lebesgue masses are exact") {
  ScaleMeasure mu = ScaleMeasure::lebesgue(seg(Scalar(0), Scalar(1)));
  ExtReal half = measure_of(mu, seg(Scalar(0), Scalar::rat(1, 2)), opts);
  REQUIRE(half.is_finite());
  CHECK(half.value() == Scalar::rat(1, 2));
  CHECK(half.value().is_exact());
  CHECK(measure_of(mu, seg(Scalar(5), Scalar(6)), opts) == ExtReal(Scalar(0)));
  // Exact additivity over a disjoint split.
  ExtReal a = measure_of(mu, seg(Scalar(0), Scalar::rat(1, 3)), opts);
  ExtReal b = measure_of(mu, seg(Scalar::rat(1, 3), Scalar(1)), opts);
  CHECK(a.value() + b.value() == Scalar(1));
}

TEST_CASE("inverse square density integrates in closed form") {
  ScaleMeasure mu = bessel3_measure();
  ExtReal m = measure_of(mu, seg(Scalar(1), Scalar(2)), opts);
  REQUIRE(m.is_finite());
  CHECK(m.value() == Scalar::rat(1, 2));
  CHECK(m.value().is_exact());
  Interval tail = Interval::make(ExtReal(Scalar(1)), true, ExtReal::pos_inf(), false);
  CHECK(measure_of(mu, tail, opts) == ExtReal(Scalar(1)));
  Interval origin = Interval::make(ExtReal(Scalar(0)), false, ExtReal(Scalar(1)), true);
  CHECK(measure_of(mu, origin, opts) == ExtReal::pos_inf());
}

TEST_CASE("reciprocal density gives log masses and diverges at both ends") {
  Interval pos = Interval::open(ExtReal(Scalar(0)), ExtReal::pos_inf());
  ScaleMeasure mu{{DensityPiece{OpenSupport(pos), density::Reciprocal{}}}};
  ExtReal m = measure_of(mu, seg(Scalar(1), Scalar(4)), opts);
  REQUIRE(m.is_finite());
  CHECK(m.value().dbl() == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  Interval origin = Interval::make(ExtReal(Scalar(0)), false, ExtReal(Scalar(1)), true);
  CHECK(measure_of(mu, origin, opts) == ExtReal::pos_inf());
  Interval tail = Interval::make(ExtReal(Scalar(1)), true, ExtReal::pos_inf(), false);
  CHECK(measure_of(mu, tail, opts) == ExtReal::pos_inf());
}

TEST_CASE("taper density has rational closed forms and finite total mass") {
  ScaleMeasure mu{{DensityPiece{OpenSupport(Interval::real_line()),
                                density::RationalTaper{Scalar(1), Scalar(0)}}}};
  ExtReal whole = measure_of(mu, Interval::real_line(), opts);
  REQUIRE(whole.is_finite());
  CHECK(whole.value() == Scalar(2));
  ExtReal right = measure_of(mu, seg(Scalar(0), Scalar(1)), opts);
  CHECK(right.value() == Scalar::rat(1, 2));
  CHECK(right.value().is_exact());
  ExtReal sym = measure_of(mu, seg(Scalar(-1), Scalar(1)), opts);
  CHECK(sym.value() == Scalar(1));
}

TEST_CASE("staircase piece masses match the distribution function") {
  ScaleMeasure mu{{CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt}}};
  ExtReal a = measure_of(mu, seg(Scalar(0), Scalar::rat(1, 3)), opts);
  REQUIRE(a.is_finite());
  CHECK(a.value() == Scalar::rat(1, 2));
  CHECK(a.value().is_exact());
  ExtReal b = measure_of(mu, seg(Scalar::rat(1, 9), Scalar::rat(2, 3)), opts);
  CHECK(b.value() == Scalar::rat(1, 4));
  // Constant off the limit set: a bracket inside a gap carries no mass.
  ExtReal c = measure_of(mu, seg(Scalar::rat(2, 5), Scalar::rat(3, 5)), opts);
  CHECK(c.value() == Scalar(0));
  // Mass scaling.
  ScaleMeasure mu3{{CantorPiece{CantorSpec::standard(), Scalar(3), std::nullopt}}};
  CHECK(measure_of(mu3, seg(Scalar(0), Scalar(1)), opts).value() == Scalar(3));
  // Clipped piece only sees its window.
  ScaleMeasure left{{CantorPiece{CantorSpec::standard(), Scalar(1),
                                 seg(Scalar(0), Scalar::rat(1, 3))}}};
  CHECK(measure_of(left, seg(Scalar(0), Scalar(1)), opts).value() == Scalar::rat(1, 2));
}

TEST_CASE("unit density on the trap family is lebesgue up to a null set") {
  ScaleMeasure mu{{DensityPiece{OpenSupport(cantor_trap_family()),
                                density::Constant{Scalar(1)}}}};
  ExtReal m = measure_of(mu, seg(Scalar(-1), Scalar(2)), opts);
  REQUIRE(m.is_finite());
  CHECK(m.value() == Scalar(3));
  CHECK(m.value().is_exact());
  CHECK(measure_of(mu, seg(Scalar(0), Scalar(1)), opts).value() == Scalar(1));
  CHECK(measure_of(mu, seg(Scalar(0), Scalar::rat(1, 3)), opts).value() == Scalar::rat(1, 3));
}

TEST_CASE("unit density on a fat gap family loses the limit-set mass") {
  CantorGapsFamily cg{CantorSpec{Scalar(0), Scalar(1),
                                 CantorSpec::GeometricGaps{Scalar::rat(1, 4), Scalar::rat(1, 2)}},
                      false, false};
  ScaleMeasure mu{{DensityPiece{OpenSupport(IntervalFamily(cg)), density::Constant{Scalar(1)}}}};
  Approx lm = limit_measure_total(cg.spec, opts);
  ExtReal m = measure_of(mu, seg(Scalar(0), Scalar(1)), opts);
  REQUIRE(m.is_finite());
  CHECK(std::abs(m.value().dbl() - (1.0 - lm.value)) <= lm.err + 1e-12);
  CHECK(m.value().dbl() < 0.5);  // the fat limit set keeps most of the base
}

TEST_CASE("unit density on a chain covers its span") {
  ChainFamily ch;
  ch.limit = Scalar(0);
  ch.coef = Scalar(-1);
  ScaleMeasure mu{{DensityPiece{OpenSupport(IntervalFamily(ch)), density::Constant{Scalar(1)}}}};
  CHECK(measure_of(mu, seg(Scalar(-1), Scalar(0)), opts).value() == Scalar(1));
  CHECK(measure_of(mu, seg(Scalar::rat(-1, 2), Scalar(1)), opts).value() == Scalar::rat(1, 2));
  CHECK(measure_of(mu, seg(Scalar(1), Scalar(2)), opts).value() == Scalar(0));
}

TEST_CASE("per-member mass on gaps diverges across construction intervals") {
  ScaleMeasure mu{{DensityPiece{OpenSupport(open_gaps_family()),
                                density::MemberUniform{Scalar(1)}}}};
  // Whole central gap.
  CHECK(measure_of(mu, seg(Scalar::rat(1, 3), Scalar::rat(2, 3)), opts).value() == Scalar(1));
  // Half of it.
  CHECK(measure_of(mu, seg(Scalar::rat(1, 2), Scalar::rat(2, 3)), opts).value() ==
        Scalar::rat(1, 2));
  // Gap-endpoint bracket spanning a whole kept interval: infinitely many
  // members, each contributing its full unit.
  CHECK(measure_of(mu, seg(Scalar::rat(2, 9), Scalar::rat(1, 3)), opts) == ExtReal::pos_inf());
  CHECK(measure_of(mu, seg(Scalar(0), Scalar(1)), opts) == ExtReal::pos_inf());
  // Outside the base nothing is charged.
  CHECK(measure_of(mu, seg(Scalar(2), Scalar(3)), opts).value() == Scalar(0));
}

TEST_CASE("per-member mass on explicit members takes length fractions") {
  IntervalFamily fam = explicit_family({Interval::open(ExtReal(Scalar(0)), ExtReal(Scalar(1))),
                                        Interval::open(ExtReal(Scalar(2)), ExtReal(Scalar(4)))});
  ScaleMeasure mu{{DensityPiece{OpenSupport(fam), density::MemberUniform{Scalar(2)}}}};
  ExtReal m = measure_of(mu, seg(Scalar(0), Scalar(3)), opts);
  REQUIRE(m.is_finite());
  CHECK(m.value() == Scalar(3));  // 2*(1) + 2*(1/2)
}

TEST_CASE("per-member mass on a chain counts whole members plus edges") {
  ChainFamily ch;
  ch.limit = Scalar(0);
  ch.coef = Scalar(-1);
  ScaleMeasure mu{{DensityPiece{OpenSupport(IntervalFamily(ch)),
                                density::MemberUniform{Scalar(1)}}}};
  CHECK(measure_of(mu, seg(Scalar(-1), Scalar(0)), opts) == ExtReal::pos_inf());
  ExtReal two = measure_of(mu, seg(Scalar(-1), Scalar::rat(-1, 3)), opts);
  REQUIRE(two.is_finite());
  CHECK(two.value() == Scalar(2));
  ExtReal frac = measure_of(mu, seg(Scalar::rat(-3, 4), Scalar::rat(-1, 3)), opts);
  CHECK(frac.value() == Scalar::rat(3, 2));  // half of member 0 plus member 1
}

TEST_CASE("indicator selections fold to constants on the intersection") {
  OpenSupport sel{std::vector<Interval>{
      Interval::open(ExtReal(Scalar(0)), ExtReal(Scalar::rat(1, 3))),
      Interval::open(ExtReal(Scalar::rat(2, 3)), ExtReal(Scalar(1)))}};
  DensityPiece p = indicator_scaled(Scalar(2), sel, OpenSupport(Interval::real_line()));
  ScaleMeasure mu{{p}};
  ExtReal m = measure_of(mu, seg(Scalar(0), Scalar(1)), opts);
  REQUIRE(m.is_finite());
  CHECK(m.value() == Scalar::rat(4, 3));
  CHECK(std::holds_alternative<density::Constant>(p.density));
}

TEST_CASE("restriction clips supports and windows") {
  ScaleMeasure mu = ScaleMeasure::lebesgue(Interval::real_line());
  ScaleMeasure cut = restrict_measure(mu, seg(Scalar(0), Scalar(2)), opts);
  CHECK(measure_of(cut, seg(Scalar(-1), Scalar(3)), opts).value() == Scalar(2));
  ScaleMeasure gaps{{DensityPiece{OpenSupport(open_gaps_family()),
                                  density::Constant{Scalar(1)}}}};
  ScaleMeasure right = restrict_measure(gaps, seg(Scalar::rat(2, 3), Scalar(1)), opts);
  CHECK(measure_of(right, seg(Scalar(0), Scalar(1)), opts).value() == Scalar::rat(1, 3));
  ScaleMeasure stair{{CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt}}};
  ScaleMeasure half = restrict_measure(stair, seg(Scalar(0), Scalar::rat(1, 3)), opts);
  CHECK(measure_of(half, seg(Scalar(0), Scalar(1)), opts).value() == Scalar::rat(1, 2));
}

TEST_CASE("piece identity ignores order, closure flags, and vacuous clips") {
  ScaleMeasure a{{DensityPiece{OpenSupport(seg(Scalar(0), Scalar(1))),
                               density::Constant{Scalar(1)}},
                  CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt}}};
  ScaleMeasure b{{CantorPiece{CantorSpec::standard(), Scalar(1), seg(Scalar(-5), Scalar(5))},
                  DensityPiece{OpenSupport(Interval::open(ExtReal(Scalar(0)), ExtReal(Scalar(1)))),
                               density::Constant{Scalar(1)}}}};
  CHECK(piece_identical(a, b));
  ScaleMeasure c{{DensityPiece{OpenSupport(seg(Scalar(0), Scalar(1))),
                               density::Constant{Scalar(2)}}}};
  CHECK(!piece_identical(a, c));
  // Reciprocal is the same piece as its power-law form.
  Interval pos = Interval::open(ExtReal(Scalar(0)), ExtReal::pos_inf());
  ScaleMeasure r1{{DensityPiece{OpenSupport(pos), density::Reciprocal{}}}};
  ScaleMeasure r2{{DensityPiece{OpenSupport(pos), density::PowerLaw{Scalar(1), Scalar(-1)}}}};
  CHECK(piece_identical(r1, r2));
}

TEST_CASE("tolerance-driven evaluation refuses impossible staircase accuracy") {
  CantorSpec fat{Scalar(0), Scalar(1),
                 CantorSpec::GeometricGaps{Scalar::rat(1, 4), Scalar::rat(1, 2)}};
  ScaleMeasure mu{{CantorPiece{fat, Scalar(1), std::nullopt}}};
  Interval br = seg(Scalar::rat(1, 7), Scalar::rat(5, 7));
  ExtReal ok = measure_of_tol(mu, br, 1e-6, opts);
  REQUIRE(ok.is_finite());
  CHECK(ok.value().dbl() > 0.0);
  CHECK(ok.value().dbl() < 1.0);
  CHECK_THROWS_AS(measure_of_tol(mu, br, 1e-300, opts), ApproximationDepthExceeded);
}

TEST_CASE("zero measure and summed measures") {
  ScaleMeasure z = ScaleMeasure::zero();
  CHECK(measure_of(z, seg(Scalar(0), Scalar(1)), opts).value() == Scalar(0));
  ScaleMeasure s = ScaleMeasure::lebesgue(seg(Scalar(0), Scalar(1))) +
                   ScaleMeasure::lebesgue(seg(Scalar(2), Scalar(3)));
  CHECK(measure_of(s, seg(Scalar(0), Scalar(3)), opts).value() == Scalar(2));
}
