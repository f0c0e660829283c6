#include <cmath>

#include "doctest.h"
#include "effint/scale.hpp"

using namespace effint;

namespace {

Options opts;

Interval seg(const Scalar& a, const Scalar& b) { return Interval::closed(a, b); }

Interval pos_axis() { return Interval::open(ExtReal(Scalar(0)), ExtReal::pos_inf()); }

}  // namespace

TEST_CASE("the natural scale is translation by the anchor") {
  ScaleFunction s = ScaleFunction::natural(Interval::real_line(), Scalar(3));
  CHECK(s(Scalar(5), opts) == Scalar(2));
  CHECK(s(Scalar(-1), opts) == Scalar(-4));
  CHECK(s(Scalar(3), opts) == Scalar(0));
  CHECK(s.limit_at_lo(opts).is_neg_inf());
  CHECK(s.limit_at_hi(opts).is_pos_inf());
}

TEST_CASE("inverse-square density gives the 1 - 1/x scale") {
  ScaleMeasure mu{{DensityPiece{OpenSupport(pos_axis()),
                                density::PowerLaw{Scalar(1), Scalar(-2)}}}};
  ScaleFunction s = ScaleFunction::from_measure(pos_axis(), Scalar(1), mu, opts);
  CHECK(s(Scalar(2), opts) == Scalar::rat(1, 2));
  CHECK(s(Scalar::rat(1, 2), opts) == Scalar(-1));
  CHECK(s.limit_at_lo(opts).is_neg_inf());
  CHECK(s.limit_at_hi(opts) == ExtReal(Scalar(1)));  // far end a finite scale distance away
}

TEST_CASE("reciprocal density gives the logarithmic scale") {
  ScaleMeasure mu{{DensityPiece{OpenSupport(pos_axis()), density::Reciprocal{}}}};
  ScaleFunction s = ScaleFunction::from_measure(pos_axis(), Scalar(1), mu, opts);
  CHECK(s(Scalar(4), opts).dbl() == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(s(Scalar::rat(1, 4), opts).dbl() == doctest::Approx(-std::log(4.0)).epsilon(1e-12));
  CHECK(s.limit_at_lo(opts).is_neg_inf());
  CHECK(s.limit_at_hi(opts).is_pos_inf());
}

TEST_CASE("length plus a staircase is a valid strictly increasing scale") {
  ScaleMeasure mu = ScaleMeasure::lebesgue(Interval::real_line()) +
                    ScaleMeasure{{CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt}}};
  ScaleFunction s = ScaleFunction::from_measure(Interval::real_line(), Scalar(0), mu, opts);
  CHECK(s(Scalar(1), opts) == Scalar(2));
  CHECK(s(Scalar::rat(1, 3), opts) == Scalar::rat(1, 3) + Scalar::rat(1, 2));
  CHECK(s(Scalar(-1), opts) == Scalar(-1));
}

TEST_CASE("length on a dense gap family is still strictly increasing") {
  IntervalFamily gaps(CantorGapsFamily{CantorSpec::standard(), false, true});
  ScaleMeasure mu{{DensityPiece{OpenSupport(gaps), density::Constant{Scalar(1)}}}};
  ScaleFunction s = ScaleFunction::from_measure(Interval::real_line(), Scalar(0), mu, opts);
  CHECK(s(Scalar(1), opts) == Scalar(1));  // limit set is null
  CHECK(s(Scalar(-2), opts) == Scalar(-2));
}

TEST_CASE("a staircase alone is flat on every gap and rejected") {
  ScaleMeasure mu{{CantorPiece{CantorSpec::standard(), Scalar(1), std::nullopt}}};
  CHECK_THROWS_AS(ScaleFunction::from_measure(seg(Scalar(0), Scalar(1)), Scalar::rat(1, 2), mu, opts),
                  ConfigError);
}

TEST_CASE("coverage holes are rejected with a located witness") {
  ScaleMeasure mu = ScaleMeasure::lebesgue(seg(Scalar(0), Scalar(1)));
  CHECK_THROWS_AS(ScaleFunction::from_measure(seg(Scalar(-1), Scalar(2)), Scalar(0), mu, opts),
                  ConfigError);
  CHECK_THROWS_AS(ScaleFunction::from_measure(Interval::real_line(), Scalar(0), mu, opts),
                  ConfigError);
  CHECK_NOTHROW(ScaleFunction::from_measure(seg(Scalar(0), Scalar(1)), Scalar(0), mu, opts));
}

TEST_CASE("interior accumulation of per-member mass is rejected") {
  ChainFamily ch;
  ch.limit = Scalar(0);
  ch.coef = Scalar(-1);
  ScaleMeasure mu{{DensityPiece{OpenSupport(IntervalFamily(ch)),
                                density::MemberUniform{Scalar(1)}}}};
  CHECK_THROWS_AS(ScaleFunction::from_measure(seg(Scalar(-1), Scalar(1)), Scalar::rat(-1, 2), mu, opts),
                  ConfigError);
  // With the accumulation point on the boundary the scale is fine and the
  // boundary is infinitely far away.
  ScaleFunction s = ScaleFunction::from_measure(seg(Scalar(-1), Scalar(0)), Scalar::rat(-1, 2),
                                                mu, opts);
  CHECK(s.limit_at_hi(opts).is_pos_inf());
  CHECK(s(Scalar::rat(-1, 3), opts) == Scalar(1));  // exactly the second member
}

TEST_CASE("power divergence inside the interval is rejected") {
  ScaleMeasure mu{{DensityPiece{OpenSupport(pos_axis()),
                                density::PowerLaw{Scalar(1), Scalar(-2)}}}};
  CHECK_THROWS_AS(ScaleFunction::from_measure(Interval::real_line(), Scalar(1), mu, opts),
                  ConfigError);
}
