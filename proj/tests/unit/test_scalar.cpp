#include "doctest.h"
#include "effint/extreal.hpp"
#include "effint/scalar.hpp"

using namespace effint;

TEST_CASE("scalar exactness propagation") {
  Scalar a = Scalar::rat(1, 3);
  Scalar b = Scalar::rat(1, 6);
  CHECK((a + b).is_exact());
  CHECK(a + b == Scalar::rat(1, 2));
  CHECK((a * b) == Scalar::rat(1, 18));
  CHECK((a - b) == b);
  CHECK((a / b) == Scalar(2));

  Scalar d = Scalar::approx(0.25);
  CHECK_FALSE((a + d).is_exact());
  CHECK(d == Scalar::rat(1, 4));  // comparisons stay exact
}

TEST_CASE("scalar ordering is exact across representations") {
  CHECK(Scalar::approx(0.1) > Scalar::rat(1, 10));  // 0.1 rounds up in binary
  CHECK(Scalar::rat(1, 3) < Scalar::approx(0.34));
  CHECK(Scalar::rat(-1, 2) < Scalar(0));
  CHECK(Scalar::approx(0.5) == Scalar::rat(1, 2));
}

TEST_CASE("scalar integer powers") {
  CHECK(Scalar::rat(2, 3).pow_int(3) == Scalar::rat(8, 27));
  CHECK(Scalar::rat(2, 1).pow_int(-2) == Scalar::rat(1, 4));
  CHECK(Scalar(7).pow_int(0) == Scalar(1));
}

TEST_CASE("scalar printing and parsing round trip") {
  CHECK(Scalar::rat(1, 3).str() == "1/3");
  CHECK(Scalar(-4).str() == "-4");
  CHECK(Scalar::approx(0.5).str() == "0.5");
  CHECK(Scalar::parse("1/3").value() == Scalar::rat(1, 3));
  CHECK(Scalar::parse("-7").value() == Scalar(-7));
  CHECK(Scalar::parse("-7").value().is_exact());
  CHECK(Scalar::parse("2.5e-1").value() == Scalar::rat(1, 4));
  CHECK_FALSE(Scalar::parse("1/0").has_value());
  CHECK_FALSE(Scalar::parse("abc").has_value());
  CHECK_FALSE(Scalar::parse("").has_value());
}

TEST_CASE("extended reals order and arithmetic") {
  ExtReal ni = ExtReal::neg_inf(), pi = ExtReal::pos_inf();
  ExtReal z{Scalar(0)};
  CHECK(ni < z);
  CHECK(z < pi);
  CHECK(ni < pi);
  CHECK(ni == ExtReal::neg_inf());
  CHECK(-ni == pi);
  CHECK((ni + Scalar(5)).is_neg_inf());
  CHECK((z + Scalar(5)) == ExtReal(Scalar(5)));
  CHECK(ExtReal::parse("-inf").value().is_neg_inf());
  CHECK(ExtReal::parse("3/2").value() == ExtReal(Scalar::rat(3, 2)));
}

TEST_CASE("default anchor cases") {
  // (-1, 1) -> 0; (0, inf) -> 1; (-inf, 0) -> -1; (-inf, inf) -> 0
  CHECK(default_anchor(ExtReal(Scalar(-1)), ExtReal(Scalar(1))) == Scalar(0));
  CHECK(default_anchor(ExtReal(Scalar(0)), ExtReal::pos_inf()) == Scalar(1));
  CHECK(default_anchor(ExtReal::neg_inf(), ExtReal(Scalar(0))) == Scalar(-1));
  CHECK(default_anchor(ExtReal::neg_inf(), ExtReal::pos_inf()) == Scalar(0));
  CHECK(default_anchor(ExtReal(Scalar::rat(1, 3)), ExtReal(Scalar::rat(2, 3))) ==
        Scalar::rat(1, 2));
}
