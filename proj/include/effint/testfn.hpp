#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "effint/scale.hpp"

namespace effint {

// Test functions fed to the energy form. Each variant is continuous on the
// line and constant outside a bounded set of variation (the derivative has
// compact support, values at the far ends may differ).

struct Knot {
  Scalar x;
  Scalar y;
  bool operator==(const Knot&) const = default;
};

// Piecewise linear interpolant through the knots, constant outside their span.
struct PiecewiseLinear {
  std::vector<Knot> knots;
  bool operator==(const PiecewiseLinear&) const = default;
};

// exp(1 - 1/(1 - t^2)) on |t| < 1 with t = (x - center)/radius, zero outside.
struct SmoothBump {
  Scalar center;
  Scalar radius;
  bool operator==(const SmoothBump&) const = default;
};

// x -> mu((-inf, x]); continuous when mu has no atoms (the vocabulary has
// none). The variation of the derivative is mu itself.
struct CdfOfMeasure {
  ScaleMeasure mu;
  bool operator==(const CdfOfMeasure&) const = default;
};

// outer composed with a scale function on the whole line.
struct CompositeWithScale {
  std::variant<PiecewiseLinear, SmoothBump> outer;
  ScaleFunction inner;
  bool operator==(const CompositeWithScale&) const = default;
};

struct TestFunction {
  std::variant<PiecewiseLinear, SmoothBump, CdfOfMeasure, CompositeWithScale> rep;

  static TestFunction tent(Scalar center, Scalar halfwidth, Scalar height);

  bool operator==(const TestFunction&) const = default;
  std::string str() const;
};

// Throws ConfigError when the representation is malformed (knots unsorted,
// nonpositive radius, inner scale not on the whole line).
void validate(const TestFunction& u, const Options& opts);

double value_at(const TestFunction& u, double x, const Options& opts);
// Limit toward +inf (upper) or -inf.
double limit_value(const TestFunction& u, bool upper, const Options& opts);

// |u'| dx as a measure in the vocabulary, when the variant admits one:
// piecewise linear and cdf variants do, the others return nullopt.
std::optional<ScaleMeasure> derivative_variation(const TestFunction& u);

// Derivative of the bump profile at x (zero outside the support).
double bump_deriv(const SmoothBump& b, double x);
// Certified upper bound for sup |phi'|^2 of the bump.
double bump_deriv_sq_bound(const SmoothBump& b);

}  // namespace effint
