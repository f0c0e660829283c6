#pragma once

#include <string>

#include "effint/measure.hpp"

namespace effint {

// Strictly increasing function on a state interval, represented by the
// measure it induces: s(x) is the signed mass of [anchor, x]. Construction
// validates that the measure is locally finite inside the interval and
// charges every subinterval (no flat spots).
struct ScaleFunction {
  Interval domain;
  Scalar anchor;
  ScaleMeasure measure;

  static ScaleFunction natural(Interval domain, Scalar anchor);
  static ScaleFunction from_measure(Interval domain, Scalar anchor, ScaleMeasure mu,
                                    const Options& opts);

  Scalar operator()(const Scalar& x, const Options& opts) const;
  // One-sided limits at the ends of the domain; infinite when the end is
  // out of reach in scale distance.
  ExtReal limit_at_lo(const Options& opts) const;
  ExtReal limit_at_hi(const Options& opts) const;

  bool operator==(const ScaleFunction&) const = default;
  std::string str() const;
};

}  // namespace effint
