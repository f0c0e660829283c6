#include "effint/scale.hpp"

#include <utility>

namespace effint {

ScaleFunction ScaleFunction::natural(Interval domain, Scalar anchor) {
  ScaleMeasure mu = ScaleMeasure::lebesgue(domain);
  return ScaleFunction{std::move(domain), std::move(anchor), std::move(mu)};
}

ScaleFunction ScaleFunction::from_measure(Interval domain, Scalar anchor, ScaleMeasure mu,
                                          const Options& opts) {
  if (!domain.closure().contains(anchor))
    throw ConfigError("anchor lies outside the state interval");
  if (auto v = radon_violation(mu, domain)) throw ConfigError(*v);
  ScaleMeasure inside = restrict_measure(mu, domain, opts);
  // No flat spots: the charged intervals must leave no hole in the domain.
  if (auto hole = coverage_gap(inside, domain, opts))
    throw ConfigError("scale measure is flat near " + hole->str());
  return ScaleFunction{std::move(domain), std::move(anchor), std::move(inside)};
}

Scalar ScaleFunction::operator()(const Scalar& x, const Options& opts) const {
  if (!domain.closure().contains(x)) throw ConfigError("point outside the state interval");
  if (x == anchor) return Scalar(0);
  Interval b = x > anchor ? Interval::closed(anchor, x) : Interval::closed(x, anchor);
  ExtReal m = measure_of(measure, b, opts);
  if (!m.is_finite()) throw ConfigError("scale value is infinite at " + x.str());
  return x > anchor ? m.value() : -m.value();
}

ExtReal ScaleFunction::limit_at_lo(const Options& opts) const {
  if (domain.lo().is_finite() && domain.lo() == ExtReal(anchor)) return ExtReal(Scalar(0));
  Interval b = Interval::make(domain.lo(), false, ExtReal(anchor), true);
  ExtReal m = measure_of(measure, b, opts);
  return m.is_finite() ? ExtReal(-m.value()) : ExtReal::neg_inf();
}

ExtReal ScaleFunction::limit_at_hi(const Options& opts) const {
  if (domain.hi().is_finite() && domain.hi() == ExtReal(anchor)) return ExtReal(Scalar(0));
  Interval b = Interval::make(ExtReal(anchor), true, domain.hi(), false);
  return measure_of(measure, b, opts);
}

std::string ScaleFunction::str() const {
  return "scale on " + domain.str() + " anchored at " + anchor.str();
}

}  // namespace effint
