#include "effint/testfn.hpp"

#include <algorithm>
#include <cmath>

#include "effint/errors.hpp"

namespace effint {

namespace {

double pwl_value(const PiecewiseLinear& u, double x) {
  const auto& ks = u.knots;
  if (x <= ks.front().x.dbl()) return ks.front().y.dbl();
  if (x >= ks.back().x.dbl()) return ks.back().y.dbl();
  size_t hi = 1;
  while (ks[hi].x.dbl() < x) ++hi;
  double x0 = ks[hi - 1].x.dbl(), x1 = ks[hi].x.dbl();
  double y0 = ks[hi - 1].y.dbl(), y1 = ks[hi].y.dbl();
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

double bump_value(const SmoothBump& b, double x) {
  double t = (x - b.center.dbl()) / b.radius.dbl();
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double cdf_value(const CdfOfMeasure& u, double x, const Options& opts) {
  Interval ray = Interval::make(ExtReal::neg_inf(), false, ExtReal(Scalar::approx(x)), true);
  return measure_of(u.mu, ray, opts).dbl();
}

double outer_value(const std::variant<PiecewiseLinear, SmoothBump>& outer, double y) {
  if (const auto* p = std::get_if<PiecewiseLinear>(&outer)) return pwl_value(*p, y);
  return bump_value(std::get<SmoothBump>(outer), y);
}

void validate_pwl(const PiecewiseLinear& u) {
  if (u.knots.size() < 2) throw ConfigError("piecewise linear needs at least two knots");
  for (size_t i = 1; i < u.knots.size(); ++i)
    if (!(u.knots[i - 1].x < u.knots[i].x))
      throw ConfigError("knots must have strictly increasing x");
}

}  // namespace

TestFunction TestFunction::tent(Scalar center, Scalar halfwidth, Scalar height) {
  PiecewiseLinear p;
  p.knots = {{center - halfwidth, Scalar(0)}, {center, height}, {center + halfwidth, Scalar(0)}};
  return TestFunction{p};
}

std::string TestFunction::str() const {
  if (const auto* p = std::get_if<PiecewiseLinear>(&rep)) {
    std::string s = "pwl[";
    for (size_t i = 0; i < p->knots.size(); ++i) {
      if (i) s += ", ";
      s += "(" + p->knots[i].x.str() + ", " + p->knots[i].y.str() + ")";
    }
    return s + "]";
  }
  if (const auto* b = std::get_if<SmoothBump>(&rep))
    return "bump(center " + b->center.str() + ", radius " + b->radius.str() + ")";
  if (const auto* c = std::get_if<CdfOfMeasure>(&rep)) return "cdf of " + c->mu.str();
  const auto& cw = std::get<CompositeWithScale>(rep);
  std::string inner = cw.inner.str();
  if (const auto* p = std::get_if<PiecewiseLinear>(&cw.outer))
    return TestFunction{*p}.str() + " after " + inner;
  return TestFunction{std::get<SmoothBump>(cw.outer)}.str() + " after " + inner;
}

void validate(const TestFunction& u, const Options& opts) {
  if (const auto* p = std::get_if<PiecewiseLinear>(&u.rep)) {
    validate_pwl(*p);
  } else if (const auto* b = std::get_if<SmoothBump>(&u.rep)) {
    if (!(b->radius > Scalar(0))) throw ConfigError("bump radius must be positive");
  } else if (const auto* c = std::get_if<CdfOfMeasure>(&u.rep)) {
    if (!measure_of(c->mu, Interval::real_line(), opts).is_finite())
      throw ConfigError("cdf variant needs a finite measure");
  } else {
    const auto& cw = std::get<CompositeWithScale>(u.rep);
    if (!(cw.inner.domain == Interval::real_line()))
      throw ConfigError("composite scale must live on the whole line");
    if (const auto* p = std::get_if<PiecewiseLinear>(&cw.outer))
      validate_pwl(*p);
    else if (!(std::get<SmoothBump>(cw.outer).radius > Scalar(0)))
      throw ConfigError("bump radius must be positive");
  }
}

double value_at(const TestFunction& u, double x, const Options& opts) {
  if (const auto* p = std::get_if<PiecewiseLinear>(&u.rep)) return pwl_value(*p, x);
  if (const auto* b = std::get_if<SmoothBump>(&u.rep)) return bump_value(*b, x);
  if (const auto* c = std::get_if<CdfOfMeasure>(&u.rep)) return cdf_value(*c, x, opts);
  const auto& cw = std::get<CompositeWithScale>(u.rep);
  Scalar y = cw.inner(Scalar::approx(x), opts);
  return outer_value(cw.outer, y.dbl());
}

double limit_value(const TestFunction& u, bool upper, const Options& opts) {
  if (const auto* p = std::get_if<PiecewiseLinear>(&u.rep))
    return (upper ? p->knots.back().y : p->knots.front().y).dbl();
  if (std::get_if<SmoothBump>(&u.rep)) return 0.0;
  if (const auto* c = std::get_if<CdfOfMeasure>(&u.rep))
    return upper ? measure_of(c->mu, Interval::real_line(), opts).dbl() : 0.0;
  const auto& cw = std::get<CompositeWithScale>(u.rep);
  ExtReal y = upper ? cw.inner.limit_at_hi(opts) : cw.inner.limit_at_lo(opts);
  if (y.is_finite()) return outer_value(cw.outer, y.dbl());
  if (const auto* p = std::get_if<PiecewiseLinear>(&cw.outer))
    return (y.is_pos_inf() ? p->knots.back().y : p->knots.front().y).dbl();
  return 0.0;
}

std::optional<ScaleMeasure> derivative_variation(const TestFunction& u) {
  if (const auto* p = std::get_if<PiecewiseLinear>(&u.rep)) {
    ScaleMeasure out;
    for (size_t i = 1; i < p->knots.size(); ++i) {
      Scalar slope = (p->knots[i].y - p->knots[i - 1].y) / (p->knots[i].x - p->knots[i - 1].x);
      if (slope.is_zero()) continue;
      Interval seg = Interval::closed(p->knots[i - 1].x, p->knots[i].x);
      out.pieces.push_back(DensityPiece{OpenSupport(seg), density::Constant{slope.abs()}});
    }
    return out;
  }
  if (const auto* c = std::get_if<CdfOfMeasure>(&u.rep)) return c->mu;
  return std::nullopt;
}

double bump_deriv(const SmoothBump& b, double x) {
  double r = b.radius.dbl();
  double t = (x - b.center.dbl()) / r;
  if (!(std::abs(t) < 1.0)) return 0.0;
  double d = 1.0 - t * t;
  return std::exp(1.0 - 1.0 / d) * (-2.0 * t / (d * d)) / r;
}

double bump_deriv_sq_bound(const SmoothBump& b) {
  // Profile derivative peaks near t = 3^{-1/4}; scan a fixed grid once and
  // keep a safety margin over the sampled maximum.
  static const double profile_max = [] {
    double m = 0.0;
    for (int k = 1; k < 4096; ++k) {
      double t = static_cast<double>(k) / 4096.0;
      double d = 1.0 - t * t;
      m = std::max(m, std::exp(1.0 - 1.0 / d) * 2.0 * t / (d * d));
    }
    return m * 1.02;
  }();
  double g = profile_max / b.radius.dbl();
  return g * g;
}

}  // namespace effint
