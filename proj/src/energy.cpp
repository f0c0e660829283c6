#include "effint/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "effint/quadrature.hpp"
#include "effint/relations.hpp"
#include "effint/restrict.hpp"

namespace effint {

namespace {

struct Acc {
  ExtReal val = ExtReal(Scalar(0));
  double err = 0.0;
  void add(const ExtReal& x, double e) {
    if (val.is_pos_inf()) return;
    if (x.is_pos_inf()) {
      val = ExtReal::pos_inf();
      return;
    }
    val = ExtReal(val.value() + x.value());
    err += e;
  }
  void add_d(double x, double e) { add(ExtReal(Scalar::approx(x)), e); }
};

ScaleMeasure pair_scale(const PairEntry& p) {
  if (const auto* e = std::get_if<ExplicitPair>(&p)) return e->scale.measure;
  const auto& f = std::get<FamilyPairs>(p);
  DensityTag tag = f.rule == MemberScaleRule::Natural
                       ? DensityTag(density::Constant{Scalar(1)})
                       : DensityTag(density::MemberUniform{f.member_mass});
  ScaleMeasure out;
  out.pieces.push_back(DensityPiece{OpenSupport(f.family), tag});
  return out;
}

// ---- direct path: the derivative variation is a measure --------------------

void measure_pair(const ScaleMeasure& du, const PairEntry& p, std::size_t idx, Acc& acc,
                  const Options& opts) {
  ScaleMeasure nu = restrict_to_unit(du, pair_unit(p), opts);
  if (nu.is_zero()) return;
  L2Report r = l2loc_density_check(nu, pair_scale(p), Interval::real_line(), opts);
  if (!r.dominated)
    throw NotAbsolutelyContinuous("pair " + std::to_string(idx) +
                                  ": the function varies where the pair scale is flat");
  acc.add(r.square_mass, r.err);
}

// ---- bump path: integrate the derivative against the decomposition --------

double ratio_value(const DensityTag& t, double x) {
  if (const auto* c = std::get_if<density::Constant>(&t)) return c->c.dbl();
  if (const auto* p = std::get_if<density::PowerLaw>(&t))
    return p->coef.dbl() * std::pow(x, p->p.dbl());
  if (std::get_if<density::Reciprocal>(&t)) return 1.0 / x;
  if (const auto* r = std::get_if<density::RationalTaper>(&t)) {
    double d = 1.0 + std::abs(x - r->center.dbl());
    return r->c.dbl() / (d * d);
  }
  throw ConfigError("per-member density used pointwise: " + tag_str(t));
}

void bump_plain(const SmoothBump& b, const DensityTag& ratio, const Interval& s, double tol,
                Acc& acc) {
  auto f = [&](double x) {
    double d = bump_deriv(b, x);
    return d * d * ratio_value(ratio, x);
  };
  QuadResult q = adaptive_simpson(f, s.lo().dbl(), s.hi().dbl(), tol);
  acc.add_d(q.value, q.err + tol);
}

void bump_family(const SmoothBump& b, const IntervalFamily& F, const DensityTag& ratio,
                 double tol, Acc& acc, const Options& opts) {
  double lo_supp = (b.center - b.radius).dbl();
  double hi_supp = (b.center + b.radius).dbl();
  double sup_sq = bump_deriv_sq_bound(b);
  if (const auto* cst = std::get_if<density::Constant>(&ratio)) {
    // members tile the cover brackets up to the trap, which carries no
    // Lebesgue mass except for fat specs
    FamilyBrackets fb = family_cover_brackets(F, opts);
    double c = cst->c.dbl();
    double slack = sup_sq * c * (fb.uncovered + fb.uncovered_err);
    if (slack > tol / 2.0)
      throw TailBoundUnavailable("positive-length trap spoils the bump integral bound");
    double per = tol / (2.0 * static_cast<double>(std::max<std::size_t>(fb.brackets.size(), 1)));
    for (const Interval& br : fb.brackets) {
      double lo = std::max(br.lo().is_finite() ? br.lo().value().dbl() : lo_supp, lo_supp);
      double hi = std::min(br.hi().is_finite() ? br.hi().value().dbl() : hi_supp, hi_supp);
      if (!(lo < hi)) continue;
      auto f = [&](double x) {
        double d = bump_deriv(b, x);
        return d * d;
      };
      QuadResult q = adaptive_simpson(f, lo, hi, per / std::max(c, 1e-300));
      acc.add_d(c * q.value, c * q.err + per);
    }
    if (fb.uncovered > 0.0) acc.add_d(-slack / 2.0, slack / 2.0);
    return;
  }
  const auto* ml = std::get_if<density::MemberLength>(&ratio);
  if (!ml) throw ConfigError("unsupported density on a family support: " + tag_str(ratio));
  // per-member constants: enumerate; the tail shrinks with both the member
  // length and the remaining total length
  ScaleMeasure flat;
  flat.pieces.push_back(DensityPiece{OpenSupport(F), density::Constant{Scalar(1)}});
  ExtReal total = measure_of(flat, Interval::real_line(), opts);
  if (!total.is_finite())
    throw TailBoundUnavailable("family under the bump has unbounded total length");
  std::size_t want = std::max<std::size_t>(opts.prefix_depth, 8);
  for (;;) {
    std::vector<Interval> ms = F.prefix(want, opts);
    double sum = 0.0, errs = 0.0, done = 0.0, last_len = 0.0;
    double per = tol / (2.0 * static_cast<double>(std::max<std::size_t>(ms.size(), 1)));
    for (const Interval& m : ms) {
      double a = m.lo().dbl(), c2 = m.hi().dbl();
      last_len = c2 - a;
      done += last_len;
      double r = ml->coef.dbl() * std::pow(last_len, ml->power);
      auto f = [&](double x) {
        double d = bump_deriv(b, x);
        return d * d;
      };
      QuadResult q = adaptive_simpson(f, a, c2, per / std::max(r, 1e-300));
      sum += r * q.value;
      errs += r * q.err + per;
    }
    if (ms.size() < want) {
      acc.add_d(sum, errs);
      return;
    }
    if (ml->power < 0)
      throw TailBoundUnavailable("family density grows as members shrink");
    double r_tail = ml->coef.dbl() * std::pow(last_len, ml->power);
    double tail = sup_sq * r_tail * std::max(0.0, total.dbl() - done);
    if (tail <= tol / 2.0) {
      acc.add_d(sum, errs + tail);
      return;
    }
    if (want >= (1u << 21))
      throw TailBoundUnavailable("family tail does not certify below tolerance");
    want *= 2;
  }
}

void bump_pair(const SmoothBump& b, const PairEntry& p, std::size_t idx, double tol, Acc& acc,
               const Options& opts) {
  Interval window = Interval::closed(b.center - b.radius, b.center + b.radius);
  ScaleMeasure nu = restrict_to_unit(ScaleMeasure::lebesgue(window), pair_unit(p), opts);
  if (nu.is_zero()) return;
  Decomposition dec = lebesgue_decompose(nu, pair_scale(p), opts);
  ExtReal sing = measure_of(dec.singular, Interval::real_line(), opts);
  if (!(sing.is_finite() && sing.value().is_zero()))
    throw NotAbsolutelyContinuous("pair " + std::to_string(idx) +
                                  ": the bump varies where the pair scale is flat");
  for (const RatioPiece& rp : dec.density) {
    if (const auto* ivs = rp.support.intervals()) {
      for (const Interval& s : *ivs) bump_plain(b, rp.ratio, s, tol / 4.0, acc);
    } else {
      bump_family(b, *rp.support.family(), rp.ratio, tol / 2.0, acc, opts);
    }
  }
}

// ---- composite path: push the scale forward and integrate in the image ----
//
// On any Borel set a strictly increasing scale pushes its own measure forward
// to Lebesgue measure on the image. A single component pushes forward to
// Lebesgue on the image minus the images of the other components, so the
// positive-length images of staircase components ("shadows") are carved out
// of the plain components' image brackets.

struct OuterInfo {
  const PiecewiseLinear* pwl = nullptr;
  const SmoothBump* bump = nullptr;
  double sup_sq = 0.0;
  std::vector<Interval> active;  // open regions where the outer derivative is nonzero
};

OuterInfo outer_info(const CompositeWithScale& cw) {
  OuterInfo oi;
  if (const auto* p = std::get_if<PiecewiseLinear>(&cw.outer)) {
    oi.pwl = p;
    for (std::size_t i = 1; i < p->knots.size(); ++i) {
      Scalar slope =
          (p->knots[i].y - p->knots[i - 1].y) / (p->knots[i].x - p->knots[i - 1].x);
      if (slope.is_zero()) continue;
      oi.active.push_back(
          Interval::open(ExtReal(p->knots[i - 1].x), ExtReal(p->knots[i].x)));
      oi.sup_sq = std::max(oi.sup_sq, slope.dbl() * slope.dbl());
    }
  } else {
    oi.bump = &std::get<SmoothBump>(cw.outer);
    oi.active.push_back(Interval::open(ExtReal(oi.bump->center - oi.bump->radius),
                                       ExtReal(oi.bump->center + oi.bump->radius)));
    oi.sup_sq = bump_deriv_sq_bound(*oi.bump);
  }
  return oi;
}

ExtReal f_at(const ScaleFunction& f, const ExtReal& x, bool upper, const Options& opts) {
  if (x.is_finite()) return ExtReal(f(x.value(), opts));
  return upper ? f.limit_at_hi(opts) : f.limit_at_lo(opts);
}

// integral of (outer derivative)^2 over [y0, y1], scaled by `c`
void add_outer_sq(const OuterInfo& oi, const Scalar& c, const ExtReal& y0, const ExtReal& y1,
                  double tol, Acc& acc) {
  if (oi.pwl) {
    const auto& ks = oi.pwl->knots;
    Scalar total(0);
    for (std::size_t i = 1; i < ks.size(); ++i) {
      Scalar slope = (ks[i].y - ks[i - 1].y) / (ks[i].x - ks[i - 1].x);
      if (slope.is_zero()) continue;
      Scalar lo2 = y0.is_finite() ? Scalar::max(ks[i - 1].x, y0.value()) : ks[i - 1].x;
      Scalar hi2 = y1.is_finite() ? Scalar::min(ks[i].x, y1.value()) : ks[i].x;
      if (lo2 < hi2) total = total + slope * slope * (hi2 - lo2);
    }
    if (!total.is_zero()) acc.add(ExtReal(c * total), 0.0);
    return;
  }
  const SmoothBump& b = *oi.bump;
  double a = (b.center - b.radius).dbl();
  double z = (b.center + b.radius).dbl();
  double lo2 = y0.is_finite() ? std::max(a, y0.value().dbl()) : a;
  double hi2 = y1.is_finite() ? std::min(z, y1.value().dbl()) : z;
  if (!(lo2 < hi2)) return;
  auto f = [&](double y) {
    double d = bump_deriv(b, y);
    return d * d;
  };
  QuadResult q = adaptive_simpson(f, lo2, hi2, tol);
  acc.add_d(c.dbl() * q.value, c.dbl() * (q.err + tol));
}

// exact value of the squared outer derivative when it is constant on [y0, y1]
std::optional<Scalar> pwl_sq_const(const PiecewiseLinear& p, const Scalar& y0,
                                   const Scalar& y1) {
  const auto& ks = p.knots;
  if (!(ks.front().x < y1) || !(y0 < ks.back().x)) return Scalar(0);
  if (y0 < ks.front().x || ks.back().x < y1) return std::nullopt;
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (!(y0 < ks[i - 1].x) && !(ks[i].x < y1)) {
      Scalar slope = (ks[i].y - ks[i - 1].y) / (ks[i].x - ks[i - 1].x);
      return slope * slope;
    }
  return std::nullopt;
}

double bump_sq_lip(const SmoothBump& b) {
  // slope bound for the squared profile derivative, from a fixed grid scan
  static const double profile = [] {
    double m = 0.0, prev = 0.0;
    const int n = 8192;
    for (int k = 0; k <= n; ++k) {
      double t = -1.0 + 2.0 * static_cast<double>(k) / n;
      double d = 1.0 - t * t;
      double g = 0.0;
      if (d > 0.0) {
        double e = std::exp(1.0 - 1.0 / d) * (-2.0 * t / (d * d));
        g = e * e;
      }
      if (k) m = std::max(m, std::abs(g - prev) * n / 2.0);
      prev = g;
    }
    return m * 1.2;
  }();
  double r = b.radius.dbl();
  return profile / (r * r * r);
}

// certified range of the squared outer derivative over [y0, y1]
std::pair<double, double> outer_sq_range(const OuterInfo& oi, double y0, double y1) {
  if (oi.pwl) {
    const auto& ks = oi.pwl->knots;
    double first = ks.front().x.dbl(), last = ks.back().x.dbl();
    double mn = 1e300, mx = 0.0;
    auto consider = [&](double v) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    };
    if (y0 < first || y1 > last) consider(0.0);
    for (std::size_t i = 1; i < ks.size(); ++i) {
      double a = ks[i - 1].x.dbl(), z = ks[i].x.dbl();
      if (z <= y0 || a >= y1) continue;
      double s = (ks[i].y.dbl() - ks[i - 1].y.dbl()) / (z - a);
      consider(s * s);
    }
    if (mn > mx) mn = mx;
    return {mn, mx};
  }
  const SmoothBump& b = *oi.bump;
  double a = (b.center - b.radius).dbl();
  double z = (b.center + b.radius).dbl();
  double lo = std::max(y0, a), hi = std::min(y1, z);
  if (!(lo < hi)) return {0.0, 0.0};
  auto sq = [&](double y) {
    double d = bump_deriv(b, y);
    return d * d;
  };
  double w = hi - lo;
  double pad = bump_sq_lip(b) * w / 4.0;
  double s0 = sq(lo), s1 = sq(hi), sm = sq(0.5 * (lo + hi));
  double mn = std::min({s0, s1, sm}) - pad;
  double mx = std::max({s0, s1, sm}) + pad;
  if (y0 < lo || y1 > hi) mn = 0.0;
  mn = std::max(mn, 0.0);
  mx = std::min(mx, bump_deriv_sq_bound(b));
  if (mn > mx) mn = mx;
  return {mn, mx};
}

// ---- staircase-parameter integral ------------------------------------------
// integral of c * (outer deriv)^2 composed with f against an equal-mass
// staircase of `spec` scaled to `mass`, optionally clipped. Descends the
// construction: a cell stops when the outer square is constant on the cell's
// image (exact) or its oscillation is inside the budget.

struct StairJob {
  const ScaleFunction* f;
  const OuterInfo* oi;
  Scalar c;
  CantorSpec spec;
  Scalar mass;
  std::optional<Interval> reg;
  const Options* opts;
};

void stair_cell(const StairJob& j, const Scalar& xlo, const Scalar& xhi, long long level,
                const Scalar& frac, double budget, Acc& out) {
  Interval cell = Interval::closed(xlo, xhi);
  bool full = true;
  if (j.reg) {
    if (cell.disjoint_from(*j.reg)) return;
    if (!cell.is_subset_of(*j.reg)) full = false;
  }
  Scalar cmass = j.mass * frac;
  Scalar y0 = (*j.f)(xlo, *j.opts);
  Scalar y1 = (*j.f)(xhi, *j.opts);
  if (full && j.oi->pwl) {
    if (auto v = pwl_sq_const(*j.oi->pwl, y0, y1)) {
      if (!v->is_zero()) out.add(ExtReal(j.c * *v * cmass), 0.0);
      return;
    }
  }
  auto [mn, mx] = outer_sq_range(*j.oi, y0.dbl(), y1.dbl());
  if (!full) mn = 0.0;  // an unknown share of the mass sits inside the clip
  double half_spread = 0.5 * (mx - mn) * cmass.dbl() * j.c.dbl();
  if (half_spread <= budget) {
    out.add_d(j.c.dbl() * 0.5 * (mn + mx) * cmass.dbl(), half_spread);
    return;
  }
  if (level >= 64)
    throw ApproximationDepthExceeded("staircase image integral did not settle");
  Scalar cw = (xhi - xlo) * j.spec.kept_fraction(level + 1);
  Scalar half = frac / Scalar(2);
  stair_cell(j, xlo, xlo + cw, level + 1, half, budget / 2.0, out);
  stair_cell(j, xhi - cw, xhi, level + 1, half, budget / 2.0, out);
}

void stair_param_integral(const ScaleFunction& f, const OuterInfo& oi, const Scalar& c,
                          const CantorSpec& spec, const Scalar& mass,
                          const std::optional<Interval>& clip, double tol, Acc& out,
                          const Options& opts) {
  StairJob j{&f, &oi, c, spec, mass, clip, &opts};
  stair_cell(j, spec.lo, spec.hi, 0, Scalar(1), tol, out);
}

// Positive-length image regions created by staircase components of the scale.
struct Shadow {
  CantorSpec spec;
  Scalar mass;
  Interval region;
};

std::optional<Interval> stair_region(const CantorPiece& cp) {
  Interval base = cp.spec.base_interval();
  return cp.clip ? cp.clip->intersect(base) : std::optional<Interval>(base);
}

std::vector<Shadow> collect_shadows(const ScaleMeasure& nu) {
  std::vector<Shadow> out;
  for (const Piece& pc : nu.pieces) {
    const auto* cp = std::get_if<CantorPiece>(&pc);
    if (!cp) continue;
    if (auto reg = stair_region(*cp)) out.push_back({cp->spec, cp->mass, *reg});
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (out[i].region.meets(out[j].region))
        throw ConfigError("overlapping staircase regions in one scale");
  return out;
}

// contribution of c * d(lambda_s) over the plain bracket s, carving out the
// shadows of staircase components that share the bracket
void composite_over_bracket(const CompositeWithScale& cw, const OuterInfo& oi, const Scalar& c,
                            const Interval& s, const std::vector<Shadow>& shadows, double tol,
                            Acc& acc, const Options& opts) {
  ExtReal y0 = f_at(cw.inner, s.lo(), false, opts);
  ExtReal y1 = f_at(cw.inner, s.hi(), true, opts);
  add_outer_sq(oi, c, y0, y1, tol / 2.0, acc);
  for (const Shadow& sh : shadows) {
    auto cut = sh.region.intersect(s);
    if (!cut) continue;
    if (limit_overlap(sh.spec, cut->lo().value(), cut->hi().value(), opts) !=
        LimitOverlap::Uncountable)
      continue;
    Acc sub;
    stair_param_integral(cw.inner, oi, c, sh.spec, sh.mass, cut,
                         tol / (2.0 * static_cast<double>(shadows.size())), sub, opts);
    acc.add(ExtReal(-sub.val.value()), sub.err);
  }
}

// c * d(lambda_s) on a family support, via the family's cover brackets
void composite_family(const CompositeWithScale& cw, const OuterInfo& oi, const Scalar& c,
                      const RatioPiece& rp, const std::vector<Shadow>& shadows, double tol,
                      Acc& acc, const Options& opts) {
  const IntervalFamily& F = *rp.support.family();
  if (const auto* cg = std::get_if<CantorGapsFamily>(&F.rep());
      cg && !cg->spec.limit_is_null())
    throw TailBoundUnavailable("positive-length trap under a composite is not certified");
  FamilyBrackets fb = family_cover_brackets(F, opts);
  double per = tol / static_cast<double>(std::max<std::size_t>(fb.brackets.size(), 1));
  for (const Interval& br : fb.brackets)
    composite_over_bracket(cw, oi, c, br, shadows, per, acc, opts);
}

bool image_meets_active(const ScaleFunction& f, const ScaleMeasure& sing, const OuterInfo& oi,
                        const Options& opts) {
  for (const Piece& pc : sing.pieces) {
    std::optional<Interval> h;
    if (const auto* dp = std::get_if<DensityPiece>(&pc))
      h = dp->support.hull();
    else
      h = stair_region(std::get<CantorPiece>(pc));
    if (!h) continue;
    ExtReal y0 = f_at(f, h->lo(), false, opts);
    ExtReal y1 = f_at(f, h->hi(), true, opts);
    if (!(y0 < y1)) continue;
    Interval img = Interval::make(y0, y0.is_finite(), y1, y1.is_finite());
    for (const Interval& a : oi.active)
      if (a.meets(img)) return true;
  }
  return false;
}

void composite_pair(const CompositeWithScale& cw, const OuterInfo& oi, const PairEntry& p,
                    std::size_t idx, double tol, Acc& acc, const Options& opts) {
  ScaleMeasure nu = restrict_to_unit(cw.inner.measure, pair_unit(p), opts);
  if (nu.is_zero()) return;
  Decomposition dec = lebesgue_decompose(nu, pair_scale(p), opts);
  if (!dec.singular.is_zero() && image_meets_active(cw.inner, dec.singular, oi, opts))
    throw NotAbsolutelyContinuous("pair " + std::to_string(idx) +
                                  ": the composite varies where the pair scale is flat");
  std::vector<Shadow> shadows = collect_shadows(nu);
  for (const RatioPiece& rp : dec.density) {
    DensityTag canon = canonical_tag(rp.ratio);
    const auto* c = std::get_if<density::Constant>(&canon);
    if (!c)
      throw ConfigError("composite energy needs piecewise-constant scale ratios, got " +
                        tag_str(canon));
    if (const auto* cp = std::get_if<CantorPiece>(&rp.base)) {
      stair_param_integral(cw.inner, oi, c->c, cp->spec, cp->mass, cp->clip, tol / 2.0, acc,
                           opts);
    } else if (rp.support.is_family()) {
      composite_family(cw, oi, c->c, rp, shadows, tol / 2.0, acc, opts);
    } else {
      for (const Interval& s : *rp.support.intervals())
        composite_over_bracket(cw, oi, c->c, s, shadows, tol / 2.0, acc, opts);
    }
  }
}

}  // namespace

EnergyReport energy(const EffectiveSystem& sys, const TestFunction& u, double tol,
                    const Options& opts) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  validate(u, opts);
  Acc acc;
  if (auto du = derivative_variation(u)) {
    for (std::size_t i = 0; i < sys.pairs.size(); ++i)
      measure_pair(*du, sys.pairs[i], i, acc, opts);
  } else if (const auto* b = std::get_if<SmoothBump>(&u.rep)) {
    for (std::size_t i = 0; i < sys.pairs.size(); ++i)
      bump_pair(*b, sys.pairs[i], i, tol, acc, opts);
  } else {
    const auto& cw = std::get<CompositeWithScale>(u.rep);
    OuterInfo oi = outer_info(cw);
    for (std::size_t i = 0; i < sys.pairs.size(); ++i)
      composite_pair(cw, oi, sys.pairs[i], i, tol, acc, opts);
  }
  EnergyReport rep;
  if (acc.val.is_pos_inf()) {
    rep.value = ExtReal::pos_inf();
    rep.err = 0.0;
  } else {
    rep.value = ExtReal(acc.val.value() / Scalar(2));
    rep.err = acc.err / 2.0;
  }
  for (const BoundaryEntry& be : boundary_classify(sys, opts)) {
    auto warn_if = [&](BoundaryKind k, const ExtReal& e) {
      if (k != BoundaryKind::AbsorbingDirichlet) return;
      double v = e.is_finite() ? value_at(u, e.value().dbl(), opts)
                               : limit_value(u, e.is_pos_inf(), opts);
      if (std::abs(v) > 1e-9)
        rep.warnings.push_back("nonzero value " + double_str(v) + " at absorbing endpoint " +
                               e.str() + " of pair " + std::to_string(be.pair_index));
    };
    warn_if(be.lo, be.member.lo());
    warn_if(be.hi, be.member.hi());
  }
  return rep;
}

}  // namespace effint
