#include "effint/measure.hpp"

#include "effint/restrict.hpp"

#include <algorithm>
#include <cmath>

namespace effint {

// ---- OpenSupport ---------------------------------------------------------

Interval OpenSupport::hull() const {
  if (const auto* ivs = intervals()) {
    if (ivs->empty()) throw ConfigError("empty support has no hull");
    ExtReal lo = (*ivs)[0].lo(), hi = (*ivs)[0].hi();
    for (const Interval& iv : *ivs) {
      if (iv.lo() < lo) lo = iv.lo();
      if (hi < iv.hi()) hi = iv.hi();
    }
    return Interval::open(lo, hi);
  }
  return family()->hull().interior();
}

bool OpenSupport::covers(const Scalar& x, const Options& opts) const {
  if (const auto* ivs = intervals()) {
    for (const Interval& iv : *ivs)
      if (iv.interior().contains(x)) return true;
    return false;
  }
  auto m = family()->member_containing(x, opts);
  return m && m->interior().contains(x);
}

std::vector<SetUnit> OpenSupport::units() const {
  std::vector<SetUnit> out;
  if (const auto* ivs = intervals()) {
    for (const Interval& iv : *ivs) out.emplace_back(iv.interior());
    return out;
  }
  out.emplace_back(*family());
  return out;
}

std::optional<OpenSupport> OpenSupport::clip(const Interval& bracket) const {
  if (const auto* ivs = intervals()) {
    std::vector<Interval> kept;
    for (const Interval& iv : *ivs)
      if (auto seg = iv.interior().intersect(bracket)) kept.push_back(*seg);
    if (kept.empty()) return std::nullopt;
    return OpenSupport(std::move(kept));
  }
  const IntervalFamily& fam = *family();
  std::optional<Interval> w = bracket;
  if (fam.window()) {
    auto meet = fam.window()->intersect(bracket);
    if (!meet) return std::nullopt;
    w = *meet;
  }
  return OpenSupport(IntervalFamily(fam.rep(), w));
}

std::string OpenSupport::str() const {
  if (const auto* ivs = intervals()) {
    std::string out = "{";
    for (std::size_t i = 0; i < ivs->size(); ++i) {
      if (i) out += " u ";
      out += (*ivs)[i].str();
    }
    return out + "}";
  }
  return "interiors of " + family()->str();
}

// ---- density tags --------------------------------------------------------

DensityTag canonical_tag(const DensityTag& t) {
  if (std::holds_alternative<density::Reciprocal>(t))
    return density::PowerLaw{Scalar(1), Scalar(-1)};
  return t;
}

std::string tag_str(const DensityTag& t) {
  if (const auto* c = std::get_if<density::Constant>(&t)) return "const " + c->c.str();
  if (const auto* p = std::get_if<density::PowerLaw>(&t))
    return p->coef.str() + " x^" + p->p.str();
  if (std::holds_alternative<density::Reciprocal>(t)) return "1/x";
  if (const auto* r = std::get_if<density::RationalTaper>(&t))
    return r->c.str() + "/(1+|x-" + r->center.str() + "|)^2";
  if (const auto* m = std::get_if<density::MemberUniform>(&t))
    return "per-member mass " + m->mass.str();
  const auto& ml = std::get<density::MemberLength>(t);
  return ml.coef.str() + " len^" + std::to_string(ml.power);
}

DensityPiece indicator_scaled(const Scalar& c, const OpenSupport& sub,
                              const OpenSupport& support) {
  if (c.sign() <= 0) throw ConfigError("indicator coefficient must be positive");
  if (const auto* sivs = support.intervals()) {
    if (const auto* givs = sub.intervals()) {
      std::vector<Interval> kept;
      for (const Interval& g : *givs)
        for (const Interval& s : *sivs)
          if (auto seg = g.interior().intersect(s.interior())) kept.push_back(*seg);
      return {OpenSupport(std::move(kept)), density::Constant{c}};
    }
    // family-shaped selection inside plain intervals: keep the family, clip
    // by each support component in turn (requires a single component).
    if (sivs->size() != 1)
      throw ConfigError("family selection needs a single-interval support");
    auto clipped = sub.clip((*sivs)[0]);
    if (!clipped) return {OpenSupport(std::vector<Interval>{}), density::Constant{c}};
    return {*clipped, density::Constant{c}};
  }
  const auto* givs = sub.intervals();
  if (!givs || givs->size() != 1)
    throw ConfigError("selection on a family support must be a single window");
  auto clipped = support.clip((*givs)[0]);
  if (!clipped) return {OpenSupport(std::vector<Interval>{}), density::Constant{c}};
  return {*clipped, density::Constant{c}};
}

// ---- integration ---------------------------------------------------------

namespace {

struct Mass {
  ExtReal val = ExtReal(Scalar(0));
  double err = 0.0;
};

Mass add(Mass a, const Mass& b) {
  if (!a.val.is_finite() || !b.val.is_finite()) return {ExtReal::pos_inf(), 0.0};
  return {ExtReal(a.val.value() + b.val.value()), a.err + b.err};
}

Scalar finite_len(const Interval& iv) {
  ExtReal l = iv.length();
  if (!l.is_finite()) throw ConfigError("expected a bounded interval: " + iv.str());
  return l.value();
}

// Signed antiderivative of the taper density c/(1+|x-center|)^2, zero at the
// center, with limits +-c at +-infinity.
Scalar taper_cdf(const density::RationalTaper& t, const ExtReal& x) {
  if (!x.is_finite()) return x == ExtReal::pos_inf() ? t.c : -t.c;
  Scalar d = x.value() - t.center;
  if (d.sign() >= 0) return t.c * d / (Scalar(1) + d);
  Scalar m = -d;
  return -(t.c * m / (Scalar(1) + m));
}

bool is_integer(const Scalar& s) {
  if (!s.is_exact()) return false;
  const Rational& r = s.exact_value();
  return boost::multiprecision::denominator(r) == 1;
}

Mass integrate_power(const density::PowerLaw& pl, const Interval& seg) {
  if (seg.lo() < ExtReal(Scalar(0)))
    throw ConfigError("power-law density requires support in (0, inf)");
  if (pl.coef.sign() <= 0) throw ConfigError("density coefficient must be positive");
  const ExtReal& u = seg.lo();
  const ExtReal& v = seg.hi();
  Scalar p1 = pl.p + Scalar(1);
  if (pl.p == Scalar(-1)) {
    bool lo_zero = u.is_finite() && u.value().is_zero();
    if (lo_zero || !v.is_finite()) return {ExtReal::pos_inf(), 0.0};
    double val = pl.coef.dbl() * (std::log(v.value().dbl()) - std::log(u.value().dbl()));
    return {ExtReal(Scalar::approx(val)), 0.0};
  }
  auto anti = [&](const ExtReal& x) -> std::optional<Scalar> {  // nullopt: diverges
    if (!x.is_finite()) {
      if (p1.sign() > 0) return std::nullopt;
      return Scalar(0);
    }
    if (x.value().is_zero()) {
      if (p1.sign() < 0) return std::nullopt;
      return Scalar(0);
    }
    if (is_integer(pl.p)) {
      long long e = pl.p.exact_value().convert_to<long long>();
      return pl.coef * x.value().pow_int(e + 1) / p1;
    }
    double xv = x.value().dbl();
    return Scalar::approx(pl.coef.dbl() * std::pow(xv, p1.dbl()) / p1.dbl());
  };
  auto av = anti(v);
  auto au = anti(u);
  if (!av || !au) return {ExtReal::pos_inf(), 0.0};
  return {ExtReal(*av - *au), 0.0};
}

Mass integrate_tag(const DensityTag& tag_in, const Interval& seg) {
  DensityTag tag = canonical_tag(tag_in);
  if (const auto* c = std::get_if<density::Constant>(&tag)) {
    if (c->c.sign() <= 0) throw ConfigError("density coefficient must be positive");
    ExtReal len = seg.length();
    if (!len.is_finite()) return {ExtReal::pos_inf(), 0.0};
    return {ExtReal(c->c * len.value()), 0.0};
  }
  if (const auto* p = std::get_if<density::PowerLaw>(&tag)) return integrate_power(*p, seg);
  if (const auto* t = std::get_if<density::RationalTaper>(&tag)) {
    if (t->c.sign() <= 0) throw ConfigError("density coefficient must be positive");
    return {ExtReal(taper_cdf(*t, seg.hi()) - taper_cdf(*t, seg.lo())), 0.0};
  }
  throw ConfigError("density " + tag_str(tag_in) + " needs a family support");
}

// Lebesgue mass of (union of family member interiors) ∩ bracket.
Mass family_lebesgue(const IntervalFamily& fam, const Interval& bracket, const Options& opts) {
  Mass out;
  if (const auto* ex = std::get_if<ExplicitFamily>(&fam.rep())) {
    for (const Interval& m : ex->members) {
      if (!fam.keeps(m)) continue;
      if (auto seg = m.intersect(bracket)) {
        ExtReal len = seg->length();
        if (!len.is_finite()) return {ExtReal::pos_inf(), 0.0};
        out = add(out, {ExtReal(len.value()), 0.0});
      }
    }
    return out;
  }
  if (const auto* ch = std::get_if<ChainFamily>(&fam.rep())) {
    auto span = chain_kept_span(*ch, fam.window());
    if (!span) return out;
    if (auto seg = span->intersect(bracket)) out = add(out, {seg->length(), 0.0});
    return out;
  }
  const auto& cg = std::get<CantorGapsFamily>(fam.rep());
  FamilyCover cover = cantor_cover(cg, fam, opts);
  for (const Interval& s : cover.solid)
    if (auto seg = s.intersect(bracket)) {
      ExtReal len = seg->length();
      if (!len.is_finite()) return {ExtReal::pos_inf(), 0.0};
      out = add(out, {len, 0.0});
    }
  if (cover.region) {
    if (auto seg = cover.region->intersect(bracket)) {
      Scalar len = finite_len(*seg);
      Approx lm = limit_measure_between(cg.spec, seg->lo().value(), seg->hi().value(), opts);
      if (cg.spec.limit_is_null()) {
        out = add(out, {ExtReal(len), 0.0});
      } else {
        out = add(out, {ExtReal(Scalar::approx(len.dbl() - lm.value)), lm.err});
      }
    }
  }
  return out;
}

// Mass of a per-member-uniform density over the bracket: `mass` per whole
// member plus length fractions of the (at most two) edge members.
Mass member_uniform_mass(const IntervalFamily& fam, const Scalar& mass, const Interval& bracket,
                         const Options& opts) {
  if (mass.sign() <= 0) throw ConfigError("per-member mass must be positive");
  Mass out;
  auto fraction = [&](const Interval& m) -> Scalar {
    auto seg = m.intersect(bracket);
    if (!seg) return Scalar(0);
    return mass * finite_len(*seg) / finite_len(m);
  };
  if (const auto* ex = std::get_if<ExplicitFamily>(&fam.rep())) {
    for (const Interval& m : ex->members)
      if (fam.keeps(m)) out = add(out, {ExtReal(fraction(m)), 0.0});
    return out;
  }
  if (const auto* ch = std::get_if<ChainFamily>(&fam.rep())) {
    std::optional<Interval> inner = bracket;
    if (fam.window()) {
      auto meet = fam.window()->intersect(bracket);
      if (!meet) return out;
      inner = *meet;
    }
    ChainRun run = chain_kept_run(*ch, inner);
    if (!run.empty && run.last < 0) return {ExtReal::pos_inf(), 0.0};
    long long whole = run.empty ? 0 : run.last - run.first + 1;
    out = add(out, {ExtReal(mass * Scalar(whole)), 0.0});
    // Edge members overlapping but not contained: locate via the endpoints.
    std::vector<Interval> edges;
    auto add_edge = [&](const std::optional<Interval>& m) {
      if (!m) return;
      if (!run.empty) {
        // Skip members already counted whole.
        for (long long i = run.first; i <= run.last; ++i)
          if (ch->member(i) == *m) return;
      }
      for (const Interval& e : edges)
        if (e == *m) return;
      edges.push_back(*m);
    };
    if (bracket.lo().is_finite()) add_edge(fam.member_containing(bracket.lo().value(), opts));
    if (bracket.hi().is_finite()) add_edge(fam.member_containing(bracket.hi().value(), opts));
    for (const Interval& e : edges) out = add(out, {ExtReal(fraction(e)), 0.0});
    return out;
  }
  const auto& cg = std::get<CantorGapsFamily>(fam.rep());
  if (cg.include_rays)
    throw ConfigError("per-member mass needs bounded members; this family includes rays");
  FamilyCover cover = cantor_cover(cg, fam, opts);
  if (!cover.region) return out;
  auto seg = cover.region->intersect(bracket);
  if (!seg) return out;
  Scalar a = seg->lo().value(), b = seg->hi().value();
  if (bracket_contains_node(cg.spec, a, b, opts)) return {ExtReal::pos_inf(), 0.0};
  // No whole construction interval inside: at most the gaps holding the two
  // endpoints meet the bracket.
  std::vector<GapRef> cand;
  for (const Scalar& x : {a, b}) {
    CantorLocation loc = locate_point(cg.spec, x, opts);
    if (loc.gap) {
      bool seen = false;
      for (const GapRef& g : cand) seen = seen || g == *loc.gap;
      if (!seen) cand.push_back(*loc.gap);
    }
  }
  for (const GapRef& g : cand) {
    Interval member = cantor_gap_member(CantorGapsFamily{cg.spec, cg.closed_members,
                                                         cg.include_rays},
                                        g);
    if (fam.keeps(member)) out = add(out, {ExtReal(fraction(member)), 0.0});
  }
  return out;
}

Mass density_piece_mass(const DensityPiece& piece, const Interval& bracket,
                        const Options& opts) {
  if (const auto* ivs = piece.support.intervals()) {
    Mass out;
    for (const Interval& iv : *ivs)
      if (auto seg = iv.interior().intersect(bracket)) {
        out = add(out, integrate_tag(piece.density, *seg));
        if (!out.val.is_finite()) return out;
      }
    return out;
  }
  const IntervalFamily& fam = *piece.support.family();
  if (const auto* c = std::get_if<density::Constant>(&piece.density)) {
    if (c->c.sign() <= 0) throw ConfigError("density coefficient must be positive");
    Mass leb = family_lebesgue(fam, bracket, opts);
    if (!leb.val.is_finite()) return leb;
    return {ExtReal(c->c * leb.val.value()), c->c.dbl() * leb.err};
  }
  if (const auto* m = std::get_if<density::MemberUniform>(&piece.density))
    return member_uniform_mass(fam, m->mass, bracket, opts);
  throw ConfigError("density " + tag_str(piece.density) + " is not supported on a family");
}

Mass cantor_piece_mass(const CantorPiece& piece, const Interval& bracket, const Options& opts) {
  if (piece.mass.sign() <= 0) throw ConfigError("staircase mass must be positive");
  Interval window = piece.clip ? *piece.clip : piece.spec.base_interval();
  auto seg0 = window.intersect(bracket);
  if (!seg0) return {};
  auto seg = seg0->intersect(piece.spec.base_interval());
  if (!seg) return {};
  StairValue fu = staircase_cdf(piece.spec, seg->lo().value(), opts);
  StairValue fv = staircase_cdf(piece.spec, seg->hi().value(), opts);
  Scalar diff = fv.value - fu.value;
  double err = (fu.err + fv.err) * piece.mass.dbl();
  if (fu.exact && fv.exact) return {ExtReal(piece.mass * diff), 0.0};
  return {ExtReal(Scalar::approx((piece.mass * diff).dbl())), err};
}

Mass piece_mass(const Piece& piece, const Interval& bracket, const Options& opts) {
  if (const auto* d = std::get_if<DensityPiece>(&piece))
    return density_piece_mass(*d, bracket, opts);
  return cantor_piece_mass(std::get<CantorPiece>(piece), bracket, opts);
}

Mass total_mass(const ScaleMeasure& mu, const Interval& bracket, const Options& opts) {
  Mass out;
  for (const Piece& p : mu.pieces) {
    out = add(out, piece_mass(p, bracket, opts));
    if (!out.val.is_finite()) return out;
  }
  return out;
}

}  // namespace

// ---- ScaleMeasure --------------------------------------------------------

ScaleMeasure ScaleMeasure::lebesgue(Interval on) {
  return {{DensityPiece{OpenSupport(std::move(on)), density::Constant{Scalar(1)}}}};
}

ScaleMeasure ScaleMeasure::operator+(const ScaleMeasure& other) const {
  ScaleMeasure out = *this;
  out.pieces.insert(out.pieces.end(), other.pieces.begin(), other.pieces.end());
  return out;
}

std::string ScaleMeasure::str() const {
  if (pieces.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i) out += " + ";
    if (const auto* d = std::get_if<DensityPiece>(&pieces[i]))
      out += tag_str(d->density) + " on " + d->support.str();
    else {
      const auto& c = std::get<CantorPiece>(pieces[i]);
      out += "staircase mass " + c.mass.str() + " of " + c.spec.str();
      if (c.clip) out += " on " + c.clip->str();
    }
  }
  return out;
}

ExtReal measure_of(const ScaleMeasure& mu, const Interval& bracket, const Options& opts) {
  return total_mass(mu, bracket, opts).val;
}

ExtReal measure_of_tol(const ScaleMeasure& mu, const Interval& bracket, double tol,
                       const Options& opts) {
  Options local = opts;
  for (;;) {
    Mass m = total_mass(mu, bracket, local);
    if (!m.val.is_finite() || m.err <= tol) return m.val;
    if (local.cantor_depth >= 4 * opts.cantor_depth)
      throw ApproximationDepthExceeded("staircase error " + double_str(m.err) +
                                       " above tolerance " + double_str(tol));
    local.cantor_depth *= 2;
  }
}

ScaleMeasure restrict_measure(const ScaleMeasure& mu, const Interval& bracket,
                              const Options& opts) {
  (void)opts;
  ScaleMeasure out;
  for (const Piece& p : mu.pieces) {
    if (const auto* d = std::get_if<DensityPiece>(&p)) {
      if (auto s = d->support.clip(bracket)) out.pieces.push_back(DensityPiece{*s, d->density});
      continue;
    }
    const auto& c = std::get<CantorPiece>(p);
    Interval window = c.clip ? *c.clip : c.spec.base_interval();
    auto seg = window.intersect(bracket);
    if (!seg) continue;
    auto inside = seg->intersect(c.spec.base_interval());
    if (!inside) continue;
    out.pieces.push_back(CantorPiece{c.spec, c.mass, *inside});
  }
  return out;
}

namespace {

// Tags whose value reads off the position alone (no member-relative data):
// mass on a family with a Lebesgue-null trap set then equals mass spread over
// the plain cover intervals.
bool positional_tag(const DensityTag& t) {
  return !(std::holds_alternative<density::MemberUniform>(t) ||
           std::holds_alternative<density::MemberLength>(t));
}

bool family_trap_null(const IntervalFamily& F) {
  if (std::holds_alternative<ExplicitFamily>(F.rep())) return true;  // flatten is exact
  if (std::holds_alternative<ChainFamily>(F.rep())) return true;     // countable breakpoints
  return std::get<CantorGapsFamily>(F.rep()).spec.limit_is_null();
}

}  // namespace

ScaleMeasure canonical_measure(const ScaleMeasure& mu, const Options& opts) {
  std::vector<DensityPiece> plains;  // single open interval each
  ScaleMeasure out;
  auto push_plain = [&plains](const Interval& iv, const DensityTag& tag) {
    Interval o = iv.interior();
    if (!(o.lo() < o.hi())) return;
    plains.push_back(DensityPiece{OpenSupport(o), tag});
  };
  for (const Piece& p : mu.pieces) {
    if (const auto* d = std::get_if<DensityPiece>(&p)) {
      DensityTag tag = canonical_tag(d->density);
      if (const auto* ivs = d->support.intervals()) {
        for (const Interval& iv : *ivs) push_plain(iv, tag);
      } else if (const IntervalFamily& F = *d->support.family();
                 positional_tag(tag) && family_trap_null(F)) {
        for (const Interval& br : family_cover_brackets(F, opts).brackets) push_plain(br, tag);
      } else {
        out.pieces.push_back(DensityPiece{d->support, tag});
      }
      continue;
    }
    const auto& c = std::get<CantorPiece>(p);
    std::optional<Interval> clip = c.clip;
    if (clip) {
      auto inside = clip->intersect(c.spec.base_interval());
      if (!inside) continue;
      // A clip covering the whole base is no restriction at all.
      if (c.spec.base_interval().is_subset_of(*inside))
        clip = std::nullopt;
      else
        clip = *inside;
    }
    out.pieces.push_back(CantorPiece{c.spec, c.mass, clip});
  }
  std::sort(plains.begin(), plains.end(), [](const DensityPiece& a, const DensityPiece& b) {
    const Interval& ia = a.support.intervals()->front();
    const Interval& ib = b.support.intervals()->front();
    if (ia.lo() < ib.lo()) return true;
    if (ib.lo() < ia.lo()) return false;
    if (ia.hi() < ib.hi()) return true;
    if (ib.hi() < ia.hi()) return false;
    return tag_str(a.density) < tag_str(b.density);
  });
  // Fuse pieces meeting at one point; every piece kind is nonatomic, so the
  // fused interval carries the same measure.
  for (std::size_t i = 0; i < plains.size(); ++i) {
    Interval cur = plains[i].support.intervals()->front();
    const DensityTag& tag = plains[i].density;
    while (i + 1 < plains.size() && plains[i + 1].density == tag) {
      const Interval& nxt = plains[i + 1].support.intervals()->front();
      if (!(cur.hi().is_finite() && nxt.lo().is_finite() &&
            cur.hi().value() == nxt.lo().value()))
        break;
      cur = Interval::open(cur.lo(), nxt.hi());
      ++i;
    }
    out.pieces.push_back(DensityPiece{OpenSupport(cur), tag});
  }
  std::sort(out.pieces.begin(), out.pieces.end(), [](const Piece& a, const Piece& b) {
    ScaleMeasure wa{{a}}, wb{{b}};
    return wa.str() < wb.str();
  });
  return out;
}

bool piece_identical(const ScaleMeasure& a, const ScaleMeasure& b, const Options& opts) {
  return canonical_measure(a, opts) == canonical_measure(b, opts);
}

std::vector<SetUnit> support_units(const ScaleMeasure& mu) {
  std::vector<SetUnit> out;
  for (const Piece& p : mu.pieces)
    if (const auto* d = std::get_if<DensityPiece>(&p)) {
      auto us = d->support.units();
      out.insert(out.end(), us.begin(), us.end());
    }
  return out;
}

namespace {

bool zero_coef(const DensityTag& t) {
  return std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, density::Constant>) return d.c.sign() == 0;
        else if constexpr (std::is_same_v<T, density::PowerLaw>) return d.coef.sign() == 0;
        else if constexpr (std::is_same_v<T, density::Reciprocal>) return false;
        else if constexpr (std::is_same_v<T, density::RationalTaper>) return d.c.sign() == 0;
        else if constexpr (std::is_same_v<T, density::MemberUniform>) return d.mass.sign() == 0;
        else return d.coef.sign() == 0;
      },
      t);
}

// Accumulation points of a per-member-mass family that sit strictly inside
// the region make interior brackets carry infinite mass.
std::optional<std::string> member_mass_violation(const IntervalFamily& F, const Interval& J) {
  if (const auto* ex = std::get_if<ExplicitFamily>(&F.rep())) {
    for (const auto& m : ex->members)
      if (F.keeps(m) && !m.is_bounded())
        return "per-member mass on an unbounded member";
    return std::nullopt;
  }
  Interval inside = J.interior();
  if (const auto* ch = std::get_if<ChainFamily>(&F.rep())) {
    if (ch->count >= 0) return std::nullopt;
    if (inside.contains(ch->limit))
      return "per-member mass accumulates inside the state interval";
    return std::nullopt;
  }
  const auto& cg = std::get<CantorGapsFamily>(F.rep());
  if (cg.include_rays) return "per-member mass on an unbounded member";
  Interval base = Interval::open(ExtReal(cg.spec.lo), ExtReal(cg.spec.hi));
  if (base.meets(inside))
    return "per-member mass accumulates inside the state interval";
  return std::nullopt;
}

void collect_coords(const ScaleMeasure& mu, std::vector<Scalar>& coords) {
  auto push = [&](const ExtReal& x) {
    if (x.is_finite()) coords.push_back(x.value());
  };
  for (const auto& piece : mu.pieces) {
    if (const auto* dp = std::get_if<DensityPiece>(&piece)) {
      if (const auto* ivs = dp->support.intervals()) {
        for (const auto& iv : *ivs) {
          push(iv.lo());
          push(iv.hi());
        }
      } else {
        Interval h = dp->support.family()->hull();
        push(h.lo());
        push(h.hi());
      }
    } else {
      const auto& cp = std::get<CantorPiece>(piece);
      coords.push_back(cp.spec.lo);
      coords.push_back(cp.spec.hi);
    }
  }
}

}  // namespace

std::optional<std::string> radon_violation(const ScaleMeasure& mu, const Interval& region) {
  for (const auto& piece : mu.pieces) {
    const auto* dp = std::get_if<DensityPiece>(&piece);
    if (!dp) continue;  // staircase pieces are finite
    DensityTag t = canonical_tag(dp->density);
    if (std::holds_alternative<density::MemberLength>(t))
      return "member-length tags only arise as ratios";
    if (const auto* pw = std::get_if<density::PowerLaw>(&t)) {
      if (pw->coef.sign() < 0) return "signed densities are not supported";
      if (!(pw->p > Scalar(-1)) && dp->support.hull().lo() == ExtReal(Scalar(0)) &&
          region.interior().contains(Scalar(0)))
        return "power density diverges inside the state interval";
      continue;
    }
    if (const auto* mu_t = std::get_if<density::MemberUniform>(&t)) {
      if (mu_t->mass.sign() < 0) return "signed densities are not supported";
      const auto* F = dp->support.family();
      if (!F) return "per-member mass needs a family support";
      if (auto v = member_mass_violation(*F, region)) return v;
      continue;
    }
    if (const auto* c = std::get_if<density::Constant>(&t)) {
      if (c->c.sign() < 0) return "signed densities are not supported";
    } else if (const auto* rt = std::get_if<density::RationalTaper>(&t)) {
      if (rt->c.sign() < 0) return "signed densities are not supported";
    }
  }
  return std::nullopt;
}

std::vector<Interval> charged_intervals(const ScaleMeasure& mu, const Options& opts) {
  std::vector<Interval> out;
  for (const auto& piece : mu.pieces) {
    const auto* dp = std::get_if<DensityPiece>(&piece);
    if (!dp) continue;  // a staircase alone is flat on every gap
    if (zero_coef(dp->density)) continue;
    if (const auto* ivs = dp->support.intervals()) {
      for (const auto& iv : *ivs) out.push_back(iv.interior());
      continue;
    }
    const IntervalFamily& F = *dp->support.family();
    if (const auto* ex = std::get_if<ExplicitFamily>(&F.rep())) {
      for (const auto& m : ex->members)
        if (F.keeps(m)) out.push_back(m.interior());
    } else if (const auto* ch = std::get_if<ChainFamily>(&F.rep())) {
      if (auto span = chain_kept_span(*ch, F.window())) out.push_back(*span);
    } else {
      const auto& cg = std::get<CantorGapsFamily>(F.rep());
      FamilyCover cv = cantor_cover(cg, F, opts);
      for (const auto& s : cv.solid) out.push_back(s.interior());
      if (cv.region) out.push_back(*cv.region);
    }
  }
  return out;
}

std::optional<Scalar> coverage_gap(const ScaleMeasure& mu, const Interval& window,
                                   const Options& opts) {
  std::vector<Interval> charged = charged_intervals(mu, opts);
  if (charged.empty()) return window.anchor();
  std::vector<Scalar> coords;
  collect_coords(mu, coords);
  if (coords.empty()) coords.push_back(Scalar(0));  // only full-line supports present
  ExtReal lo = window.lo().is_finite()
                   ? window.lo()
                   : ExtReal(*std::min_element(coords.begin(), coords.end()) - Scalar(2));
  ExtReal hi = window.hi().is_finite()
                   ? window.hi()
                   : ExtReal(*std::max_element(coords.begin(), coords.end()) + Scalar(2));
  std::sort(charged.begin(), charged.end(),
            [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
  ExtReal cursor = lo;
  for (const auto& c : charged) {
    if (cursor < c.lo() && cursor < hi) {
      ExtReal stop = c.lo() < hi ? c.lo() : hi;
      if (cursor < stop) return default_anchor(cursor, stop);
    }
    if (c.hi() > cursor) cursor = c.hi();
    if (!(cursor < hi)) break;
  }
  if (cursor < hi) return default_anchor(cursor, hi);
  return std::nullopt;
}

}  // namespace effint
