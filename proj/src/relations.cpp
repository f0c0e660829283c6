#include "effint/relations.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "effint/setops.hpp"

namespace effint {

const char* rn_kind_name(RnKind k) {
  switch (k) {
    case RnKind::ZeroOne: return "zero-one";
    case RnKind::ACGeneral: return "absolutely-continuous";
    case RnKind::Singular: return "singular";
    case RnKind::Mixed: return "mixed";
    case RnKind::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

Scalar coef_of(const DensityTag& t) {
  return std::visit(
      [](const auto& d) -> Scalar {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, density::Constant>) return d.c;
        else if constexpr (std::is_same_v<T, density::PowerLaw>) return d.coef;
        else if constexpr (std::is_same_v<T, density::Reciprocal>) return Scalar(1);
        else if constexpr (std::is_same_v<T, density::RationalTaper>) return d.c;
        else if constexpr (std::is_same_v<T, density::MemberUniform>) return d.mass;
        else return d.coef;  // MemberLength
      },
      t);
}

// Multiplies the leading coefficient by a positive factor.
DensityTag tag_scale(const DensityTag& t0, const Scalar& f) {
  DensityTag t = canonical_tag(t0);
  return std::visit(
      [&](auto d) -> DensityTag {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, density::Constant>) d.c = d.c * f;
        else if constexpr (std::is_same_v<T, density::PowerLaw>) d.coef = d.coef * f;
        else if constexpr (std::is_same_v<T, density::RationalTaper>) d.c = d.c * f;
        else if constexpr (std::is_same_v<T, density::MemberUniform>) d.mass = d.mass * f;
        else if constexpr (std::is_same_v<T, density::MemberLength>) d.coef = d.coef * f;
        return DensityTag(d);
      },
      t);
}

bool is_plain(const DensityTag& t) {
  return !std::holds_alternative<density::MemberUniform>(t) &&
         !std::holds_alternative<density::MemberLength>(t);
}

// Pointwise quotient of two densities-with-respect-to-length, when the
// quotient stays inside the tag vocabulary.
std::optional<DensityTag> plain_ratio(const DensityTag& n0, const DensityTag& m0) {
  DensityTag n = canonical_tag(n0);
  DensityTag m = canonical_tag(m0);
  if (!is_plain(n) || !is_plain(m)) return std::nullopt;
  if (const auto* mc = std::get_if<density::Constant>(&m))
    return tag_scale(n, Scalar(1) / mc->c);
  if (const auto* mp = std::get_if<density::PowerLaw>(&m)) {
    if (const auto* nc = std::get_if<density::Constant>(&n))
      return DensityTag(density::PowerLaw{nc->c / mp->coef, -mp->p});
    if (const auto* np = std::get_if<density::PowerLaw>(&n)) {
      Scalar p = np->p - mp->p;
      Scalar c = np->coef / mp->coef;
      if (p == Scalar(0)) return DensityTag(density::Constant{c});
      return DensityTag(density::PowerLaw{c, p});
    }
    return std::nullopt;
  }
  if (const auto* mt = std::get_if<density::RationalTaper>(&m)) {
    if (const auto* nt = std::get_if<density::RationalTaper>(&n))
      if (nt->center == mt->center)
        return DensityTag(density::Constant{nt->c / mt->c});
    return std::nullopt;
  }
  return std::nullopt;
}

ExtReal ext_max(const ExtReal& a, const ExtReal& b) { return a >= b ? a : b; }

// Open-set complement of the cuts inside base. Flags positive-length
// overlap between cuts (ambiguous domination).
std::vector<Interval> interval_minus(const Interval& base, std::vector<Interval> cuts,
                                     bool* overlap) {
  std::vector<Interval> out;
  std::vector<Interval> clipped;
  for (const auto& c : cuts)
    if (auto o = c.intersect(base)) clipped.push_back(*o);
  std::sort(clipped.begin(), clipped.end(),
            [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
  ExtReal cursor = base.lo();
  for (const auto& c : clipped) {
    if (c.lo() < cursor && cursor > base.lo()) *overlap = true;
    if (cursor < c.lo()) out.push_back(Interval::open(cursor, c.lo()));
    cursor = ext_max(cursor, c.hi());
  }
  if (cursor < base.hi()) out.push_back(Interval::open(cursor, base.hi()));
  return out;
}

struct Acc {
  std::vector<RatioPiece> ratio;
  std::vector<Piece> matched;
  std::vector<Piece> singular;
  std::string note;
  bool unknown = false;
  void fail(std::string why) {
    if (!unknown) {
      unknown = true;
      note = std::move(why);
    }
  }
  void match(OpenSupport sup, DensityTag r, Piece base, Piece nu_part) {
    ratio.push_back(RatioPiece{sup, std::move(r), std::move(base)});
    matched.push_back(std::move(nu_part));
  }
};

struct FamCover {
  std::vector<Interval> covered;  // open pieces of I covered up to a null set
  bool fat = false;               // a thick uncovered residual meets I
};

FamCover family_coverage(const IntervalFamily& F, const Interval& I, const Options& opts) {
  FamCover out;
  if (const auto* ex = std::get_if<ExplicitFamily>(&F.rep())) {
    for (const auto& m : ex->members)
      if (F.keeps(m))
        if (auto o = m.interior().intersect(I)) out.covered.push_back(*o);
    return out;
  }
  if (const auto* ch = std::get_if<ChainFamily>(&F.rep())) {
    if (auto span = chain_kept_span(*ch, F.window()))
      if (auto o = span->intersect(I)) out.covered.push_back(*o);
    return out;
  }
  const auto& cg = std::get<CantorGapsFamily>(F.rep());
  FamilyCover cv = cantor_cover(cg, F, opts);
  for (const auto& s : cv.solid)
    if (auto o = s.interior().intersect(I)) out.covered.push_back(*o);
  if (cv.region)
    if (auto o = cv.region->intersect(I)) {
      if (cg.spec.limit_is_null()) out.covered.push_back(*o);
      else out.fat = true;
    }
  return out;
}

bool family_nonempty(const IntervalFamily& F, const Options& opts) {
  return !F.prefix(1, opts).empty();
}

// A member of F strictly straddling the point x, if any.
std::optional<Interval> straddling_member(const IntervalFamily& F, const ExtReal& x,
                                          const Options& opts) {
  if (!x.is_finite()) return std::nullopt;
  auto m = F.member_containing(x.value(), opts);
  if (!m) return std::nullopt;
  if (m->lo() < ExtReal(x.value()) && ExtReal(x.value()) < m->hi()) return m;
  return std::nullopt;
}

// --- plain nu piece (one open interval, plain tag) against all of mu ------

void match_plain(const Interval& I, const DensityTag& n_t, const ScaleMeasure& mu, Acc& acc,
                 const Options& opts) {
  std::vector<Interval> covered;
  for (const auto& piece : mu.pieces) {
    if (acc.unknown) return;
    const auto* mp = std::get_if<DensityPiece>(&piece);
    if (!mp) continue;  // a staircase never dominates a density
    DensityTag m_t = canonical_tag(mp->density);
    if (coef_of(m_t).sign() == 0) continue;
    if (const auto* ivs = mp->support.intervals()) {
      for (const auto& J : *ivs) {
        auto O = J.interior().intersect(I);
        if (!O) continue;
        auto r = plain_ratio(n_t, m_t);
        if (!r) {
          acc.fail("density ratio not representable on " + O->str());
          return;
        }
        acc.match(OpenSupport(*O), *r, DensityPiece{OpenSupport(*O), m_t},
                  DensityPiece{OpenSupport(*O), n_t});
        covered.push_back(*O);
      }
      continue;
    }
    const IntervalFamily& F = *mp->support.family();
    FamCover fc = family_coverage(F, I, opts);
    if (const auto* mu_tag = std::get_if<density::MemberUniform>(&m_t)) {
      if (fc.fat) {
        acc.fail("thick construction residual under " + I.str());
        return;
      }
      // Members clipped at the ends of I carry a single constant ratio each.
      std::vector<Interval> edge;
      for (const ExtReal& x : {I.lo(), I.hi()}) {
        auto M = straddling_member(F, x, opts);
        if (!M) continue;
        if (!edge.empty() && edge.back() == *M) continue;
        edge.push_back(*M);
        if (!M->is_bounded()) {
          acc.fail("per-member mass on an unbounded member");
          return;
        }
        auto O = M->interior().intersect(I);
        if (!O) continue;
        Scalar L = M->length().value();
        acc.match(OpenSupport(*O), tag_scale(n_t, L / mu_tag->mass),
                  DensityPiece{OpenSupport(*O), density::Constant{mu_tag->mass / L}},
                  DensityPiece{OpenSupport(*O), n_t});
      }
      auto inner = mp->support.clip(I);
      if (inner && family_nonempty(*inner->family(), opts)) {
        const auto* nc = std::get_if<density::Constant>(&n_t);
        if (!nc) {
          acc.fail("varying density over a per-member base");
          return;
        }
        acc.match(*inner, density::MemberLength{nc->c / mu_tag->mass, 1},
                  DensityPiece{*inner, *mu_tag}, DensityPiece{*inner, n_t});
      }
      for (const auto& O : fc.covered) covered.push_back(O);
      continue;
    }
    if (fc.fat) {
      acc.fail("thick construction residual under " + I.str());
      return;
    }
    for (const auto& O : fc.covered) {
      auto r = plain_ratio(n_t, m_t);
      if (!r) {
        acc.fail("density ratio not representable on " + O.str());
        return;
      }
      acc.match(OpenSupport(O), *r, DensityPiece{OpenSupport(O), m_t},
                DensityPiece{OpenSupport(O), n_t});
      covered.push_back(O);
    }
  }
  bool overlap = false;
  std::vector<Interval> rest = interval_minus(I, covered, &overlap);
  if (overlap) {
    acc.fail("dominating pieces overlap inside " + I.str());
    return;
  }
  for (const auto& R : rest) acc.singular.push_back(DensityPiece{OpenSupport(R), n_t});
}

// --- family nu piece against all of mu -------------------------------------

struct FamTask {
  IntervalFamily F;
  DensityTag t;
  int depth = 0;
};

// Translate a whole member of a family piece into a standalone-interval
// piece with the equivalent plain density.
std::optional<DensityTag> member_tag(const DensityTag& t, const Interval& M) {
  if (const auto* u = std::get_if<density::MemberUniform>(&t)) {
    if (!M.is_bounded()) return std::nullopt;
    return DensityTag(density::Constant{u->mass / M.length().value()});
  }
  if (is_plain(t)) return t;
  return std::nullopt;
}

Interval effective_window(const IntervalFamily& F) {
  return F.window() ? *F.window() : F.hull();
}

std::optional<DensityTag> family_tag_ratio(const DensityTag& n0, const DensityTag& m0) {
  DensityTag n = canonical_tag(n0);
  DensityTag m = canonical_tag(m0);
  const auto* nu_u = std::get_if<density::MemberUniform>(&n);
  const auto* mu_u = std::get_if<density::MemberUniform>(&m);
  if (nu_u && mu_u) return DensityTag(density::Constant{nu_u->mass / mu_u->mass});
  if (nu_u) {
    if (const auto* mc = std::get_if<density::Constant>(&m))
      return DensityTag(density::MemberLength{nu_u->mass / mc->c, -1});
    return std::nullopt;
  }
  if (mu_u) {
    if (const auto* nc = std::get_if<density::Constant>(&n))
      return DensityTag(density::MemberLength{nc->c / mu_u->mass, 1});
    return std::nullopt;
  }
  return plain_ratio(n, m);
}

void push_family_clip(const IntervalFamily& F, const DensityTag& t, const Interval& w,
                      int depth, std::vector<FamTask>& famq, const Options& opts) {
  auto part = OpenSupport(F).clip(w);
  if (!part) return;
  if (!family_nonempty(*part->family(), opts)) return;
  famq.push_back(FamTask{*part->family(), t, depth + 1});
}

void match_family(const FamTask& task, const ScaleMeasure& mu, Acc& acc,
                  std::vector<FamTask>& famq,
                  std::vector<std::pair<Interval, DensityTag>>& plainq, const Options& opts) {
  if (task.depth > 64) {
    acc.fail("family splitting did not settle");
    return;
  }
  const IntervalFamily& F = task.F;
  Interval wn = effective_window(F);
  for (const auto& piece : mu.pieces) {
    if (acc.unknown) return;
    const auto* mp = std::get_if<DensityPiece>(&piece);
    if (!mp) continue;
    DensityTag m_t = canonical_tag(mp->density);
    if (coef_of(m_t).sign() == 0) continue;
    if (const auto* F_mu = mp->support.family()) {
      if (F.rep() == F_mu->rep()) {
        Interval wm = effective_window(*F_mu);
        if (wn.is_subset_of(wm)) {
          auto r = family_tag_ratio(task.t, m_t);
          if (!r) {
            acc.fail("family density ratio not representable");
            return;
          }
          OpenSupport sup(F);
          acc.match(sup, *r, DensityPiece{sup, m_t}, DensityPiece{sup, task.t});
          return;  // consumed
        }
        auto core = wn.intersect(wm);
        if (!core) continue;  // no shared members
        // Split: members inside the shared window rejoin the queue and are
        // fully matched next round; clipped edge members become standalone
        // pieces; the rest continues on the far sides.
        for (const ExtReal& x : {core->lo(), core->hi()}) {
          auto M = straddling_member(F, x, opts);
          if (!M) continue;
          auto mt = member_tag(task.t, *M);
          if (!mt) {
            acc.fail("edge member has no standalone density");
            return;
          }
          plainq.emplace_back(M->interior(), *mt);
        }
        push_family_clip(F, task.t, *core, task.depth, famq, opts);
        if (wn.lo() < core->lo())
          push_family_clip(F, task.t, Interval::open(wn.lo(), core->lo()), task.depth, famq,
                           opts);
        if (core->hi() < wn.hi())
          push_family_clip(F, task.t, Interval::open(core->hi(), wn.hi()), task.depth, famq,
                           opts);
        return;  // consumed
      }
      std::vector<SetUnit> pair{SetUnit(F), SetUnit(*F_mu)};
      Tri dj = units_disjoint(pair, opts);
      if (dj == Tri::True) continue;
      acc.fail("distinct generated families overlap");
      return;
    }
    const auto& ivs = *mp->support.intervals();
    for (const auto& J0 : ivs) {
      Interval J = J0.interior();
      if (wn.is_subset_of(J)) {
        auto r = family_tag_ratio(task.t, m_t);
        if (!r) {
          acc.fail("family density ratio not representable");
          return;
        }
        OpenSupport sup(F);
        acc.match(sup, *r, DensityPiece{sup, m_t}, DensityPiece{sup, task.t});
        return;  // consumed
      }
      auto core = wn.intersect(J);
      if (!core) continue;
      for (const ExtReal& x : {core->lo(), core->hi()}) {
        auto M = straddling_member(F, x, opts);
        if (!M) continue;
        auto mt = member_tag(task.t, *M);
        if (!mt) {
          acc.fail("edge member has no standalone density");
          return;
        }
        plainq.emplace_back(M->interior(), *mt);
      }
      push_family_clip(F, task.t, *core, task.depth, famq, opts);
      if (wn.lo() < core->lo())
        push_family_clip(F, task.t, Interval::open(wn.lo(), core->lo()), task.depth, famq,
                         opts);
      if (core->hi() < wn.hi())
        push_family_clip(F, task.t, Interval::open(core->hi(), wn.hi()), task.depth, famq,
                         opts);
      return;  // consumed
    }
  }
  // Nothing in mu meets this family part.
  acc.singular.push_back(DensityPiece{OpenSupport(F), task.t});
}

// --- staircase nu piece -----------------------------------------------------

struct StairMass {
  Scalar v;
  bool exact = true;
};

Interval base_interval(const CantorSpec& spec) {
  return Interval::closed(spec.lo, spec.hi);
}

std::optional<Interval> stair_window(const CantorPiece& cp) {
  Interval base = base_interval(cp.spec);
  if (!cp.clip) return base;
  return cp.clip->intersect(base);
}

StairMass stair_mass(const CantorSpec& spec, const Scalar& mass, const Interval& w,
                     const Options& opts) {
  Scalar u = Scalar::max(w.lo().value(), spec.lo);
  Scalar v = Scalar::min(w.hi().value(), spec.hi);
  if (!(u < v)) return {Scalar(0), true};
  StairValue fu = staircase_cdf(spec, u, opts);
  StairValue fv = staircase_cdf(spec, v, opts);
  return {(fv.value - fu.value) * mass, fu.exact && fv.exact};
}

void match_stair(const CantorPiece& cp, const ScaleMeasure& mu, Acc& acc, const Options& opts) {
  auto W = stair_window(cp);
  if (!W) return;  // clipped away entirely
  if (cp.mass.sign() == 0) return;
  bool thin = cp.spec.limit_is_null();

  auto obstacle_free = [&](const Interval& S) -> bool {
    for (const auto& piece : mu.pieces) {
      if (const auto* dp = std::get_if<DensityPiece>(&piece)) {
        if (thin) continue;
        if (coef_of(dp->density).sign() == 0) continue;
        if (dp->support.hull().meets(S)) {
          acc.fail("thick staircase against a density base");
          return false;
        }
        continue;
      }
      const auto& other = std::get<CantorPiece>(piece);
      if (other.spec == cp.spec) continue;
      auto ow = stair_window(other);
      if (!ow) continue;
      if (ow->meets(S)) {
        acc.fail("staircase pieces on different constructions overlap");
        return false;
      }
    }
    return true;
  };

  const CantorPiece* mate = nullptr;
  for (const auto& piece : mu.pieces) {
    const auto* mc = std::get_if<CantorPiece>(&piece);
    if (!mc || !(mc->spec == cp.spec) || mc->mass.sign() == 0) continue;
    if (mate) {
      acc.fail("several staircase pieces share one construction");
      return;
    }
    mate = mc;
  }
  if (!mate) {
    if (!obstacle_free(*W)) return;
    acc.singular.push_back(CantorPiece{cp.spec, cp.mass, *W});
    return;
  }
  auto WM = stair_window(*mate);
  std::optional<Interval> O = WM ? W->intersect(*WM) : std::nullopt;
  StairMass total = stair_mass(cp.spec, cp.mass, *W, opts);
  StairMass inside = O ? stair_mass(cp.spec, cp.mass, *O, opts) : StairMass{Scalar(0), true};
  if (!total.exact || !inside.exact) {
    acc.fail("staircase window mass not exactly computable");
    return;
  }
  if (inside.v.sign() > 0) {
    acc.match(OpenSupport(*O), density::Constant{cp.mass / mate->mass},
              CantorPiece{cp.spec, mate->mass, *O}, CantorPiece{cp.spec, cp.mass, *O});
  }
  if (inside.v == total.v) return;
  // Mass escapes the mate's window: classify the leftover windows.
  std::vector<Interval> leftovers;
  if (!O) {
    leftovers.push_back(*W);
  } else {
    if (W->lo() < O->lo()) leftovers.push_back(Interval::make(W->lo(), true, O->lo(), true));
    if (O->hi() < W->hi()) leftovers.push_back(Interval::make(O->hi(), true, W->hi(), true));
  }
  for (const auto& S : leftovers) {
    StairMass sm = stair_mass(cp.spec, cp.mass, S, opts);
    if (!sm.exact) {
      acc.fail("staircase window mass not exactly computable");
      return;
    }
    if (sm.v.sign() == 0) continue;
    if (!obstacle_free(S)) return;
    acc.singular.push_back(CantorPiece{cp.spec, cp.mass, S});
  }
}

void check_nonnegative(const ScaleMeasure& m, const char* who) {
  for (const auto& piece : m.pieces) {
    if (const auto* dp = std::get_if<DensityPiece>(&piece)) {
      if (coef_of(dp->density).sign() < 0)
        throw ConfigError(std::string(who) + ": signed densities are not supported");
      if (std::holds_alternative<density::MemberLength>(dp->density))
        throw ConfigError(std::string(who) + ": member-length tags only arise as ratios");
    } else if (std::get<CantorPiece>(piece).mass.sign() < 0) {
      throw ConfigError(std::string(who) + ": signed staircase mass is not supported");
    }
  }
}

bool ratio_all_ones(const std::vector<RatioPiece>& ratio) {
  for (const auto& rp : ratio) {
    const auto* c = std::get_if<density::Constant>(&rp.ratio);
    if (!c || !(c->c == Scalar(1))) return false;
  }
  return true;
}

}  // namespace

RnResult rn_relation(const ScaleMeasure& nu, const ScaleMeasure& mu, const Options& opts) {
  check_nonnegative(nu, "numerator");
  check_nonnegative(mu, "base");
  Acc acc;
  std::vector<std::pair<Interval, DensityTag>> plainq;
  std::vector<FamTask> famq;
  for (const auto& piece : nu.pieces) {
    if (const auto* cp = std::get_if<CantorPiece>(&piece)) {
      match_stair(*cp, mu, acc, opts);
      if (acc.unknown) break;
      continue;
    }
    const auto& dp = std::get<DensityPiece>(piece);
    DensityTag t = canonical_tag(dp.density);
    if (coef_of(t).sign() == 0) continue;
    if (const auto* ivs = dp.support.intervals()) {
      for (const auto& I : *ivs) plainq.emplace_back(I.interior(), t);
    } else {
      famq.push_back(FamTask{*dp.support.family(), t, 0});
    }
  }
  while (!famq.empty() && !acc.unknown) {
    FamTask task = std::move(famq.back());
    famq.pop_back();
    match_family(task, mu, acc, famq, plainq, opts);
  }
  for (const auto& [I, t] : plainq) {
    if (acc.unknown) break;
    match_plain(I, t, mu, acc, opts);
  }
  RnResult out;
  out.ratio = std::move(acc.ratio);
  out.abs_part = ScaleMeasure{std::move(acc.matched)};
  out.singular = ScaleMeasure{std::move(acc.singular)};
  if (acc.unknown) {
    out.kind = RnKind::Unknown;
    out.note = std::move(acc.note);
    return out;
  }
  bool has_abs = !out.abs_part.pieces.empty();
  bool has_sing = !out.singular.pieces.empty();
  if (!has_sing)
    out.kind = ratio_all_ones(out.ratio) ? RnKind::ZeroOne : RnKind::ACGeneral;
  else if (!has_abs)
    out.kind = RnKind::Singular;
  else
    out.kind = RnKind::Mixed;
  return out;
}

Decomposition lebesgue_decompose(const ScaleMeasure& nu, const ScaleMeasure& mu,
                                 const Options& opts) {
  RnResult rel = rn_relation(nu, mu, opts);
  if (rel.kind == RnKind::Unknown) throw UndecidableDecomposition(rel.note);
  return Decomposition{std::move(rel.abs_part), std::move(rel.ratio), std::move(rel.singular)};
}

namespace {

struct SumAcc {
  ExtReal val{Scalar(0)};
  double err = 0.0;
  void add(const ExtReal& v, double e) {
    if (val.is_pos_inf() || v.is_pos_inf()) {
      val = ExtReal::pos_inf();
      return;
    }
    val = ExtReal(val.value() + v.value());
    err += e;
  }
};

// Integral over the bracket of sign(x-center)-symmetric quartic decay
// a / (1 + |x - center|)^4 dx; antiderivative has limits ±a/3.
ExtReal quartic_mass(const Scalar& a, const Scalar& center, const Interval& O) {
  auto anti = [&](const ExtReal& x) -> Scalar {
    Scalar third = Scalar::rat(1, 3);
    if (!x.is_finite()) return x.is_pos_inf() ? a * third : -(a * third);
    Scalar t = x.value() - center;
    if (t.sign() < 0) t = -t;
    Scalar w = (Scalar(1) + t).pow_int(-3);
    Scalar v = a * third * (Scalar(1) - w);
    return x.value() < center ? -v : v;
  };
  return ExtReal(anti(O.hi()) - anti(O.lo()));
}

enum class SumMode { Fraction, Length };  // weight by overlap share or raw overlap

// Sum over the members of F meeting the bracket of
//   len(member)^p * weight(member),
// weight being the covered fraction or the covered length. Exact for
// finitely many members; certified tail bounds otherwise.
struct PowerSum {
  ExtReal val{Scalar(0)};
  double err = 0.0;
};

void add_member_term(PowerSum& acc, const Interval& M, int p, SumMode mode,
                     const Interval& bracket) {
  auto O = M.interior().intersect(bracket);
  if (!O) return;
  if (!M.is_bounded()) {
    // Degenerate: an unbounded member under a length-power weight.
    if (p >= 1) acc.val = ExtReal::pos_inf();
    else if (p == 0 && mode == SumMode::Length && !O->is_bounded())
      acc.val = ExtReal::pos_inf();
    return;
  }
  if (acc.val.is_pos_inf()) return;
  Scalar L = M.length().value();
  Scalar w = O->is_bounded() ? O->length().value() : L;
  if (mode == SumMode::Fraction) w = w / L;
  acc.val = ExtReal(acc.val.value() + L.pow_int(p) * w);
}

PowerSum member_power_sum(const IntervalFamily& F, int p, SumMode mode, const Interval& bracket,
                          const Options& opts) {
  PowerSum acc;
  if (const auto* ex = std::get_if<ExplicitFamily>(&F.rep())) {
    for (const auto& m : ex->members)
      if (F.keeps(m)) add_member_term(acc, m, p, mode, bracket);
    return acc;
  }
  if (const auto* ch = std::get_if<ChainFamily>(&F.rep())) {
    std::optional<Interval> inner = F.window() ? F.window()->intersect(bracket)
                                               : std::optional<Interval>(bracket);
    if (!inner) return acc;
    ChainRun run = chain_kept_run(*ch, inner);
    std::vector<Interval> edges;
    for (const ExtReal& x : {bracket.lo(), bracket.hi()}) {
      std::optional<Interval> M;
      if (x.is_finite()) M = F.member_containing(x.value(), opts);
      if (M && (edges.empty() || !(edges.back() == *M))) edges.push_back(*M);
    }
    auto is_edge = [&](const Interval& m) {
      for (const auto& e : edges)
        if (e == m) return true;
      return false;
    };
    if (!run.empty && run.last < 0) {
      // Unbounded run toward the accumulation point. Terms are summed in
      // floating point; the certified tail bound dominates the rounding.
      int q = (mode == SumMode::Fraction) ? p : p + 1;
      if (q <= 0) {
        acc.val = ExtReal::pos_inf();
        return acc;
      }
      double tol = opts.quad_tol;
      long long j = run.first;
      const long long cap = 4000000;
      double tail = 0.0;
      double sum = 0.0;
      bool certified = false;
      while (j - run.first < cap) {
        Interval m = ch->member(j);
        if (!is_edge(m)) {
          if (auto O = m.interior().intersect(bracket)) {
            double L = m.length().value().dbl();
            double w = O->length().value().dbl();
            if (mode == SumMode::Fraction) w /= L;
            sum += std::pow(L, p) * w;
          }
        }
        Scalar T = ch->breakpoint(j + 1) - ch->limit;
        if (T.sign() < 0) T = -T;
        tail = T.pow_int(q).dbl();
        ++j;
        if (tail <= tol) {
          certified = true;
          break;
        }
      }
      if (!certified) throw TailBoundUnavailable("member series tail not certified");
      if (!acc.val.is_pos_inf()) acc.val = ExtReal(acc.val.value() + Scalar::approx(sum));
      acc.err += tail + 1e-15 * static_cast<double>(j - run.first) * std::abs(sum);
    } else if (!run.empty) {
      for (long long j = run.first; j <= run.last; ++j) {
        Interval m = ch->member(j);
        if (!is_edge(m)) add_member_term(acc, m, p, mode, bracket);
      }
    }
    for (const auto& e : edges)
      if (F.keeps(e)) add_member_term(acc, e, p, mode, bracket);
    return acc;
  }
  const auto& cg = std::get<CantorGapsFamily>(F.rep());
  FamilyCover cv = cantor_cover(cg, F, opts);
  for (const auto& s : cv.solid) add_member_term(acc, s, p, mode, bracket);
  if (!cv.region) return acc;
  auto O = cv.region->intersect(bracket);
  if (!O) return acc;
  Scalar u = O->lo().value();
  Scalar v = O->hi().value();
  bool many = bracket_contains_node(cg.spec, u, v, opts);
  if (many) {
    int q = (mode == SumMode::Fraction) ? p : p + 1;
    if (q <= 0) {
      acc.val = ExtReal::pos_inf();
      return acc;
    }
    if (mode == SumMode::Length) {
      GapSum gs = gap_power_sum(cg.spec, u, v, p, 1, opts);
      if (gs.diverges) {
        acc.val = ExtReal::pos_inf();
        return acc;
      }
      acc.val = ExtReal(acc.val.value() + Scalar::approx(gs.value));
      acc.err += gs.err;
      return acc;
    }
    GapSum gs = gap_power_sum(cg.spec, u, v, p, 0, opts);
    if (gs.diverges) {
      acc.val = ExtReal::pos_inf();
      return acc;
    }
    acc.val = ExtReal(acc.val.value() + Scalar::approx(gs.value));
    acc.err += gs.err;
    // Gaps holding the bracket ends contribute their covered fraction.
    for (const Scalar& x : {u, v}) {
      CantorLocation loc = locate_point(cg.spec, x, opts);
      if (!loc.gap) continue;
      auto [glo, ghi] = gap_bounds(cg.spec, *loc.gap);
      if (u <= glo && ghi <= v) continue;  // wholly inside: already summed
      add_member_term(acc, Interval::open(ExtReal(glo), ExtReal(ghi)), p, mode, *O);
    }
    return acc;
  }
  // Finitely many gaps meet the bracket: only those at its two ends.
  std::vector<GapRef> cand;
  for (const Scalar& x : {u, v}) {
    CantorLocation loc = locate_point(cg.spec, x, opts);
    if (loc.gap && (cand.empty() || !(cand.back() == *loc.gap))) cand.push_back(*loc.gap);
  }
  for (const auto& g : cand) {
    auto [glo, ghi] = gap_bounds(cg.spec, g);
    add_member_term(acc, Interval::open(ExtReal(glo), ExtReal(ghi)), p, mode, *O);
  }
  return acc;
}

void l2_piece(const RatioPiece& rp, const Interval& bracket, SumAcc& acc, const Options& opts) {
  if (const auto* cb = std::get_if<CantorPiece>(&rp.base)) {
    const auto* c = std::get_if<density::Constant>(&rp.ratio);
    if (!c) throw ConfigError("staircase base under a non-constant ratio");
    ScaleMeasure one{{*cb}};
    ExtReal m = measure_of_tol(one, bracket, opts.quad_tol, opts);
    if (m.is_pos_inf()) {
      acc.add(ExtReal::pos_inf(), 0.0);
      return;
    }
    acc.add(ExtReal(c->c * c->c * m.value()), opts.quad_tol);
    return;
  }
  const auto& db = std::get<DensityPiece>(rp.base);
  DensityTag base_t = canonical_tag(db.density);
  if (const auto* c = std::get_if<density::Constant>(&rp.ratio)) {
    ScaleMeasure sq{{DensityPiece{db.support, tag_scale(base_t, c->c * c->c)}}};
    acc.add(measure_of(sq, bracket, opts), 0.0);
    return;
  }
  if (const auto* pw = std::get_if<density::PowerLaw>(&rp.ratio)) {
    Scalar c2 = pw->coef * pw->coef;
    DensityTag sq_t;
    if (const auto* bc = std::get_if<density::Constant>(&base_t))
      sq_t = density::PowerLaw{c2 * bc->c, pw->p + pw->p};
    else if (const auto* bp = std::get_if<density::PowerLaw>(&base_t))
      sq_t = density::PowerLaw{c2 * bp->coef, pw->p + pw->p + bp->p};
    else
      throw ConfigError("unsupported squared-density combination");
    ScaleMeasure sq{{DensityPiece{db.support, sq_t}}};
    acc.add(measure_of(sq, bracket, opts), 0.0);
    return;
  }
  if (const auto* tp = std::get_if<density::RationalTaper>(&rp.ratio)) {
    const auto* bc = std::get_if<density::Constant>(&base_t);
    if (!bc) throw ConfigError("taper ratio needs a constant base density");
    const auto* ivs = db.support.intervals();
    if (!ivs) throw ConfigError("taper ratio needs standalone-interval support");
    Scalar a = tp->c * tp->c * bc->c;
    for (const auto& J : *ivs)
      if (auto O = J.interior().intersect(bracket)) acc.add(quartic_mass(a, tp->center, *O), 0.0);
    return;
  }
  if (const auto* ml = std::get_if<density::MemberLength>(&rp.ratio)) {
    const auto* F = db.support.family();
    if (!F) throw ConfigError("member-length ratio needs a family support");
    Scalar c2 = ml->coef * ml->coef;
    int p = 2 * ml->power;
    if (const auto* bu = std::get_if<density::MemberUniform>(&base_t)) {
      PowerSum s = member_power_sum(*F, p, SumMode::Fraction, bracket, opts);
      if (s.val.is_pos_inf()) acc.add(ExtReal::pos_inf(), 0.0);
      else acc.add(ExtReal(c2 * bu->mass * s.val.value()), (c2 * bu->mass).dbl() * s.err);
      return;
    }
    if (const auto* bc = std::get_if<density::Constant>(&base_t)) {
      PowerSum s = member_power_sum(*F, p, SumMode::Length, bracket, opts);
      if (s.val.is_pos_inf()) acc.add(ExtReal::pos_inf(), 0.0);
      else acc.add(ExtReal(c2 * bc->c * s.val.value()), (c2 * bc->c).dbl() * s.err);
      return;
    }
    throw ConfigError("unsupported squared-density combination");
  }
  throw ConfigError("unsupported density-ratio tag");
}

}  // namespace

L2Report l2loc_density_check(const ScaleMeasure& nu, const ScaleMeasure& mu,
                             const Interval& bracket, const Options& opts) {
  RnResult rel = rn_relation(nu, mu, opts);
  if (rel.kind == RnKind::Unknown) throw UndecidableDecomposition(rel.note);
  L2Report rep;
  ExtReal sing = measure_of(rel.singular, bracket, opts);
  rep.dominated = sing.is_finite() && sing.value() == Scalar(0);
  SumAcc acc;
  for (const auto& rp : rel.ratio) {
    l2_piece(rp, bracket, acc, opts);
    if (acc.val.is_pos_inf()) break;
  }
  rep.square_mass = acc.val;
  rep.err = acc.err;
  return rep;
}

}  // namespace effint
