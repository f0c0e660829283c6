#include "effint/system.hpp"

#include <algorithm>

namespace effint {
namespace {

bool lo_unconstrained(const ExtReal& a, const Interval& state) {
  return a == state.lo() && !state.lo_closed();
}

bool hi_unconstrained(const ExtReal& b, const Interval& state) {
  return b == state.hi() && !state.hi_closed();
}

// Endpoint membership must match finiteness of the scale limit, except at an
// open endpoint shared with an open state boundary, where anything goes.
std::optional<std::string> endpoint_violation(bool lower, const ExtReal& coord, bool closed,
                                              bool finite_limit, const Interval& state) {
  bool unconstrained =
      lower ? lo_unconstrained(coord, state) : hi_unconstrained(coord, state);
  if (unconstrained) return std::nullopt;
  const char* side = lower ? "lower" : "upper";
  if (closed && !finite_limit)
    return std::string("scale is unbounded at the closed ") + side + " endpoint " + coord.str();
  if (!closed && finite_limit)
    return std::string(side) + " endpoint " + coord.str() +
           " is excluded but the scale limit there is finite";
  return std::nullopt;
}

PairCheck check_explicit(const ExplicitPair& p, const Interval& state, const Options& opts) {
  PairCheck out;
  if (!p.interval.is_subset_of(state)) {
    out.inside = Tri::False;
    out.detail = "interval " + p.interval.str() + " escapes the state interval";
    return out;
  }
  if (!(p.scale.domain == p.interval)) {
    out.adapted = Tri::False;
    out.detail = "scale domain " + p.scale.domain.str() + " differs from the interval";
    return out;
  }
  if (auto v = endpoint_violation(true, p.interval.lo(), p.interval.lo_closed(),
                                  p.scale.limit_at_lo(opts).is_finite(), state)) {
    out.adapted = Tri::False;
    out.detail = *v;
    return out;
  }
  if (auto v = endpoint_violation(false, p.interval.hi(), p.interval.hi_closed(),
                                  p.scale.limit_at_hi(opts).is_finite(), state)) {
    out.adapted = Tri::False;
    out.detail = *v;
  }
  return out;
}

// Family scales have finite limits at finite member endpoints under either
// rule, and infinite ones at infinite endpoints under the natural rule; a
// member passes iff its constrained endpoints are closed. Member shapes are
// uniform per generator, and two disjoint members can never both span the
// state interval, so any violation shows up within the first two members.
PairCheck check_family(const FamilyPairs& fp, const Interval& state, const Options& opts) {
  PairCheck out;
  const IntervalFamily& F = fp.family;
  if (!F.hull().is_subset_of(state)) {
    out.inside = Tri::False;
    out.detail = "family hull " + F.hull().str() + " escapes the state interval";
    return out;
  }
  bool norm = fp.rule == MemberScaleRule::MemberNormalized;
  if (norm && fp.member_mass.sign() <= 0) {
    out.adapted = Tri::False;
    out.detail = "per-member scale mass must be positive";
    return out;
  }
  auto member_violation = [&](const Interval& m) -> std::optional<std::string> {
    if (norm && !m.is_bounded())
      return "per-member normalization needs bounded members, got " + m.str();
    bool lo_fin = norm || m.lo().is_finite();
    bool hi_fin = norm || m.hi().is_finite();
    if (auto v = endpoint_violation(true, m.lo(), m.lo_closed(), lo_fin, state))
      return "member " + m.str() + ": " + *v;
    if (auto v = endpoint_violation(false, m.hi(), m.hi_closed(), hi_fin, state))
      return "member " + m.str() + ": " + *v;
    return std::nullopt;
  };
  std::vector<Interval> probe =
      F.is_finite() ? F.members(opts) : F.prefix(2, opts);
  for (const auto& m : probe) {
    if (auto v = member_violation(m)) {
      out.adapted = Tri::False;
      out.detail = *v;
      return out;
    }
  }
  return out;
}

// Whether the set unit `u` lies inside the pair unit `holder`.
Tri unit_inside(const SetUnit& u, const SetUnit& holder, const Options& opts) {
  if (const auto* I = std::get_if<Interval>(&holder)) {
    if (unit_hull(u).is_subset_of(*I)) return Tri::True;
  } else {
    const auto& F = std::get<IntervalFamily>(holder);
    if (const auto* ui = std::get_if<Interval>(&u)) {
      auto m = F.member_containing(ui->anchor(), opts);
      if (m && ui->is_subset_of(*m)) return Tri::True;
    } else {
      const auto& G = std::get<IntervalFamily>(u);
      bool window_nested =
          !F.window() || (G.window() && G.window()->is_subset_of(*F.window()));
      if (G.rep() == F.rep() && window_nested) return Tri::True;
    }
  }
  if (units_disjoint({u, holder}, opts) == Tri::True) return Tri::False;
  return Tri::Unknown;
}

Tri stair_confined(const CantorPiece& cp, const std::vector<SetUnit>& units) {
  Interval region = cp.clip ? *cp.clip : cp.spec.base_interval();
  bool all_out = true;
  bool unknown = false;
  for (const auto& U : units) {
    if (const auto* I = std::get_if<Interval>(&U)) {
      if (region.is_subset_of(*I)) return Tri::True;
      if (region.disjoint_from(*I)) continue;
      all_out = false;
      unknown = true;
      continue;
    }
    const auto& F = std::get<IntervalFamily>(U);
    if (const auto* cg = std::get_if<CantorGapsFamily>(&F.rep()); cg && cg->spec == cp.spec)
      continue;  // the staircase mass avoids every gap of its own construction
    if (region.disjoint_from(F.hull())) continue;
    all_out = false;
    unknown = true;
  }
  if (all_out) return Tri::False;
  return unknown ? Tri::Unknown : Tri::False;
}

Tri singular_piece_confined(const Piece& piece, const std::vector<SetUnit>& units,
                            const Options& opts) {
  if (const auto* cp = std::get_if<CantorPiece>(&piece)) return stair_confined(*cp, units);
  const auto& dp = std::get<DensityPiece>(piece);
  Tri acc = Tri::True;
  for (const SetUnit& su : dp.support.units()) {
    bool in = false;
    bool all_out = true;
    for (const auto& U : units) {
      Tri t = unit_inside(su, U, opts);
      if (t == Tri::True) {
        in = true;
        break;
      }
      if (t != Tri::False) all_out = false;
    }
    if (in) continue;
    if (all_out) return Tri::False;
    acc = Tri::Unknown;
  }
  return acc;
}

Tri killing_check(const KillingMeasure& k, const EffectiveSystem& sys,
                  const std::vector<SetUnit>& units, const Options& opts, std::string& note) {
  if (auto v = radon_violation(k.measure, sys.state)) {
    note += "killing: " + *v + ". ";
    return Tri::False;
  }
  RnResult rn = rn_relation(k.measure, sys.speed.measure, opts);
  if (rn.kind == RnKind::Unknown) {
    note += "killing decomposition undecided: " + rn.note + ". ";
    return Tri::Unknown;
  }
  Tri acc = Tri::True;
  for (const Piece& p : rn.singular.pieces) {
    Tri t = singular_piece_confined(p, units, opts);
    if (t == Tri::False) {
      note += "killing charges the trap region with speed-singular mass. ";
      return Tri::False;
    }
    acc = tri_and(acc, t);
  }
  if (acc == Tri::Unknown)
    note += "could not confine speed-singular killing mass to the intervals. ";
  return acc;
}

BoundaryKind classify_endpoint(bool lower, const ExtReal& coord, bool closed, bool finite_limit,
                               const Scalar& probe, const EffectiveSystem& sys,
                               const Options& opts) {
  if (closed) return BoundaryKind::Reflecting;
  bool unconstrained =
      lower ? lo_unconstrained(coord, sys.state) : hi_unconstrained(coord, sys.state);
  if (!unconstrained || !finite_limit) return BoundaryKind::Unapproachable;
  Interval near = lower ? Interval::make(coord, false, ExtReal(probe), true)
                        : Interval::make(ExtReal(probe), true, coord, false);
  ExtReal mass = measure_of(sys.speed.measure, near, opts);
  return mass.is_finite() ? BoundaryKind::AbsorbingDirichlet : BoundaryKind::Unapproachable;
}

BoundaryEntry classify_member(std::size_t idx, const Interval& m, bool lo_fin, bool hi_fin,
                              bool generic, const EffectiveSystem& sys, const Options& opts) {
  BoundaryEntry e;
  e.pair_index = idx;
  e.member = m;
  e.generic = generic;
  Scalar probe = m.anchor();
  e.lo = classify_endpoint(true, m.lo(), m.lo_closed(), lo_fin, probe, sys, opts);
  e.hi = classify_endpoint(false, m.hi(), m.hi_closed(), hi_fin, probe, sys, opts);
  return e;
}

void family_entries(std::size_t idx, const FamilyPairs& fp, const EffectiveSystem& sys,
                    std::vector<BoundaryEntry>& out, const Options& opts) {
  const IntervalFamily& F = fp.family;
  bool norm = fp.rule == MemberScaleRule::MemberNormalized;
  auto add = [&](const Interval& m, bool generic) {
    bool lo_fin = norm || m.lo().is_finite();
    bool hi_fin = norm || m.hi().is_finite();
    out.push_back(classify_member(idx, m, lo_fin, hi_fin, generic, sys, opts));
  };
  if (F.is_finite()) {
    for (const auto& m : F.members(opts)) add(m, false);
    return;
  }
  if (std::holds_alternative<ChainFamily>(F.rep())) {
    auto probe = F.prefix(2, opts);
    if (probe.empty()) return;
    add(probe[0], false);
    if (probe.size() > 1) add(probe[1], true);
    return;
  }
  std::vector<Interval> rays;
  std::optional<Interval> gap;
  for (const auto& m : F.prefix(4, opts)) {
    if (!m.is_bounded())
      rays.push_back(m);
    else if (!gap)
      gap = m;
  }
  for (const auto& r : rays) add(r, false);
  if (gap) add(*gap, true);
}

}  // namespace

SetUnit pair_unit(const PairEntry& p) {
  if (const auto* e = std::get_if<ExplicitPair>(&p)) return SetUnit{e->interval};
  return SetUnit{std::get<FamilyPairs>(p).family};
}

ScaleFunction member_scale(const FamilyPairs& fp, const Interval& member, const Options& opts) {
  if (fp.rule == MemberScaleRule::Natural)
    return ScaleFunction::natural(member, member.anchor());
  ExtReal len = member.length();
  if (!len.is_finite()) throw ConfigError("per-member normalization needs bounded members");
  Scalar c = fp.member_mass / len.value();
  ScaleMeasure mu{{DensityPiece{OpenSupport(member), density::Constant{c}}}};
  return ScaleFunction::from_measure(member, member.anchor(), std::move(mu), opts);
}

Tri ValidationReport::verdict() const {
  Tri v = disjoint;
  for (const auto& pc : pair_checks) {
    v = tri_and(v, pc.inside);
    v = tri_and(v, pc.adapted);
  }
  v = tri_and(v, speed_supported);
  v = tri_and(v, speed_radon);
  v = tri_and(v, killing_dominated);
  return v;
}

ValidationReport validate(const EffectiveSystem& sys, const Options& opts) {
  ValidationReport rep;
  std::vector<SetUnit> units;
  units.reserve(sys.pairs.size());
  for (const auto& p : sys.pairs) units.push_back(pair_unit(p));
  rep.disjoint = units_disjoint(units, opts);
  if (rep.disjoint == Tri::False) {
    for (std::size_t i = 0; i < units.size() && !rep.overlap_witness; ++i)
      for (std::size_t j = i + 1; j < units.size(); ++j)
        if (units_disjoint({units[i], units[j]}, opts) == Tri::False) {
          rep.overlap_witness = {i, j};
          break;
        }
  }
  for (const auto& p : sys.pairs)
    rep.pair_checks.push_back(std::visit(
        [&](const auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, ExplicitPair>)
            return check_explicit(q, sys.state, opts);
          else
            return check_family(q, sys.state, opts);
        },
        p));
  if (auto v = radon_violation(sys.speed.measure, sys.state)) {
    rep.speed_radon = Tri::False;
    rep.note += "speed: " + *v + ". ";
  }
  if (auto hole = coverage_gap(sys.speed.measure, sys.state, opts)) {
    rep.speed_supported = Tri::False;
    rep.note += "speed measure vanishes near " + hole->str() + ". ";
  }
  if (sys.killing)
    rep.killing_dominated = killing_check(*sys.killing, sys, units, opts, rep.note);
  return rep;
}

const char* boundary_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Reflecting: return "reflecting";
    case BoundaryKind::Unapproachable: return "unapproachable";
    default: return "absorbing-dirichlet";
  }
}

std::vector<BoundaryEntry> boundary_classify(const EffectiveSystem& sys, const Options& opts) {
  std::vector<BoundaryEntry> out;
  for (std::size_t i = 0; i < sys.pairs.size(); ++i) {
    if (const auto* e = std::get_if<ExplicitPair>(&sys.pairs[i])) {
      out.push_back(classify_member(i, e->interval, e->scale.limit_at_lo(opts).is_finite(),
                                    e->scale.limit_at_hi(opts).is_finite(), false, sys, opts));
    } else {
      family_entries(i, std::get<FamilyPairs>(sys.pairs[i]), sys, out, opts);
    }
  }
  return out;
}

ScaleMeasure scale_measure_of(const EffectiveSystem& sys) {
  ScaleMeasure out;
  for (const auto& p : sys.pairs) {
    if (const auto* e = std::get_if<ExplicitPair>(&p)) {
      for (const auto& piece : e->scale.measure.pieces) out.pieces.push_back(piece);
      continue;
    }
    const auto& fp = std::get<FamilyPairs>(p);
    DensityTag tag = fp.rule == MemberScaleRule::Natural
                         ? DensityTag{density::Constant{Scalar(1)}}
                         : DensityTag{density::MemberUniform{fp.member_mass}};
    out.pieces.push_back(DensityPiece{OpenSupport(fp.family), std::move(tag)});
  }
  return out;
}

}  // namespace effint
