#include "effint/setops.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace effint {

Interval unit_hull(const SetUnit& u) {
  if (const auto* iv = std::get_if<Interval>(&u)) return *iv;
  return std::get<IntervalFamily>(u).hull();
}

bool unit_covers(const SetUnit& u, const Scalar& x, const Options& opts) {
  if (const auto* iv = std::get_if<Interval>(&u)) return iv->contains(x);
  return std::get<IntervalFamily>(u).covers(x, opts);
}

std::optional<Interval> unit_member_containing(const SetUnit& u, const Scalar& x,
                                               const Options& opts) {
  if (const auto* iv = std::get_if<Interval>(&u)) {
    if (iv->contains(x)) return *iv;
    return std::nullopt;
  }
  return std::get<IntervalFamily>(u).member_containing(x, opts);
}

const char* residual_name(ResidualClass c) {
  switch (c) {
    case ResidualClass::Empty: return "empty";
    case ResidualClass::Countable: return "countable";
    case ResidualClass::UncountableNowhereDense: return "uncountable-nowhere-dense";
    case ResidualClass::HasInterior: return "has-interior";
  }
  return "?";
}

namespace {

template <class P>  // P nondecreasing in i; smallest i in [0, cap) with P(i)
std::optional<long long> first_true(P p, long long cap) {
  if (cap <= 0) return std::nullopt;
  if (p(0)) return 0;
  long long lo = 0, probe = 1;  // invariant: p(lo) false
  while (probe < cap && !p(probe)) {
    lo = probe;
    probe <<= 1;
  }
  long long hi = probe < cap ? probe : cap - 1;
  if (hi <= lo) return std::nullopt;
  if (probe >= cap && !p(hi)) return std::nullopt;
  while (lo + 1 < hi) {
    long long mid = lo + (hi - lo) / 2;
    (p(mid) ? hi : lo) = mid;
  }
  return hi;
}

constexpr long long kSearchCap = 1LL << 40;

}  // namespace

ChainRun chain_kept_run(const ChainFamily& ch, const std::optional<Interval>& w) {
  long long cap = ch.count >= 0 ? ch.count : kSearchCap;
  if (!w) {
    if (cap == 0) return {};
    return {false, 0, ch.count >= 0 ? ch.count - 1 : -1};
  }
  const ExtReal wlo = w->lo(), whi = w->hi();
  auto low_ok = [&](long long i) {  // window's lower bound below the member
    Interval m = ch.member(i);
    return !(m.lo() < wlo);
  };
  auto high_ok = [&](long long i) {
    Interval m = ch.member(i);
    return !(whi < m.hi());
  };
  // One predicate is nondecreasing in i (the limit side), the other
  // nonincreasing; which is which depends on the march direction.
  bool asc = ch.ascending();
  auto rising = [&](long long i) { return asc ? low_ok(i) : high_ok(i); };
  auto falling = [&](long long i) { return asc ? high_ok(i) : low_ok(i); };

  ExtReal lim_side(ch.limit);
  bool rising_eventually = asc ? (wlo < lim_side) : (lim_side < whi);
  if (!rising(0) && !rising_eventually) return {};
  auto first_idx = first_true(rising, cap);
  if (!first_idx) {
    if (ch.count < 0)
      throw UndecidableAtDepth("window boundary too deep in chain enumeration");
    return {};
  }
  // Falling predicate: everything up to some index, possibly unbounded.
  bool forever = asc ? !(whi < lim_side) : !(lim_side < wlo);
  long long last_idx;
  if (forever && ch.count < 0) {
    last_idx = -1;
  } else if (forever) {
    last_idx = ch.count - 1;
  } else {
    auto first_bad = first_true([&](long long i) { return !falling(i); }, cap);
    if (!first_bad) {
      if (ch.count < 0)
        throw UndecidableAtDepth("window boundary too deep in chain enumeration");
      last_idx = cap - 1;
    } else {
      last_idx = *first_bad - 1;
    }
  }
  if (last_idx >= 0 && *first_idx > last_idx) return {};
  return {false, *first_idx, last_idx};
}

std::optional<Interval> chain_kept_span(const ChainFamily& ch, const std::optional<Interval>& w) {
  ChainRun run = chain_kept_run(ch, w);
  if (run.empty) return std::nullopt;
  ExtReal near_end(ch.breakpoint(run.first));
  ExtReal far_end = run.last < 0 ? ExtReal(ch.limit) : ExtReal(ch.breakpoint(run.last + 1));
  return ch.ascending() ? Interval::open(near_end, far_end) : Interval::open(far_end, near_end);
}

FamilyCover cantor_cover(const CantorGapsFamily& cg, const IntervalFamily& fam,
                         const Options& opts) {
  FamilyCover out;
  if (cg.include_rays) {
    Interval lray = Interval::make(ExtReal::neg_inf(), false, ExtReal(cg.spec.lo),
                                   cg.closed_members);
    Interval rray = Interval::make(ExtReal(cg.spec.hi), cg.closed_members, ExtReal::pos_inf(),
                                   false);
    if (fam.keeps(lray)) out.solid.push_back(lray);
    if (fam.keeps(rray)) out.solid.push_back(rray);
  }
  Scalar lo = cg.spec.lo, hi = cg.spec.hi;
  if (fam.window()) {
    auto clipped = Interval::open(ExtReal(lo), ExtReal(hi)).intersect(*fam.window());
    if (!clipped) return out;
    auto adjust = [&](const ExtReal& b, bool left_side) -> Scalar {
      Scalar s = b.value();
      if (!(lo < s && s < hi)) return left_side ? lo : hi;
      CantorLocation loc = locate_point(cg.spec, s, opts);
      if (loc.kind == CantorLocation::Kind::InGap) {
        auto [glo, ghi] = gap_bounds(cg.spec, *loc.gap);
        return left_side ? ghi : glo;  // straddled gap is dropped: carve it out
      }
      return s;
    };
    Scalar rlo = adjust(clipped->lo(), true);
    Scalar rhi = adjust(clipped->hi(), false);
    if (rlo < rhi) out.region = Interval::open(ExtReal(rlo), ExtReal(rhi));
  } else {
    out.region = Interval::open(ExtReal(lo), ExtReal(hi));
  }
  return out;
}

// ---- residual sweep ----------------------------------------------------

namespace {

struct Atom {
  Scalar lo, hi;  // clipped to the bracket
  enum class Kind { Solid, Chain, Cantor } kind;
  const IntervalFamily* fam = nullptr;   // Chain/Cantor
  const CantorGapsFamily* cg = nullptr;  // Cantor
};

void push_clipped(std::vector<Atom>& atoms, const Interval& region, const Scalar& u,
                  const Scalar& v, Atom proto) {
  ExtReal lo = region.lo(), hi = region.hi();
  Scalar a = lo.is_finite() ? Scalar::max(lo.value(), u) : u;
  Scalar b = hi.is_finite() ? Scalar::min(hi.value(), v) : v;
  if (!(a < b)) return;
  proto.lo = a;
  proto.hi = b;
  atoms.push_back(std::move(proto));
}

}  // namespace

ResidualReport residual_set(const Scalar& u, const Scalar& v, const std::vector<SetUnit>& units,
                            const Options& opts) {
  assert(!(v < u));
  auto covered = [&](const Scalar& x) {
    for (const SetUnit& un : units)
      if (unit_covers(un, x, opts)) return true;
    return false;
  };

  std::vector<Atom> atoms;
  for (const SetUnit& un : units) {
    if (const auto* iv = std::get_if<Interval>(&un)) {
      push_clipped(atoms, *iv, u, v, {Scalar(), Scalar(), Atom::Kind::Solid, nullptr, nullptr});
      continue;
    }
    const IntervalFamily& fam = std::get<IntervalFamily>(un);
    if (const auto* ex = std::get_if<ExplicitFamily>(&fam.rep())) {
      for (const Interval& m : ex->members)
        if (fam.keeps(m))
          push_clipped(atoms, m, u, v, {Scalar(), Scalar(), Atom::Kind::Solid, nullptr, nullptr});
    } else if (const auto* ch = std::get_if<ChainFamily>(&fam.rep())) {
      if (auto span = chain_kept_span(*ch, fam.window()))
        push_clipped(atoms, *span, u, v,
                     {Scalar(), Scalar(), Atom::Kind::Chain, &fam, nullptr});
    } else {
      const auto& cg = std::get<CantorGapsFamily>(fam.rep());
      FamilyCover cover = cantor_cover(cg, fam, opts);
      for (const Interval& s : cover.solid)
        push_clipped(atoms, s, u, v, {Scalar(), Scalar(), Atom::Kind::Solid, nullptr, nullptr});
      if (cover.region)
        push_clipped(atoms, *cover.region, u, v,
                     {Scalar(), Scalar(), Atom::Kind::Cantor, &fam, &cg});
    }
  }

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < atoms.size(); ++i)
    if (atoms[i].lo < atoms[i - 1].hi)
      throw ConfigError("interval collections overlap between " + atoms[i - 1].hi.str() +
                        " and " + atoms[i].lo.str());

  std::vector<Scalar> events{u, v};
  for (const Atom& a : atoms) {
    events.push_back(a.lo);
    events.push_back(a.hi);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  ResidualReport rep;
  auto bump = [&](ResidualClass c) {
    if (static_cast<int>(c) > static_cast<int>(rep.cls)) rep.cls = c;
  };

  for (const Scalar& q : events)
    if (!covered(q)) bump(ResidualClass::Countable);

  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    const Scalar& x = events[i];
    const Scalar& y = events[i + 1];
    const Atom* host = nullptr;
    for (const Atom& a : atoms)
      if (!(x < a.lo) && !(a.hi < y)) {
        host = &a;
        break;
      }
    if (!host) {
      Scalar witness = Scalar::exact((x.as_rational() + y.as_rational()) / 2);
      if (covered(witness))
        throw ConfigError("coverage between " + x.str() + " and " + y.str() +
                          " escaped the sweep");
      rep.cls = ResidualClass::HasInterior;
      rep.interior_witness = witness;
      return rep;
    }
    switch (host->kind) {
      case Atom::Kind::Solid:
        break;
      case Atom::Kind::Chain: {
        Scalar mid = Scalar::exact((x.as_rational() + y.as_rational()) / 2);
        auto m = host->fam->member_containing(mid, opts);
        bool inside_one = m && !(x < m->lo().value()) && !(m->hi().value() < y);
        if (!inside_one) bump(ResidualClass::Countable);
        break;
      }
      case Atom::Kind::Cantor: {
        switch (limit_overlap(host->cg->spec, x, y, opts)) {
          case LimitOverlap::Uncountable:
            bump(ResidualClass::UncountableNowhereDense);
            break;
          case LimitOverlap::FinitelyMany:  // within one gap closure: only the
          case LimitOverlap::Empty:         // gap's own endpoints, event-handled
            break;
        }
        break;
      }
    }
  }
  return rep;
}

// ---- coarser-than ------------------------------------------------------

namespace {

bool contained_in_some(const Interval& m, const std::vector<SetUnit>& coarse,
                       const Options& opts) {
  Scalar p = m.anchor();
  for (const SetUnit& un : coarse) {
    auto c = unit_member_containing(un, p, opts);
    if (c && m.is_subset_of(*c)) return true;
  }
  return false;  // decisive: any member containing m contains p
}

bool window_narrows(const std::optional<Interval>& fine_w,
                    const std::optional<Interval>& coarse_w) {
  if (!coarse_w) return true;
  if (!fine_w) return false;
  return fine_w->is_subset_of(*coarse_w);
}

// Every member of `fine` is (as a set) contained in the matching member of
// `coarse`, by generator structure alone.
bool memberwise_subset(const IntervalFamily& fine, const IntervalFamily& coarse) {
  if (!window_narrows(fine.window(), coarse.window())) return false;
  if (const auto* fc = std::get_if<ChainFamily>(&fine.rep())) {
    const auto* cc = std::get_if<ChainFamily>(&coarse.rep());
    if (!cc) return false;
    if (!(fc->limit == cc->limit && fc->coef == cc->coef && fc->rule == cc->rule)) return false;
    if (cc->count >= 0 && (fc->count < 0 || fc->count > cc->count)) return false;
    return true;
  }
  if (const auto* fg = std::get_if<CantorGapsFamily>(&fine.rep())) {
    const auto* cg = std::get_if<CantorGapsFamily>(&coarse.rep());
    if (!cg) return false;
    if (!(fg->spec == cg->spec)) return false;
    if (fg->closed_members && !cg->closed_members) return false;
    if (fg->include_rays && !cg->include_rays) return false;
    return true;
  }
  return false;  // explicit families go through the prefix path
}

}  // namespace

Tri coarser_than(const std::vector<SetUnit>& coarse, const std::vector<SetUnit>& fine,
                 const Options& opts) {
  Tri acc = Tri::True;
  for (const SetUnit& un : fine) {
    if (const auto* iv = std::get_if<Interval>(&un)) {
      if (!contained_in_some(*iv, coarse, opts)) return Tri::False;
      continue;
    }
    const IntervalFamily& fam = std::get<IntervalFamily>(un);
    if (contained_in_some(fam.hull(), coarse, opts)) continue;
    bool matched = false;
    for (const SetUnit& cu : coarse) {
      const auto* cf = std::get_if<IntervalFamily>(&cu);
      if (cf && memberwise_subset(fam, *cf)) {
        matched = true;
        break;
      }
    }
    if (matched) continue;
    std::size_t depth = static_cast<std::size_t>(opts.prefix_depth);
    std::vector<Interval> pre = fam.prefix(depth + 1, opts);
    for (const Interval& m : pre)
      if (!contained_in_some(m, coarse, opts)) return Tri::False;
    if (fam.is_finite() && pre.size() <= depth) continue;  // saw every member
    acc = Tri::Unknown;
  }
  return acc;
}

// ---- pairwise disjointness ----------------------------------------------

namespace {

// Regions in which the family's members are (co-meagerly) dense: any
// interval overlapping such a region's interior overlaps a member.
struct DenseCover {
  std::vector<Interval> solid;   // actual member intervals (rays)
  std::vector<Interval> dense;   // open spans carrying infinitely many members
};

DenseCover dense_cover(const IntervalFamily& fam, const Options& opts) {
  DenseCover out;
  if (const auto* ch = std::get_if<ChainFamily>(&fam.rep())) {
    if (auto span = chain_kept_span(*ch, fam.window())) out.dense.push_back(*span);
    return out;
  }
  const auto& cg = std::get<CantorGapsFamily>(fam.rep());
  FamilyCover cover = cantor_cover(cg, fam, opts);
  out.solid = std::move(cover.solid);
  if (cover.region) out.dense.push_back(*cover.region);
  return out;
}

bool is_infinite_family(const SetUnit& u) {
  const auto* fam = std::get_if<IntervalFamily>(&u);
  return fam && !std::holds_alternative<ExplicitFamily>(fam->rep());
}

// m known to be a single interval; B an infinite (chain/cantor) family.
Tri interval_vs_family(const Interval& m, const IntervalFamily& B, const Options& opts) {
  DenseCover cover = dense_cover(B, opts);
  for (const Interval& s : cover.solid)
    if (!m.disjoint_from(s)) return Tri::False;
  for (const Interval& d : cover.dense)
    if (m.interior().meets(d)) return Tri::False;
  // Only endpoint touches remain possible.
  if (m.lo_closed() && B.covers(m.lo().value(), opts)) return Tri::False;
  if (m.hi_closed() && B.covers(m.hi().value(), opts)) return Tri::False;
  return Tri::True;
}

Tri pair_disjoint(const SetUnit& A, const SetUnit& B, const Options& opts) {
  Interval ha = unit_hull(A), hb = unit_hull(B);
  if (ha.disjoint_from(hb)) return Tri::True;
  if (auto p = ha.shared_endpoint(hb)) {
    if (unit_covers(A, *p, opts) && unit_covers(B, *p, opts)) return Tri::False;
    return Tri::True;
  }
  // Hull interiors overlap. Reduce finite sides to member-by-member checks.
  auto members_of = [&](const SetUnit& un) -> std::optional<std::vector<Interval>> {
    if (const auto* iv = std::get_if<Interval>(&un)) return std::vector<Interval>{*iv};
    const auto& fam = std::get<IntervalFamily>(un);
    if (std::holds_alternative<ExplicitFamily>(fam.rep())) return fam.members(opts);
    return std::nullopt;
  };
  auto ma = members_of(A), mb = members_of(B);
  if (ma && mb) {
    for (const Interval& x : *ma)
      for (const Interval& y : *mb)
        if (!x.disjoint_from(y)) return Tri::False;
    return Tri::True;
  }
  if (ma || mb) {
    const auto& ms = ma ? *ma : *mb;
    const IntervalFamily& fam = std::get<IntervalFamily>(ma ? B : A);
    for (const Interval& x : ms) {
      Tri t = interval_vs_family(x, fam, opts);
      if (t != Tri::True) return t;
    }
    return Tri::True;
  }
  // Two infinite families.
  const IntervalFamily& fa = std::get<IntervalFamily>(A);
  const IntervalFamily& fb = std::get<IntervalFamily>(B);
  if (fa.rep() == fb.rep()) {
    // Identical generators share a member iff one survives both windows,
    // i.e. survives the window intersection.
    std::optional<Interval> w;
    if (fa.window() && fb.window()) {
      auto meet = fa.window()->intersect(*fb.window());
      if (!meet) return Tri::True;
      w = *meet;
    } else {
      w = fa.window() ? fa.window() : fb.window();
    }
    IntervalFamily joint(fa.rep(), w);
    return joint.prefix(1, opts).empty() ? Tri::True : Tri::False;
  }
  DenseCover ca = dense_cover(fa, opts), cb = dense_cover(fb, opts);
  for (const Interval& sa : ca.solid) {
    Tri t = interval_vs_family(sa, fb, opts);
    if (t != Tri::True) return t;
  }
  for (const Interval& sb : cb.solid) {
    Tri t = interval_vs_family(sb, fa, opts);
    if (t != Tri::True) return t;
  }
  for (const Interval& da : ca.dense)
    for (const Interval& db : cb.dense)
      if (da.meets(db)) return Tri::False;  // co-meager covers must collide
  return Tri::True;
}

}  // namespace

Tri units_disjoint(const std::vector<SetUnit>& units, const Options& opts) {
  Tri acc = Tri::True;
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::size_t j = i + 1; j < units.size(); ++j) {
      Tri t = pair_disjoint(units[i], units[j], opts);
      if (t == Tri::False) return Tri::False;
      acc = tri_and(acc, t);
    }
  return acc;
}

}  // namespace effint
