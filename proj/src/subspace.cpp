#include "effint/subspace.hpp"

#include <algorithm>

#include "effint/relations.hpp"

namespace effint {

namespace {

void require_compatible(const EffectiveSystem& a, const EffectiveSystem& b) {
  if (!(a.state == b.state))
    throw StateSpaceMismatch("state intervals differ: " + a.state.str() + " vs " +
                             b.state.str());
  if (!piece_identical(a.speed.measure, b.speed.measure))
    throw SpeedMismatch("speed measures differ: " + a.speed.measure.str() + " vs " +
                        b.speed.measure.str());
}

std::vector<SetUnit> system_units(const EffectiveSystem& s) {
  std::vector<SetUnit> out;
  out.reserve(s.pairs.size());
  for (const PairEntry& p : s.pairs) out.push_back(pair_unit(p));
  return out;
}

std::optional<Interval> coarser_witness(const std::vector<SetUnit>& coarse,
                                        const std::vector<SetUnit>& fine,
                                        const Options& opts) {
  for (const SetUnit& u : fine) {
    std::vector<Interval> ms;
    if (const auto* iv = std::get_if<Interval>(&u))
      ms.push_back(*iv);
    else
      ms = std::get<IntervalFamily>(u).prefix(opts.prefix_depth, opts);
    for (const Interval& m : ms) {
      bool inside = false;
      for (const SetUnit& c : coarse) {
        auto host = unit_member_containing(c, m.anchor(), opts);
        if (host && m.is_subset_of(*host)) {
          inside = true;
          break;
        }
      }
      if (!inside) return m;
    }
  }
  return std::nullopt;
}

ScaleMeasure killing_of(const EffectiveSystem& s) {
  return s.killing ? s.killing->measure : ScaleMeasure::zero();
}

// Membership of one concrete interval in a unit list, by exact comparison.
bool set_contains(const std::vector<SetUnit>& units, const Interval& m,
                  const Options& opts) {
  for (const SetUnit& u : units) {
    if (const auto* iv = std::get_if<Interval>(&u)) {
      if (*iv == m) return true;
      continue;
    }
    auto host = std::get<IntervalFamily>(u).member_containing(m.anchor(), opts);
    if (host && *host == m) return true;
  }
  return false;
}

struct UnitSplit {
  std::vector<Interval> plain;           // explicit intervals + finite-family members
  std::vector<IntervalFamily> infinite;  // generator-backed families
};

UnitSplit split_units(const EffectiveSystem& s, const Options& opts) {
  UnitSplit out;
  for (const SetUnit& u : system_units(s)) {
    if (const auto* iv = std::get_if<Interval>(&u)) {
      out.plain.push_back(*iv);
      continue;
    }
    const auto& fam = std::get<IntervalFamily>(u);
    if (fam.is_finite()) {
      for (const Interval& m : fam.members(opts)) out.plain.push_back(m);
    } else {
      out.infinite.push_back(fam);
    }
  }
  return out;
}

}  // namespace

Tri SubspaceReport::verdict() const {
  Tri v = tri_and(cond_coarser, cond_scale);
  if (cond_killing) v = tri_and(v, *cond_killing);
  return v;
}

SubspaceReport check_subspace(const EffectiveSystem& candidate, const EffectiveSystem& parent,
                              const Options& opts) {
  require_compatible(candidate, parent);
  SubspaceReport rep;

  std::vector<SetUnit> cu = system_units(candidate);
  std::vector<SetUnit> pu = system_units(parent);
  try {
    rep.cond_coarser = coarser_than(cu, pu, opts);
  } catch (const UndecidableAtDepth&) {
    rep.cond_coarser = Tri::Unknown;
  }
  if (rep.cond_coarser == Tri::False) rep.witness = coarser_witness(cu, pu, opts);

  try {
    RnResult rn = rn_relation(scale_measure_of(candidate), scale_measure_of(parent), opts);
    if (rn.kind == RnKind::ZeroOne) {
      rep.cond_scale = Tri::True;
    } else if (rn.kind == RnKind::Unknown) {
      rep.cond_scale = Tri::Unknown;
      rep.scale_note = rn.note;
    } else {
      rep.cond_scale = Tri::False;
      rep.scale_note = rn_kind_name(rn.kind);
    }
  } catch (const UndecidableDecomposition& e) {
    rep.cond_scale = Tri::Unknown;
    rep.scale_note = e.what();
  }

  if (candidate.killing || parent.killing)
    rep.cond_killing =
        piece_identical(killing_of(candidate), killing_of(parent)) ? Tri::True : Tri::False;

  rep.candidate_boundary = boundary_classify(candidate, opts);
  rep.parent_boundary = boundary_classify(parent, opts);
  return rep;
}

Tri check_equality(const EffectiveSystem& a, const EffectiveSystem& b, const Options& opts) {
  require_compatible(a, b);

  if (!piece_identical(scale_measure_of(a), scale_measure_of(b))) return Tri::False;

  UnitSplit ua = split_units(a, opts);
  UnitSplit ub = split_units(b, opts);
  std::vector<SetUnit> units_a = system_units(a);
  std::vector<SetUnit> units_b = system_units(b);

  // Probe concrete members both ways; a missing member is decisive.
  auto probes_ok = [&](const UnitSplit& from, const std::vector<SetUnit>& into) {
    for (const Interval& m : from.plain)
      if (!set_contains(into, m, opts)) return false;
    for (const IntervalFamily& fam : from.infinite)
      for (const Interval& m : fam.prefix(opts.prefix_depth, opts))
        if (!set_contains(into, m, opts)) return false;
    return true;
  };
  if (!probes_ok(ua, units_b) || !probes_ok(ub, units_a)) return Tri::False;

  // Beyond the probes only representation identity certifies the tails.
  std::vector<bool> used(ub.infinite.size(), false);
  for (const IntervalFamily& fa : ua.infinite) {
    bool matched = false;
    for (std::size_t j = 0; j < ub.infinite.size(); ++j) {
      if (used[j]) continue;
      if (fa.rep() == ub.infinite[j].rep() && fa.window() == ub.infinite[j].window()) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return Tri::Unknown;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) return Tri::Unknown;
  return Tri::True;
}

}  // namespace effint
