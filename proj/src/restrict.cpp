#include "effint/restrict.hpp"

#include <optional>

#include "effint/cantor.hpp"

namespace effint {

void family_window_part(const IntervalFamily& F, const Interval& w0, const DensityTag& tag,
                        ScaleMeasure& out, const Options& opts) {
  std::optional<Interval> rest = w0;
  for (int side = 0; side < 2 && rest; ++side) {
    bool lower = side == 0;
    ExtReal edge = lower ? rest->lo() : rest->hi();
    if (!edge.is_finite()) continue;
    auto m = F.member_containing(edge.value(), opts);
    if (!m) continue;
    if (m->interior().is_subset_of(*rest)) continue;  // stays with the family
    if (auto cut = m->intersect(*rest))
      out.pieces.push_back(DensityPiece{OpenSupport(*cut), tag});
    if (lower) {
      if (m->hi() < rest->hi())
        rest = Interval::make(m->hi(), false, rest->hi(), rest->hi_closed());
      else
        rest = std::nullopt;
    } else {
      if (rest->lo() < m->lo())
        rest = Interval::make(rest->lo(), rest->lo_closed(), m->lo(), false);
      else
        rest = std::nullopt;
    }
  }
  if (!rest) return;
  if (!(std::holds_alternative<density::Constant>(tag) ||
        std::holds_alternative<density::MemberUniform>(tag)))
    throw ConfigError("only uniform densities spread onto a family remainder");
  IntervalFamily cut(F.rep(), *rest);
  if (!cut.prefix(1, opts).empty())
    out.pieces.push_back(DensityPiece{OpenSupport(cut), tag});
}

ScaleMeasure restrict_to_family(const ScaleMeasure& nu, const IntervalFamily& F,
                                const Options& opts) {
  ScaleMeasure out;
  for (const Piece& pc : nu.pieces) {
    if (const auto* dp = std::get_if<DensityPiece>(&pc)) {
      std::vector<Interval> plains;
      if (const auto* G = dp->support.family()) {
        if (G->rep() == F.rep()) {
          // same generator: members match one for one; meet the windows
          std::optional<Interval> w;
          bool empty = false;
          if (F.window() && G->window()) {
            auto meet = F.window()->intersect(*G->window());
            if (meet)
              w = *meet;
            else
              empty = true;
          } else if (F.window()) {
            w = *F.window();
          } else if (G->window()) {
            w = *G->window();
          }
          if (!empty) {
            IntervalFamily cut(F.rep(), w);
            if (!cut.prefix(1, opts).empty())
              out.pieces.push_back(DensityPiece{OpenSupport(cut), dp->density});
          }
          continue;
        }
        if (units_disjoint({SetUnit(*G), SetUnit(F)}, opts) == Tri::True) continue;
        const auto* gx = std::get_if<ExplicitFamily>(&G->rep());
        if (gx && std::holds_alternative<density::Constant>(dp->density)) {
          for (const Interval& m : gx->members)
            if (G->keeps(m)) plains.push_back(m);
        } else {
          throw UndecidableDecomposition("cannot restrict mass on " + G->str() +
                                         " to the family " + F.str());
        }
      } else {
        plains = *dp->support.intervals();
      }
      for (const Interval& s : plains) {
        std::optional<Interval> w0 =
            F.window() ? s.intersect(*F.window()) : std::optional<Interval>(s);
        if (!w0) continue;
        family_window_part(F, *w0, dp->density, out, opts);
      }
    } else {
      const auto& cp = std::get<CantorPiece>(pc);
      Interval base = cp.spec.base_interval();
      std::optional<Interval> reg =
          cp.clip ? cp.clip->intersect(base) : std::optional<Interval>(base);
      if (!reg) continue;
      if (const auto* cg = std::get_if<CantorGapsFamily>(&F.rep()); cg && cg->spec == cp.spec)
        continue;  // members touch the staircase support in at most two points each
      if (!unit_hull(SetUnit(F)).meets(*reg)) continue;
      if (F.is_finite()) {
        for (const Interval& m : F.members(opts))
          if (auto cut = m.intersect(*reg))
            if (limit_overlap(cp.spec, cut->lo().value(), cut->hi().value(), opts) ==
                LimitOverlap::Uncountable)
              out.pieces.push_back(CantorPiece{cp.spec, cp.mass, cut});
        continue;
      }
      if (reg->lo().is_finite()) {
        auto m = F.member_containing(reg->lo().value(), opts);
        if (m && reg->is_subset_of(*m)) {
          out.pieces.push_back(cp);  // the whole staircase sits in one member
          continue;
        }
      }
      throw UndecidableDecomposition("cannot restrict staircase mass on " + reg->str() +
                                     " to the family " + F.str());
    }
  }
  return out;
}

ScaleMeasure restrict_to_unit(const ScaleMeasure& nu, const SetUnit& u, const Options& opts) {
  if (const auto* iv = std::get_if<Interval>(&u)) return restrict_measure(nu, *iv, opts);
  return restrict_to_family(nu, std::get<IntervalFamily>(u), opts);
}

FamilyBrackets family_cover_brackets(const IntervalFamily& F, const Options& opts) {
  FamilyBrackets out;
  if (const auto* ex = std::get_if<ExplicitFamily>(&F.rep())) {
    for (const Interval& m : ex->members)
      if (F.keeps(m)) out.brackets.push_back(m);
  } else if (const auto* ch = std::get_if<ChainFamily>(&F.rep())) {
    if (auto span = chain_kept_span(*ch, F.window())) out.brackets.push_back(*span);
  } else {
    const auto& cg = std::get<CantorGapsFamily>(F.rep());
    FamilyCover cov = cantor_cover(cg, F, opts);
    out.brackets = cov.solid;
    if (cov.region) {
      out.brackets.push_back(*cov.region);
      if (!cg.spec.limit_is_null()) {
        Approx a = limit_measure_between(cg.spec, cov.region->lo().value(),
                                         cov.region->hi().value(), opts);
        out.uncovered = a.value;
        out.uncovered_err = a.err;
      }
    }
  }
  return out;
}

}  // namespace effint
