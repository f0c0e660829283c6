#include "effint/family.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <sstream>

#include "effint/errors.hpp"

namespace effint {

Scalar ChainFamily::breakpoint(long long k) const {
  assert(k >= 0);
  if (const auto* h = std::get_if<Harmonic>(&rule)) {
    assert(h->offset >= 1);
    return limit + coef / Scalar(k + h->offset);
  }
  const auto& g = std::get<Geometric>(rule);
  return limit + coef * g.ratio.pow_int(k);
}

Interval ChainFamily::member(long long i) const {
  assert(i >= 0 && (count < 0 || i < count));
  Scalar u = breakpoint(i), v = breakpoint(i + 1);
  if (ascending()) return Interval::open(ExtReal(u), ExtReal(v));
  return Interval::open(ExtReal(v), ExtReal(u));
}

Interval cantor_gap_member(const CantorGapsFamily& fam, const GapRef& g) {
  auto [lo, hi] = gap_bounds(fam.spec, g);
  return Interval::make(ExtReal(lo), fam.closed_members, ExtReal(hi), fam.closed_members);
}

namespace {

Interval left_ray(const CantorGapsFamily& fam) {
  return Interval::make(ExtReal::neg_inf(), false, ExtReal(fam.spec.lo), fam.closed_members);
}

Interval right_ray(const CantorGapsFamily& fam) {
  return Interval::make(ExtReal(fam.spec.hi), fam.closed_members, ExtReal::pos_inf(), false);
}

}  // namespace

IntervalFamily::IntervalFamily(Rep rep, std::optional<Interval> window)
    : rep_(std::move(rep)), window_(std::move(window)) {
  if (const auto* ex = std::get_if<ExplicitFamily>(&rep_)) {
    for (std::size_t i = 0; i < ex->members.size(); ++i)
      for (std::size_t j = i + 1; j < ex->members.size(); ++j)
        if (!ex->members[i].disjoint_from(ex->members[j]))
          throw ConfigError("family members overlap: " + ex->members[i].str() + " and " +
                            ex->members[j].str());
  }
  if (const auto* ch = std::get_if<ChainFamily>(&rep_)) {
    if (ch->coef.is_zero()) throw ConfigError("chain coefficient must be nonzero");
    if (const auto* h = std::get_if<ChainFamily::Harmonic>(&ch->rule)) {
      if (h->offset < 1) throw ConfigError("chain offset must be >= 1");
    } else {
      const auto& r = std::get<ChainFamily::Geometric>(ch->rule).ratio;
      if (!(Scalar(0) < r && r < Scalar(1))) throw ConfigError("chain ratio must be in (0,1)");
    }
  }
  if (const auto* cg = std::get_if<CantorGapsFamily>(&rep_)) {
    if (!(cg->spec.lo < cg->spec.hi)) throw ConfigError("gap family base must be nondegenerate");
    if (const auto* cr = std::get_if<CantorSpec::ConstantRatio>(&cg->spec.rule)) {
      if (!(Scalar(0) < cr->r && cr->r < Scalar::rat(1, 2)))
        throw ConfigError("gap family ratio must be in (0,1/2)");
    } else {
      const auto& gg = std::get<CantorSpec::GeometricGaps>(cg->spec.rule);
      if (!(Scalar(0) < gg.gamma0 && gg.gamma0 < Scalar(1)) ||
          !(Scalar(0) < gg.q && gg.q < Scalar(1)))
        throw ConfigError("gap family fractions must be in (0,1)");
    }
  }
}

bool IntervalFamily::keeps(const Interval& m) const {
  if (!window_) return true;
  return m.interior().is_subset_of(*window_);
}

bool IntervalFamily::is_finite() const {
  if (const auto* ex = std::get_if<ExplicitFamily>(&rep_)) {
    (void)ex;
    return true;
  }
  if (const auto* ch = std::get_if<ChainFamily>(&rep_)) return ch->count >= 0;
  return false;  // gap families are treated as unbounded even under a window
}

std::vector<Interval> IntervalFamily::prefix(std::size_t n, const Options& opts) const {
  std::vector<Interval> out;
  if (n == 0) return out;
  if (const auto* ex = std::get_if<ExplicitFamily>(&rep_)) {
    for (const Interval& m : ex->members) {
      if (!keeps(m)) continue;
      out.push_back(m);
      if (out.size() == n) break;
    }
    return out;
  }
  if (const auto* ch = std::get_if<ChainFamily>(&rep_)) {
    if (window_) {
      ExtReal first(ch->breakpoint(0));
      ExtReal last = ch->count >= 0 ? ExtReal(ch->breakpoint(ch->count)) : ExtReal(ch->limit);
      Interval span = ch->ascending() ? Interval::open(first, last) : Interval::open(last, first);
      if (!span.meets(*window_)) return out;
    }
    // Windowed chains: members shrink monotonically toward `limit`, so once a
    // member survives the window every later member inside the window does
    // too; scan with a bounded miss budget before giving up.
    long long misses = 0;
    for (long long i = 0; ch->count < 0 || i < ch->count; ++i) {
      Interval m = ch->member(i);
      if (keeps(m)) {
        out.push_back(m);
        misses = 0;
        if (out.size() == n) break;
      } else if (!out.empty() || ++misses > opts.prefix_depth + 64) {
        if (out.empty())
          throw UndecidableAtDepth("windowed chain enumeration found no member in " +
                                   std::to_string(misses) + " attempts");
        break;  // left the window again: no further member can return
      }
    }
    return out;
  }
  const auto& cg = std::get<CantorGapsFamily>(rep_);
  if (keeps(left_ray(cg)) && cg.include_rays) out.push_back(left_ray(cg));
  if (out.size() < n && cg.include_rays && keeps(right_ray(cg))) out.push_back(right_ray(cg));
  if (out.size() == n) return out;
  // Level-major walk over construction nodes; prune subtrees outside the
  // window. Progress is guaranteed whenever the window interior meets gaps.
  struct Node {
    Rational lo, hi;
    long long level;
  };
  Rational blo = cg.spec.lo.as_rational(), bhi = cg.spec.hi.as_rational();
  std::deque<Node> frontier{{blo, bhi, 0}};
  long long stalled = 0;
  while (!frontier.empty()) {
    if (++stalled > 4 * opts.cantor_depth)
      throw UndecidableAtDepth("windowed gap enumeration stalled at level " +
                               std::to_string(stalled));
    std::deque<Node> next;
    for (const Node& nd : frontier) {
      Rational len = nd.hi - nd.lo;
      Rational kept = cg.spec.kept_fraction(nd.level + 1).as_rational();
      Scalar glo = Scalar::exact(nd.lo + kept * len);
      Scalar ghi = Scalar::exact(nd.hi - kept * len);
      Interval gap =
          Interval::make(ExtReal(glo), cg.closed_members, ExtReal(ghi), cg.closed_members);
      if (keeps(gap)) {
        out.push_back(gap);
        stalled = 0;
        if (out.size() == n) return out;
      }
      auto admit = [&](Rational lo, Rational hi) {
        if (window_) {
          Interval node_int =
              Interval::open(ExtReal(Scalar::exact(lo)), ExtReal(Scalar::exact(hi)));
          if (!node_int.meets(*window_)) return;
        }
        next.push_back({std::move(lo), std::move(hi), nd.level + 1});
      };
      admit(nd.lo, glo.as_rational());
      admit(ghi.as_rational(), nd.hi);
    }
    frontier.swap(next);
  }
  return out;
}

std::vector<Interval> IntervalFamily::members(const Options& opts) const {
  if (!is_finite()) throw ConfigError("cannot enumerate all members of an unbounded family");
  std::size_t cap = 0;
  if (const auto* ex = std::get_if<ExplicitFamily>(&rep_))
    cap = ex->members.size();
  else
    cap = static_cast<std::size_t>(std::get<ChainFamily>(rep_).count);
  return prefix(cap, opts);
}

Interval IntervalFamily::hull() const {
  Interval raw = Interval::real_line();
  if (const auto* ex = std::get_if<ExplicitFamily>(&rep_)) {
    if (ex->members.empty()) throw ConfigError("empty family has no hull");
    ExtReal lo = ex->members.front().lo(), hi = ex->members.front().hi();
    bool lc = ex->members.front().lo_closed(), hc = ex->members.front().hi_closed();
    for (const Interval& m : ex->members) {
      if (m.lo() < lo || (m.lo() == lo && m.lo_closed())) {
        lo = m.lo();
        lc = m.lo_closed();
      }
      if (hi < m.hi() || (m.hi() == hi && m.hi_closed())) {
        hi = m.hi();
        hc = m.hi_closed();
      }
    }
    raw = Interval::make(lo, lc, hi, hc);
  } else if (const auto* ch = std::get_if<ChainFamily>(&rep_)) {
    ExtReal first(ch->breakpoint(0));
    ExtReal last = ch->count >= 0 ? ExtReal(ch->breakpoint(ch->count)) : ExtReal(ch->limit);
    raw = ch->ascending() ? Interval::open(first, last) : Interval::open(last, first);
  } else {
    const auto& cg = std::get<CantorGapsFamily>(rep_);
    raw = cg.include_rays ? Interval::real_line()
                          : Interval::open(ExtReal(cg.spec.lo), ExtReal(cg.spec.hi));
  }
  if (!window_) return raw;
  auto clipped = raw.intersect(*window_);
  if (!clipped) throw ConfigError("window excludes every member of the family");
  return *clipped;
}

std::optional<Interval> IntervalFamily::member_containing(const Scalar& x,
                                                          const Options& opts) const {
  auto wrap = [&](Interval m) -> std::optional<Interval> {
    if (!keeps(m)) return std::nullopt;
    return m;
  };
  if (const auto* ex = std::get_if<ExplicitFamily>(&rep_)) {
    for (const Interval& m : ex->members)
      if (m.contains(x) && keeps(m)) return m;
    return std::nullopt;
  }
  if (const auto* ch = std::get_if<ChainFamily>(&rep_)) {
    // Solve for the breakpoint slot around x, then verify exactly.
    Scalar gap = x - ch->limit;
    if (gap.is_zero() || (gap.sign() > 0) == ch->ascending()) return std::nullopt;
    long long k = 0;
    if (const auto* h = std::get_if<ChainFamily::Harmonic>(&ch->rule)) {
      Rational q = (ch->coef / gap).as_rational();  // k + offset, fractional
      boost::multiprecision::cpp_int fl =
          boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
      if (Rational(fl) > q) fl -= 1;  // floor for negative values
      k = fl.convert_to<long long>() - h->offset;
    } else {
      double t = std::log(std::abs(gap.dbl() / ch->coef.dbl())) /
                 std::log(std::get<ChainFamily::Geometric>(ch->rule).ratio.dbl());
      k = static_cast<long long>(std::floor(t));
    }
    for (long long cand = std::max(0LL, k - 2); cand <= k + 2; ++cand) {
      if (ch->count >= 0 && cand >= ch->count) break;
      Interval m = ch->member(cand);
      if (m.contains(x)) return wrap(m);
    }
    return std::nullopt;
  }
  const auto& cg = std::get<CantorGapsFamily>(rep_);
  CantorLocation loc = locate_point(cg.spec, x, opts);
  switch (loc.kind) {
    case CantorLocation::Kind::OutsideBase:
      if (!cg.include_rays) return std::nullopt;
      return wrap(x < cg.spec.lo ? left_ray(cg) : right_ray(cg));
    case CantorLocation::Kind::InGap:
      return wrap(cantor_gap_member(cg, *loc.gap));
    case CantorLocation::Kind::GapLeftEnd:
    case CantorLocation::Kind::GapRightEnd:
      if (!cg.closed_members) return std::nullopt;
      return wrap(cantor_gap_member(cg, *loc.gap));
    case CantorLocation::Kind::InLimitSet:
      if (cg.include_rays && cg.closed_members) {
        if (x == cg.spec.lo) return wrap(left_ray(cg));
        if (x == cg.spec.hi) return wrap(right_ray(cg));
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string IntervalFamily::str() const {
  std::ostringstream os;
  if (const auto* ex = std::get_if<ExplicitFamily>(&rep_)) {
    os << "explicit{";
    for (std::size_t i = 0; i < ex->members.size(); ++i)
      os << (i ? ", " : "") << ex->members[i].str();
    os << "}";
  } else if (const auto* ch = std::get_if<ChainFamily>(&rep_)) {
    os << "chain{limit=" << ch->limit.str() << ", coef=" << ch->coef.str();
    if (const auto* h = std::get_if<ChainFamily::Harmonic>(&ch->rule))
      os << ", harmonic offset=" << h->offset;
    else
      os << ", geometric ratio=" << std::get<ChainFamily::Geometric>(ch->rule).ratio.str();
    if (ch->count >= 0) os << ", count=" << ch->count;
    os << "}";
  } else {
    const auto& cg = std::get<CantorGapsFamily>(rep_);
    os << "gaps{" << cg.spec.str() << (cg.closed_members ? ", closed" : ", open")
       << (cg.include_rays ? ", rays" : "") << "}";
  }
  if (window_) os << " within " << window_->str();
  return os.str();
}

IntervalFamily explicit_family(std::vector<Interval> members) {
  return IntervalFamily(ExplicitFamily{std::move(members)});
}

}  // namespace effint
