#include "effint/cantor.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <vector>

#include "effint/errors.hpp"

namespace effint {

CantorSpec CantorSpec::standard() {
  return CantorSpec{Scalar(0), Scalar(1), ConstantRatio{Scalar::rat(1, 3)}};
}

Scalar CantorSpec::gap_fraction(long long level) const {
  assert(level >= 1);
  if (const auto* c = std::get_if<ConstantRatio>(&rule))
    return Scalar(1) - Scalar(2) * c->r;
  const auto& g = std::get<GeometricGaps>(rule);
  return g.gamma0 * g.q.pow_int(level - 1);
}

Scalar CantorSpec::kept_fraction(long long level) const {
  return (Scalar(1) - gap_fraction(level)) / Scalar(2);
}

std::string CantorSpec::str() const {
  std::string s = "cantor[" + lo.str() + "," + hi.str() + ";";
  if (const auto* c = std::get_if<ConstantRatio>(&rule))
    s += "r=" + c->r.str();
  else {
    const auto& g = std::get<GeometricGaps>(rule);
    s += "gaps=" + g.gamma0.str() + "*" + g.q.str() + "^k";
  }
  return s + "]";
}

GapRef gap_by_index(std::uint64_t index) {
  long long level = 1;
  std::uint64_t first = 0;  // index of the first gap of this level
  std::uint64_t count = 1;
  while (index >= first + count) {
    first += count;
    count <<= 1;
    ++level;
  }
  return GapRef{level, index - first};
}

std::uint64_t gap_index(const GapRef& ref) {
  return ((std::uint64_t{1} << (ref.level - 1)) - 1) + ref.pos;
}

namespace {

struct Node {
  Rational lo, hi;
  long long level = 0;
  Rational len() const { return hi - lo; }
};

// Kept/gap fractions as exact rationals for levels 1..n, cached.
class Fractions {
 public:
  explicit Fractions(const CantorSpec& spec) : spec_(spec) {}
  const Rational& kept(long long level) {
    grow(level);
    return kept_[static_cast<size_t>(level - 1)];
  }
  const Rational& gap(long long level) {
    grow(level);
    return gap_[static_cast<size_t>(level - 1)];
  }

 private:
  void grow(long long level) {
    while (static_cast<long long>(kept_.size()) < level) {
      long long k = static_cast<long long>(kept_.size()) + 1;
      Rational g = spec_.gap_fraction(k).as_rational();
      gap_.push_back(g);
      kept_.push_back((Rational(1) - g) / 2);
    }
  }
  const CantorSpec& spec_;
  std::vector<Rational> kept_, gap_;
};

struct Split {
  Node left, right;
  Rational gap_lo, gap_hi;
};

Split split(const Node& n, Fractions& fr) {
  const Rational& rho = fr.kept(n.level + 1);
  Rational l = n.len();
  Split s;
  s.left = Node{n.lo, n.lo + rho * l, n.level + 1};
  s.right = Node{n.hi - rho * l, n.hi, n.level + 1};
  s.gap_lo = s.left.hi;
  s.gap_hi = s.right.lo;
  return s;
}

}  // namespace

Scalar node_length(const CantorSpec& spec, long long level) {
  Scalar len = spec.base_length();
  for (long long k = 1; k <= level; ++k) len = len * spec.kept_fraction(k);
  return len;
}

Scalar gap_length(const CantorSpec& spec, long long level) {
  return spec.gap_fraction(level) * node_length(spec, level - 1);
}

std::pair<Scalar, Scalar> gap_bounds(const CantorSpec& spec, const GapRef& ref) {
  Fractions fr(spec);
  Node n{spec.lo.as_rational(), spec.hi.as_rational(), 0};
  for (long long k = ref.level - 1; k >= 1; --k) {
    bool right = (ref.pos >> (k - 1)) & 1u;
    Split s = split(n, fr);
    n = right ? s.right : s.left;
  }
  Split s = split(n, fr);
  return {Scalar::exact(s.gap_lo), Scalar::exact(s.gap_hi)};
}

CantorLocation locate_point(const CantorSpec& spec, const Scalar& x, const Options& opts) {
  Rational lo = spec.lo.as_rational(), hi = spec.hi.as_rational();
  Rational xr = x.as_rational();
  if (xr < lo || xr > hi) return {CantorLocation::Kind::OutsideBase, std::nullopt};
  if (xr == lo || xr == hi) return {CantorLocation::Kind::InLimitSet, std::nullopt};

  // Work with the relative position inside the current kept interval. For a
  // level-independent rule a repeated position proves the descent never hits
  // a gap, i.e. the point is in the limit set.
  Rational t = (xr - lo) / (hi - lo);
  bool homogeneous = spec.limit_is_null();
  std::map<Rational, long long> seen;
  std::uint64_t pos = 0;
  for (long long level = 1; level <= opts.cantor_depth; ++level) {
    if (t == 0 || t == 1) return {CantorLocation::Kind::InLimitSet, std::nullopt};
    if (homogeneous) {
      auto [it, fresh] = seen.emplace(t, level);
      if (!fresh) return {CantorLocation::Kind::InLimitSet, std::nullopt};
    }
    Rational rho = spec.kept_fraction(level).as_rational();
    GapRef ref{level, pos};
    if (t < rho) {
      t = t / rho;
      pos <<= 1;
    } else if (t > Rational(1) - rho) {
      t = (t - (Rational(1) - rho)) / rho;
      pos = (pos << 1) | 1u;
    } else if (t == rho) {
      return {CantorLocation::Kind::GapLeftEnd, ref};
    } else if (t == Rational(1) - rho) {
      return {CantorLocation::Kind::GapRightEnd, ref};
    } else {
      return {CantorLocation::Kind::InGap, ref};
    }
  }
  throw UndecidableAtDepth("point location unresolved at depth " +
                           std::to_string(opts.cantor_depth));
}

StairValue staircase_cdf(const CantorSpec& spec, const Scalar& x, const Options& opts) {
  Rational lo = spec.lo.as_rational(), hi = spec.hi.as_rational();
  Rational xr = x.as_rational();
  if (xr <= lo) return {Scalar(0), 0.0, true};
  if (xr >= hi) return {Scalar(1), 0.0, true};

  Rational t = (xr - lo) / (hi - lo);
  bool homogeneous = spec.limit_is_null();
  std::map<Rational, long long> seen;
  std::vector<int> bits;  // bits[i] = 1 when the descent went right at level i+1
  Rational prefix = 0;    // sum of bits[i] * 2^-(i+1)
  Rational scale = 1;     // 2^-level
  for (long long level = 1; level <= opts.cantor_depth; ++level) {
    if (t == 0) return {Scalar::exact(prefix), 0.0, true};
    if (t == 1) return {Scalar::exact(prefix + scale), 0.0, true};
    if (homogeneous) {
      auto [it, fresh] = seen.emplace(t, level);
      if (!fresh) {
        // Bits repeat with period level - it->second from position it->second.
        long long s = it->second - 1;  // repeating block starts at bits[s]
        long long c = level - it->second;
        Rational block = 0, w = Rational(1, 2);
        for (long long j = 0; j < c; ++j) {
          if (bits[static_cast<size_t>(s + j)]) block += w;
          w /= 2;
        }
        Rational head = 0;
        w = Rational(1, 2);
        for (long long j = 0; j < s; ++j) {
          if (bits[static_cast<size_t>(j)]) head += w;
          w /= 2;
        }
        Rational two_c = 1;
        for (long long j = 0; j < c; ++j) two_c *= 2;
        Rational tail = block / (Rational(1) - Rational(1) / two_c);
        Rational pow_s = 1;
        for (long long j = 0; j < s; ++j) pow_s /= 2;
        return {Scalar::exact(head + pow_s * tail), 0.0, true};
      }
    }
    Rational rho = spec.kept_fraction(level).as_rational();
    scale /= 2;
    if (t < rho) {
      t = t / rho;
      bits.push_back(0);
    } else if (t > Rational(1) - rho) {
      t = (t - (Rational(1) - rho)) / rho;
      prefix += scale;
      bits.push_back(1);
    } else {
      // Inside or on the boundary of the gap: plateau value.
      return {Scalar::exact(prefix + scale), 0.0, true};
    }
  }
  double err = std::ldexp(1.0, -static_cast<int>(opts.cantor_depth));
  return {Scalar::exact(prefix), err, false};
}

namespace {

double tail_product(const CantorSpec& spec, long long level) {
  // prod_{k > level} (1 - gap_fraction(k)); 0 for the null case.
  if (spec.limit_is_null()) return 0.0;
  const auto& g = std::get<CantorSpec::GeometricGaps>(spec.rule);
  double gamma = g.gamma0.dbl(), q = g.q.dbl();
  double log_sum = 0.0;
  double gk = gamma * std::pow(q, static_cast<double>(level));
  while (gk > 1e-18) {
    log_sum += std::log1p(-gk);
    gk *= q;
  }
  return std::exp(log_sum);
}

enum class Fit { Disjoint, Contained, Touch, Straddle };

Fit fit(const Node& n, const Rational& u, const Rational& v) {
  if (n.hi < u || n.lo > v) return Fit::Disjoint;
  if (u <= n.lo && n.hi <= v) return Fit::Contained;
  // Single shared endpoint: the overlap is one point and stays one point
  // under every further split, so never descend into it.
  if (n.hi == u || n.lo == v) return Fit::Touch;
  return Fit::Straddle;
}

LimitOverlap join(LimitOverlap a, LimitOverlap b) {
  if (a == LimitOverlap::Uncountable || b == LimitOverlap::Uncountable)
    return LimitOverlap::Uncountable;
  if (a == LimitOverlap::Empty) return b;
  if (b == LimitOverlap::Empty) return a;
  return LimitOverlap::FinitelyMany;
}

}  // namespace

// Breadth-first so that a decisive Uncountable on one side is found even
// when the opposite bracket endpoint never resolves.
LimitOverlap limit_overlap(const CantorSpec& spec, const Scalar& u, const Scalar& v,
                           const Options& opts) {
  Rational ur = u.as_rational(), vr = v.as_rational();
  assert(ur <= vr);
  Fractions fr(spec);
  LimitOverlap acc = LimitOverlap::Empty;
  std::vector<Node> straddling;
  auto classify = [&](const Node& n) -> bool {  // true: done (uncountable)
    switch (fit(n, ur, vr)) {
      case Fit::Disjoint:
        return false;
      case Fit::Touch:
        // The shared endpoint is a limit point inside the bracket.
        acc = join(acc, LimitOverlap::FinitelyMany);
        return false;
      case Fit::Contained:
        return true;
      case Fit::Straddle:
        straddling.push_back(n);
        return false;
    }
    return false;
  };
  Node base{spec.lo.as_rational(), spec.hi.as_rational(), 0};
  if (classify(base)) return LimitOverlap::Uncountable;
  for (long long level = 1; level <= opts.cantor_depth && !straddling.empty(); ++level) {
    std::vector<Node> todo;
    todo.swap(straddling);
    for (const Node& n : todo) {
      Split s = split(n, fr);
      if (classify(s.left) || classify(s.right)) return LimitOverlap::Uncountable;
    }
  }
  if (!straddling.empty())
    throw UndecidableAtDepth("limit-set overlap unresolved at depth " +
                             std::to_string(opts.cantor_depth));
  return acc;
}

namespace {

Approx measure_walk(const CantorSpec& spec, Fractions& fr, const Node& n, const Rational& u,
                    const Rational& v, long long depth) {
  switch (fit(n, u, v)) {
    case Fit::Disjoint:
    case Fit::Touch:
      return {};
    case Fit::Contained:
      return {static_cast<double>(n.len()) * tail_product(spec, n.level), 0.0};
    case Fit::Straddle:
      break;
  }
  if (n.level >= depth) {
    // Unresolved boundary node: its whole limit mass is the uncertainty.
    return {0.0, static_cast<double>(n.len()) * tail_product(spec, n.level)};
  }
  Split s = split(n, fr);
  Approx a = measure_walk(spec, fr, s.left, u, v, depth);
  Approx b = measure_walk(spec, fr, s.right, u, v, depth);
  return {a.value + b.value, a.err + b.err};
}

}  // namespace

Approx limit_measure_between(const CantorSpec& spec, const Scalar& u, const Scalar& v,
                             const Options& opts) {
  if (spec.limit_is_null()) return {};
  Rational ur = u.as_rational(), vr = v.as_rational();
  assert(ur <= vr);
  Fractions fr(spec);
  Node base{spec.lo.as_rational(), spec.hi.as_rational(), 0};
  return measure_walk(spec, fr, base, ur, vr, opts.cantor_depth);
}

Approx limit_measure_total(const CantorSpec& spec, const Options& opts) {
  (void)opts;
  if (spec.limit_is_null()) return {};
  return {spec.base_length().dbl() * tail_product(spec, 0), 0.0};
}

namespace {

// Sum over all gaps of a full subtree of |gap|^m; diverges when m == 0.
GapSum subtree_gap_sum(const CantorSpec& spec, const Node& n, int m) {
  if (m == 0) return {0.0, 0.0, true};
  double len = static_cast<double>(n.len());
  if (m == 1)
    return {len - len * tail_product(spec, n.level), 0.0, false};
  if (spec.limit_is_null()) {
    const auto& c = std::get<CantorSpec::ConstantRatio>(spec.rule);
    double r = c.r.dbl(), gamma = 1.0 - 2.0 * r;
    double first = std::pow(gamma * len, m);
    return {first / (1.0 - 2.0 * std::pow(r, m)), 0.0, false};
  }
  // Per-level loop; terms decay at least like 2^{(1-m) d}.
  double total = 0.0, sub_len = len, count = 1.0;
  const auto& g = std::get<CantorSpec::GeometricGaps>(spec.rule);
  double q = g.q.dbl();
  for (long long d = 1; d <= 4000; ++d) {
    double gamma = g.gamma0.dbl() * std::pow(q, static_cast<double>(n.level + d - 1));
    double gap = gamma * sub_len;
    double term = count * std::pow(gap, m);
    total += term;
    if (term < 1e-18 * (total + 1e-300) && d > 8) return {total, term, false};
    sub_len *= (1.0 - gamma) / 2.0;
    count *= 2.0;
  }
  return {total, 1e-15, false};
}

GapSum add(GapSum a, GapSum b) {
  return {a.value + b.value, a.err + b.err, a.diverges || b.diverges};
}

GapSum gap_sum_walk(const CantorSpec& spec, Fractions& fr, const Node& n, const Rational& u,
                    const Rational& v, int alpha, int beta, long long depth) {
  switch (fit(n, u, v)) {
    case Fit::Disjoint:
    case Fit::Touch:
      return {};
    case Fit::Contained:
      return subtree_gap_sum(spec, n, alpha + beta);
    case Fit::Straddle:
      break;
  }
  if (n.level >= depth) {
    GapSum bound = subtree_gap_sum(spec, n, alpha + beta);
    return {0.0, bound.diverges ? 0.0 : bound.value + bound.err, bound.diverges};
  }
  Split s = split(n, fr);
  GapSum res{};
  Rational glo = std::max(s.gap_lo, u), ghi = std::min(s.gap_hi, v);
  if (glo < ghi) {
    double g = static_cast<double>(s.gap_hi - s.gap_lo);
    double cut = static_cast<double>(ghi - glo);
    if (beta == 0) {
      if (u <= s.gap_lo && s.gap_hi <= v) res.value += std::pow(g, alpha);
    } else {
      res.value += std::pow(g, alpha) * std::pow(cut, beta);
    }
  }
  res = add(res, gap_sum_walk(spec, fr, s.left, u, v, alpha, beta, depth));
  return add(res, gap_sum_walk(spec, fr, s.right, u, v, alpha, beta, depth));
}

}  // namespace

GapSum gap_power_sum(const CantorSpec& spec, const Scalar& u, const Scalar& v, int alpha,
                     int beta, const Options& opts) {
  assert(alpha + beta >= 0 && beta >= 0);
  Rational ur = u.as_rational(), vr = v.as_rational();
  if (ur > vr) return {};
  Fractions fr(spec);
  Node base{spec.lo.as_rational(), spec.hi.as_rational(), 0};
  return gap_sum_walk(spec, fr, base, ur, vr, alpha, beta, opts.cantor_depth);
}

bool bracket_contains_node(const CantorSpec& spec, const Scalar& u, const Scalar& v,
                           const Options& opts) {
  Rational ur = u.as_rational(), vr = v.as_rational();
  if (ur > vr) return false;
  Fractions fr(spec);
  std::vector<Node> straddling;
  auto classify = [&](const Node& n) -> bool {
    switch (fit(n, ur, vr)) {
      case Fit::Disjoint:
      case Fit::Touch:
        return false;
      case Fit::Contained:
        return true;
      case Fit::Straddle:
        straddling.push_back(n);
        return false;
    }
    return false;
  };
  Node base{spec.lo.as_rational(), spec.hi.as_rational(), 0};
  if (classify(base)) return true;
  for (long long level = 1; level <= opts.cantor_depth && !straddling.empty(); ++level) {
    std::vector<Node> todo;
    todo.swap(straddling);
    for (const Node& n : todo) {
      Split s = split(n, fr);
      if (classify(s.left) || classify(s.right)) return true;
    }
  }
  if (!straddling.empty())
    throw UndecidableAtDepth("kept-interval containment unresolved at depth " +
                             std::to_string(opts.cantor_depth));
  return false;
}

}  // namespace effint
