#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "effint/errors.hpp"
#include "effint/family.hpp"

namespace effint {

// One entry of a disjoint interval collection: a standalone interval or a
// whole generated family.
using SetUnit = std::variant<Interval, IntervalFamily>;

Interval unit_hull(const SetUnit& u);
bool unit_covers(const SetUnit& u, const Scalar& x, const Options& opts);
// The member of the unit containing x, if any.
std::optional<Interval> unit_member_containing(const SetUnit& u, const Scalar& x,
                                               const Options& opts);

enum class ResidualClass { Empty, Countable, UncountableNowhereDense, HasInterior };
const char* residual_name(ResidualClass c);

struct ResidualReport {
  ResidualClass cls = ResidualClass::Empty;
  // A rational point in the uncovered interior, when cls == HasInterior.
  std::optional<Scalar> interior_witness;
};

// Classifies [u, v] minus the union of all members of all units. Units must
// be pairwise disjoint collections (overlaps raise ConfigError when the
// sweep detects them).
ResidualReport residual_set(const Scalar& u, const Scalar& v, const std::vector<SetUnit>& units,
                            const Options& opts);

// True iff every member of `fine` is contained in a single member of
// `coarse`. False is decisive (a witness member fails); Unknown means the
// finite-prefix check passed but no generator rule covers the tail.
Tri coarser_than(const std::vector<SetUnit>& coarse, const std::vector<SetUnit>& fine,
                 const Options& opts);

// Pairwise disjointness of all members across all units.
Tri units_disjoint(const std::vector<SetUnit>& units, const Options& opts);

// Contiguous run of chain member indices surviving a window.
struct ChainRun {
  bool empty = true;
  long long first = 0;
  long long last = -1;  // -1: unbounded toward the limit
};
ChainRun chain_kept_run(const ChainFamily& ch, const std::optional<Interval>& w);
// Open hull of the kept members; nullopt when the run is empty.
std::optional<Interval> chain_kept_span(const ChainFamily& ch,
                                        const std::optional<Interval>& w);

// Cover description of a gap family: plain member intervals (rays) plus a
// carved open base region in which every gap is a kept member.
struct FamilyCover {
  std::vector<Interval> solid;
  std::optional<Interval> region;
};
FamilyCover cantor_cover(const CantorGapsFamily& cg, const IntervalFamily& fam,
                         const Options& opts);

}  // namespace effint
