#pragma once

#include <optional>
#include <string>
#include <vector>

#include "effint/system.hpp"

namespace effint {

// Outcome of the subspace test. The verdict is the conjunction of the
// applicable conditions: unknown only when no condition fails outright and
// at least one could not be settled at the configured depth.
struct SubspaceReport {
  Tri cond_coarser = Tri::Unknown;
  Tri cond_scale = Tri::Unknown;
  std::optional<Tri> cond_killing;  // present only when either side kills
  std::optional<Interval> witness;  // a parent member no candidate member holds
  std::string scale_note;           // relation kind when cond_scale is not true
  std::vector<BoundaryEntry> candidate_boundary;
  std::vector<BoundaryEntry> parent_boundary;

  Tri verdict() const;
};

// Decides whether `candidate` generates a regular Dirichlet subspace of
// `parent`: every parent interval must sit inside one candidate interval,
// the candidate scale must be absolutely continuous against the parent
// scale with {0,1} density, and killing measures must agree piece for
// piece. Both systems must share the state interval and speed measure.
SubspaceReport check_subspace(const EffectiveSystem& candidate, const EffectiveSystem& parent,
                              const Options& opts);

// Equality of two systems: the interval collections coincide as sets and
// the total scale measures are piece-identical. Unknown when infinite
// families agree on every probed member but differ in representation.
Tri check_equality(const EffectiveSystem& a, const EffectiveSystem& b, const Options& opts);

}  // namespace effint
