#pragma once

#include <vector>

#include "effint/measure.hpp"
#include "effint/setops.hpp"

namespace effint {

// Restriction of a measure to a plain interval or an interval family.
// Family case: pieces are re-expressed so every output piece lives inside the
// family; throws UndecidableDecomposition when the piece structure cannot be
// cut along the members.
ScaleMeasure restrict_to_unit(const ScaleMeasure& nu, const SetUnit& u, const Options& opts);

ScaleMeasure restrict_to_family(const ScaleMeasure& nu, const IntervalFamily& F,
                                const Options& opts);

// Mass of a plain interval `w0` landing on family F: members straddling a
// finite edge of w0 are peeled off as plain cuts, the remainder becomes a
// windowed copy of the family. After the peel no member pokes out of the
// remaining window, so the kept members tile it up to the family's trap set.
void family_window_part(const IntervalFamily& F, const Interval& w0, const DensityTag& tag,
                        ScaleMeasure& out, const Options& opts);

// Brackets jointly covering the members of a family up to its trap set:
// explicit members verbatim, a chain's kept span (members tile it minus the
// breakpoints), a gap family's carved region plus kept rays. `uncovered` is
// the positive trap length inside the brackets (fat specs only).
struct FamilyBrackets {
  std::vector<Interval> brackets;
  double uncovered = 0.0;
  double uncovered_err = 0.0;
};

FamilyBrackets family_cover_brackets(const IntervalFamily& F, const Options& opts);

}  // namespace effint
