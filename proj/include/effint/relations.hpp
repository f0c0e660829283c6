#pragma once

#include <string>
#include <vector>

#include "effint/measure.hpp"

namespace effint {

// How one scale measure sits relative to another: density identically 0/1,
// absolutely continuous with a general density, mutually singular, a proper
// mix of a dominated and a singular part, or not classifiable at the
// configured depth.
enum class RnKind { ZeroOne, ACGeneral, Singular, Mixed, Unknown };
const char* rn_kind_name(RnKind k);

// One patch of the density d(nu)/d(mu): on `support` the density has the
// `ratio` form; `base` is the dominating piece of mu cut down to the same
// patch, kept so integrals against mu can be taken later.
struct RatioPiece {
  OpenSupport support;
  DensityTag ratio;
  Piece base;
};

struct RnResult {
  RnKind kind = RnKind::Unknown;
  std::vector<RatioPiece> ratio;  // density of the dominated part
  ScaleMeasure abs_part;          // nu-pieces mu dominates
  ScaleMeasure singular;          // nu-pieces mu cannot see
  std::string note;               // reason when kind == Unknown
};

RnResult rn_relation(const ScaleMeasure& nu, const ScaleMeasure& mu, const Options& opts);

struct Decomposition {
  ScaleMeasure abs_part;
  std::vector<RatioPiece> density;
  ScaleMeasure singular;
};
// Splits nu into a mu-dominated part (with density) and a mu-singular part.
// Throws UndecidableDecomposition when the relation cannot be classified.
Decomposition lebesgue_decompose(const ScaleMeasure& nu, const ScaleMeasure& mu,
                                 const Options& opts);

struct L2Report {
  bool dominated = false;  // no singular nu-mass inside the bracket
  ExtReal square_mass;     // integral of (dnu/dmu)^2 against mu over the bracket
  double err = 0.0;
  bool ok() const { return dominated && square_mass.is_finite(); }
};
// Checks that dnu/dmu is square-integrable against mu over the bracket.
// Throws UndecidableDecomposition when the pair cannot be classified and
// TailBoundUnavailable when a member series cannot be certified.
L2Report l2loc_density_check(const ScaleMeasure& nu, const ScaleMeasure& mu,
                             const Interval& bracket, const Options& opts);

}  // namespace effint
