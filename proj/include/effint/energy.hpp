#pragma once

#include <string>
#include <vector>

#include "effint/system.hpp"
#include "effint/testfn.hpp"

namespace effint {

struct EnergyReport {
  ExtReal value;     // half the summed square variation; may be +inf
  double err = 0.0;  // bound on the numeric error of `value`
  std::vector<std::string> warnings;
};

// Energy of u in the form the system represents: half the sum over pairs of
// the square variation of u measured against the pair scale. Exact rational
// when every contribution has a closed form. Throws NotAbsolutelyContinuous
// when u varies where no pair scale can see, UndecidableDecomposition /
// TailBoundUnavailable when a comparison cannot be certified, ConfigError on
// combinations outside the representable vocabulary. Warnings flag nonzero
// values at absorbing endpoints.
EnergyReport energy(const EffectiveSystem& sys, const TestFunction& u, double tol,
                    const Options& opts);

}  // namespace effint
