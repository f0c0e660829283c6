#pragma once

#include <cstdint>

namespace effint {

// Knobs shared across the library. All comparisons that are not exact go
// through these; tests pin them so reported numbers stay stable.
struct Options {
  int cantor_depth = 40;     // staircase evaluation / set recursion depth
  int prefix_depth = 32;     // family members enumerated for verification
  double energy_tol = 1e-9;  // absolute tolerance on energy values
  double rel_tol = 1e-6;     // relative tolerance for value comparisons
  double quad_tol = 1e-9;    // adaptive quadrature absolute tolerance
  std::uint64_t seed = 0;    // sampling seed for property-style checks
};

inline const Options& default_options() {
  static const Options opts{};
  return opts;
}

}  // namespace effint
