#pragma once

#include <functional>

namespace effint {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
};

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol);

}  // namespace effint
