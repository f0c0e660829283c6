#include "effint/quadrature.hpp"

#include <cmath>

namespace effint {

namespace {

double simpson(double h, double fa, double fm, double fb) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double tol, int depth, double& err) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = simpson(m - a, fa, flm, fm);
  double right = simpson(b - m, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, err) +
         recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, err);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol) {
  QuadResult out;
  if (!(a < b)) return out;
  double fa = f(a);
  double fb = f(b);
  double fm = f(0.5 * (a + b));
  double whole = simpson(b - a, fa, fm, fb);
  out.value = recurse(f, a, b, fa, fm, fb, whole, tol, 48, out.err);
  return out;
}

}  // namespace effint
