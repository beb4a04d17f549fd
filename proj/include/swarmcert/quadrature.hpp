#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace swarmcert {

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with relative tolerance. Signed: swapping
/// the endpoints negates the result.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-10, int max_depth = 48) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("adaptive_simpson: endpoints must be finite");
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, rel_tol, max_depth);
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
  return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Same, but forces subdivision at the given interior points. Useful when
/// the integrand has kinks at known locations (tabulated kernels).
template <class F>
double adaptive_simpson_split(F&& f, double a, double b, std::span<const double> interior,
                              double rel_tol = 1e-10, int max_depth = 48) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson_split(f, b, a, interior, rel_tol, max_depth);
  std::vector<double> cuts{a};
  for (double c : interior)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    total += adaptive_simpson(f, cuts[k], cuts[k + 1], rel_tol, max_depth);
  return total;
}

}  // namespace swarmcert
