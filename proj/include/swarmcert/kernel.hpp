#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "swarmcert/types.hpp"

namespace swarmcert {

enum class KernelFamily { constant, power_law, tabulated };

/// Pairwise influence strength phi(r) >= 0 as a function of the Euclidean
/// gap r between two agents. Strict positivity on the queried range is a
/// construction invariant; it keeps normalized weights well posed and is
/// what the convergence guarantees rest on.
///
/// Families:
///   constant   phi(r) = c
///   power_law  phi(r) = c / (1 + r)^beta, monotonically non-increasing
///   tabulated  linear interpolation between strictly increasing
///              breakpoints; clamped to the first/last value outside the
///              tabulated range
class InteractionKernel {
 public:
  static InteractionKernel constant(double c) {
    require_positive_finite(c, "constant kernel value");
    InteractionKernel k;
    k.family_ = KernelFamily::constant;
    k.c_ = c;
    return k;
  }

  /// phi(r) = c / (1 + r)^beta with c > 0, beta >= 0.
  static InteractionKernel power_law(double c, double beta) {
    require_positive_finite(c, "power-law scale");
    if (!(beta >= 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("power-law exponent must be >= 0");
    InteractionKernel k;
    k.family_ = KernelFamily::power_law;
    k.c_ = c;
    k.beta_ = beta;
    return k;
  }

  static InteractionKernel tabulated(std::vector<double> breakpoints,
                                     std::vector<double> values) {
    if (breakpoints.empty() || breakpoints.size() != values.size())
      throw std::invalid_argument("tabulated kernel: breakpoints/values size mismatch");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (!std::isfinite(breakpoints[i]) || breakpoints[i] < 0.0)
        throw std::invalid_argument("tabulated kernel: breakpoints must be finite and >= 0");
      if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
        throw std::invalid_argument("tabulated kernel: breakpoints must be strictly increasing");
      if (!(values[i] > 0.0) || !std::isfinite(values[i]))
        throw std::invalid_argument("tabulated kernel: values must be strictly positive");
    }
    InteractionKernel k;
    k.family_ = KernelFamily::tabulated;
    k.breaks_ = std::move(breakpoints);
    k.vals_ = std::move(values);
    return k;
  }

  KernelFamily family() const { return family_; }
  double scale() const { return c_; }
  double exponent() const { return beta_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return vals_; }

  /// Advisory metadata only; Lipschitz continuity of user-supplied tables
  /// is a caller contract, not enforced here.
  std::optional<double> lipschitz_hint;

  bool non_increasing() const {
    switch (family_) {
      case KernelFamily::constant:
        return true;
      case KernelFamily::power_law:
        return true;  // beta >= 0 by construction
      case KernelFamily::tabulated:
        for (std::size_t i = 1; i < vals_.size(); ++i)
          if (vals_[i] > vals_[i - 1]) return false;
        return true;
    }
    return false;
  }

 private:
  InteractionKernel() = default;

  static void require_positive_finite(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }

  KernelFamily family_ = KernelFamily::constant;
  double c_ = 1.0;
  double beta_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> vals_;
};

/// Evaluate phi(r). Rejects negative or non-finite gaps.
inline double phi_eval(const InteractionKernel& kernel, double r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::invalid_argument("phi_eval: gap must be finite and >= 0");
  switch (kernel.family()) {
    case KernelFamily::constant:
      return kernel.scale();
    case KernelFamily::power_law:
      return kernel.scale() / std::pow(1.0 + r, kernel.exponent());
    case KernelFamily::tabulated: {
      const auto& b = kernel.breakpoints();
      const auto& v = kernel.values();
      if (r <= b.front()) return v.front();
      if (r >= b.back()) return v.back();
      const auto it = std::upper_bound(b.begin(), b.end(), r);
      const std::size_t hi = static_cast<std::size_t>(it - b.begin());
      const std::size_t lo = hi - 1;
      const double w = (r - b[lo]) / (b[hi] - b[lo]);
      return v[lo] + w * (v[hi] - v[lo]);
    }
  }
  throw std::logic_error("phi_eval: unknown kernel family");
}

/// Extrema of phi over [0, diameter0] together with the scaling-adjusted
/// interaction bounds K_min, K_max used by every rate guarantee.
struct KernelBounds {
  double phi_min = 0.0;
  double phi_max = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
};

/// Exact extrema of phi over [0, diameter0]. Constant and power-law
/// kernels attain them at the interval endpoints; tabulated kernels are
/// piecewise linear, so scanning breakpoints plus endpoints is exact.
inline KernelBounds kernel_bounds(const InteractionKernel& kernel, ScalingMode scaling,
                                  double diameter0) {
  if (!(diameter0 >= 0.0) || !std::isfinite(diameter0))
    throw std::invalid_argument("kernel_bounds: diameter0 must be finite and >= 0");

  KernelBounds out;
  switch (kernel.family()) {
    case KernelFamily::constant:
      out.phi_min = out.phi_max = kernel.scale();
      break;
    case KernelFamily::power_law:
      out.phi_max = phi_eval(kernel, 0.0);
      out.phi_min = phi_eval(kernel, diameter0);
      break;
    case KernelFamily::tabulated: {
      double lo = phi_eval(kernel, 0.0);
      double hi = lo;
      const auto consider = [&](double value) {
        lo = std::min(lo, value);
        hi = std::max(hi, value);
      };
      consider(phi_eval(kernel, diameter0));
      for (double b : kernel.breakpoints())
        if (b > 0.0 && b < diameter0) consider(phi_eval(kernel, b));
      out.phi_min = lo;
      out.phi_max = hi;
      break;
    }
  }

  if (scaling == ScalingMode::fixed) {
    out.k_min = out.phi_min;
    out.k_max = out.phi_max;
  } else {
    out.k_min = out.phi_min / out.phi_max;
    out.k_max = out.phi_max / out.phi_min;
  }
  return out;
}

namespace detail {

/// Symmetric matrix of phi(|x_i - x_j|); the diagonal holds phi(0).
inline std::vector<double> pairwise_phi(const InteractionKernel& kernel,
                                        const StateMatrix& positions) {
  const std::size_t n = positions.rows();
  std::vector<double> phi(n * n, 0.0);
  const double phi0 = phi_eval(kernel, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i * n + i] = phi0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = row_gap_norm(positions, i, j);
      if (!std::isfinite(gap))
        throw simulation_error("non-finite pairwise gap (state blow-up)");
      const double value = phi_eval(kernel, gap);
      phi[i * n + j] = value;
      phi[j * n + i] = value;
    }
  }
  return phi;
}

inline std::vector<double> lambda_from_phi(ScalingMode scaling,
                                           const std::vector<double>& phi,
                                           std::size_t n) {
  std::vector<double> lambda(n, 1.0);
  if (scaling == ScalingMode::normalized) {
    for (std::size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < n; ++j) denom += phi[i * n + j];
      lambda[i] = static_cast<double>(n) / denom;  // phi > 0 keeps denom > 0
    }
  }
  return lambda;
}

}  // namespace detail

/// Per-agent scaling weights. Fixed scaling is identically one; normalized
/// scaling is lambda_i = N / sum_j phi(|x_i - x_j|), with the j = i term
/// contributing phi(0) to the denominator.
inline std::vector<double> lambda_weights(const InteractionKernel& kernel, ScalingMode scaling,
                                          const StateMatrix& positions) {
  const auto phi = detail::pairwise_phi(kernel, positions);
  return detail::lambda_from_phi(scaling, phi, positions.rows());
}

}  // namespace swarmcert
