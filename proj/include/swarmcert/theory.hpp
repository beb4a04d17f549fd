#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "swarmcert/kernel.hpp"
#include "swarmcert/quadrature.hpp"
#include "swarmcert/types.hpp"

namespace swarmcert {

/// Per-window contraction data for the diameter of a first-order run.
///
///   gamma_tilde          bare contraction coefficient, always in (0, 1/2)
///   gamma_prime_per_unit gamma' divided by the initial spread beta - alpha
///   eta                  1 under per-link excitation, 2 under scrambling
///   gamma                exp(-eta K_max T) * gamma_tilde, in (0, 1);
///                        the certified per-window diameter shrinkage
struct ContractionCoefficients {
  double gamma_tilde = 0.0;
  double gamma_prime_per_unit = 0.0;
  int eta = 1;
  double gamma = 0.0;
};

namespace detail {

inline void check_rate_inputs(int n_agents, double window, double service, double k_min,
                              double k_max) {
  if (n_agents <= 0) throw std::invalid_argument("rate inputs: n_agents must be positive");
  if (!(window > 0.0) || !std::isfinite(window))
    throw std::invalid_argument("rate inputs: window must be positive");
  if (!(service > 0.0) || !std::isfinite(service))
    throw std::invalid_argument("rate inputs: service must be positive");
  if (service > window) throw std::invalid_argument("rate inputs: service cannot exceed window");
  if (!(k_min > 0.0) || !(k_max > 0.0) || !std::isfinite(k_min) || !std::isfinite(k_max))
    throw std::invalid_argument("rate inputs: interaction bounds must be positive");
}

}  // namespace detail

/// Bare contraction coefficient.
///
///   PE : mu K_min / (N (1 + K_max T) + 2 mu K_min)
///   ISC: mu K_min / (2 (N (1 + K_max T) + mu K_min))
///
/// Both lie strictly inside (0, 1/2) for admissible parameters.
inline double gamma_tilde(Condition condition, int n_agents, double window, double service,
                          double k_min, double k_max) {
  detail::check_rate_inputs(n_agents, window, service, k_min, k_max);
  const double n = static_cast<double>(n_agents);
  const double core = n * (1.0 + k_max * window);
  if (condition == Condition::pe)
    return service * k_min / (core + 2.0 * service * k_min);
  return service * k_min / (2.0 * (core + service * k_min));
}

inline ContractionCoefficients contraction_factor(Condition condition, int n_agents,
                                                  double window, double service, double k_min,
                                                  double k_max) {
  ContractionCoefficients out;
  out.gamma_tilde = gamma_tilde(condition, n_agents, window, service, k_min, k_max);
  out.eta = (condition == Condition::pe) ? 1 : 2;
  const double decay = std::exp(-k_max * window);
  out.gamma_prime_per_unit = (condition == Condition::pe) ? out.gamma_tilde
                                                          : decay * out.gamma_tilde;
  out.gamma = std::exp(-static_cast<double>(out.eta) * k_max * window) * out.gamma_tilde;
  return out;
}

/// Certified diameter after n windows: (1 - gamma)^n * diameter0.
inline double rate_bound(const ContractionCoefficients& coefficients, double diameter0, int n) {
  if (n < 0) throw std::invalid_argument("rate_bound: n must be nonnegative");
  if (!(diameter0 >= 0.0)) throw std::invalid_argument("rate_bound: diameter0 must be >= 0");
  return std::pow(1.0 - coefficients.gamma, n) * diameter0;
}

/// One-sided barriers on the line. Once a trajectory crosses psi_l from
/// below (or psi_r from above) it cannot cross back for the rest of the
/// window.
inline double psi_l(double alpha, double z, double tau, double k_max) {
  if (!(tau >= 0.0)) throw std::invalid_argument("psi_l: tau must be >= 0");
  return alpha + std::exp(-k_max * tau) * (z - alpha);
}

inline double psi_r(double beta, double z, double tau, double k_max) {
  if (!(tau >= 0.0)) throw std::invalid_argument("psi_r: tau must be >= 0");
  return beta - std::exp(-k_max * tau) * (beta - z);
}

enum class FCaseKind { pe_fixed, pe_normalized, isc_fixed, isc_normalized };

/// Inputs of the velocity-contraction function f. `p` is phi(0), the
/// global maximum of a non-increasing kernel.
struct FCase {
  FCaseKind kind = FCaseKind::pe_fixed;
  double p = 1.0;
  int n_agents = 2;
  double window = 1.0;
  double service = 1.0;

  void validate() const {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("FCase: p must be positive");
    detail::check_rate_inputs(n_agents, window, service, 1.0, 1.0);
  }
};

inline FCase make_f_case(Condition condition, ScalingMode scaling,
                         const InteractionKernel& kernel, int n_agents, double window,
                         double service) {
  FCase out;
  if (condition == Condition::pe)
    out.kind = (scaling == ScalingMode::fixed) ? FCaseKind::pe_fixed : FCaseKind::pe_normalized;
  else
    out.kind = (scaling == ScalingMode::fixed) ? FCaseKind::isc_fixed : FCaseKind::isc_normalized;
  out.p = phi_eval(kernel, 0.0);
  out.n_agents = n_agents;
  out.window = window;
  out.service = service;
  out.validate();
  return out;
}

/// f(y) = exp(-theta1 p T) mu y / (theta2 + 2 mu y) evaluated with the
/// case-specific (theta1, theta2). The argument y plays the role of the
/// kernel floor phi_min, so y > 0 is required.
///
/// For both PE cases f(y) reproduces exp(-K_max T) gamma_tilde evaluated
/// at (K_min, K_max) derived from (y, p). For the ISC cases it is a
/// smaller (hence still valid) contraction factor; see
/// derived_contraction for the direct route.
inline double f_eval(const FCase& f_case, double y) {
  f_case.validate();
  if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("f_eval: y must be positive");
  const double p = f_case.p;
  const double T = f_case.window;
  const double mu = f_case.service;
  const double n = static_cast<double>(f_case.n_agents);

  double theta1 = 0.0;
  double theta2 = 0.0;
  switch (f_case.kind) {
    case FCaseKind::pe_fixed:
      theta1 = 1.0;
      theta2 = n + n * T * p;
      break;
    case FCaseKind::pe_normalized:
      theta1 = 1.0 / y;
      theta2 = n * p + n * T * p * p / y;
      break;
    case FCaseKind::isc_fixed:
      theta1 = 2.0;
      theta2 = 2.0 * n * std::exp(p * T) * (1.0 + T * p);
      break;
    case FCaseKind::isc_normalized:
      theta1 = 2.0 / y;
      theta2 = 2.0 * n * std::exp(p * T / y) * (1.0 + T * p / y);
      break;
  }
  return std::exp(-theta1 * p * T) * mu * y / (theta2 + 2.0 * mu * y);
}

/// The contraction factor exp(-eta K_max T) gamma_tilde computed directly
/// from the kernel floor y (phi_min) and ceiling p (phi_max) under the
/// case's scaling. Kept separate so the two routes can be compared.
inline double derived_contraction(const FCase& f_case, double y) {
  f_case.validate();
  if (!(y > 0.0) || !std::isfinite(y))
    throw std::invalid_argument("derived_contraction: y must be positive");
  const bool normalized =
      f_case.kind == FCaseKind::pe_normalized || f_case.kind == FCaseKind::isc_normalized;
  const bool pe = f_case.kind == FCaseKind::pe_fixed || f_case.kind == FCaseKind::pe_normalized;
  const double k_min = normalized ? y / f_case.p : y;
  const double k_max = normalized ? f_case.p / y : f_case.p;
  const auto cc = contraction_factor(pe ? Condition::pe : Condition::isc, f_case.n_agents,
                                     f_case.window, f_case.service, k_min, k_max);
  return cc.gamma;
}

namespace detail {

/// Integrand x -> f(phi(x)) with forced subdivision at tabulated kinks.
template <class G>
double f_phi_integral(const InteractionKernel& kernel, G&& g, double a, double b,
                      double rel_tol = 1e-10) {
  if (kernel.family() == KernelFamily::tabulated)
    return adaptive_simpson_split(g, a, b, kernel.breakpoints(), rel_tol);
  return adaptive_simpson(g, a, b, rel_tol);
}

}  // namespace detail

/// Velocity-diameter bound after n windows:
///
///   D_V(0) - (1/T) * integral over [D_X(0) + T D_V(0), D_X(n) + T D_V(n)]
///            of f(phi(x)) dx
///
/// The integral is signed; when the upper endpoint falls below the lower
/// one the bound exceeds D_V(0) and holds trivially.
inline double dv_bound(const FCase& f_case, const InteractionKernel& kernel, double dx0,
                       double dv0, double dxn, double dvn) {
  f_case.validate();
  if (!(dx0 >= 0.0) || !(dv0 >= 0.0) || !(dxn >= 0.0) || !(dvn >= 0.0))
    throw std::invalid_argument("dv_bound: diameters must be >= 0");
  const double T = f_case.window;
  const double a = dx0 + T * dv0;
  const double b = dxn + T * dvn;
  const auto g = [&](double x) { return f_eval(f_case, phi_eval(kernel, x)); };
  const double integral = detail::f_phi_integral(kernel, g, a, b);
  return dv0 - integral / T;
}

enum class TailClass { divergent, convergent, inconclusive };

struct FlockingCheck {
  bool guaranteed = false;
  double integral_value = 0.0;  // (1/T) * integral of f(phi(x)) over the tail; +inf if divergent
  TailClass classification = TailClass::inconclusive;
};

namespace detail {

/// Symbolic tail classification of x -> f(phi(x)) on [a, +inf).
///
/// Constant kernels keep the integrand bounded away from zero. For a
/// power-law kernel under fixed scaling f(y) vanishes linearly in y, so
/// the tail behaves like (1 + x)^-beta and diverges exactly when
/// beta <= 1. Under normalized scaling f(y) ~ C exp(-c p T / y) y^2 with
/// c > 0, which decays faster than any power of phi once beta > 0; only
/// beta = 0 (a constant kernel in disguise) diverges. Tabulated kernels
/// get no symbolic verdict.
inline TailClass classify_tail(const FCase& f_case, const InteractionKernel& kernel) {
  switch (kernel.family()) {
    case KernelFamily::constant:
      return TailClass::divergent;
    case KernelFamily::power_law: {
      const bool normalized = f_case.kind == FCaseKind::pe_normalized ||
                              f_case.kind == FCaseKind::isc_normalized;
      if (normalized)
        return kernel.exponent() == 0.0 ? TailClass::divergent : TailClass::convergent;
      return kernel.exponent() <= 1.0 ? TailClass::divergent : TailClass::convergent;
    }
    case KernelFamily::tabulated:
      return TailClass::inconclusive;
  }
  return TailClass::inconclusive;
}

}  // namespace detail

/// Sufficient flocking test: flocking is certified when
///
///   D_V(0) < (1/T) * integral over [D_X(0) + T D_V(0), +inf) of f(phi(x)) dx.
///
/// A symbolically divergent tail certifies unconditionally. Otherwise the
/// tail is integrated with doubling upper limits until the added mass is
/// negligible or the limit exceeds 1e9; truncation only lowers the
/// integral, so a positive verdict remains sound.
inline FlockingCheck flocking_check(const FCase& f_case, const InteractionKernel& kernel,
                                    double dx0, double dv0) {
  f_case.validate();
  if (!kernel.non_increasing())
    throw std::invalid_argument("flocking_check: kernel must be non-increasing");
  if (!(dx0 >= 0.0) || !(dv0 >= 0.0))
    throw std::invalid_argument("flocking_check: diameters must be >= 0");

  FlockingCheck out;
  out.classification = detail::classify_tail(f_case, kernel);
  if (out.classification == TailClass::divergent) {
    out.integral_value = std::numeric_limits<double>::infinity();
    out.guaranteed = true;
    return out;
  }

  const double T = f_case.window;
  const double a = dx0 + T * dv0;
  const auto g = [&](double x) { return f_eval(f_case, phi_eval(kernel, x)); };

  double upper = 2.0 * (a + 1.0);
  double integral = detail::f_phi_integral(kernel, g, a, upper);
  while (upper <= 1e9) {
    const double next = 2.0 * upper;
    const double added = detail::f_phi_integral(kernel, g, upper, next);
    integral += added;
    upper = next;
    if (added < 1e-12 * std::max(integral, 1e-300)) break;
  }
  out.integral_value = integral / T;
  out.guaranteed = dv0 < out.integral_value;
  return out;
}

/// Full-service consistency hook: with service = window the schedule is
/// forced to one almost everywhere and the PE pipeline reproduces the
/// no-failure contraction factor.
inline ContractionCoefficients remark_consistency(int n_agents, double window, double k_min,
                                                  double k_max) {
  return contraction_factor(Condition::pe, n_agents, window, window, k_min, k_max);
}

}  // namespace swarmcert
