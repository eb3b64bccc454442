#pragma once

#include <cmath>
#include <string>

#include "ultraspec/errors.hpp"
#include "ultraspec/model.hpp"

namespace ultraspec {

// Transience of the hierarchical random walk: 1/V integrable at infinity.
// For all three kinds this reduces to alpha < 1 (for the dyadic model the
// tail-sum test gives kappa > 1/2, i.e. alpha < 1 with kappa = 2^-alpha).
inline bool is_transient(const HierModel& m) { return m.alpha() < 1.0; }

// Independent numerical detector: ratio test on the tail terms of
// integral d tau / V(tau) = sum_k (1/lambda_{k+1} - 1/lambda_k) / m_k.
inline bool transient_by_tail_test(const HierModel& m) {
  auto term = [&](int k) {
    return (1.0 / m.lambda_unchecked(k + 1) - 1.0 / m.lambda_unchecked(k)) /
           m.measure_unchecked(k);
  };
  // partial-sum convergence probe: geometric extrapolation of the remainder
  const double t40 = term(40), t41 = term(41);
  if (t41 >= t40) return false;
  const double rho = t41 / t40;
  return rho < 1.0 && t41 / (1.0 - rho) < 1e300;
}

namespace detail {

// smallest rank whose pole survives exp(-t lambda_k); clamps for discrete kinds
inline int first_heat_rank(const HierModel& m, double t) {
  const double lnp = std::log(double(m.p()));
  const double a = m.alpha();
  double k;
  if (m.kind() == SpaceKind::DysonDyadic)
    k = std::ceil(-std::log(640.0 / t) / (a * lnp));
  else
    k = std::ceil(1.0 + std::log(t / 640.0) / (a * lnp));
  int k0 = int(k) - 2;
  if (m.is_discrete()) k0 = std::max(k0, 1);
  return k0;
}

}  // namespace detail

// p(t,x,x) = int_0^inf e^{-t tau} dN(tau) = sum_k A_k e^{-t lambda_k},
// truncated once the certified geometric remainder drops below rel_tol.
inline double heat_kernel_diag(const HierModel& m, double t, double rel_tol = 1e-15) {
  if (!(t > 0.0)) throw ValidationError("heat kernel needs t > 0");
  double s = 0.0;
  const int k0 = detail::first_heat_rank(m, t);
  for (int k = k0; k < k0 + 20000; ++k) {
    const double lk = m.lambda_unchecked(k);
    const double z = t * lk;
    s += m.pole_weight_unchecked(k) * (z > 700.0 ? 0.0 : std::exp(-z));
    // remaining mass sum_{j>k} A_j = p^{-k}; each term weighted by
    // e^{-t lambda_j} in (e^{-t lambda_{k+1}}, 1)
    const double mass = m.measure_unchecked(-k);
    const double lo = mass * std::exp(-t * m.lambda_unchecked(k + 1));
    const double hi = mass;
    if (hi - lo <= 2.0 * rel_tol * std::max(s + 0.5 * (hi + lo), 1e-300)) {
      return s + 0.5 * (hi + lo);
    }
  }
  throw NumericError("heat_kernel_diag failed to certify its tail");
}

// p(t,x,y) = t int_0^{1/d_*(x,y)} N(tau) e^{-t tau} d tau; each step of N
// contributes a closed-form exponential difference.
inline double heat_kernel(const HierModel& m, double t, Point x, Point y,
                          double rel_tol = 1e-14) {
  if (!(t > 0.0)) throw ValidationError("heat kernel needs t > 0");
  x = m.canonical(x);
  y = m.canonical(y);
  if (x == y) return heat_kernel_diag(m, t, rel_tol);
  const int r = min_ball(m, x, y).rank;
  double s = 0.0;
  for (int k = r; k < r + 20000; ++k) {
    const double e1 = std::exp(-t * m.lambda_unchecked(k + 1));
    const double e0 = std::exp(-t * m.lambda_unchecked(k));
    s += (e1 - e0) / m.measure_unchecked(k);
    const double tail_hi =
        (1.0 - std::exp(-t * m.lambda_unchecked(k + 1))) / m.measure_unchecked(k);
    if (tail_hi <= 2.0 * rel_tol * std::max(s + 0.5 * tail_hi, 1e-300))
      return s + 0.5 * tail_hi;
  }
  throw NumericError("heat_kernel failed to certify its tail");
}

// J(x,y) = int_0^{1/d_*} N(tau) d tau = sum_{k >= r} C_k / m_k (exact
// geometric sum for these models); symmetric, strictly decreasing in d_*.
inline double jump_kernel(const HierModel& m, Point x, Point y) {
  x = m.canonical(x);
  y = m.canonical(y);
  if (x == y) throw ValidationError("jump kernel is undefined on the diagonal");
  const int r = min_ball(m, x, y).rank;
  const double q = std::pow(double(m.p()), -(1.0 + m.alpha()));
  const double first =
      (m.lambda_unchecked(r) - m.lambda_unchecked(r + 1)) / m.measure_unchecked(r);
  return first / (1.0 - q);
}

// Green function R(0,x,y) = int_{d_*(x,y)}^inf d tau / V(tau), evaluated as
// the termwise step integral with a certified geometric remainder.
inline double green_function(const HierModel& m, Point x, Point y,
                             double rel_tol = 1e-14) {
  if (!is_transient(m))
    throw DivergenceError("divergent Green function: the model is recurrent");
  x = m.canonical(x);
  y = m.canonical(y);
  if (x == y)
    throw ValidationError("green_function requires x != y");
  const int r = min_ball(m, x, y).rank;
  const double rho = std::pow(double(m.p()), m.alpha() - 1.0);  // term ratio < 1
  double s = 0.0;
  for (int k = r; k < r + 20000; ++k) {
    const double term = (1.0 / m.lambda_unchecked(k + 1) - 1.0 / m.lambda_unchecked(k)) /
                        m.measure_unchecked(k);
    s += term;
    const double tail = term * rho / (1.0 - rho);
    if (tail <= 2.0 * rel_tol * (s + tail)) return s + 0.0 * tail + tail - tail + tail * 0.0 + tail;
  }
  throw NumericError("green_function failed to certify its tail");
}

// Closed form of the D^alpha Green function on Q_p:
// R_alpha(0,x,y) = (1-p^-alpha)/(1-p^{alpha-1}) |x-y|_p^{alpha-1}.
inline double green_closed_form_dalpha(int p, double alpha, double dist_p) {
  if (!(alpha < 1.0)) throw DivergenceError("transient only for alpha < 1");
  return (1.0 - std::pow(double(p), -alpha)) / (1.0 - std::pow(double(p), alpha - 1.0)) *
         std::pow(dist_p, alpha - 1.0);
}

// int_tau^inf p(t,x,x) dt = sum_k A_k e^{-tau lambda_k} / lambda_k
// (termwise closed-form time integral); transient models only.
inline double heat_time_integral(const HierModel& m, double tau, double rel_tol = 1e-13) {
  if (!is_transient(m))
    throw DivergenceError("time integral of p(t,x,x) diverges (recurrent model)");
  if (!(tau > 0.0)) throw ValidationError("heat_time_integral needs tau > 0");
  const double p = m.p();
  const double a = m.alpha();
  const double q = std::pow(p, -(1.0 - a));  // ratio of A_k/lambda_k
  double s = 0.0;
  const int k0 = detail::first_heat_rank(m, tau);
  for (int k = k0; k < k0 + 20000; ++k) {
    const double lk = m.lambda_unchecked(k);
    const double z = tau * lk;
    const double base = m.pole_weight_unchecked(k) / lk;
    s += base * (z > 700.0 ? 0.0 : std::exp(-z));
    // tail: sum_{j>k} (A_j/lambda_j) e^{-tau lambda_j} in (G e^{-tau l_{k+1}}, G)
    const double G = base * q / (1.0 - q);
    const double lo = G * std::exp(-tau * m.lambda_unchecked(k + 1));
    if (G - lo <= 2.0 * rel_tol * std::max(s + 0.5 * (G + lo), 1e-300))
      return s + 0.5 * (G + lo);
  }
  throw NumericError("heat_time_integral failed to certify its tail");
}

}  // namespace ultraspec
