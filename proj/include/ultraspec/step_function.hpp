#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "ultraspec/errors.hpp"
#include "ultraspec/model.hpp"
#include "ultraspec/spectrum_report.hpp"

namespace ultraspec {

// Left-continuous step function: value levels[i] on (breaks[i-1], breaks[i]],
// with analytic tails outside the stored window (power laws for these models,
// never extrapolated constants).
struct StepFunction {
  std::vector<double> breaks;  // strictly ascending, positive
  std::vector<double> levels;  // levels[i] on (breaks[i-1], breaks[i]]
  std::function<double(double)> below_tail;  // t <= breaks.front() exclusive
  std::function<double(double)> above_tail;  // t >  breaks.back()

  double operator()(double t) const {
    if (breaks.empty()) return below_tail(t);
    if (t > breaks.back()) return above_tail(t);
    // first break >= t; left continuity puts t = breaks[i] into level i
    auto it = std::lower_bound(breaks.begin(), breaks.end(), t);
    if (it == breaks.begin() && t < breaks.front() * (1.0 - 1e-15) &&
        below_tail)
      return below_tail(t);
    return levels[size_t(it - breaks.begin())];
  }

  void validate() const {
    if (breaks.size() != levels.size())
      throw ValidationError("step function: breaks/levels size mismatch");
    for (size_t i = 1; i < breaks.size(); ++i)
      if (!(breaks[i - 1] < breaks[i]))
        throw ValidationError("step function breakpoints not ascending");
  }
};

// Spectral function N and volume function V of the model, over the rank
// window [rank_lo, rank_hi]:
//   N has jumps at the lambda_k with N(lambda_k) = 1/m(rank-k ball),
//   V(r) = m(ball of d_*-radius r), and N(tau) = 1/V(1/tau).
inline std::pair<StepFunction, StepFunction> spectral_and_volume_functions(
    const HierModel& m, int rank_lo, int rank_hi) {
  if (rank_lo > rank_hi) throw ValidationError("empty rank window");
  const bool discrete = m.is_discrete();
  if (discrete) rank_lo = std::max(rank_lo, 1);

  StepFunction N, V;
  // Ranks k = rank_hi .. rank_lo give ascending lambda breakpoints.
  for (int k = rank_hi; k >= rank_lo; --k) {
    N.breaks.push_back(m.lambda_unchecked(k));
    N.levels.push_back(1.0 / m.measure_unchecked(k));
  }
  for (int k = rank_lo; k <= rank_hi; ++k) {
    V.breaks.push_back(1.0 / m.lambda_unchecked(k));
    V.levels.push_back(m.measure_unchecked(k));
  }
  N.validate();
  V.validate();

  // Analytic continuation of the rank formulas beyond the window.  rank_of
  // inverts lambda: tau in (lambda_{k+1}, lambda_k] -> k (real-valued ceil).
  const double lnp = std::log(double(m.p()));
  const double a = m.alpha();
  const bool dyadic = m.kind() == SpaceKind::DysonDyadic;
  auto rank_of = [lnp, a, dyadic](double tau) {
    // lattice/padic: lambda_k = p^{-a(k-1)}; dyadic: lambda_k = p^{-a k}
    double k = dyadic ? -std::log(tau) / (a * lnp)
                      : 1.0 - std::log(tau) / (a * lnp);
    return std::ceil(k - 1e-12);
  };
  auto measure_of = [lnp](double k) { return std::exp(k * lnp); };
  // wrap p into the closures via the model copy-by-value of small pods
  const double pd = double(m.p());
  auto n_tail = [rank_of, pd, discrete](double tau) {
    double k = rank_of(tau);
    if (discrete && k < 1) k = 0.0;  // below lambda-range: single points, m=1
    return std::pow(pd, -k);
  };
  N.below_tail = n_tail;
  N.above_tail = n_tail;
  auto v_tail = [rank_of, pd, discrete](double r) {
    double k = rank_of(1.0 / r);
    if (discrete && k < 1) k = 0.0;
    return std::pow(pd, k);
  };
  V.below_tail = v_tail;
  V.above_tail = v_tail;
  return {std::move(N), std::move(V)};
}

// Spec(L) restricted to a rank window: each lambda_k with infinite
// multiplicity and compactly supported eigenfunctions, plus the accumulation
// point 0 marker.
inline SpectrumReport spectrum_laplacian(const HierModel& m, int rank_lo,
                                         int rank_hi) {
  if (rank_lo > rank_hi) throw ValidationError("empty rank window");
  SpectrumReport rep;
  for (int k = rank_lo; k <= rank_hi; ++k) {
    SpectrumLine line;
    line.value = m.eigenvalue_lambda(k);
    line.mult_class = MultiplicityClass::Infinite;
    line.support = SupportClass::Compact;
    line.origin = Origin::LEigenvalue;
    rep.lines.push_back(line);
  }
  SpectrumLine zero;
  zero.value = 0.0;
  zero.accumulation_point = true;
  zero.origin = Origin::LEigenvalue;
  rep.lines.push_back(zero);
  return rep;
}

}  // namespace ultraspec
