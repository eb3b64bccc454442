#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ultraspec/errors.hpp"
#include "ultraspec/model.hpp"

namespace ultraspec {

// Descending poles lambda_k with positive weights A_k, k >= start_rank,
// representing R(lambda,a,a) = sum_k A_k / (lambda_k - lambda) along the
// geodesic of balls through a point.  The stored prefix is for inspection;
// evaluation always uses the analytic tail rule
//   DiscreteLattice/PAdicField: lambda_k = p^{-alpha(k-1)}, A_k = (p-1) p^{-k}
//   DysonDyadic:                lambda_k = kappa^k,         A_k = 2^{-k}
class PoleSeries {
 public:
  PoleSeries(const HierModel& m, int start_rank = 1, int prefix_len = 48)
      : model_(m), start_(start_rank) {
    if (!m.is_discrete())
      throw ValidationError(
          "pole series of a diagonal resolvent requires a discrete model "
          "(delta charges are not in L2 on a perfect space)");
    if (start_ < 1) throw ValidationError("pole series start rank must be >= 1");
    for (int k = start_; k < start_ + prefix_len; ++k) {
      poles_.push_back(lambda_at(k));
      weights_.push_back(weight_at(k));
    }
  }

  const std::vector<double>& poles() const { return poles_; }
  const std::vector<double>& weights() const { return weights_; }
  int start_rank() const { return start_; }
  const HierModel& model() const { return model_; }

  double lambda_at(int k) const { return model_.lambda_unchecked(k); }
  // A_k = 1/m(B_{k-1}) - 1/m(B_k)
  double weight_at(int k) const {
    return model_.measure_unchecked(-(k - 1)) - model_.measure_unchecked(-k);
  }
  // sum_{k > K} A_k = 1/m(B_K)
  double mass_above(int K) const { return model_.measure_unchecked(-K); }

  bool converges_at_zero() const { return model_.alpha() < 1.0; }

  // sum_{k >= start} A_k / lambda_k, the lambda = 0 value (transient only).
  double value_at_zero() const {
    if (!converges_at_zero())
      throw DivergenceError("diagonal resolvent diverges at lambda = 0 (recurrent model)");
    const double p = model_.p();
    const double a = model_.alpha();
    if (model_.kind() == SpaceKind::DysonDyadic) {
      const double q = 1.0 / (2.0 * model_.kappa());
      return std::pow(q, double(start_)) / (1.0 - q);
    }
    const double q = std::pow(p, -(1.0 - a));
    return (p - 1.0) * std::pow(p, -a) * std::pow(q, double(start_)) / (1.0 - q);
  }

  // Series value with a certified remainder bracket; the geometric bound,
  // not a heuristic, controls truncation.
  double evaluate(double lambda, double rel_tol = 1e-15) const {
    if (lambda == 0.0) return value_at_zero();
    double s = 0.0;
    const int hard_cap = start_ + 20000;
    for (int k = start_; k < hard_cap; ++k) {
      const double lk = lambda_at(k);
      const double d = lk - lambda;
      const double scale = std::max({1.0, std::fabs(lambda), lk});
      if (std::fabs(d) < 1e-12 * scale)
        throw PoleProximityError("lambda within 1e-12 of pole lambda_" + std::to_string(k));
      s += weight_at(k) / d;
      // once every remaining pole lies below lambda the tail is bracketed by
      // mass/(lambda_{k+1}-lambda) and mass/(-lambda)
      const double lk1 = lambda_at(k + 1);
      if (lk1 < lambda || lambda < 0.0) {
        if (std::fabs(lk1 - lambda) < 1e-13 * std::max(1.0, std::fabs(lambda))) continue;
        const double mass = mass_above(k);
        const double b1 = mass / (lk1 - lambda);
        const double b2 = mass / (0.0 - lambda);
        const double lo = std::min(b1, b2), hi = std::max(b1, b2);
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 2.0 * rel_tol * std::max(std::fabs(s + mid), 1e-300))
          return s + mid;
      }
    }
    throw NumericError("pole series failed to certify its tail bound");
  }

 private:
  HierModel model_;
  int start_;
  std::vector<double> poles_;
  std::vector<double> weights_;
};

}  // namespace ultraspec
