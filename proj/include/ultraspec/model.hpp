#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "ultraspec/errors.hpp"

namespace ultraspec {

enum class SpaceKind {
  DiscreteLattice,  // N with p-adic interval partitions, ~ Q_p/Z_p
  PAdicField,       // Q_p with normalized Haar measure
  DysonDyadic,      // {0,1,2,...} with dyadic partitions, counting measure
};

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::DiscreteLattice: return "discrete_lattice";
    case SpaceKind::PAdicField: return "padic_field";
    case SpaceKind::DysonDyadic: return "dyson_dyadic";
  }
  return "?";
}

// A point of the space.  Discrete kinds use unit with valuation 0; a p-adic
// point is unit * p^valuation with unit coprime to p (canonical form).
struct Point {
  std::uint64_t unit = 0;
  int valuation = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

// The space/Laplacian pair.  Immutable after construction; all member
// functions are const and thread-safe.
class HierModel {
 public:
  HierModel(SpaceKind kind, int p, double alpha, int padic_rank_min = -128,
            int padic_rank_max = 128)
      : kind_(kind), p_(p), alpha_(alpha) {
    if (p_ < 2) throw ValidationError("branching p must be >= 2");
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
      throw ValidationError("exponent alpha must be positive and finite");
    if (kind_ == SpaceKind::DysonDyadic && p_ != 2)
      throw ValidationError("dyson_dyadic requires p = 2");
    switch (kind_) {
      case SpaceKind::DiscreteLattice:
      case SpaceKind::DysonDyadic:
        rank_min_ = 0;
        rank_max_ = max_discrete_rank(p_);
        break;
      case SpaceKind::PAdicField:
        if (padic_rank_min >= padic_rank_max)
          throw ValidationError("empty p-adic rank window");
        rank_min_ = padic_rank_min;
        rank_max_ = padic_rank_max;
        break;
    }
  }

  static HierModel discrete_lattice(int p, double alpha) {
    return HierModel(SpaceKind::DiscreteLattice, p, alpha);
  }
  static HierModel padic_field(int p, double alpha) {
    return HierModel(SpaceKind::PAdicField, p, alpha);
  }
  static HierModel dyson_dyadic_from_kappa(double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0))
      throw ValidationError("kappa must lie in (0,1)");
    return HierModel(SpaceKind::DysonDyadic, 2, std::log2(1.0 / kappa));
  }
  static HierModel dyson_dyadic_from_alpha(double alpha) {
    return HierModel(SpaceKind::DysonDyadic, 2, alpha);
  }

  SpaceKind kind() const { return kind_; }
  int p() const { return p_; }
  double alpha() const { return alpha_; }
  double kappa() const { return std::pow(double(p_), -alpha_); }
  int rank_min() const { return rank_min_; }
  int rank_max() const { return rank_max_; }

  // Spectral dimension s_h = 2 ln p / ln(1/kappa) = 2/alpha.
  double spectral_dimension() const { return 2.0 / alpha_; }

  bool is_discrete() const { return kind_ != SpaceKind::PAdicField; }

  // m(ball of rank k).  DiscreteLattice/PAdicField: p^k (m = 1 at rank 0).
  // DysonDyadic: counting measure, 2^k points in a rank-k interval.
  double ball_measure(int rank) const {
    check_rank(rank);
    return std::pow(double(p_), double(rank));
  }

  // lambda(B) for a rank-k ball.
  //   DiscreteLattice/PAdicField: lambda_k = p^{-alpha(k-1)}   (= Phi(p/m(B)))
  //   DysonDyadic:                lambda_r = kappa^r = |B|^{-alpha}
  // Strictly decreasing in rank.
  double eigenvalue_lambda(int rank) const {
    check_rank(rank);
    return lambda_unchecked(rank);
  }

  // C at rank k, the coefficient of the rank-k elementary Laplacian; equals
  // lambda_k - lambda_{k+1}, so sum_{j >= k} C_j telescopes to lambda_k.
  double coefficient_C(int rank) const {
    check_rank(rank);
    return lambda_unchecked(rank) - lambda_unchecked(rank + 1);
  }

  // Unchecked analytic continuations used by kernel/resolvent tail sums.
  double lambda_unchecked(int rank) const {
    if (kind_ == SpaceKind::DysonDyadic)
      return std::pow(kappa(), double(rank));
    return std::pow(double(p_), -alpha_ * (double(rank) - 1.0));
  }
  double measure_unchecked(int rank) const {
    return std::pow(double(p_), double(rank));
  }
  // A_k = 1/m(B_{k-1}) - 1/m(B_k), the pole weight of the diagonal resolvent.
  double pole_weight_unchecked(int rank) const {
    return measure_unchecked(-(rank - 1)) - measure_unchecked(-rank);
  }

  Point canonical(Point x) const {
    if (kind_ != SpaceKind::PAdicField) {
      if (x.valuation != 0)
        throw ValidationError("points of a discrete model carry valuation 0");
      return x;
    }
    if (x.unit == 0) return Point{0, 0};
    while (x.unit % std::uint64_t(p_) == 0) {
      x.unit /= std::uint64_t(p_);
      ++x.valuation;
    }
    return x;
  }

 private:
  static int max_discrete_rank(int p) {
    int r = 0;
    unsigned __int128 v = 1;
    while (v * (unsigned __int128)p <= ((unsigned __int128)1 << 62)) {
      v *= (unsigned __int128)p;
      ++r;
    }
    return r;
  }

  void check_rank(int rank) const {
    if (rank < rank_min_ || rank > rank_max_ + 1)
      throw ValidationError("ball rank " + std::to_string(rank) +
                            " outside the admissible range [" +
                            std::to_string(rank_min_) + ", " +
                            std::to_string(rank_max_) + "] of " +
                            to_string(kind_));
  }

  SpaceKind kind_;
  int p_;
  double alpha_;
  int rank_min_;
  int rank_max_;
};

// A node of the tree of balls: anchor point plus rank.  Two BallRefs of equal
// rank denote the same ball iff their anchors agree after truncation.
struct BallRef {
  Point anchor;
  int rank = 0;
};

namespace detail {

inline std::uint64_t ipow64(int p, int e) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) v *= std::uint64_t(p);
  return v;
}

}  // namespace detail

// Canonical anchor of a discrete ball: floor(anchor / p^rank).
inline std::uint64_t ball_prefix(const HierModel& m, const BallRef& b) {
  if (!m.is_discrete())
    throw ValidationError("ball_prefix is defined for discrete models only");
  if (b.rank < 0 || b.rank > m.rank_max())
    throw ValidationError("ball rank outside range");
  return b.anchor.unit / detail::ipow64(m.p(), b.rank);
}

inline bool same_ball(const HierModel& m, const BallRef& a, const BallRef& b) {
  return a.rank == b.rank && ball_prefix(m, a) == ball_prefix(m, b);
}

inline BallRef parent(const HierModel& m, const BallRef& b) {
  if (b.rank + 1 > m.rank_max())
    throw ValidationError("parent ball rank outside the model window");
  return BallRef{b.anchor, b.rank + 1};
}

// The minimal ball containing both x and y.  For discrete kinds this is the
// smallest k >= 0 with floor(x/p^k) == floor(y/p^k); on Q_p the rank is
// -v_p(x - y), i.e. m(x ^ y) = |x - y|_p.
inline BallRef min_ball(const HierModel& m, Point x, Point y) {
  x = m.canonical(x);
  y = m.canonical(y);
  if (m.is_discrete()) {
    std::uint64_t a = x.unit, b = y.unit;
    int k = 0;
    while (a != b) {
      a /= std::uint64_t(m.p());
      b /= std::uint64_t(m.p());
      ++k;
    }
    if (k > m.rank_max())
      throw ValidationError("minimal ball rank exceeds the model window");
    return BallRef{x, k};
  }
  if (x == y)
    throw ValidationError(
        "min_ball(x,x) is undefined on a perfect space (no singleton balls)");
  int mval = std::min(x.valuation, y.valuation);
  unsigned __int128 a = x.unit, b = y.unit;
  for (int i = 0; i < x.valuation - mval; ++i) a *= (unsigned)m.p();
  for (int i = 0; i < y.valuation - mval; ++i) b *= (unsigned)m.p();
  unsigned __int128 d = a > b ? a - b : b - a;
  int val = mval;
  while (d % (unsigned)m.p() == 0) {
    d /= (unsigned)m.p();
    ++val;
  }
  int rank = -val;
  if (rank < m.rank_min() || rank > m.rank_max())
    throw ValidationError("minimal ball rank outside the p-adic window");
  return BallRef{x, rank};
}

// Intrinsic ultrametric d_*(x,y) = 1/lambda(x ^ y), 0 on the diagonal.
inline double intrinsic_distance(const HierModel& m, Point x, Point y) {
  x = m.canonical(x);
  y = m.canonical(y);
  if (x == y) return 0.0;
  return 1.0 / m.eigenvalue_lambda(min_ball(m, x, y).rank);
}

}  // namespace ultraspec
