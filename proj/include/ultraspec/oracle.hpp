#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ultraspec/dense.hpp"
#include "ultraspec/errors.hpp"
#include "ultraspec/model.hpp"

namespace ultraspec {

// How the ranks beyond the truncation window enter the finite matrix.
//
//   ZeroModeTail:  c_tail (I - P_{X_K}) with c_tail = sum_{r>K} C_r.  Every
//     eigenfunction f_B with parent inside X_K keeps its exact infinite-model
//     eigenvalue; the constant vector sits at exactly 0 (a documented
//     artifact mode).  Use for spectrum-multiset checks.
//
//   CompressedTail:  the exact compression of the infinite operator onto
//     functions supported on X_K:  lambda_{K+1} I - beta 1 1^T with
//     beta = sum_{r>K} C_r p^{-r}.  f_B modes stay exact and the constant
//     mode lands at sum_{r>K} C_r (1 - p^{K-r}) > 0.  The lumped tail matches
//     the true tail in both mass and first moment, so resolvent and
//     negative-eigenvalue comparisons against the infinite model are sharp.
//     Use for Schroedinger-operator comparisons.
enum class TailMode { ZeroModeTail, CompressedTail };

struct TruncationSpec {
  int K = 8;
  TailMode tail = TailMode::ZeroModeTail;
};

namespace detail {

inline std::size_t grid_size(const HierModel& m, int K) {
  if (!m.is_discrete())
    throw ValidationError("dense truncations exist for discrete models only");
  if (K < 1 || K > m.rank_max()) throw ValidationError("truncation rank out of range");
  unsigned __int128 n = 1;
  for (int i = 0; i < K; ++i) n *= (unsigned)m.p();
  if (n > 4096) throw ValidationError("truncation exceeds the 4096-point cap");
  return std::size_t(n);
}

// beta_b = sum_{r > b} C_r p^{-r}; exact geometric sum for these models.
inline double tail_beta(const HierModel& m, int b) {
  const double q = std::pow(double(m.p()), -(1.0 + m.alpha()));
  const double c1 = m.lambda_unchecked(b + 1) - m.lambda_unchecked(b + 2);
  return c1 * std::pow(double(m.p()), -(b + 1.0)) / (1.0 - q);
}

}  // namespace detail

// Finite truncation of L on the rank-K ball X_K = {0, ..., p^K - 1}.
inline DenseSymmetric build_truncated_L(const HierModel& m, const TruncationSpec& spec) {
  const std::size_t n = detail::grid_size(m, spec.K);
  const int K = spec.K;
  const int p = m.p();

  // S[r] = sum_{s=r}^{K} C_s p^{-s}
  std::vector<double> S(K + 2, 0.0);
  for (int r = K; r >= 1; --r)
    S[r] = S[r + 1] + m.coefficient_C(r) * std::pow(double(p), -double(r));
  const double lamK1 = m.lambda_unchecked(K + 1);
  const double lam1 = m.lambda_unchecked(1);

  double diag, off_shift;
  if (spec.tail == TailMode::ZeroModeTail) {
    diag = (lam1 - lamK1) - S[1] + lamK1 * (1.0 - 1.0 / double(n));
    off_shift = lamK1 / double(n);
  } else {
    const double beta = detail::tail_beta(m, K);
    diag = (lam1 - lamK1) - S[1] + lamK1 - beta;
    off_shift = beta;
  }

  DenseSymmetric L(n);
  for (std::size_t x = 0; x < n; ++x) {
    L.set(x, x, diag);
    for (std::size_t y = x + 1; y < n; ++y) {
      std::uint64_t a = x, b = y;
      int r = 0;
      while (a != b) { a /= std::uint64_t(p); b /= std::uint64_t(p); ++r; }
      L.set(x, y, -S[r] - off_shift);
    }
  }
  return L;
}

// L truncation plus a diagonal: the caller supplies the sampled potential
// with its sign already applied (e.g. -sigma at a well).
inline DenseSymmetric build_H(const HierModel& m, const TruncationSpec& spec,
                              const std::vector<double>& diag_add) {
  DenseSymmetric H = build_truncated_L(m, spec);
  if (diag_add.size() != H.size())
    throw ValidationError("potential sample size does not match the truncation");
  for (std::size_t i = 0; i < H.size(); ++i) H.add(i, i, diag_add[i]);
  return H;
}

inline std::vector<double> diag_from_sites(
    const HierModel& m, const TruncationSpec& spec,
    const std::vector<std::pair<std::uint64_t, double>>& sites, double sign = -1.0) {
  const std::size_t n = detail::grid_size(m, spec.K);
  std::vector<double> d(n, 0.0);
  for (const auto& [a, s] : sites) {
    if (a >= n) throw ValidationError("site outside the truncation ball");
    d[a] += sign * s;
  }
  return d;
}

inline std::vector<double> diag_from_ball(
    const HierModel& m, const TruncationSpec& spec, std::uint64_t anchor,
    int rank, double sigma, double sign = -1.0) {
  const std::size_t n = detail::grid_size(m, spec.K);
  if (rank < 0 || rank > spec.K) throw ValidationError("ball rank outside truncation");
  const std::uint64_t sz = detail::ipow64(m.p(), rank);
  const std::uint64_t lo = (anchor / sz) * sz;
  if (lo + sz > n) throw ValidationError("ball leaks outside the truncation");
  std::vector<double> d(n, 0.0);
  for (std::uint64_t x = lo; x < lo + sz; ++x) d[x] += sign * sigma;
  return d;
}

// Dense oracle for the restriction <L|L_B> on Q_p: the ball of rank
// `ball_rank` subdivided into p^depth cells, compressed tail, with the
// constant-on-B mode lifted by +100 so that only genuine f_T modes are
// counted.  Eigenvalues of the result: lambda(T'), T' inside the ball down
// to the cell level, each with its combinatorial multiplicity.
inline DenseSymmetric padic_block_matrix(const HierModel& m, int ball_rank,
                                         int depth, double deflate = 100.0) {
  if (m.kind() != SpaceKind::PAdicField)
    throw ValidationError("padic_block_matrix expects a padic_field model");
  if (depth < 1) throw ValidationError("depth must be >= 1");
  unsigned __int128 big = 1;
  for (int i = 0; i < depth; ++i) big *= (unsigned)m.p();
  if (big > 4096) throw ValidationError("block depth exceeds the 4096-cell cap");
  const std::size_t n = std::size_t(big);
  const int p = m.p();
  const int b = ball_rank;
  const double mu = m.measure_unchecked(b - depth);  // cell measure

  // S[j] = sum over inner ranks r = b-depth+j .. b of C_r p^{-(r - (b-depth))},
  // indexed by the cell-block level j = rank - (b - depth).
  std::vector<double> S(depth + 2, 0.0);
  for (int j = depth; j >= 1; --j) {
    const int r = b - depth + j;
    S[j] = S[j + 1] + (m.lambda_unchecked(r) - m.lambda_unchecked(r + 1)) *
                          std::pow(double(p), -double(j));
  }
  const double lam_b1 = m.lambda_unchecked(b + 1);
  const double lam_in = m.lambda_unchecked(b - depth + 1);  // sum of inner C
  const double beta = detail::tail_beta(m, b) * mu;         // times cell measure
  const double defl = deflate / double(n);

  DenseSymmetric A(n);
  const double diag = (lam_in - lam_b1) - S[1] + lam_b1 - beta + defl;
  for (std::size_t x = 0; x < n; ++x) {
    A.set(x, x, diag);
    for (std::size_t y = x + 1; y < n; ++y) {
      std::uint64_t aa = x, bb = y;
      int j = 0;
      while (aa != bb) { aa /= std::uint64_t(p); bb /= std::uint64_t(p); ++j; }
      A.set(x, y, -S[j] - beta + defl);
    }
  }
  return A;
}

// Comparison of an analytic per-gap prediction against an oracle eigenvalue
// list.
struct GapCompare {
  int gap_index = 0;
  double gap_lo = 0.0, gap_hi = 0.0;
  int analytic_count = 0;
  int oracle_count = 0;
  double max_match_distance = 0.0;
  bool pass = false;
};

struct SpectraComparison {
  std::vector<GapCompare> gaps;
  long long neg_analytic = 0;
  long long neg_oracle = 0;
  bool pass = true;
};

// Match analytic gap roots against oracle eigenvalues.  `gaps` holds
// (lo, hi) bounds of the open intervals; roots_per_gap the analytic roots.
// Oracle eigenvalues within edge_tol of a gap endpoint belong to the pole
// there, not to the gap.
inline SpectraComparison compare_spectra(
    const std::vector<std::pair<double, double>>& gaps,
    const std::vector<std::vector<double>>& roots_per_gap,
    const std::vector<double>& analytic_negative,
    const std::vector<double>& oracle_eigenvalues, double tol,
    double neg_threshold = -1e-8, double edge_rel_tol = 1e-9) {
  if (gaps.size() != roots_per_gap.size())
    throw ValidationError("compare_spectra: gaps/roots size mismatch");
  SpectraComparison out;
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    GapCompare gc;
    gc.gap_index = int(g) + 1;
    gc.gap_lo = gaps[g].first;
    gc.gap_hi = gaps[g].second;
    const double edge = edge_rel_tol * (gc.gap_hi - gc.gap_lo);
    std::vector<double> inside;
    for (double e : oracle_eigenvalues)
      if (e > gc.gap_lo + edge && e < gc.gap_hi - edge) inside.push_back(e);
    gc.oracle_count = int(inside.size());
    gc.analytic_count = int(roots_per_gap[g].size());
    double maxd = 0.0;
    for (double r : roots_per_gap[g]) {
      double best = std::numeric_limits<double>::infinity();
      for (double e : inside) best = std::min(best, std::fabs(e - r));
      maxd = std::max(maxd, best);
    }
    gc.max_match_distance = gc.analytic_count ? maxd : 0.0;
    gc.pass = (gc.analytic_count == gc.oracle_count) && (gc.max_match_distance <= tol);
    out.pass = out.pass && gc.pass;
    out.gaps.push_back(gc);
  }
  out.neg_analytic = (long long)analytic_negative.size();
  out.neg_oracle = std::count_if(oracle_eigenvalues.begin(), oracle_eigenvalues.end(),
                                 [&](double e) { return e < neg_threshold; });
  out.pass = out.pass && (out.neg_analytic == out.neg_oracle);
  return out;
}

}  // namespace ultraspec
