#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ultraspec/errors.hpp"

namespace ultraspec {

// Dense symmetric matrix, row-major upper-triangle storage.  Symmetric by
// construction: there is no way to set (i,j) and (j,i) inconsistently.
class DenseSymmetric {
 public:
  explicit DenseSymmetric(std::size_t n) : n_(n), a_(n * (n + 1) / 2, 0.0) {}

  std::size_t size() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return a_[idx(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { a_[idx(i, j)] = v; }
  void add(std::size_t i, std::size_t j, double v) { a_[idx(i, j)] += v; }

  double frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      s += (*this)(i, i) * (*this)(i, i);
      for (std::size_t j = i + 1; j < n_; ++j) s += 2.0 * (*this)(i, j) * (*this)(i, j);
    }
    return std::sqrt(s);
  }

  double trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

  std::vector<double> to_full() const {
    std::vector<double> f(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) f[i * n_ + j] = f[j * n_ + i] = (*this)(i, j);
    return f;
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double yi = (*this)(i, i) * x[i];
      for (std::size_t j = i + 1; j < n_; ++j) {
        double v = (*this)(i, j);
        yi += v * x[j];
        y[j] += v * x[i];
      }
      y[i] += yi;
    }
    return y;
  }

 private:
  std::size_t idx(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // row i of the packed upper triangle starts at i*n - i(i-1)/2
    return i * n_ - i * (i - 1) / 2 + (j - i);
  }

  std::size_t n_;
  std::vector<double> a_;
};

struct EigenResult {
  std::vector<double> eigenvalues;           // ascending
  std::vector<double> eigenvectors;          // column-major n x n, optional
  bool has_vectors = false;
  int sweeps = 0;
  double offdiag_norm = 0.0;

  // eigenvector for eigenvalues[k] is column k
  double vec(std::size_t n, std::size_t row, std::size_t col) const {
    return eigenvectors[col * n + row];
  }
};

// Cyclic-sweep Jacobi eigensolver for dense symmetric matrices.  Dependency
// free, backward stable, O(n^3) per sweep; meant as the repo's ground truth
// at desk scale (n <= 4096).  Stops when off(A)_F < tol * |A|_F.
inline EigenResult jacobi_eigen(const DenseSymmetric& A, double tol = 1e-12,
                                bool want_vectors = false, int max_sweeps = 100) {
  const std::size_t n = A.size();
  std::vector<double> a = A.to_full();
  std::vector<double> q;
  if (want_vectors) {
    q.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
  }
  const double anorm = A.frobenius_norm();
  if (anorm == 0.0 || n == 1) {
    EigenResult r;
    r.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.eigenvalues[i] = a[i * n + i];
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    if (want_vectors) {
      r.eigenvectors = std::move(q);
      r.has_vectors = true;
    }
    return r;
  }

  auto offdiag_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };

  int sweep = 0;
  double off = offdiag_norm();
  while (off > tol * anorm) {
    if (++sweep > max_sweeps)
      throw NumericError("jacobi_eigen: no convergence after " +
                         std::to_string(max_sweeps) + " sweeps (off = " +
                         std::to_string(off) + ")");
    // rotations below this threshold are deferred to later sweeps
    const double thresh = off / (n * double(n));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double apq = a[i * n + j];
        if (std::fabs(apq) <= thresh) continue;
        const double app = a[i * n + i];
        const double aqq = a[j * n + j];
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[i * n + i] = app - t * apq;
        a[j * n + j] = aqq + t * apq;
        a[i * n + j] = 0.0;
        a[j * n + i] = 0.0;
        double* ri = &a[i * n];
        double* rj = &a[j * n];
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const double aik = ri[k];
          const double ajk = rj[k];
          ri[k] = aik - s * (ajk + tau * aik);
          rj[k] = ajk + s * (aik - tau * ajk);
        }
        // mirror the two updated rows into the columns
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          a[k * n + i] = ri[k];
          a[k * n + j] = rj[k];
        }
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double qki = q[i * n + k];
            const double qkj = q[j * n + k];
            q[i * n + k] = qki - s * (qkj + tau * qki);
            q[j * n + k] = qkj + s * (qki - tau * qkj);
          }
        }
      }
    }
    off = offdiag_norm();
  }

  EigenResult r;
  r.sweeps = sweep;
  r.offdiag_norm = off;
  r.eigenvalues.resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  for (std::size_t i = 0; i < n; ++i) r.eigenvalues[i] = a[order[i] * n + order[i]];
  if (want_vectors) {
    // q currently holds rows of Q^T; re-emit in sorted column-major layout
    r.eigenvectors.assign(n * n, 0.0);
    for (std::size_t col = 0; col < n; ++col)
      for (std::size_t row = 0; row < n; ++row)
        r.eigenvectors[col * n + row] = q[order[col] * n + row];
    r.has_vectors = true;
  }
  return r;
}

// LU decomposition with partial pivoting on a general dense matrix;
// used for resolvent solves and for sign-tracked determinants in the
// secular-equation scans.
class LuFactor {
 public:
  LuFactor(std::vector<double> a, std::size_t n) : n_(n), a_(std::move(a)), piv_(n) {
    sign_ = 1;
    for (std::size_t i = 0; i < n_; ++i) piv_[i] = i;
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t pr = k;
      double pv = std::fabs(a_[k * n_ + k]);
      for (std::size_t i = k + 1; i < n_; ++i) {
        const double v = std::fabs(a_[i * n_ + k]);
        if (v > pv) { pv = v; pr = i; }
      }
      if (pv == 0.0) { singular_ = true; return; }
      if (pr != k) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(a_[pr * n_ + j], a_[k * n_ + j]);
        std::swap(piv_[pr], piv_[k]);
        sign_ = -sign_;
      }
      const double inv = 1.0 / a_[k * n_ + k];
      for (std::size_t i = k + 1; i < n_; ++i) {
        const double f = a_[i * n_ + k] * inv;
        a_[i * n_ + k] = f;
        for (std::size_t j = k + 1; j < n_; ++j) a_[i * n_ + j] -= f * a_[k * n_ + j];
      }
    }
  }

  bool singular() const { return singular_; }

  // determinant sign (0 if singular) and log|det|
  int det_sign() const {
    if (singular_) return 0;
    int s = sign_;
    for (std::size_t k = 0; k < n_; ++k)
      if (a_[k * n_ + k] < 0.0) s = -s;
    return s;
  }
  double log_abs_det() const {
    if (singular_) return -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t k = 0; k < n_; ++k) s += std::log(std::fabs(a_[k * n_ + k]));
    return s;
  }

  std::vector<double> solve(std::vector<double> b) const {
    if (singular_) throw NumericError("LU solve on a singular matrix");
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[piv_[i]];
    for (std::size_t i = 1; i < n_; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < i; ++j) s -= a_[i * n_ + j] * x[j];
      x[i] = s;
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      for (std::size_t j = i + 1; j < n_; ++j) s -= a_[i * n_ + j] * x[j];
      x[i] = s / a_[i * n_ + i];
    }
    return x;
  }

 private:
  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::size_t> piv_;
  int sign_ = 1;
  bool singular_ = false;
};

}  // namespace ultraspec
