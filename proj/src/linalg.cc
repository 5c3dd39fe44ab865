//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sparse_ellipsoid {

SymMatrix::SymMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("SymMatrix: matrix must be square with n >= 1");
  }
  a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(int n) {
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

SymMatrix SymMatrix::principal(const IndexSet& idx) const {
  return SymMatrix(submatrix(a_, idx, idx));
}

std::optional<Eigen::MatrixXd> cholesky(const SymMatrix& a) {
  const int n = a.n();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

EigenDecomp eig_sym(const SymMatrix& a_in) {
  const int n = a_in.n();
  Eigen::MatrixXd a = a_in.matrix();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = 1e-12 * a.norm();

  auto off_norm = [&]() {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (off_norm() > threshold) {
    if (sweep++ >= kMaxSweeps) {
      throw NoConvergence("eig_sym: Jacobi sweep cap reached");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });
  EigenDecomp out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    out.eigenvectors.col(j) = v.col(order[j]);
  }
  return out;
}

double min_eigenvalue(const SymMatrix& a) { return eig_sym(a).eigenvalues[0]; }

double max_eigenvalue(const SymMatrix& a) {
  return eig_sym(a).eigenvalues[a.n() - 1];
}

SymMatrix inverse(const SymMatrix& a) {
  auto l = cholesky(a);
  if (!l) throw NotPositiveDefinite("inverse: matrix is not positive definite");
  const int n = a.n();
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
  l->triangularView<Eigen::Lower>().solveInPlace(x);
  l->triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return SymMatrix(x);
}

SymMatrix schur_complement(const SymMatrix& q, const IndexSet& y) {
  if (y.empty()) return q;
  const IndexSet z = complement(y, q.n());
  if (z.empty()) {
    throw std::invalid_argument("schur_complement: y must be a proper subset");
  }
  const SymMatrix qyy = q.principal(y);
  auto l = cholesky(qyy);
  if (!l) throw NotPositiveDefinite("schur_complement: Q_YY not positive definite");
  Eigen::MatrixXd w = submatrix(q.matrix(), y, z);
  l->triangularView<Eigen::Lower>().solveInPlace(w);
  Eigen::MatrixXd s = submatrix(q.matrix(), z, z) - w.transpose() * w;
  return SymMatrix(s);
}

IndexSet complement(const IndexSet& s, int n) {
  std::vector<char> in(n, 0);
  for (int i : s) {
    if (i < 0 || i >= n) throw std::out_of_range("index out of range");
    in[i] = 1;
  }
  IndexSet out;
  for (int i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, const IndexSet& rows,
                          const IndexSet& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& v, const IndexSet& idx) {
  Eigen::VectorXd out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

}  // namespace sparse_ellipsoid
