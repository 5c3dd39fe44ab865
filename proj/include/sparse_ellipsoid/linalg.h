//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_LINALG_H_
#define SPARSE_ELLIPSOID_LINALG_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace sparse_ellipsoid {

// Sorted, duplicate-free list of 0-based indices.
using IndexSet = std::vector<int>;

class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense symmetric matrix. Symmetry is exact: the input is replaced by
// (A + A^T) / 2 on construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& a);

  static SymMatrix identity(int n);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  int n() const { return static_cast<int>(a_.rows()); }
  double operator()(int i, int j) const { return a_(i, j); }
  const Eigen::MatrixXd& matrix() const { return a_; }

  SymMatrix principal(const IndexSet& idx) const;

 private:
  Eigen::MatrixXd a_;
};

struct EigenDecomp {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column j pairs with eigenvalues[j]
};

// Lower factor L with L L^T = a, or nullopt when a pivot is <= 0.
std::optional<Eigen::MatrixXd> cholesky(const SymMatrix& a);

// Cyclic Jacobi. Throws NoConvergence after 100 sweeps.
EigenDecomp eig_sym(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);
double max_eigenvalue(const SymMatrix& a);

// Throws NotPositiveDefinite.
SymMatrix inverse(const SymMatrix& a);

// Q_ZZ - Q_ZY Q_YY^{-1} Q_YZ where Z is the complement of y. An empty y
// returns q itself.
SymMatrix schur_complement(const SymMatrix& q, const IndexSet& y);

IndexSet complement(const IndexSet& s, int n);
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, const IndexSet& rows,
                          const IndexSet& cols);
Eigen::VectorXd subvector(const Eigen::VectorXd& v, const IndexSet& idx);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_LINALG_H_
