//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_CONTINUOUS_RELAXATION_H_
#define SPARSE_ELLIPSOID_CONTINUOUS_RELAXATION_H_

#include <stdexcept>

#include <Eigen/Dense>

#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

class DegenerateBox : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasiblePoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-coordinate extent of the ellipsoid above and below zero:
// b_plus = sqrt(gamma A_nn) + c_n, b_minus = sqrt(gamma A_nn) - c_n, A = Q^{-1}.
struct BoxConstants {
  Eigen::VectorXd b_plus;
  Eigen::VectorXd b_minus;
};

// Throws DegenerateBox if a side is not strictly positive.
BoxConstants box_constants(const Instance& inst);

struct DualCertificate {
  Eigen::VectorXd mu;
  double objective = 0.0;
  bool box_feasible = true;
  // Set when a box side was unbounded and |mu_n| was capped.
  bool capped = false;
  int iterations = 0;
};

// Concave dual of the weighted l1 relaxation:
//   maximize c^T mu - sqrt(gamma mu^T Q^{-1} mu)  s.t.  lower <= mu <= upper
// with lower = -1/b_minus, upper = 1/b_plus.
class ContinuousDual {
 public:
  explicit ContinuousDual(const Instance& inst);

  int n() const { return static_cast<int>(c_.size()); }
  double objective(const Eigen::VectorXd& mu) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& mu) const;
  Eigen::VectorXd project(const Eigen::VectorXd& mu) const;
  bool in_box(const Eigen::VectorXd& mu) const;

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  bool capped() const { return capped_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd c_;
  double gamma_;
  Eigen::VectorXd lower_, upper_;
  bool capped_ = false;
};

DualCertificate solve_dual(const Instance& inst, double tol = 1e-7);

// ceil(v - 1e-7)
int integer_bound(double v);

int lower_bound(const Instance& inst);

// theta N / 2 with theta = 1 - sqrt(gamma / c^T Q c); 0 when c^T Q c <= gamma.
double prop1_upper_bound(const Instance& inst);

// sum_n max(x_n,0)/b_plus_n + max(-x_n,0)/b_minus_n for a point inside the
// ellipsoid. Throws InfeasiblePoint otherwise.
double primal_value(const Instance& inst, const Eigen::VectorXd& x);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_CONTINUOUS_RELAXATION_H_
