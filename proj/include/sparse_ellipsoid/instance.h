//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_INSTANCE_H_
#define SPARSE_ELLIPSOID_INSTANCE_H_

#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "sparse_ellipsoid/linalg.h"

namespace sparse_ellipsoid {

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// minimize card(x)  s.t.  (x - c)^T Q (x - c) <= gamma
class Instance {
 public:
  // Throws InvalidInstance if q is not positive definite, gamma <= 0 or the
  // dimensions disagree.
  Instance(SymMatrix q, Eigen::VectorXd c, double gamma);

  int n() const { return q_.n(); }
  const SymMatrix& q() const { return q_; }
  const Eigen::VectorXd& c() const { return c_; }
  double gamma() const { return gamma_; }

 private:
  SymMatrix q_;
  Eigen::VectorXd c_;
  double gamma_;
};

struct ZeroSetValue {
  bool feasible;
  double e0_value;  // c_Z^T (Q/Q_YY) c_Z
};

ZeroSetValue zero_set_feasible(const Instance& inst, const IndexSet& z);

struct MarginReport {
  Eigen::VectorXd margins;  // gamma - c_n^2 / (Q^{-1})_nn
  IndexSet forced_nonzero;  // margins < 0
};

MarginReport single_zero_margins(const Instance& inst);

struct Subproblem {
  Instance parent;
  IndexSet z;  // fixed at zero
  IndexSet u;  // fixed nonzero
  IndexSet f;  // free, ascending
  // Instance over f. Empty when f is empty.
  std::optional<Instance> reduced;
  int base_cost = 0;
};

// Throws Infeasible when gamma_eff <= 0.
Subproblem reduce(const Instance& inst, const IndexSet& z, const IndexSet& u);

// The reduced center obtained by first conditioning on x_Z = 0 and then
// marginalizing U. Agrees with Subproblem::reduced->c().
Eigen::VectorXd reduced_center_two_step(const Instance& inst, const IndexSet& z,
                                        const IndexSet& u);

Subproblem preprocess(const Instance& inst);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_INSTANCE_H_
