//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_BRANCH_AND_BOUND_H_
#define SPARSE_ELLIPSOID_BRANCH_AND_BOUND_H_

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

class DimensionTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BoundMode { kNone, kContinuous, kDiagonal };

const char* bound_mode_name(BoundMode mode);

struct BnbConfig {
  BoundMode bound_mode = BoundMode::kNone;
  int relax_min_dim = 20;
  long node_limit = std::numeric_limits<long>::max();
  double time_limit_s = std::numeric_limits<double>::infinity();
  bool relax_on_zero_branch_only = true;
};

struct BnbReport {
  int optimal_cost = 0;
  IndexSet support;
  Eigen::VectorXd x;
  long nodes_explored = 0;
  long relaxations_solved = 0;
  long relaxation_prunes = 0;
  std::vector<std::pair<long, int>> incumbent_history;
  bool proven_optimal = false;
  // Smallest lower bound over the open frontier; equals optimal_cost when
  // proven_optimal.
  int best_lower_bound = 0;
  double elapsed_s = 0.0;
};

struct GreedyResult {
  int cost = 0;
  IndexSet zero_set;
  Eigen::VectorXd x;
};

GreedyResult backward_greedy(const Instance& inst);

// Zero set chosen greedily from the inverse-form data (a = Q^{-1}).
IndexSet greedy_zero_set(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                         double gamma);

// Free index of sub.reduced with the smallest single-zero margin, reported
// as an index of the parent instance.
int branch_variable(const Subproblem& sub);

BnbReport solve(const Instance& inst, const BnbConfig& cfg = {});

struct BruteForceResult {
  int optimal_cost = 0;
  IndexSet support;
};

// Exhaustive search over zero sets, largest first. N <= 20.
BruteForceResult brute_force(const Instance& inst);

// Minimizer of the quadratic form with x_Z = 0 for Z the complement of support.
Eigen::VectorXd point_with_support(const Instance& inst, const IndexSet& support);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_BRANCH_AND_BOUND_H_
