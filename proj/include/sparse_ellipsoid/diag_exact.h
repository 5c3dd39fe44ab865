//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_DIAG_EXACT_H_
#define SPARSE_ELLIPSOID_DIAG_EXACT_H_

#include <vector>

#include <Eigen/Dense>

#include "sparse_ellipsoid/linalg.h"

namespace sparse_ellipsoid {

// Ellipsoid with diagonal matrix diag(d).
struct DiagInstance {
  Eigen::VectorXd d;  // all > 0
  Eigen::VectorXd c;
  double gamma;
};

struct DiagSolution {
  int min_cardinality;
  int max_zeros;
  IndexSet zero_set;  // sorted
};

// Sum of the k smallest values. 0 <= k <= size.
double sum_k_smallest(const std::vector<double>& values, int k);
double sum_k_smallest(const Eigen::VectorXd& values, int k);

// Indices ordered by ascending value, ties to the lower index.
std::vector<int> ascending_order(const Eigen::VectorXd& values);

DiagSolution solve_diagonal(const DiagInstance& di);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_DIAG_EXACT_H_
