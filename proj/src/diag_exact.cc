//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/diag_exact.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sparse_ellipsoid {

double sum_k_smallest(const std::vector<double>& values, int k) {
  if (k < 0 || k > static_cast<int>(values.size())) {
    throw std::out_of_range("sum_k_smallest: k out of range");
  }
  if (k == 0) return 0.0;
  std::vector<double> v = values;
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  std::sort(v.begin(), v.begin() + k);
  return std::accumulate(v.begin(), v.begin() + k, 0.0);
}

double sum_k_smallest(const Eigen::VectorXd& values, int k) {
  return sum_k_smallest(std::vector<double>(values.data(), values.data() + values.size()), k);
}

std::vector<int> ascending_order(const Eigen::VectorXd& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return values[i] < values[j]; });
  return order;
}

DiagSolution solve_diagonal(const DiagInstance& di) {
  const int n = static_cast<int>(di.d.size());
  if (di.c.size() != n) throw std::invalid_argument("solve_diagonal: size mismatch");
  if ((di.d.array() <= 0.0).any()) {
    throw std::invalid_argument("solve_diagonal: d must be positive");
  }
  const Eigen::VectorXd products = di.d.array() * di.c.array().square();
  const std::vector<int> order = ascending_order(products);
  int k = 0;
  double prefix = 0.0;
  while (k < n && prefix + products[order[k]] <= di.gamma) {
    prefix += products[order[k]];
    ++k;
  }
  DiagSolution out{n - k, k, IndexSet(order.begin(), order.begin() + k)};
  std::sort(out.zero_set.begin(), out.zero_set.end());
  return out;
}

}  // namespace sparse_ellipsoid
