//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_BOUNDS_H_
#define SPARSE_ELLIPSOID_BOUNDS_H_

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

class NotDiagonallyDominant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlignmentTooWeak : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundVariant { kEig, kEigScaled, kDiagDom, kNearAligned };

const char* variant_name(BoundVariant v);

// Relative slack on the "<= gamma" predicates. The closed-form tightness
// instances sit exactly on these boundaries.
inline constexpr double kPredicateSlack = 1e-9;

// Guaranteed range [k_under, k_over] for the largest feasible number of
// zeros, valid also for the diagonal relaxation's k_d.
struct OrderingBounds {
  int k_under = 0;
  int k_over = 0;
  // Empty when k_under == 0.
  std::optional<double> ratio_bound;
  BoundVariant variant = BoundVariant::kEig;
  // Factor multiplying S_K in the k_over test and the one used for the
  // ratio (diag_dom and near_aligned variants).
  double lower_factor = 0.0;
  double upper_factor = 0.0;
  // near_aligned only.
  double kappa = 0.0;
  double rho = 0.0;
};

// Eigenvalue bounds. With scale s the instance is first mapped to
// (S^{-1} Q S^{-1}, S c).
OrderingBounds eig_bounds(const Instance& inst,
                          const std::optional<Eigen::VectorXd>& scale = std::nullopt);

enum class ProbRegime { kQuadratic, kLinear, kCertain };

const char* regime_name(ProbRegime r);

struct ProbBoundReport {
  double epsilon = 0.0;
  std::optional<double> ratio_bound;
  double probability = 0.0;
  ProbRegime regime = ProbRegime::kQuadratic;
  std::optional<std::pair<double, double>> interval_i;
  double eig_mean = 0.0;
  double eig_var = 0.0;
  double eps_max = 0.0;
  int k_under = 0;
};

// Probability, over a uniformly random eigenbasis with the instance's
// spectrum, that the (1 + epsilon) mean-eigenvalue ratio bound holds.
ProbBoundReport prob_bound(const Instance& inst, double epsilon);

// Largest normalized off-diagonal absolute row sum.
double offdiag_row_sum(const SymMatrix& q);

OrderingBounds diag_dom_bounds(const Instance& inst);

// Coordinate n uses eigenvector column[n] multiplied by sign[n] (+1/-1).
struct AlignmentOrdering {
  std::vector<int> column;
  std::vector<int> sign;
};

AlignmentOrdering default_alignment(const EigenDecomp& ed);

struct AlignmentData {
  Eigen::MatrixXd v;       // permuted, sign-adjusted eigenvectors
  Eigen::VectorXd lambda;  // eigenvalue assigned to each coordinate
  double kappa = 0.0;
  double rho = 0.0;        // spectral norm of v - I
  double ratio_floor = 0.0;  // 1 - kappa rho
  double ratio_ceiling = 0.0;  // 1 + kappa (rho + rho^2)
};

AlignmentData alignment_data(const Instance& inst,
                             const std::optional<AlignmentOrdering>& ordering = std::nullopt);

OrderingBounds near_aligned_bounds(
    const Instance& inst, const std::optional<AlignmentOrdering>& ordering = std::nullopt);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_BOUNDS_H_
