//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_DIAGONAL_RELAXATION_H_
#define SPARSE_ELLIPSOID_DIAGONAL_RELAXATION_H_

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

// A diagonal D with 0 < D and Q - D positive definite. Any such D gives a
// valid lower bound through the enclosing axis-aligned ellipsoid.
struct DiagonalCertificate {
  Eigen::VectorXd d;
  int k = 0;
  double objective = 0.0;   // S_k(d_n c_n^2)
  double psd_margin = 0.0;  // smallest eigenvalue of Q - D (NaN if not computed)
};

struct DiagRelaxResult {
  int lower_bound = 0;
  int k_d = 0;
  DiagonalCertificate certificate;
  std::vector<std::pair<int, double>> e_d_trace;
};

struct DiagSolveOptions {
  double tol = 1e-6;
  // Stop as soon as the objective is decided to be above or below this value.
  std::optional<double> decide_against;
  // Feasible certificate to start from.
  const Eigen::VectorXd* warm_start = nullptr;
  bool compute_psd_margin = true;
};

// Better of lambda_min(Q) I and alpha Diag(Q), shrunk by (1 - 1e-9).
DiagonalCertificate e_d_lower_start(const Instance& inst, int k);

DiagonalCertificate solve_e_d(const Instance& inst, int k, double tol = 1e-6);
DiagonalCertificate solve_e_d(const Instance& inst, int k,
                              const DiagSolveOptions& options);

struct DiagRelaxOptions {
  double tol = 1e-6;
  // Stop each inner solve once the bisection predicate is decided.
  bool early_decision = true;
};

DiagRelaxResult solve_relaxation(const Instance& inst, double tol = 1e-6);
DiagRelaxResult solve_relaxation(const Instance& inst,
                                 const DiagRelaxOptions& options);

// Recomputes S_k(d c^2) and checks D > 0 and Q - D positive definite.
bool certificate_is_feasible(const Instance& inst, const Eigen::VectorXd& d);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_DIAGONAL_RELAXATION_H_
