//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_VERIFY_H_
#define SPARSE_ELLIPSOID_VERIFY_H_

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparse_ellipsoid/generators.h"
#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

enum class RelaxKind { kContinuous, kDiagonal };

// { "which", "bound", "base_cost", "free", "certificate": {...} }
// The certificate refers to the preprocessed instance over "free".
nlohmann::json relax_report(const Instance& inst, RelaxKind which);

struct CertificateCheck {
  bool ok = false;
  int bound = 0;  // recomputed from the certificate alone
  std::string reason;
};

// Box membership and objective for mu; bound = ceil(objective - 1e-7).
CertificateCheck verify_continuous_certificate(const Instance& inst, const Eigen::VectorXd& mu);
// d > 0, Q - D positive definite, then the exact diagonal problem.
CertificateCheck verify_diagonal_certificate(const Instance& inst, const Eigen::VectorXd& d);

// Rebuilds the bound from a relax_report and compares it with "bound".
CertificateCheck verify_relax_report(const Instance& inst, const nlohmann::json& report);

struct VerifyOptions {
  EnsembleSpec spec;
  int trials = 100;
  // Test hook: corrupts one solver answer so the battery must fail.
  bool inject_fault = false;
};

struct VerifyReport {
  int trials = 0;
  int violations = 0;
  std::vector<std::string> messages;
};

// Oracle equivalence, bound sandwiches and certificate soundness on
// spec.n <= 12 instances.
VerifyReport run_verify(const VerifyOptions& options, std::ostream* log = nullptr);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_VERIFY_H_
