//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_GENERATORS_H_
#define SPARSE_ELLIPSOID_GENERATORS_H_

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

class RejectionLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;
inline constexpr const char* kRngId = "mt19937_64";

enum class InstanceClass {
  kPowerlawInv,
  kUniform,
  kPowerlawInvSq,
  kOffdiagUniform,
  kBestCaseCont,
  kWorstCaseCont,
  kTightEig,
  kTightDd,
};

const char* class_name(InstanceClass c);
// Throws std::invalid_argument for unknown names.
InstanceClass class_from_name(const std::string& name);
bool is_eigenvalue_class(InstanceClass c);
bool is_constructed_class(InstanceClass c);

struct EnsembleSpec {
  InstanceClass cls = InstanceClass::kPowerlawInv;
  int n = 0;
  std::optional<double> kappa;
  std::optional<double> a;
  std::uint64_t seed = 0;
  int count = 1;
};

// Throws std::invalid_argument when the spec is inconsistent.
void validate(const EnsembleSpec& spec);

nlohmann::json spec_to_json(const EnsembleSpec& spec);
EnsembleSpec spec_from_json(const nlohmann::json& j);

// Haar-distributed orthogonal matrix.
Eigen::MatrixXd random_orthogonal(int n, Rng& rng);

// Eigenvalues on [1, kappa] with the smallest and largest draw pinned to 1
// and kappa. Only the three eigenvalue classes are accepted.
Eigen::VectorXd sample_spectrum(InstanceClass cls, int n, double kappa, Rng& rng);

// c_n uniform on the open interval (-sqrt(A_nn), sqrt(A_nn)), A = Q^{-1}.
Eigen::VectorXd sample_center(const SymMatrix& q, Rng& rng);

// lambda2 I - (lambda2 - lambda1) v v^T
SymMatrix rank_one_family(double lambda1, double lambda2, const Eigen::VectorXd& v);

// First ceil(n/2) entries +1/sqrt(n), the rest -1/sqrt(n).
Eigen::VectorXd split_sign_vector(int n);

Instance best_case_cont(int n);
Instance worst_case_cont(int n);
Instance tight_eig(int n);
Instance tight_dd(int n);

std::vector<Instance> generate(const EnsembleSpec& spec);

// Eigenbasis close to the identity: a product of random plane rotations with
// angles in [-max_angle, max_angle], spectrum uniform on [1, kappa].
Instance near_aligned_instance(int n, double max_angle, double kappa, Rng& rng);

std::string instance_id(const EnsembleSpec& spec, int index);

// Writes one JSON file per instance and manifest.json into dir.
nlohmann::json write_ensemble(const EnsembleSpec& spec, const std::string& dir);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_GENERATORS_H_
