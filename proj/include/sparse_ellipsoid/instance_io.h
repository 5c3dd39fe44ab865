//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SPARSE_ELLIPSOID_INSTANCE_IO_H_
#define SPARSE_ELLIPSOID_INSTANCE_IO_H_

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sparse_ellipsoid/instance.h"

namespace sparse_ellipsoid {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// { "n": int, "q": [[...]], "c": [...], "gamma": number }
// q is symmetrized; a non positive definite q is rejected. Throws InputError.
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

}  // namespace sparse_ellipsoid

#endif  // SPARSE_ELLIPSOID_INSTANCE_IO_H_
