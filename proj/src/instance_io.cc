//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/instance_io.h"

#include <fstream>
#include <sstream>

namespace sparse_ellipsoid {

using nlohmann::json;

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("expected a numeric array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("expected a numeric array");
    v[i] = j[i].get<double>();
  }
  return v;
}

Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("instance: expected a JSON object");
  for (const char* key : {"n", "q", "c", "gamma"}) {
    if (!j.contains(key)) {
      throw InputError(std::string("instance: missing field \"") + key + "\"");
    }
  }
  if (!j["n"].is_number_integer() || j["n"].get<long>() < 1) {
    throw InputError("instance: n must be a positive integer");
  }
  const int n = j["n"].get<int>();
  const json& q = j["q"];
  if (!q.is_array() || static_cast<int>(q.size()) != n) {
    throw InputError("instance: q must have n rows");
  }
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!q[r].is_array() || static_cast<int>(q[r].size()) != n) {
      throw InputError("instance: q must be n x n");
    }
    for (int k = 0; k < n; ++k) {
      if (!q[r][k].is_number()) throw InputError("instance: q entries must be numbers");
      m(r, k) = q[r][k].get<double>();
    }
  }
  Eigen::VectorXd c = vector_from_json(j["c"]);
  if (c.size() != n) throw InputError("instance: length(c) must equal n");
  if (!j["gamma"].is_number()) throw InputError("instance: gamma must be a number");
  try {
    return Instance(SymMatrix(m), c, j["gamma"].get<double>());
  } catch (const InvalidInstance& e) {
    throw InputError(e.what());
  }
}

nlohmann::json instance_to_json(const Instance& inst) {
  json q = json::array();
  for (int r = 0; r < inst.n(); ++r) {
    json row = json::array();
    for (int k = 0; k < inst.n(); ++k) row.push_back(inst.q()(r, k));
    q.push_back(row);
  }
  return {{"n", inst.n()}, {"q", q}, {"c", vector_to_json(inst.c())},
          {"gamma", inst.gamma()}};
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Instance load_instance(const std::string& path) {
  return instance_from_json(read_json_file(path));
}

void save_instance(const Instance& inst, const std::string& path) {
  write_json_file(instance_to_json(inst), path);
}

}  // namespace sparse_ellipsoid
