//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/generators.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "sparse_ellipsoid/instance_io.h"

namespace sparse_ellipsoid {

namespace {

struct ClassName {
  InstanceClass cls;
  const char* name;
};

constexpr ClassName kNames[] = {
    {InstanceClass::kPowerlawInv, "powerlaw_inv"},
    {InstanceClass::kUniform, "uniform"},
    {InstanceClass::kPowerlawInvSq, "powerlaw_inv_sq"},
    {InstanceClass::kOffdiagUniform, "offdiag_uniform"},
    {InstanceClass::kBestCaseCont, "best_case_cont"},
    {InstanceClass::kWorstCaseCont, "worst_case_cont"},
    {InstanceClass::kTightEig, "tight_eig"},
    {InstanceClass::kTightDd, "tight_dd"},
};

double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x;
  do {
    x = u(rng);
  } while (x <= 0.0);
  return x;
}

Instance with_unit_center(const SymMatrix& q) {
  return Instance(q, Eigen::VectorXd::Ones(q.n()), 1.0);
}

}  // namespace

const char* class_name(InstanceClass c) {
  for (const auto& e : kNames)
    if (e.cls == c) return e.name;
  return "?";
}

InstanceClass class_from_name(const std::string& name) {
  for (const auto& e : kNames)
    if (name == e.name) return e.cls;
  throw std::invalid_argument("unknown instance class: " + name);
}

bool is_eigenvalue_class(InstanceClass c) {
  return c == InstanceClass::kPowerlawInv || c == InstanceClass::kUniform ||
         c == InstanceClass::kPowerlawInvSq;
}

bool is_constructed_class(InstanceClass c) {
  return c == InstanceClass::kBestCaseCont || c == InstanceClass::kWorstCaseCont ||
         c == InstanceClass::kTightEig || c == InstanceClass::kTightDd;
}

void validate(const EnsembleSpec& spec) {
  if (spec.count < 0) throw std::invalid_argument("spec: count must be >= 0");
  if (spec.n < 1) throw std::invalid_argument("spec: n must be >= 1");
  if (is_eigenvalue_class(spec.cls)) {
    if (!spec.kappa || !(*spec.kappa >= 1.0)) {
      throw std::invalid_argument("spec: kappa >= 1 required for eigenvalue classes");
    }
    if (spec.n < 2 && *spec.kappa != 1.0) {
      throw std::invalid_argument("spec: kappa > 1 needs n >= 2");
    }
  }
  if (spec.cls == InstanceClass::kOffdiagUniform) {
    if (!spec.a || !(*spec.a > 0.0 && *spec.a < 0.85)) {
      throw std::invalid_argument("spec: a in (0, 0.85) required for offdiag_uniform");
    }
  }
  if (spec.cls == InstanceClass::kTightEig && spec.n < 5) {
    throw std::invalid_argument("spec: tight_eig requires n >= 5");
  }
  if ((spec.cls == InstanceClass::kWorstCaseCont || spec.cls == InstanceClass::kTightDd) &&
      spec.n < 2) {
    throw std::invalid_argument("spec: class requires n >= 2");
  }
}

nlohmann::json spec_to_json(const EnsembleSpec& spec) {
  nlohmann::json j = {{"class", class_name(spec.cls)},
                      {"n", spec.n},
                      {"seed", spec.seed},
                      {"count", spec.count}};
  if (spec.kappa) j["kappa"] = *spec.kappa;
  if (spec.a) j["a"] = *spec.a;
  if (is_eigenvalue_class(spec.cls)) j["spectrum_support"] = "[1, kappa], extremes pinned";
  return j;
}

EnsembleSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec: expected a JSON object");
  EnsembleSpec s;
  try {
    s.cls = class_from_name(j.at("class").get<std::string>());
    s.n = j.at("n").get<int>();
    if (j.contains("kappa") && !j["kappa"].is_null()) s.kappa = j["kappa"].get<double>();
    if (j.contains("a") && !j["a"].is_null()) s.a = j["a"].get<double>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("count")) s.count = j["count"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spec: ") + e.what());
  }
  validate(s);
  return s;
}

Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_orthogonal: n must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::VectorXd sample_spectrum(InstanceClass cls, int n, double kappa, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) {
    const double u = u01(rng);
    switch (cls) {
      case InstanceClass::kPowerlawInv: lam[i] = std::exp(u * std::log(kappa)); break;
      case InstanceClass::kPowerlawInvSq: lam[i] = kappa / (kappa - u * (kappa - 1.0)); break;
      case InstanceClass::kUniform: lam[i] = 1.0 + u * (kappa - 1.0); break;
      default: throw std::invalid_argument("sample_spectrum: not an eigenvalue class");
    }
  }
  if (n >= 2) {
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (lam[i] < lam[lo]) lo = i;
      if (lam[i] > lam[hi]) hi = i;
    }
    if (lo == hi) hi = (lo + 1) % n;
    lam[lo] = 1.0;
    lam[hi] = kappa;
  } else {
    lam[0] = 1.0;
  }
  return lam;
}

Eigen::VectorXd sample_center(const SymMatrix& q, Rng& rng) {
  const SymMatrix a = inverse(q);
  Eigen::VectorXd c(q.n());
  for (int i = 0; i < q.n(); ++i) {
    const double half = std::sqrt(a(i, i));
    double x;
    do {
      x = (2.0 * open_unit(rng) - 1.0) * half;
    } while (!(std::abs(x) < half));
    c[i] = x;
  }
  return c;
}

SymMatrix rank_one_family(double lambda1, double lambda2, const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  return SymMatrix(lambda2 * Eigen::MatrixXd::Identity(n, n) -
                   (lambda2 - lambda1) * v * v.transpose());
}

Eigen::VectorXd split_sign_vector(int n) {
  Eigen::VectorXd v(n);
  const int plus = (n + 1) / 2;
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) v[i] = i < plus ? s : -s;
  return v;
}

Instance best_case_cont(int n) {
  return with_unit_center(rank_one_family(1.0 / n, n, split_sign_vector(n)));
}

Instance worst_case_cont(int n) {
  if (n < 2) throw std::invalid_argument("worst_case_cont: n must be >= 2");
  const Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  return with_unit_center(rank_one_family(1.0 / (n - 1), (n - 1) / 2.0, v));
}

Instance tight_eig(int n) {
  if (n < 5) throw std::invalid_argument("tight_eig: n must be >= 5");
  const int denom = 2 * ((n + 1) / 2) - static_cast<int>(std::floor(std::sqrt(double(n)))) - 1;
  return with_unit_center(rank_one_family(1.0 / n, 1.0 / denom, split_sign_vector(n)));
}

Instance tight_dd(int n) {
  if (n < 2) throw std::invalid_argument("tight_dd: n must be >= 2");
  const double lambda2 = 1.0 / n + 1.0 / ((n - 1.0) * (2.0 * n - 3.0));
  return with_unit_center(rank_one_family(1.0 / n, lambda2, split_sign_vector(n)));
}

std::vector<Instance> generate(const EnsembleSpec& spec) {
  validate(spec);
  std::vector<Instance> out;
  out.reserve(spec.count);
  Rng rng(spec.seed);
  const int n = spec.n;
  for (int k = 0; k < spec.count; ++k) {
    switch (spec.cls) {
      case InstanceClass::kBestCaseCont: out.push_back(best_case_cont(n)); break;
      case InstanceClass::kWorstCaseCont: out.push_back(worst_case_cont(n)); break;
      case InstanceClass::kTightEig: out.push_back(tight_eig(n)); break;
      case InstanceClass::kTightDd: out.push_back(tight_dd(n)); break;
      case InstanceClass::kOffdiagUniform: {
        std::uniform_real_distribution<double> u(-*spec.a, *spec.a);
        const double scale = 1.0 / std::sqrt(double(n));
        std::optional<SymMatrix> q;
        for (int attempt = 0; attempt < 1000 && !q; ++attempt) {
          Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
          for (int j = 0; j < n; ++j)
            for (int i = j + 1; i < n; ++i) m(i, j) = m(j, i) = u(rng) * scale;
          SymMatrix candidate(m);
          if (cholesky(candidate)) q = std::move(candidate);
        }
        if (!q) throw RejectionLimit("offdiag_uniform: no positive definite draw in 1000 tries");
        Eigen::VectorXd c = sample_center(*q, rng);
        out.emplace_back(*q, c, 1.0);
        break;
      }
      default: {
        const Eigen::VectorXd lam = sample_spectrum(spec.cls, n, *spec.kappa, rng);
        const Eigen::MatrixXd v = random_orthogonal(n, rng);
        const SymMatrix q(v * lam.asDiagonal() * v.transpose());
        Eigen::VectorXd c = sample_center(q, rng);
        out.emplace_back(q, c, 1.0);
        break;
      }
    }
  }
  return out;
}

Instance near_aligned_instance(int n, double max_angle, double kappa, Rng& rng) {
  std::uniform_real_distribution<double> angle(-max_angle, max_angle);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double th = angle(rng);
      const double c = std::cos(th), s = std::sin(th);
      for (int k = 0; k < n; ++k) {
        const double vp = v(k, p), vq = v(k, q);
        v(k, p) = c * vp - s * vq;
        v(k, q) = s * vp + c * vq;
      }
    }
  }
  const Eigen::VectorXd lam = sample_spectrum(InstanceClass::kUniform, n, kappa, rng);
  const SymMatrix q(v * lam.asDiagonal() * v.transpose());
  Eigen::VectorXd c = sample_center(q, rng);
  return Instance(q, c, 1.0);
}

std::string instance_id(const EnsembleSpec& spec, int index) {
  return std::string(class_name(spec.cls)) + "-n" + std::to_string(spec.n) + "-s" +
         std::to_string(spec.seed) + "-" + std::to_string(index);
}

nlohmann::json write_ensemble(const EnsembleSpec& spec, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<Instance> instances = generate(spec);
  nlohmann::json files = nlohmann::json::array();
  for (size_t i = 0; i < instances.size(); ++i) {
    const std::string name = instance_id(spec, static_cast<int>(i)) + ".json";
    save_instance(instances[i], (std::filesystem::path(dir) / name).string());
    files.push_back(name);
  }
  nlohmann::json manifest = {{"spec", spec_to_json(spec)}, {"rng", kRngId}, {"files", files}};
  write_json_file(manifest, (std::filesystem::path(dir) / "manifest.json").string());
  return manifest;
}

}  // namespace sparse_ellipsoid
