//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/instance.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace sparse_ellipsoid {

namespace {

void check_index_set(const IndexSet& s, int n, const char* name) {
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= n) {
      throw std::out_of_range(std::string(name) + ": index out of range");
    }
    if (i > 0 && s[i] <= s[i - 1]) {
      throw std::invalid_argument(std::string(name) +
                                  ": index set must be sorted and unique");
    }
  }
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Instance::Instance(SymMatrix q, Eigen::VectorXd c, double gamma)
    : q_(std::move(q)), c_(std::move(c)), gamma_(gamma) {
  if (c_.size() != q_.n()) {
    throw InvalidInstance("instance: length(c) must equal dimension of q");
  }
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
    throw InvalidInstance("instance: gamma must be positive");
  }
  if (!q_.matrix().allFinite() || !c_.allFinite()) {
    throw InvalidInstance("instance: q and c must be finite");
  }
  if (!cholesky(q_)) {
    throw InvalidInstance("instance: q must be positive definite");
  }
}

ZeroSetValue zero_set_feasible(const Instance& inst, const IndexSet& z) {
  check_index_set(z, inst.n(), "zero_set_feasible");
  if (z.empty()) return {true, 0.0};
  const IndexSet y = complement(z, inst.n());
  const SymMatrix s = schur_complement(inst.q(), y);
  const Eigen::VectorXd cz = subvector(inst.c(), z);
  const double value = cz.dot(s.matrix() * cz);
  return {value <= inst.gamma(), value};
}

MarginReport single_zero_margins(const Instance& inst) {
  const SymMatrix a = inverse(inst.q());
  MarginReport r;
  r.margins.resize(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    r.margins[i] = inst.gamma() - inst.c()[i] * inst.c()[i] / a(i, i);
    if (r.margins[i] < 0.0) r.forced_nonzero.push_back(i);
  }
  return r;
}

Subproblem reduce(const Instance& inst, const IndexSet& z, const IndexSet& u) {
  const int n = inst.n();
  check_index_set(z, n, "reduce(z)");
  check_index_set(u, n, "reduce(u)");
  const IndexSet zu = set_union(z, u);
  if (zu.size() != z.size() + u.size()) {
    throw std::invalid_argument("reduce: z and u must be disjoint");
  }
  const IndexSet f = complement(zu, n);

  double gamma_eff = inst.gamma();
  if (!z.empty()) gamma_eff -= zero_set_feasible(inst, z).e0_value;
  if (!(gamma_eff > 0.0)) {
    throw Infeasible("reduce: effective gamma is not positive");
  }

  Subproblem sub{inst, z, u, f, std::nullopt, static_cast<int>(u.size())};
  if (f.empty()) return sub;

  const Eigen::MatrixXd& q = inst.q().matrix();
  // Q_eff = Q_FF - Q_FU Q_UU^{-1} Q_UF
  Eigen::MatrixXd q_eff = submatrix(q, f, f);
  // B = Q_FZ - Q_FU Q_UU^{-1} Q_UZ
  Eigen::MatrixXd b = submatrix(q, f, z);
  if (!u.empty()) {
    const SymMatrix quu = inst.q().principal(u);
    const SymMatrix quu_inv = inverse(quu);
    const Eigen::MatrixXd qfu = submatrix(q, f, u);
    q_eff -= qfu * quu_inv.matrix() * qfu.transpose();
    if (!z.empty()) {
      b -= qfu * quu_inv.matrix() * submatrix(q, u, z);
    }
  }
  const SymMatrix q_eff_sym(q_eff);
  Eigen::VectorXd c_eff = subvector(inst.c(), f);
  if (!z.empty()) {
    c_eff += inverse(q_eff_sym).matrix() * (b * subvector(inst.c(), z));
  }
  sub.reduced.emplace(q_eff_sym, c_eff, gamma_eff);
  return sub;
}

Eigen::VectorXd reduced_center_two_step(const Instance& inst, const IndexSet& z,
                                        const IndexSet& u) {
  const int n = inst.n();
  const IndexSet f = complement(set_union(z, u), n);
  if (z.empty()) return subvector(inst.c(), f);
  // Conditioning on x_Z = 0 moves the center of the remaining block Y to
  // c_Y + Q_YY^{-1} Q_YZ c_Z. Marginalizing U keeps the F entries.
  const IndexSet y = complement(z, n);
  const Eigen::MatrixXd& q = inst.q().matrix();
  const SymMatrix qyy = inst.q().principal(y);
  const Eigen::VectorXd shift =
      inverse(qyy).matrix() * (submatrix(q, y, z) * subvector(inst.c(), z));
  Eigen::VectorXd out(f.size());
  size_t k = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (k < f.size() && y[i] == f[k]) {
      out[k] = inst.c()[y[i]] + shift[i];
      ++k;
    }
  }
  return out;
}

Subproblem preprocess(const Instance& inst) {
  return reduce(inst, {}, single_zero_margins(inst).forced_nonzero);
}

}  // namespace sparse_ellipsoid
