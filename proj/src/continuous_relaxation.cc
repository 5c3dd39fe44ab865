//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/continuous_relaxation.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparse_ellipsoid {

namespace {

constexpr double kMuCap = 1e12;

// Sides below this fraction of the half-width count as degenerate.
constexpr double kBoxTol = 1e-12;

}  // namespace

BoxConstants box_constants(const Instance& inst) {
  const SymMatrix a = inverse(inst.q());
  BoxConstants box;
  box.b_plus.resize(inst.n());
  box.b_minus.resize(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    const double s = std::sqrt(inst.gamma() * a(i, i));
    box.b_plus[i] = s + inst.c()[i];
    box.b_minus[i] = s - inst.c()[i];
    if (box.b_plus[i] <= kBoxTol * s || box.b_minus[i] <= kBoxTol * s) {
      throw DegenerateBox("box_constants: zero-margin index " + std::to_string(i));
    }
  }
  return box;
}

ContinuousDual::ContinuousDual(const Instance& inst)
    : a_(inverse(inst.q()).matrix()), c_(inst.c()), gamma_(inst.gamma()) {
  const int n = inst.n();
  lower_.resize(n);
  upper_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = std::sqrt(gamma_ * a_(i, i));
    const double bp = s + c_[i];
    const double bm = s - c_[i];
    if (bp > kBoxTol * s) {
      upper_[i] = 1.0 / bp;
    } else {
      upper_[i] = kMuCap;
      capped_ = true;
    }
    if (bm > kBoxTol * s) {
      lower_[i] = -1.0 / bm;
    } else {
      lower_[i] = -kMuCap;
      capped_ = true;
    }
  }
}

double ContinuousDual::objective(const Eigen::VectorXd& mu) const {
  const double quad = std::max(0.0, mu.dot(a_ * mu));
  return c_.dot(mu) - std::sqrt(gamma_ * quad);
}

Eigen::VectorXd ContinuousDual::gradient(const Eigen::VectorXd& mu) const {
  const Eigen::VectorXd amu = a_ * mu;
  const double root = std::sqrt(gamma_ * std::max(0.0, mu.dot(amu)));
  if (root == 0.0) return c_;
  return c_ - (gamma_ / root) * amu;
}

Eigen::VectorXd ContinuousDual::project(const Eigen::VectorXd& mu) const {
  return mu.cwiseMax(lower_).cwiseMin(upper_);
}

bool ContinuousDual::in_box(const Eigen::VectorXd& mu) const {
  return (mu.array() >= lower_.array()).all() && (mu.array() <= upper_.array()).all();
}

DualCertificate solve_dual(const Instance& inst, double tol) {
  const int n = inst.n();
  DualCertificate cert;
  cert.mu = Eigen::VectorXd::Zero(n);
  if ((inst.c().array() == 0.0).all()) return cert;

  const ContinuousDual dual(inst);
  cert.capped = dual.capped();

  // Largest multiple of Qc inside the box.
  const Eigen::VectorXd dir = inst.q().matrix() * inst.c();
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (dir[i] > 0) alpha = std::min(alpha, dual.upper()[i] / dir[i]);
    if (dir[i] < 0) alpha = std::min(alpha, dual.lower()[i] / dir[i]);
  }
  Eigen::VectorXd mu = dual.project(alpha * dir);
  double f = dual.objective(mu);
  if (f < 0.0) {
    mu.setZero();
    f = 0.0;
  }
  Eigen::VectorXd g = dual.gradient(mu);

  constexpr int kMaxIter = 10000;
  constexpr int kStallSteps = 5;
  constexpr double kArmijo = 1e-4;
  double step = 1.0 / std::max(1e-300, inst.gamma() * inverse(inst.q()).matrix().diagonal().maxCoeff());
  int stall = 0;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    bool accepted = false;
    Eigen::VectorXd mu_new;
    double f_new = f;
    double s = step;
    for (int bt = 0; bt < 60; ++bt) {
      mu_new = dual.project(mu + s * g);
      const Eigen::VectorXd d = mu_new - mu;
      if (d.lpNorm<Eigen::Infinity>() == 0.0) break;
      f_new = dual.objective(mu_new);
      if (f_new >= f + kArmijo * g.dot(d)) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd g_new = dual.gradient(mu_new);
    const Eigen::VectorXd dmu = mu_new - mu;
    const Eigen::VectorXd dg = g_new - g;
    const double curv = -dmu.dot(dg);
    step = curv > 0 ? std::clamp(dmu.squaredNorm() / curv, 1e-12 * s, 1e12 * s) : 2.0 * s;

    const double gain = f_new - f;
    mu = mu_new;
    g = g_new;
    f = f_new;
    if (gain < tol * std::max(1.0, std::abs(f))) {
      if (++stall >= kStallSteps) {
        ++iter;
        break;
      }
    } else {
      stall = 0;
    }
  }
  cert.mu = mu;
  cert.objective = dual.objective(mu);
  cert.box_feasible = dual.in_box(mu);
  cert.iterations = iter;
  return cert;
}

int integer_bound(double v) {
  return std::max(0, static_cast<int>(std::ceil(v - 1e-7)));
}

int lower_bound(const Instance& inst) {
  return integer_bound(solve_dual(inst).objective);
}

double prop1_upper_bound(const Instance& inst) {
  const double cqc = inst.c().dot(inst.q().matrix() * inst.c());
  if (cqc <= inst.gamma()) return 0.0;
  const double theta = 1.0 - std::sqrt(inst.gamma() / cqc);
  return theta * inst.n() / 2.0;
}

double primal_value(const Instance& inst, const Eigen::VectorXd& x) {
  if (x.size() != inst.n()) throw std::invalid_argument("primal_value: size mismatch");
  const Eigen::VectorXd r = x - inst.c();
  if (r.dot(inst.q().matrix() * r) > inst.gamma() * (1.0 + 1e-9)) {
    throw InfeasiblePoint("primal_value: point outside the ellipsoid");
  }
  const SymMatrix a = inverse(inst.q());
  double v = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    const double s = std::sqrt(inst.gamma() * a(i, i));
    if (x[i] > 0) v += x[i] / (s + inst.c()[i]);
    if (x[i] < 0) v += -x[i] / (s - inst.c()[i]);
  }
  return v;
}

}  // namespace sparse_ellipsoid
