//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/continuous_relaxation.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "sparse_ellipsoid/generators.h"

namespace sparse_ellipsoid {
namespace {

using testing::min_cardinality;
using testing::random_instance;

TEST(BoxConstantsTest, Examples) {
  const BoxConstants unit =
      box_constants(Instance(SymMatrix::identity(3), Eigen::Vector3d::Zero(), 1.0));
  EXPECT_EQ(unit.b_plus, Eigen::Vector3d::Ones());
  EXPECT_EQ(unit.b_minus, Eigen::Vector3d::Ones());

  for (int n : {4, 7, 10}) {
    const BoxConstants best = box_constants(best_case_cont(n));
    const double expect = 1.0 + std::sqrt(1.0 + (n - 1.0) / (double(n) * n));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(best.b_plus[i], expect, 1e-12);
    const BoxConstants worst = box_constants(worst_case_cont(n));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(worst.b_plus[i], 1.0 + std::sqrt((n + 1.0) / n), 1e-12);
  }
}

TEST(BoxConstantsTest, ZeroMarginIsDegenerate) {
  const Instance inst(SymMatrix::identity(2), Eigen::Vector2d(1.0, 0.0), 1.0);
  EXPECT_THROW(box_constants(inst), DegenerateBox);
  const DualCertificate cert = solve_dual(inst);
  EXPECT_TRUE(cert.capped);
  EXPECT_TRUE(cert.box_feasible);
}

TEST(SolveDualTest, ZeroCenter) {
  const Instance inst(SymMatrix::identity(3), Eigen::Vector3d::Zero(), 1.0);
  const DualCertificate cert = solve_dual(inst);
  EXPECT_EQ(cert.objective, 0.0);
  EXPECT_EQ(lower_bound(inst), 0);
}

TEST(SolveDualTest, BestCase) {
  for (int n : {6, 8, 10, 12}) {
    const Instance inst = best_case_cont(n);
    const DualCertificate cert = solve_dual(inst);
    const double bplus = 1.0 + std::sqrt(1.0 + (n - 1.0) / (double(n) * n));
    if (n % 2 == 0) EXPECT_GE(cert.objective, (n - 1) / bplus - 1e-9);
    EXPECT_GT(cert.objective, n / 2 - 1);
    EXPECT_EQ(lower_bound(inst), n / 2);
  }
}

TEST(SolveDualTest, WorstCase) {
  for (int n : {6, 10}) {
    const Instance inst = worst_case_cont(n);
    const double bplus = 1.0 + std::sqrt((n + 1.0) / n);
    const double primal = (n - std::sqrt(double(n) * (n - 1))) / bplus;
    const DualCertificate cert = solve_dual(inst);
    EXPECT_LT(cert.objective, 1.0);
    EXPECT_LE(cert.objective, primal + 1e-9);
    EXPECT_EQ(lower_bound(inst), 1);
  }
}

TEST(SolveDualTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = random_instance(3 + t % 8, rng);
    const ContinuousDual dual(inst);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    Eigen::VectorXd mu(inst.n());
    for (int i = 0; i < inst.n(); ++i) {
      const double w = u(rng);
      mu[i] = w * dual.lower()[i] + (1 - w) * dual.upper()[i];
    }
    const Eigen::VectorXd g = dual.gradient(mu);
    const double h = 1e-6;
    for (int i = 0; i < inst.n(); ++i) {
      Eigen::VectorXd p = mu, m = mu;
      p[i] += h;
      m[i] -= h;
      const double fd = (dual.objective(p) - dual.objective(m)) / (2 * h);
      EXPECT_LE(std::abs(fd - g[i]), 1e-5 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST(SolveDualTest, WeakDualityAndSoundness) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + t % 7;
    const Instance inst = random_instance(n, rng);
    const DualCertificate cert = solve_dual(inst);
    EXPECT_TRUE(cert.box_feasible);
    EXPECT_NEAR(cert.objective, ContinuousDual(inst).objective(cert.mu), 1e-10);
    // Random point inside the ellipsoid: c + r L^{-T} w, |w| = 1.
    const Eigen::MatrixXd l = inst.q().matrix().llt().matrixL();
    for (int s = 0; s < 5; ++s) {
      Eigen::VectorXd w(n);
      for (int i = 0; i < n; ++i) w[i] = g(rng);
      w.normalize();
      const Eigen::VectorXd x =
          inst.c() + std::sqrt(inst.gamma()) * u(rng) * l.transpose().triangularView<Eigen::Upper>().solve(w);
      EXPECT_LE(cert.objective, primal_value(inst, x) + 1e-7);
    }
    EXPECT_LE(cert.objective, prop1_upper_bound(inst) + 1e-8);
    if (n <= 9) {
      const int lb = lower_bound(inst);
      EXPECT_LE(lb, min_cardinality(inst));
      EXPECT_LE(lb, static_cast<int>(std::ceil(prop1_upper_bound(inst))));
    }
  }
}

TEST(SolveDualTest, IterationCountIsBounded) {
  std::mt19937_64 rng(23);
  const Instance inst = random_instance(12, rng);
  const DualCertificate cert = solve_dual(inst);
  EXPECT_LE(cert.iterations, 10000);
  EXPECT_GT(cert.objective, 0.0);
}

TEST(Prop1Test, Examples) {
  const Instance quarter(SymMatrix::identity(4), Eigen::Vector4d::Constant(1.0), 1.0);
  // c^T Q c = 4 gamma.
  EXPECT_DOUBLE_EQ(prop1_upper_bound(quarter), 1.0);
  const Instance edge(SymMatrix::identity(2), Eigen::Vector2d(1.0, 0.0), 1.0);
  EXPECT_EQ(prop1_upper_bound(edge), 0.0);
}

TEST(PrimalValueTest, Examples) {
  std::mt19937_64 rng(24);
  const Instance base = random_instance(5, rng);
  const Instance inst(base.q(), base.c().cwiseAbs(), base.gamma());
  const BoxConstants box = box_constants(inst);
  EXPECT_NEAR(primal_value(inst, inst.c()), inst.c().cwiseQuotient(box.b_plus).sum(), 1e-12);

  for (int n : {6, 9}) {
    const Instance w = worst_case_cont(n);
    const double cqc = w.c().dot(w.q().matrix() * w.c());
    const double theta = 1.0 - std::sqrt(w.gamma() / cqc);
    const BoxConstants b = box_constants(w);
    double expect = 0.0;
    for (int i = 0; i < n; ++i) expect += theta * std::abs(w.c()[i]) / b.b_plus[i];
    EXPECT_NEAR(primal_value(w, theta * w.c()), expect, 1e-12);
    EXPECT_THROW(primal_value(w, Eigen::VectorXd::Zero(n)), InfeasiblePoint);
  }
}

}  // namespace
}  // namespace sparse_ellipsoid
