//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/bounds.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "sparse_ellipsoid/diagonal_relaxation.h"
#include "sparse_ellipsoid/generators.h"

namespace sparse_ellipsoid {
namespace {

using testing::max_zeros;

Instance diagonal_instance(const Eigen::VectorXd& d, const Eigen::VectorXd& c, double gamma) {
  return Instance(SymMatrix::diagonal(d), c, gamma);
}

TEST(EigBoundsTest, TightEigPins) {
  const Instance inst = tight_eig(9);
  const OrderingBounds b = eig_bounds(inst);
  EXPECT_EQ(b.k_under, 6);
  EXPECT_EQ(b.k_over, 9);
  ASSERT_TRUE(b.ratio_bound.has_value());
  EXPECT_GE(*b.ratio_bound + 1e-12, 9.0 / 6.0);
}

TEST(EigBoundsTest, DiagonalWithSqrtScaleIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 4.0), s(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 7;
    Eigen::VectorXd d(n), c(n);
    for (int i = 0; i < n; ++i) {
      d[i] = u(rng);
      c[i] = s(rng) / std::sqrt(d[i]);
    }
    const Instance inst = diagonal_instance(d, c, 1.0);
    const OrderingBounds b = eig_bounds(inst, d.cwiseSqrt().eval());
    const int exact = max_zeros(inst);
    EXPECT_EQ(b.k_under, exact);
    EXPECT_EQ(b.k_over, exact);
  }
}

TEST(EigBoundsTest, ScaleMustBePositive) {
  const Instance inst = tight_eig(5);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(5);
  s[2] = 0.0;
  EXPECT_THROW(eig_bounds(inst, s), std::invalid_argument);
}

TEST(DiagDomBoundsTest, TightDdPins) {
  const Instance inst = tight_dd(5);
  const OrderingBounds b = diag_dom_bounds(inst);
  EXPECT_EQ(b.k_under, 4);
  EXPECT_EQ(b.k_over, 5);
  EXPECT_NEAR(b.upper_factor / b.lower_factor, 1.0 + 2.0 / 7.0, 1e-12);
}

TEST(DiagDomBoundsTest, DiagonalMatrixIsExact) {
  Eigen::VectorXd d(5), c(5);
  d << 1, 2, 3, 4, 5;
  c << 0.5, -0.4, 0.3, 0.2, -0.1;
  const Instance inst = diagonal_instance(d, c, 1.0);
  const OrderingBounds b = diag_dom_bounds(inst);
  EXPECT_EQ(b.k_under, b.k_over);
  EXPECT_EQ(b.k_under, max_zeros(inst));
}

TEST(DiagDomBoundsTest, RejectsNonDominant) {
  Eigen::MatrixXd q(2, 2);
  q << 1.0, 0.9, 0.9, 1.0;
  Eigen::MatrixXd q3 = Eigen::MatrixXd::Identity(3, 3);
  q3(0, 1) = q3(1, 0) = 0.6;
  q3(0, 2) = q3(2, 0) = 0.6;
  const Instance inst(SymMatrix(q3), Eigen::VectorXd::Constant(3, 0.1), 1.0);
  EXPECT_THROW(diag_dom_bounds(inst), NotDiagonallyDominant);
  EXPECT_NEAR(offdiag_row_sum(SymMatrix(q)), 0.9, 1e-15);
}

TEST(NearAlignedTest, IdentityEigenbasisGivesRatioOne) {
  Eigen::VectorXd d(4), c(4);
  d << 1, 3, 2, 5;
  c << 0.3, 0.2, -0.5, 0.1;
  const Instance inst = diagonal_instance(d, c, 1.0);
  const AlignmentData al = alignment_data(inst);
  EXPECT_NEAR(al.rho, 0.0, 1e-12);
  const OrderingBounds b = near_aligned_bounds(inst);
  EXPECT_NEAR(b.upper_factor / b.lower_factor, 1.0, 1e-12);
  EXPECT_EQ(b.k_under, max_zeros(inst));
  EXPECT_EQ(b.k_over, max_zeros(inst));
}

TEST(NearAlignedTest, SmallRotationSandwich) {
  const double theta = 0.01;
  Eigen::Matrix2d v;
  v << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const Eigen::Matrix2d q = v * Eigen::Vector2d(1.0, 2.0).asDiagonal() * v.transpose();
  const Instance inst(SymMatrix(q), Eigen::Vector2d(0.3, 0.2), 1.0);
  const AlignmentData al = alignment_data(inst);
  EXPECT_NEAR(al.kappa, 2.0, 1e-12);
  EXPECT_NEAR(al.rho, 2.0 * std::sin(theta / 2.0), 1e-10);
  // Diagonal of Q against the aligned eigenvalues.
  for (int i = 0; i < 2; ++i) {
    EXPECT_LE(al.ratio_floor * al.lambda[i], q(i, i) + 1e-12);
    EXPECT_GE(al.ratio_ceiling * al.lambda[i], q(i, i) - 1e-12);
  }
}

TEST(NearAlignedTest, RejectsWeakAlignment) {
  Rng rng(3);
  const Eigen::MatrixXd v = random_orthogonal(6, rng);
  Eigen::VectorXd lam(6);
  lam << 1, 2, 4, 8, 16, 32;
  const Instance inst(SymMatrix(v * lam.asDiagonal() * v.transpose()),
                      Eigen::VectorXd::Constant(6, 0.01), 1.0);
  EXPECT_THROW(near_aligned_bounds(inst), AlignmentTooWeak);
}

TEST(NearAlignedTest, OrderingMustBePermutation) {
  const Instance inst = tight_dd(4);
  AlignmentOrdering ord{{0, 0, 1, 2}, {1, 1, 1, 1}};
  EXPECT_THROW(alignment_data(inst, ord), std::invalid_argument);
}

void expect_sandwich(const Instance& inst, const OrderingBounds& b, int k_star, int k_d) {
  EXPECT_LE(b.k_under, k_star) << variant_name(b.variant);
  EXPECT_LE(k_star, k_d) << variant_name(b.variant);
  EXPECT_LE(k_d, b.k_over) << variant_name(b.variant);
  if (b.k_under >= 1) {
    ASSERT_TRUE(b.ratio_bound.has_value());
    EXPECT_LE(double(b.k_over) / b.k_under, *b.ratio_bound + 1e-12)
        << variant_name(b.variant);
  }
  (void)inst;
}

TEST(SandwichTest, RandomInstances) {
  std::mt19937_64 seeds(17);
  for (int trial = 0; trial < 12; ++trial) {
    EnsembleSpec eig_spec{InstanceClass::kPowerlawInv, 6 + trial % 4, 8.0, std::nullopt,
                          seeds(), 1};
    const Instance a = generate(eig_spec).front();
    const int ka = max_zeros(a);
    const int kda = solve_relaxation(a).k_d;
    expect_sandwich(a, eig_bounds(a), ka, kda);
    expect_sandwich(a, eig_bounds(a, a.q().matrix().diagonal().cwiseSqrt().eval()), ka, kda);

    EnsembleSpec dd_spec{InstanceClass::kOffdiagUniform, 6 + trial % 4, std::nullopt, 0.1,
                         seeds(), 1};
    const Instance b = generate(dd_spec).front();
    expect_sandwich(b, diag_dom_bounds(b), max_zeros(b), solve_relaxation(b).k_d);

    Rng rng(seeds());
    const Instance c = near_aligned_instance(6 + trial % 4, 0.02, 3.0, rng);
    expect_sandwich(c, near_aligned_bounds(c), max_zeros(c), solve_relaxation(c).k_d);
  }
}

TEST(ProbBoundTest, IdentitySpectrumIsCertain) {
  const Instance inst(SymMatrix::identity(5), Eigen::VectorXd::Constant(5, 0.2), 1.0);
  const ProbBoundReport r = prob_bound(inst, 0.1);
  EXPECT_EQ(r.regime, ProbRegime::kCertain);
  EXPECT_DOUBLE_EQ(r.probability, 1.0);
  EXPECT_NEAR(r.eig_var, 0.0, 1e-20);
  EXPECT_FALSE(r.interval_i.has_value());
}

TEST(ProbBoundTest, EpsilonAtMaxIsCertain) {
  Eigen::VectorXd lam(4);
  lam << 1, 1, 1, 5;
  const Instance inst(SymMatrix::diagonal(lam), Eigen::VectorXd::Constant(4, 0.1), 1.0);
  const ProbBoundReport r = prob_bound(inst, 3.0);
  EXPECT_NEAR(r.eps_max, 5.0 / 2.0 - 1.0, 1e-12);
  EXPECT_EQ(r.regime, ProbRegime::kCertain);
  EXPECT_THROW(prob_bound(inst, 0.0), std::invalid_argument);
}

TEST(ProbBoundTest, EmptyIntervalStaysQuadratic) {
  // Uniform spread: (lmax - mean)^2 <= 8 var.
  Eigen::VectorXd lam = Eigen::VectorXd::LinSpaced(10, 1.0, 2.0);
  const Instance inst(SymMatrix::diagonal(lam), Eigen::VectorXd::Constant(10, 0.1), 1.0);
  const double m = lam.mean();
  const double var = (lam.array() - m).square().mean();
  ASSERT_LE((2.0 - m) * (2.0 - m), 8.0 * var);
  for (double eps : {0.01, 0.1, 0.2, 0.3}) {
    const ProbBoundReport r = prob_bound(inst, eps);
    EXPECT_FALSE(r.interval_i.has_value());
    EXPECT_EQ(r.regime, ProbRegime::kQuadratic);
    const double e2 = eps * eps * m * m;
    EXPECT_NEAR(r.probability, 1.0 - std::exp(-(10.0 / 8.0) * e2 / (e2 + var)), 1e-14);
  }
}

Instance spiked(int n) {
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(n);
  lam[n - 1] = 40.0;
  return Instance(SymMatrix::diagonal(lam), Eigen::VectorXd::Constant(n, 0.01), 1.0);
}

TEST(ProbBoundTest, ContinuousAtRegimeBoundaries) {
  const Instance inst = spiked(30);
  const ProbBoundReport base = prob_bound(inst, 0.1);
  ASSERT_TRUE(base.interval_i.has_value());
  for (double edge : {base.interval_i->first, base.interval_i->second}) {
    const double h = 1e-9 * edge;
    const ProbBoundReport lo = prob_bound(inst, edge - h);
    const ProbBoundReport hi = prob_bound(inst, edge + h);
    EXPECT_NE(lo.regime, hi.regime);
    EXPECT_NEAR(lo.probability, hi.probability, 1e-7);
  }
}

TEST(ProbBoundTest, LinearRegimeBeatsMonteCarlo) {
  // Rayleigh quotient of a random direction stays below (1 + eps) times the
  // mean eigenvalue at least as often as guaranteed.
  const int n = 12;
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(n);
  lam[n - 1] = 30.0;
  const Instance inst(SymMatrix::diagonal(lam), Eigen::VectorXd::Constant(n, 0.01), 1.0);
  const ProbBoundReport base = prob_bound(inst, 0.05);
  ASSERT_TRUE(base.interval_i.has_value());
  const double eps = 0.5 * (base.interval_i->first + base.interval_i->second);
  const ProbBoundReport r = prob_bound(inst, eps);
  ASSERT_EQ(r.regime, ProbRegime::kLinear);
  Rng rng(11);
  const int trials = 4000;
  int hold = 0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd v = random_orthogonal(n, rng);
    const Eigen::MatrixXd q = v * lam.asDiagonal() * v.transpose();
    if (q(0, 0) <= (1.0 + eps) * r.eig_mean) ++hold;
  }
  EXPECT_GE(double(hold) / trials + 0.02, r.probability);
}

}  // namespace
}  // namespace sparse_ellipsoid
