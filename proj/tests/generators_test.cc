//
// sparse-ellipsoid
// SPDX-License-Identifier: Apache-2.0
//

#include "sparse_ellipsoid/generators.h"

#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "oracles.h"
#include "sparse_ellipsoid/instance_io.h"

namespace sparse_ellipsoid {
namespace {

TEST(RandomOrthogonalTest, IsOrthogonal) {
  Rng rng(1);
  for (int n : {1, 2, 5, 17, 40}) {
    const Eigen::MatrixXd v = random_orthogonal(n, rng);
    const Eigen::MatrixXd err = v.transpose() * v - Eigen::MatrixXd::Identity(n, n);
    EXPECT_LE(err.cwiseAbs().maxCoeff(), 1e-10) << n;
  }
  EXPECT_THROW(random_orthogonal(0, rng), std::invalid_argument);
}

TEST(RandomOrthogonalTest, OneByOneIsFairSign) {
  Rng rng(2);
  int plus = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const double x = random_orthogonal(1, rng)(0, 0);
    ASSERT_DOUBLE_EQ(std::abs(x), 1.0);
    if (x > 0) ++plus;
  }
  EXPECT_NEAR(double(plus) / trials, 0.5, 0.04);
}

TEST(RandomOrthogonalTest, EntriesHaveHaarMoments) {
  // Each entry of a Haar matrix has mean 0 and variance 1/n.
  Rng rng(3);
  const int n = 3, trials = 20000;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n), sq = Eigen::MatrixXd::Zero(n, n);
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd v = random_orthogonal(n, rng);
    mean += v;
    sq += v.cwiseProduct(v);
  }
  mean /= trials;
  sq /= trials;
  EXPECT_LE(mean.cwiseAbs().maxCoeff(), 0.02);
  EXPECT_LE((sq.array() - 1.0 / n).abs().maxCoeff(), 0.02);
}

TEST(SpectrumTest, ConditionNumberIsExact) {
  for (InstanceClass cls :
       {InstanceClass::kPowerlawInv, InstanceClass::kUniform, InstanceClass::kPowerlawInvSq}) {
    EnsembleSpec spec{cls, 12, 25.0, std::nullopt, 9, 5};
    for (const Instance& inst : generate(spec)) {
      const EigenDecomp ed = eig_sym(inst.q());
      const double kappa = ed.eigenvalues[11] / ed.eigenvalues[0];
      EXPECT_NEAR(kappa / 25.0, 1.0, 1e-8) << class_name(cls);
    }
  }
}

TEST(SpectrumTest, SupportAndPinnedExtremes) {
  Rng rng(4);
  const Eigen::VectorXd lam = sample_spectrum(InstanceClass::kPowerlawInvSq, 50, 10.0, rng);
  EXPECT_DOUBLE_EQ(lam.minCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(lam.maxCoeff(), 10.0);
  EXPECT_THROW(sample_spectrum(InstanceClass::kTightDd, 5, 2.0, rng), std::invalid_argument);
}

TEST(SpectrumTest, InverseSquareLawFavorsSmallValues) {
  // Density proportional to 1/lambda^2 on [1, kappa]: median is 2 kappa/(kappa+1).
  Rng rng(5);
  const double kappa = 40.0;
  const Eigen::VectorXd lam = sample_spectrum(InstanceClass::kPowerlawInvSq, 20001, kappa, rng);
  std::vector<double> v(lam.data(), lam.data() + lam.size());
  std::nth_element(v.begin(), v.begin() + 10000, v.end());
  EXPECT_NEAR(v[10000], 2.0 * kappa / (kappa + 1.0), 0.05);
}

TEST(GenerateTest, Deterministic) {
  EnsembleSpec spec{InstanceClass::kPowerlawInv, 8, 8.0, std::nullopt, 123, 3};
  const auto a = generate(spec);
  const auto b = generate(spec);
  ASSERT_EQ(a.size(), 3u);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].q().matrix(), b[i].q().matrix());
    EXPECT_EQ(a[i].c(), b[i].c());
  }
  spec.seed = 124;
  EXPECT_NE(generate(spec)[0].c(), a[0].c());
}

TEST(GenerateTest, NoIndexForced) {
  const std::vector<EnsembleSpec> specs = {
      {InstanceClass::kPowerlawInv, 10, 10.0, std::nullopt, 1, 10},
      {InstanceClass::kUniform, 10, 10.0, std::nullopt, 2, 10},
      {InstanceClass::kPowerlawInvSq, 10, 10.0, std::nullopt, 3, 10},
      {InstanceClass::kOffdiagUniform, 10, std::nullopt, 0.8, 4, 10},
      {InstanceClass::kBestCaseCont, 8, std::nullopt, std::nullopt, 0, 1},
      {InstanceClass::kWorstCaseCont, 8, std::nullopt, std::nullopt, 0, 1},
      {InstanceClass::kTightEig, 9, std::nullopt, std::nullopt, 0, 1},
      {InstanceClass::kTightDd, 5, std::nullopt, std::nullopt, 0, 1},
  };
  for (const EnsembleSpec& spec : specs) {
    for (const Instance& inst : generate(spec)) {
      EXPECT_TRUE(single_zero_margins(inst).forced_nonzero.empty()) << class_name(spec.cls);
    }
  }
}

TEST(GenerateTest, OffdiagHasUnitDiagonalAndBoundedEntries) {
  EnsembleSpec spec{InstanceClass::kOffdiagUniform, 9, std::nullopt, 0.5, 8, 4};
  for (const Instance& inst : generate(spec)) {
    const Eigen::MatrixXd& q = inst.q().matrix();
    for (int i = 0; i < 9; ++i) {
      EXPECT_DOUBLE_EQ(q(i, i), 1.0);
      for (int j = 0; j < 9; ++j)
        if (i != j) EXPECT_LE(std::abs(q(i, j)), 0.5 / 3.0);
    }
  }
}

TEST(ConstructedTest, WorstCaseParameters) {
  const Instance inst = worst_case_cont(6);
  const EigenDecomp ed = eig_sym(inst.q());
  EXPECT_NEAR(ed.eigenvalues[0], 1.0 / 5.0, 1e-12);
  EXPECT_NEAR(ed.eigenvalues[5], 5.0 / 2.0, 1e-12);
  const Eigen::VectorXd v = ed.eigenvectors.col(0).cwiseAbs();
  EXPECT_LE((v.array() - 1.0 / std::sqrt(6.0)).abs().maxCoeff(), 1e-10);
  EXPECT_EQ(inst.c(), Eigen::VectorXd::Ones(6));
  EXPECT_DOUBLE_EQ(inst.gamma(), 1.0);
}

TEST(ConstructedTest, TightDdSecondEigenvalue) {
  const Instance inst = tight_dd(5);
  const EigenDecomp ed = eig_sym(inst.q());
  EXPECT_NEAR(ed.eigenvalues[0], 0.2, 1e-12);
  EXPECT_NEAR(ed.eigenvalues[4], 0.2 + 1.0 / 28.0, 1e-12);
}

TEST(ConstructedTest, SplitSignVector) {
  const Eigen::VectorXd v = split_sign_vector(5);
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  EXPECT_GT(v[2], 0.0);
  EXPECT_LT(v[3], 0.0);
}

TEST(ConstructedTest, BruteForceCosts) {
  for (int n : {4, 6, 8, 9}) {
    EXPECT_EQ(testing::min_cardinality(best_case_cont(n)), n / 2) << n;
    EXPECT_EQ(testing::min_cardinality(worst_case_cont(n)), n - 1) << n;
  }
}

TEST(SpecTest, Validation) {
  EXPECT_THROW(validate({InstanceClass::kUniform, 5, std::nullopt, std::nullopt, 0, 1}),
               std::invalid_argument);
  EXPECT_THROW(validate({InstanceClass::kUniform, 5, 0.5, std::nullopt, 0, 1}),
               std::invalid_argument);
  EXPECT_THROW(validate({InstanceClass::kOffdiagUniform, 5, std::nullopt, 0.9, 0, 1}),
               std::invalid_argument);
  EXPECT_THROW(validate({InstanceClass::kOffdiagUniform, 5, std::nullopt, std::nullopt, 0, 1}),
               std::invalid_argument);
  EXPECT_THROW(validate({InstanceClass::kTightEig, 4, std::nullopt, std::nullopt, 0, 1}),
               std::invalid_argument);
  EXPECT_THROW(validate({InstanceClass::kUniform, 0, 2.0, std::nullopt, 0, 1}),
               std::invalid_argument);
  EXPECT_NO_THROW(validate({InstanceClass::kUniform, 5, 2.0, std::nullopt, 0, 0}));
  EXPECT_THROW(class_from_name("gaussian"), std::invalid_argument);
  EXPECT_THROW(spec_from_json(nlohmann::json::array()), std::invalid_argument);
}

TEST(SpecTest, JsonRoundTrip) {
  const EnsembleSpec spec{InstanceClass::kOffdiagUniform, 7, std::nullopt, 0.2, 99, 4};
  const EnsembleSpec back = spec_from_json(spec_to_json(spec));
  EXPECT_EQ(back.cls, spec.cls);
  EXPECT_EQ(back.n, 7);
  EXPECT_EQ(back.a, spec.a);
  EXPECT_FALSE(back.kappa.has_value());
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.count, 4);
}

TEST(EnsembleTest, ManifestRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "sparse_ellipsoid_gen_test";
  std::filesystem::remove_all(dir);
  const EnsembleSpec spec{InstanceClass::kUniform, 6, 4.0, std::nullopt, 31, 3};
  const nlohmann::json manifest = write_ensemble(spec, dir.string());
  EXPECT_EQ(manifest["rng"], kRngId);
  ASSERT_EQ(manifest["files"].size(), 3u);
  const auto original = generate(spec);
  for (int i = 0; i < 3; ++i) {
    const std::string name = manifest["files"][i].get<std::string>();
    EXPECT_EQ(name, instance_id(spec, i) + ".json");
    const Instance back = load_instance((dir / name).string());
    EXPECT_LE((back.q().matrix() - original[i].q().matrix()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(back.c(), original[i].c());
  }
  const nlohmann::json disk = read_json_file((dir / "manifest.json").string());
  EXPECT_EQ(disk, manifest);
  std::filesystem::remove_all(dir);
}

TEST(NearAlignedInstanceTest, CloseToIdentity) {
  Rng rng(6);
  const Instance inst = near_aligned_instance(6, 0.01, 3.0, rng);
  const EigenDecomp ed = eig_sym(inst.q());
  EXPECT_NEAR(ed.eigenvalues[5] / ed.eigenvalues[0], 3.0, 1e-8);
  EXPECT_TRUE(single_zero_margins(inst).forced_nonzero.empty());
}

}  // namespace
}  // namespace sparse_ellipsoid
