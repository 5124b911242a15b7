#include <cmath>
#include <random>

#include "kms/errors.hpp"
#include "kms/sampling.hpp"
#include "kms/subinvariance.hpp"
#include "test_support.hpp"

namespace kms {
namespace {

BlockParams unit_params(double theta = 1.0, double r = 1.0, double beta = 1.0) {
  BlockParams P;
  P.theta = RealMatrix::Constant(1, 1, theta);
  P.r = RealVector::Constant(1, r);
  P.beta = beta;
  return P;
}

const TorusMeasure kDelta0 = TorusMeasure::point_mass(TorusPoint{0.0});

TEST(Transforms, NuOfPointMassAtOne) {
  const auto nu = nu_from_mu(kDelta0, unit_params());
  // 1 / (1 - 2 pi i)
  EXPECT_COMPLEX_NEAR(nu.moment({1}), Complex(0.02470452303185764, 0.15522309613464762), 1e-15);
  EXPECT_COMPLEX_NEAR(nu.moment({0}), 1.0, 1e-15);
}

TEST(Transforms, NuFromKappaGeometricSeries) {
  const auto nu = nu_from_kappa(kDelta0, unit_params());
  EXPECT_COMPLEX_NEAR(nu.moment({1}), 1.5819767068693264, 1e-14);
  Complex series = 0.0;
  for (int b = 0; b <= 40; ++b) series += std::exp(-static_cast<double>(b)) * character(b * 1.0);
  EXPECT_COMPLEX_NEAR(nu.moment({1}), series, 1e-15);
}

TEST(Transforms, ThetaZeroGivesPlainScaling) {
  BlockParams P;
  P.theta = RealMatrix::Zero(2, 3);
  P.r = RealVector(2);
  P.r << 0.5, 2.0;
  P.beta = 1.5;
  std::mt19937_64 rng(2);
  const auto mu = random_probability_measure(rng, 3, 4);
  const auto nu = nu_from_mu(mu, P);
  for (const auto& n : box_indices(3, 1)) EXPECT_COMPLEX_NEAR(nu.moment(n), mu.moment(n) / c_constant(P), 1e-14);
}

TEST(Transforms, MassIdentitiesAndRoundTrips) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Dimensions dims{1 + trial % 3, 1 + (trial / 3) % 3};
    const BlockParams P = random_block_params(rng, dims);
    const auto mu = random_probability_measure(rng, dims.d, 3);
    const auto nu = nu_from_mu(mu, P);
    EXPECT_NEAR(nu.mass(), mu.mass() / c_constant(P), 1e-12);
    const auto back = mu_from_nu(nu, P, InputCheck::Unchecked);
    EXPECT_NEAR(back.mass(), nu.mass() * c_constant(P), 1e-12);
    const auto again = nu_from_mu(back, P, InputCheck::Unchecked);
    for (const auto& n : box_indices(dims.d, 2)) {
      EXPECT_COMPLEX_NEAR(back.moment(n), mu.moment(n), 1e-10);
      EXPECT_COMPLEX_NEAR(again.moment(n), nu.moment(n), 1e-10);
      EXPECT_COMPLEX_NEAR(nu_from_kappa(kappa_from_nu(nu, P), P).moment(n), nu.moment(n), 1e-10);
    }
  }
}

TEST(Transforms, CheckedModeRejectsSignedInput) {
  const auto signed_measure = TorusMeasure::atomic(1, {Atom{TorusPoint{0.2}, 1.0}, Atom{TorusPoint{0.6}, -0.7}});
  EXPECT_KMS_ERROR(nu_from_mu(signed_measure, unit_params()), Errc::NegativeInput);
  // A point mass is not subinvariant: its defects are signed.
  EXPECT_KMS_ERROR(mu_from_nu(kDelta0, unit_params()), Errc::NegativeInput);
  EXPECT_NO_THROW(mu_from_nu(kDelta0, unit_params(), InputCheck::Unchecked));
}

TEST(Transforms, YBetaNormalisesKappa) {
  const BlockParams P = unit_params(0.3, 0.7, 1.2);
  const auto kappa = scale(kDelta0, 1.0 / y_beta(P));
  EXPECT_NEAR(nu_from_kappa(kappa, P).mass(), 1.0, 1e-14);
}

TEST(Defects, FiniteProductMatchesExpansion) {
  BlockParams P;
  P.theta = RealMatrix(2, 2);
  P.theta << 0.3, 1.1, 0.7, 0.2;
  P.r = RealVector(2);
  P.r << 0.9, 0.4;
  P.beta = 1.3;
  std::mt19937_64 rng(13);
  const auto nu = nu_from_mu(random_probability_measure(rng, 2, 3), P);
  const std::vector<IntVector> F{{1, 0}, {0, 2}};
  const auto defect = defect_measure_finite(nu, F, P);
  for (const auto& n : box_indices(2, 2)) {
    Complex expected = nu.moment(n);
    const RealVector tn = apply_theta(P.theta, n);
    for (const auto& p : F) expected *= 1.0 - std::exp(-P.beta * dot(p, P.r)) * character(dot(p, tn));
    EXPECT_COMPLEX_NEAR(defect.moment(n), expected, 1e-14);
  }
  EXPECT_FALSE(defect.description.empty());
}

TEST(Defects, FiniteRejectsOverlappingSupports) {
  BlockParams P;
  P.theta = RealMatrix::Constant(2, 1, 0.5);
  P.r = RealVector::Constant(2, 1.0);
  EXPECT_KMS_ERROR(defect_measure_finite(kDelta0, {{1, 1}, {1, 0}}, P), Errc::MeetNotZero);
}

TEST(Defects, EmptySetIsIdentityAndZeroSIsZero) {
  const BlockParams P = unit_params(0.4, 1.0, 2.0);
  const auto nu = nu_from_mu(kDelta0, P);
  const auto same = defect_measure_finite(nu, {}, P);
  const auto zero = defect_measure_cts(nu, RealVector::Zero(1), P);
  for (const auto& n : box_indices(1, 3)) {
    EXPECT_COMPLEX_NEAR(same.moment(n), nu.moment(n), 0.0);
    EXPECT_COMPLEX_NEAR(zero.moment(n), 0.0, 0.0);
  }
  EXPECT_KMS_ERROR(defect_measure_cts(nu, RealVector::Constant(1, -0.1), P), Errc::NegativeS);
}

TEST(Defects, ContinuousDefectAgreesWithFiniteAtLatticePoint) {
  const BlockParams P = unit_params(0.6, 0.8, 1.1);
  const auto nu = nu_from_mu(TorusMeasure::point_mass(TorusPoint{0.35}), P);
  const auto cts = defect_measure_cts(nu, RealVector::Constant(1, 2.0), P);
  const auto fin = defect_measure_finite(nu, {{2}}, P);
  for (const auto& n : box_indices(1, 4)) EXPECT_COMPLEX_NEAR(cts.moment(n), fin.moment(n), 1e-14);
}

TEST(Subinvariance, NuOfPositiveMeasureIsSubinvariant) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const Dimensions dims{1 + trial % 2, 1 + trial / 2};
    const BlockParams P = random_block_params(rng, dims);
    const auto nu = nu_from_mu(random_probability_measure(rng, dims.d, 3), P);
    SubinvarianceOptions opts;
    opts.samples = 10;
    opts.seed = static_cast<std::uint64_t>(trial);
    EXPECT_TRUE(check_subinvariance(nu, P, opts).passed());
  }
}

TEST(Subinvariance, PointMassFailsWithWitness) {
  const auto report = check_subinvariance(kDelta0, unit_params(), {});
  EXPECT_FALSE(report.passed());
  bool witnessed = false;
  for (const auto& c : report.checks) witnessed = witnessed || (!c.verdict.positive() && c.verdict.witness);
  EXPECT_TRUE(witnessed);
}

TEST(Subinvariance, SamplesAreDeterministicAndInRange) {
  const BlockParams P = unit_params(1.0, 0.5, 2.0);
  const auto a = sample_s(P, 20, 42);
  const auto b = sample_s(P, 20, 42);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_GE(a[i](0), 0.0);
    EXPECT_LE(a[i](0), subinvariance_s_max(P));
  }
  EXPECT_DOUBLE_EQ(subinvariance_s_max(P), 5.0);
}

TEST(Subinvariance, LatticePoints) {
  const Scenario s = example_scenario(2, 1.0, 1.0, 1.0, 4);
  const auto pts = subinvariance_lattice(s, 1, 3, 2);
  // l = 1..3, p in {0,1,2}
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_DOUBLE_EQ(pts[2](0), 1.0);    // 2 / 2
  EXPECT_DOUBLE_EQ(pts[8](0), 0.25);   // 2 / 8
  EXPECT_EQ(subinvariance_lattice(s, 4, 3, 2).size(), 0u);
}

TEST(Limit, ScaledDefectsConvergeAtFirstOrder) {
  const BlockParams P = unit_params(0.7, 1.3, 0.9);
  const auto nu = nu_from_mu(TorusMeasure::point_mass(TorusPoint{0.2}), P);
  const std::vector<double> schedule{1e-2, 5e-3, 2e-3, 1e-3, 5e-4};
  const auto seq = numeric_limit_mu(nu, P, {2}, schedule);
  EXPECT_GE(empirical_order(seq), 0.9);
  const auto mass = numeric_limit_mu(nu, P, {0}, schedule);
  EXPECT_TRUE(mass.bound_respected);
  EXPECT_NEAR(mass.exact.real(), mass.mass_bound, 1e-12);
  for (std::size_t i = 1; i < mass.values.size(); ++i) EXPECT_GE(mass.values[i].real(), mass.values[i - 1].real());
  EXPECT_KMS_ERROR(numeric_limit_mu(nu, P, {0}, {1e-3, 1e-2}), Errc::InvalidArgument);
}

}  // namespace
}  // namespace kms
