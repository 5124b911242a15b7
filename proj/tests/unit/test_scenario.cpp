#include "kms/errors.hpp"
#include "kms/sampling.hpp"
#include "kms/scenario.hpp"
#include "test_support.hpp"

namespace kms {
namespace {

bool has_violation(const ValidationReport& report, const std::string& invariant) {
  for (const auto& v : report) {
    if (v.invariant == invariant) return true;
  }
  return false;
}

TEST(Linalg, DeterminantAndAdjugate) {
  IntMatrix m(3, 3);
  m << 2, 1, 0, 1, 3, 1, 0, 1, 4;
  EXPECT_EQ(determinant(m), 18);
  const IntMatrix prod = m * adjugate(m);
  EXPECT_TRUE(prod == IntMatrix::Identity(3, 3) * 18);
  IntMatrix singular(2, 2);
  singular << 2, 4, 1, 2;
  EXPECT_EQ(determinant(singular), 0);
}

TEST(Linalg, JoinMeetAndCharacter) {
  EXPECT_EQ(join({1, 4, 0}, {2, 3, 0}), (IntVector{2, 4, 0}));
  EXPECT_EQ(meet({1, 4, 0}, {2, 3, 0}), (IntVector{1, 3, 0}));
  EXPECT_COMPLEX_NEAR(character(0.25), Complex(0.0, 1.0), 1e-15);
  EXPECT_COMPLEX_NEAR(character(1e9 + 0.5), Complex(-1.0, 0.0), 1e-6);
  EXPECT_COMPLEX_NEAR(one_minus_exp(Complex(1e-10, 0.0)), Complex(-1.00000000005e-10, 0.0), 1e-24);
}

TEST(Scenario, ExampleLevelsFollowTheRelations) {
  const Scenario s = example_scenario(2, 1.0, 1.0, 1.0, 4);
  EXPECT_TRUE(validate_scenario(s).empty());
  ASSERT_EQ(s.depth(), 4);
  double theta = 1.0;
  double r = 1.0;
  for (int m = 1; m <= 4; ++m) {
    EXPECT_NEAR(s.level(m).theta(0, 0), theta, 1e-15);
    EXPECT_NEAR(s.level(m).r(0), r, 1e-15);
    theta /= 4.0;
    r /= 2.0;
  }
}

TEST(Scenario, TwoByTwoExampleIsValid) {
  const Scenario s = example_scenario_2x2(1.0, 3);
  EXPECT_TRUE(validate_scenario(s).empty());
  EXPECT_EQ(composite_D(s, 1, 2), (IntVector{9, 4}));
}

TEST(Scenario, DeriveNextLevelRejectsBadMatrices) {
  const Scenario s = example_scenario();
  const LevelData& L = s.level(1);
  IntMatrix singular = IntMatrix::Zero(1, 1);
  EXPECT_KMS_ERROR(derive_next_level(L, {2}, singular), Errc::SingularE);
  EXPECT_KMS_ERROR(derive_next_level(L, {2}, IntMatrix::Identity(1, 1)), Errc::InvalidArgument);
  EXPECT_KMS_ERROR(derive_next_level(L, {1}, IntMatrix::Constant(1, 1, 2)), Errc::InvalidArgument);
}

TEST(Scenario, DeriveNextLevelDetectsNegativeTheta) {
  LevelData L;
  L.theta = RealMatrix(1, 2);
  L.theta << 0.0, 1.0;
  L.r = RealVector::Constant(1, 1.0);
  L.D = {2};
  L.E = IntMatrix(2, 2);
  L.E << 2, 1, 0, 2;  // (0, 1) E^{-1} = (0, 1/2)
  EXPECT_NO_THROW(derive_next_level(L, {2}, L.E));
  L.theta << 1.0, 0.0;  // (1, 0) E^{-1} = (1/2, -1/4)
  EXPECT_KMS_ERROR(derive_next_level(L, {2}, L.E), Errc::NonNonnegativeTheta);
}

TEST(Scenario, TinyNegativeRoundingIsClamped) {
  LevelData L;
  L.theta = RealMatrix(1, 2);
  // (1, 1/2 - eps) E^{-1} = (1/2, -eps/2)
  L.theta << 1.0, 0.5 - 1e-14;
  L.r = RealVector::Constant(1, 1.0);
  L.D = {2};
  L.E = IntMatrix(2, 2);
  L.E << 2, 1, 0, 2;
  const LevelData next = derive_next_level(L, {2}, L.E);
  EXPECT_EQ(next.theta(0, 1), 0.0);
}

TEST(Scenario, ValidationNamesViolations) {
  Scenario s = example_scenario(2, 1.0, 1.0, 1.0, 3);
  s.levels[1].r(0) = 0.6;
  EXPECT_TRUE(has_violation(validate_scenario(s), "relater"));

  s = example_scenario(2, 1.0, 1.0, 1.0, 3);
  s.levels[1].theta(0, 0) = 0.3;
  EXPECT_TRUE(has_violation(validate_scenario(s), "relatetheta"));

  s = example_scenario(2, 1.0, 1.0, 1.0, 3);
  s.levels[0].D.clear();
  EXPECT_TRUE(has_violation(validate_scenario(s), "link_missing"));

  s = example_scenario(2, 1.0, 1.0, 1.0, 3);
  s.beta = -1.0;
  EXPECT_TRUE(has_violation(validate_scenario(s), "beta"));

  s = example_scenario(2, 1.0, 1.0, 1.0, 3);
  s.levels[2].r(0) = 0.0;
  EXPECT_TRUE(has_violation(validate_scenario(s), "r_positive"));

  s = example_scenario(2, 1.0, 1.0, 1.0, 3);
  s.levels[0].E(0, 0) = 1;
  EXPECT_TRUE(has_violation(validate_scenario(s), "E_det"));
}

TEST(Scenario, ValidationDoesNotMutate) {
  const Scenario s = example_scenario();
  const Scenario copy = s;
  (void)validate_scenario(s);
  for (int m = 1; m <= s.depth(); ++m) {
    EXPECT_EQ(s.level(m).theta, copy.level(m).theta);
    EXPECT_EQ(s.level(m).r, copy.level(m).r);
  }
}

TEST(Scenario, LevelAccessIsOneBased) {
  const Scenario s = example_scenario();
  EXPECT_KMS_ERROR(s.level(0), Errc::InvalidArgument);
  EXPECT_KMS_ERROR(s.level(5), Errc::InvalidArgument);
}

}  // namespace
}  // namespace kms
