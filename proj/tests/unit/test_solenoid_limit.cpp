#include <random>

#include "kms/errors.hpp"
#include "kms/sampling.hpp"
#include "kms/solenoid_limit.hpp"
#include "test_support.hpp"

namespace kms {
namespace {

RealVector point1(double y) { return RealVector::Constant(1, y); }

TEST(Embedding, ExampleWord) {
  const Scenario s = example_scenario();
  const Word w = embed_word(Word{{1}, {1}, {0}, 1}, s);
  EXPECT_EQ(w, (Word{{2}, {2}, {0}, 2}));
  EXPECT_EQ(embed_word(Word::identity(s.dims, 2), s), Word::identity(s.dims, 3));
  EXPECT_KMS_ERROR(embed_word(Word::identity(s.dims, 4), s), Errc::TopLevel);
}

TEST(Embedding, IsAHomomorphism) {
  std::mt19937_64 rng(8);
  for (const Scenario& s : {example_scenario(3, 0.7, 1.3, 0.8, 3), example_scenario_2x2(1.2, 3)}) {
    for (int m = 1; m < s.depth(); ++m) {
      for (int i = 0; i < 20; ++i) {
        const auto a = random_element(rng, s.dims, 2, m);
        const auto b = random_element(rng, s.dims, 2, m);
        const auto lhs = embed_element(multiply(a, b, s.level(m).theta), s);
        const auto rhs = multiply(embed_element(a, s), embed_element(b, s), s.level(m + 1).theta);
        EXPECT_LE(max_coefficient_distance(lhs, rhs), 1e-12);
      }
    }
  }
}

TEST(Threads, UniformIsCompatible) {
  const Scenario s = example_scenario_2x2();
  const auto t = build_thread(UniformThread{}, s);
  for (int m = 1; m <= s.depth(); ++m) {
    EXPECT_COMPLEX_NEAR(t.level(m).moment({0, 0}), 1.0, 0.0);
    EXPECT_COMPLEX_NEAR(t.level(m).moment({1, -2}), 0.0, 0.0);
  }
  EXPECT_TRUE(check_thread(t).ok());
}

TEST(Threads, CanonicalLift) {
  const Scenario s = example_scenario();
  const auto zero = build_thread(PointThread{{point1(0.0)}}, s);
  for (int m = 1; m <= s.depth(); ++m) EXPECT_COMPLEX_NEAR(zero.level(m).moment({1}), 1.0, 1e-15);

  const auto t = build_thread(PointThread{{point1(1.0 / 3.0)}}, s);
  ASSERT_NE(t.level(2).as_atomic(), nullptr);
  EXPECT_NEAR(t.level(2).as_atomic()->atoms[0].x.coords()(0), 1.0 / 6.0, 1e-15);
  for (int n = -5; n <= 5; ++n) EXPECT_COMPLEX_NEAR(t.level(1).moment({n}), t.level(2).moment({2 * n}), 1e-12);
  EXPECT_TRUE(check_thread(t).ok());
}

TEST(Threads, IncompatiblePointsAreRejected) {
  const Scenario s = example_scenario();
  EXPECT_KMS_ERROR(build_thread(PointThread{{point1(0.3), point1(0.4)}}, s), Errc::IncompatibleThread);
  // 0.65 is the other preimage of 0.3 under x -> 2x.
  EXPECT_NO_THROW(build_thread(PointThread{{point1(0.3), point1(0.65)}}, s));
}

TEST(Threads, TopLevelPushesDown) {
  const Scenario s = example_scenario_2x2();
  std::mt19937_64 rng(4);
  const auto top = random_probability_measure(rng, 2, 3);
  const auto t = build_thread(TopLevelThread{top}, s);
  const auto check = check_thread(t);
  EXPECT_LE(check.max_compatibility_error, 1e-12);
  EXPECT_LE(check.max_mass_error, 1e-12);
  EXPECT_TRUE(check.nonnegative);
  EXPECT_KMS_ERROR(build_thread(TopLevelThread{scale(top, 2.0)}, s), Errc::InvalidThread);
}

TEST(Threads, PreimagesCoverTheFibre) {
  IntMatrix E(2, 2);
  E << 2, 1, 0, 3;
  RealVector y(2);
  y << 0.25, 0.6;
  const auto pts = preimages(y, E);
  ASSERT_EQ(pts.size(), 6u);
  for (const auto& x : pts) {
    const RealVector image = E.transpose().cast<double>() * x;
    for (int i = 0; i < 2; ++i) {
      const double diff = image(i) - y(i);
      EXPECT_NEAR(diff, std::nearbyint(diff), 1e-12);
    }
  }
}

TEST(LevelConstants, Relation) {
  for (const Scenario& s : {example_scenario(2, 1.0, 1.0, 1.0, 4), example_scenario_2x2(0.7, 3)}) {
    for (int m = 1; m < s.depth(); ++m) {
      const auto a = level_constants(s, m);
      const auto b = level_constants(s, m + 1);
      EXPECT_NEAR(static_cast<double>(a.d) * b.c, a.c, 1e-12);
    }
  }
}

TEST(Sigma, CarriesNextLevelNuToThisLevel) {
  const Scenario s = example_scenario_2x2(1.1, 3);
  std::mt19937_64 rng(9);
  const auto t = build_thread(TopLevelThread{random_probability_measure(rng, 2, 4)}, s);
  for (int m = 1; m < s.depth(); ++m) {
    const auto next = nu_from_mu(t.level(m + 1), BlockParams::at_level(s, m + 1));
    const auto here = nu_from_mu(t.level(m), BlockParams::at_level(s, m));
    const auto sigma = sigma_map(next, s, m);
    for (const auto& n : box_indices(2, 3)) EXPECT_COMPLEX_NEAR(sigma.moment(n), here.moment(n), 1e-12);
    EXPECT_NEAR(sigma.mass(), next.mass() / static_cast<double>(level_constants(s, m).d), 1e-14);
  }
  EXPECT_KMS_ERROR(sigma_map(TorusMeasure::uniform(2), s, 3), Errc::TopLevel);
}

TEST(Psi, UnitAndFrozenValue) {
  const Scenario s = example_scenario(2, 1.0, 1.0, 1.0, 4);
  const auto t = build_thread(PointThread{{point1(0.0)}}, s);
  EXPECT_COMPLEX_NEAR(psi_eval(t, Word::identity(s.dims, 1)), 1.0, 1e-15);
  EXPECT_COMPLEX_NEAR(psi_eval(t, Word{{0}, {1}, {0}, 1}), Complex(0.02470452303185764, 0.15522309613464762), 1e-15);
  EXPECT_COMPLEX_NEAR(psi_eval(t, Word{{1}, {1}, {0}, 1}), 0.0, 0.0);
  EXPECT_KMS_ERROR(psi_eval(t, Word::identity(s.dims, 5)), Errc::InvalidThread);
}

TEST(Psi, ThetaZeroReturnsMoment) {
  const Scenario s = derive_scenario({1, 1}, 1.0, RealMatrix::Zero(1, 1), RealVector::Constant(1, 1.0), {{2}},
                                     {IntMatrix::Constant(1, 1, 2)}, 2);
  const auto t = build_thread(PointThread{{point1(0.3)}}, s);
  for (int n = -3; n <= 3; ++n) EXPECT_COMPLEX_NEAR(psi_eval(t, Word{{0}, {n}, {0}, 1}), t.level(1).moment({n}), 1e-15);
}

TEST(Psi, MatchesAlgebraEngineState) {
  const Scenario s = example_scenario_2x2(0.9, 3);
  std::mt19937_64 rng(12);
  const auto t = build_thread(TopLevelThread{random_probability_measure(rng, 2, 3)}, s);
  for (int m = 1; m <= s.depth(); ++m) {
    const auto P = BlockParams::at_level(s, m);
    const auto nu = level_state_measure(t, m);
    for (int i = 0; i < 20; ++i) {
      const auto a = random_element(rng, s.dims, 3, m);
      EXPECT_COMPLEX_NEAR(psi_eval(t, a), state_eval(nu, P, a), 1e-12);
      EXPECT_GE(psi_eval(t, multiply(adjoint(a), a, P.theta)).real(), -1e-10);
    }
  }
}

TEST(Psi, ConsistentAcrossLevels) {
  std::mt19937_64 rng(21);
  for (const Scenario& s : {example_scenario(2, 1.0, 1.0, 1.0, 4), example_scenario_2x2(1.0, 3)}) {
    const auto t = build_thread(TopLevelThread{random_probability_measure(rng, s.dims.d, 3)}, s);
    for (int m = 1; m < s.depth(); ++m) {
      EXPECT_LE(consistency_residual(t, Word::identity(s.dims, m)), 1e-15);
      for (int i = 0; i < 30; ++i) EXPECT_LE(consistency_residual(t, random_word(rng, s.dims, m)), 1e-10);
    }
  }
}

}  // namespace
}  // namespace kms
