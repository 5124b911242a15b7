#include <random>

#include "kms/errors.hpp"
#include "kms/sampling.hpp"
#include "kms/toeplitz_algebra.hpp"
#include "test_support.hpp"

namespace kms {
namespace {

AlgebraElement U(const IntVector& n, int k) { return AlgebraElement(Word{IntVector(k, 0), n, IntVector(k, 0), 1}); }
AlgebraElement V(const IntVector& p, int d) { return AlgebraElement(Word{p, IntVector(d, 0), IntVector(p.size(), 0), 1}); }
AlgebraElement Vstar(const IntVector& q, int d) {
  return AlgebraElement(Word{IntVector(q.size(), 0), IntVector(d, 0), q, 1});
}

TEST(Words, ParseAndPrintRoundTrip) {
  const Word w = parse_word("V[1,0] U[2,-3,1] V*[0,4] @ 3");
  EXPECT_EQ(w.p, (IntVector{1, 0}));
  EXPECT_EQ(w.n, (IntVector{2, -3, 1}));
  EXPECT_EQ(w.q, (IntVector{0, 4}));
  EXPECT_EQ(w.level, 3);
  EXPECT_EQ(parse_word(to_string(w)), w);
  EXPECT_EQ(parse_word("  V[0]U[0]V*[0]  ").level, 1);
}

TEST(Words, ParseErrors) {
  EXPECT_KMS_ERROR(parse_word("V[1] U[2]"), Errc::WordParseError);
  EXPECT_KMS_ERROR(parse_word("V[1] U[2] V*[0,1]"), Errc::WordParseError);
  EXPECT_KMS_ERROR(parse_word("V[-1] U[2] V*[0]"), Errc::WordParseError);
  EXPECT_KMS_ERROR(parse_word("V[1] U[x] V*[0]"), Errc::WordParseError);
  EXPECT_KMS_ERROR(parse_word("V[1] U[2] V*[0] @ 0"), Errc::WordParseError);
  EXPECT_KMS_ERROR(parse_word("V[1] U[2] V*[0] junk"), Errc::WordParseError);
}

TEST(Elements, PruneAndArithmetic) {
  const Word w{{1}, {2}, {0}, 1};
  AlgebraElement a(w, 2.0);
  a.add(w, -2.0 + 1e-16);
  EXPECT_TRUE(a.is_zero());
  const AlgebraElement b(w, Complex(1.0, 1.0));
  EXPECT_COMPLEX_NEAR((b + b).coefficient(w), Complex(2.0, 2.0), 0.0);
  EXPECT_TRUE((b - b).is_zero());
  EXPECT_COMPLEX_NEAR((Complex(0.0, 1.0) * b).coefficient(w), Complex(-1.0, 1.0), 0.0);
  EXPECT_KMS_ERROR(AlgebraElement(2) += b, Errc::LevelMismatch);
}

TEST(Multiply, CommutationRelation) {
  // U_n V_p = e^{2 pi i p.theta n} V_p U_n
  RealMatrix theta(2, 1);
  theta << 0.3, 1.7;
  const IntVector p{2, 1};
  const IntVector n{3};
  const auto lhs = multiply(U(n, 2), V(p, 1), theta);
  const auto rhs = multiply(V(p, 1), U(n, 2), theta);
  const Word target{p, n, {0, 0}, 1};
  const Complex phase = character(dot(p, apply_theta(theta, n)));
  EXPECT_COMPLEX_NEAR(lhs.coefficient(target), phase * rhs.coefficient(target), 1e-14);
  EXPECT_COMPLEX_NEAR(rhs.coefficient(target), 1.0, 1e-15);
}

TEST(Multiply, NicaCovariance) {
  // V_p^* V_q = V_{(p v q) - p} V^*_{(p v q) - q}
  RealMatrix theta = RealMatrix::Constant(2, 1, 0.4);
  const auto prod = multiply(Vstar({2, 0}, 1), V({1, 3}, 1), theta);
  EXPECT_COMPLEX_NEAR(prod.coefficient(Word{{0, 3}, {0}, {1, 0}, 1}), 1.0, 1e-15);
  EXPECT_EQ(prod.terms().size(), 1u);
  // isometry: V_p^* V_p = 1
  const auto iso = multiply(Vstar({2, 1}, 1), V({2, 1}, 1), theta);
  EXPECT_COMPLEX_NEAR(iso.coefficient(Word::identity({1, 2})), 1.0, 1e-15);
}

TEST(Multiply, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  const Dimensions dims{2, 2};
  const BlockParams P = random_block_params(rng, dims);
  const AlgebraElement one(Word::identity(dims));
  for (int i = 0; i < 20; ++i) {
    const auto a = random_element(rng, dims, 3);
    EXPECT_LE(max_coefficient_distance(multiply(one, a, P.theta), a), 1e-15);
    EXPECT_LE(max_coefficient_distance(multiply(a, one, P.theta), a), 1e-15);
  }
}

TEST(Multiply, AssociativeAndAdjointAntiMultiplicative) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 60; ++i) {
    const Dimensions dims{1 + i % 3, 1 + (i / 3) % 3};
    const BlockParams P = random_block_params(rng, dims);
    const auto a = random_element(rng, dims, 2);
    const auto b = random_element(rng, dims, 2);
    const auto c = random_element(rng, dims, 2);
    const auto left = multiply(multiply(a, b, P.theta), c, P.theta);
    const auto right = multiply(a, multiply(b, c, P.theta), P.theta);
    EXPECT_LE(max_coefficient_distance(left, right), 1e-12);
    EXPECT_LE(max_coefficient_distance(adjoint(multiply(a, b, P.theta)),
                                       multiply(adjoint(b), adjoint(a), P.theta)),
              1e-12);
    EXPECT_LE(max_coefficient_distance(adjoint(adjoint(a)), a), 0.0);
  }
}

TEST(Multiply, LevelMismatch) {
  const RealMatrix theta = RealMatrix::Constant(1, 1, 1.0);
  const AlgebraElement a(Word{{0}, {0}, {0}, 1});
  const AlgebraElement b(Word{{0}, {0}, {0}, 2});
  EXPECT_KMS_ERROR(multiply(a, b, theta), Errc::LevelMismatch);
}

TEST(Dynamics, GroupLawAndHomomorphism) {
  std::mt19937_64 rng(3);
  const Dimensions dims{2, 2};
  const BlockParams P = random_block_params(rng, dims);
  const auto a = random_element(rng, dims, 4);
  const auto b = random_element(rng, dims, 4);
  const double s = 0.37;
  const double t = -1.2;
  EXPECT_LE(max_coefficient_distance(apply_dynamics(apply_dynamics(a, s, P.r), t, P.r), apply_dynamics(a, s + t, P.r)),
            1e-14);
  EXPECT_LE(max_coefficient_distance(apply_dynamics(multiply(a, b, P.theta), s, P.r),
                                     multiply(apply_dynamics(a, s, P.r), apply_dynamics(b, s, P.r), P.theta)),
            1e-13);
  EXPECT_LE(max_coefficient_distance(apply_dynamics(a, 0.0, P.r), a), 0.0);
}

TEST(State, EvaluationFormula) {
  BlockParams P;
  P.theta = RealMatrix::Constant(1, 1, 1.0);
  P.r = RealVector::Constant(1, 1.0);
  P.beta = 2.0;
  const auto nu = TorusMeasure::point_mass(TorusPoint{0.25});
  EXPECT_COMPLEX_NEAR(state_eval(nu, P, AlgebraElement(Word{{1}, {1}, {1}, 1})), std::exp(-2.0) * Complex(0.0, 1.0),
                      1e-15);
  EXPECT_COMPLEX_NEAR(state_eval(nu, P, AlgebraElement(Word{{1}, {1}, {0}, 1})), 0.0, 0.0);
}

TEST(State, KmsResidualVanishesForAnyMeasure) {
  // The identity holds for every nu, positive or not.
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const Dimensions dims{1 + i % 2, 1 + i % 3};
    const BlockParams P = random_block_params(rng, dims);
    const auto nu = random_probability_measure(rng, dims.d, 3);
    const auto a = random_element(rng, dims, 3);
    const auto b = random_element(rng, dims, 3);
    EXPECT_LE(kms_residual(nu, P, a, b), 1e-10);
  }
}

}  // namespace
}  // namespace kms
