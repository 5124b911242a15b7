#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace kms {

using Complex = std::complex<double>;

/// Integer vectors index characters of Z^d and elements of N^k.
using IntVector = std::vector<std::int64_t>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// e^{2 pi i t}, with t reduced mod 1 first so large arguments keep their
/// fractional precision.
Complex character(double t);

/// 1 - e^{z}, accurate when |z| is small.
Complex one_minus_exp(Complex z);

/// Exact determinant of a small integer matrix (fraction-free elimination).
std::int64_t determinant(const IntMatrix& m);

/// Integer adjugate, so that m * adjugate(m) = det(m) * I.
IntMatrix adjugate(const IntMatrix& m);

IntVector multiply(const IntMatrix& m, const IntVector& v);
IntMatrix identity_int(int n);

/// theta * n for a k x d real matrix and n in Z^d.
RealVector apply_theta(const RealMatrix& theta, const IntVector& n);

double dot(const IntVector& a, const RealVector& b);

/// Componentwise max (the join of N^k).
IntVector join(const IntVector& p, const IntVector& q);
/// Componentwise min (the meet of N^k).
IntVector meet(const IntVector& p, const IntVector& q);

IntVector add(const IntVector& a, const IntVector& b);
IntVector subtract(const IntVector& a, const IntVector& b);
IntVector negate(const IntVector& a);
bool is_zero(const IntVector& a);
bool is_nonnegative(const IntVector& a);

/// Reduce each coordinate to [0, 1).
RealVector reduce_mod1(const RealVector& x);

}  // namespace kms
