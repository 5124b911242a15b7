#include "kms/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "kms/errors.hpp"

namespace kms {

Complex character(double t) {
  const double frac = t - std::floor(t);
  return {std::cos(kTwoPi * frac), std::sin(kTwoPi * frac)};
}

Complex one_minus_exp(Complex z) {
  // e^{a+ib} - 1 = (expm1(a) cos b - 2 sin^2(b/2)) + i e^a sin b
  const double a = z.real();
  const double b = z.imag();
  const double half = std::sin(0.5 * b);
  const double re = std::expm1(a) * std::cos(b) - 2.0 * half * half;
  const double im = std::exp(a) * std::sin(b);
  return {-re, -im};
}

std::int64_t determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) raise(Errc::InvalidArgument, "determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  // Bareiss elimination: every division below is exact.
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return 0;
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix adjugate(const IntMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) raise(Errc::InvalidArgument, "adjugate of a non-square matrix");
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      const std::int64_t cof = ((i + j) % 2 == 0 ? 1 : -1) * determinant(minor);
      adj(j, i) = cof;
    }
  }
  return adj;
}

IntVector multiply(const IntMatrix& m, const IntVector& v) {
  if (static_cast<std::size_t>(m.cols()) != v.size()) {
    raise(Errc::InvalidArgument, "matrix/vector dimension mismatch");
  }
  IntVector out(static_cast<std::size_t>(m.rows()), 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  }
  return out;
}

IntMatrix identity_int(int n) { return IntMatrix::Identity(n, n); }

RealVector apply_theta(const RealMatrix& theta, const IntVector& n) {
  if (static_cast<std::size_t>(theta.cols()) != n.size()) {
    raise(Errc::InvalidArgument, "theta/n dimension mismatch");
  }
  RealVector out = RealVector::Zero(theta.rows());
  for (Eigen::Index j = 0; j < theta.rows(); ++j) {
    for (Eigen::Index i = 0; i < theta.cols(); ++i) out(j) += theta(j, i) * static_cast<double>(n[i]);
  }
  return out;
}

double dot(const IntVector& a, const RealVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b(static_cast<Eigen::Index>(i));
  return s;
}

IntVector join(const IntVector& p, const IntVector& q) {
  IntVector out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::max(p[i], q[i]);
  return out;
}

IntVector meet(const IntVector& p, const IntVector& q) {
  IntVector out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::min(p[i], q[i]);
  return out;
}

IntVector add(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

IntVector subtract(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

IntVector negate(const IntVector& a) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

bool is_zero(const IntVector& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

bool is_nonnegative(const IntVector& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x >= 0; });
}

RealVector reduce_mod1(const RealVector& x) {
  RealVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double f = x(i) - std::floor(x(i));
    if (f >= 1.0) f = 0.0;
    out(i) = f;
  }
  return out;
}

}  // namespace kms
