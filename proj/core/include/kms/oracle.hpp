#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kms/subinvariance.hpp"
#include "kms/toeplitz_algebra.hpp"
#include "kms/torus_measure.hpp"

// Slow, independent evaluators used to cross-check the closed forms.

namespace kms::oracle {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

struct QuadratureSpec {
  RealVector W;  ///< per-axis truncation, e^{-beta W_j r_j} <= 1e-12
  int panels = 64;
  int nodes = 10;

  /// Truncation from P and a panel count that resolves the oscillation at n.
  static QuadratureSpec for_params(const BlockParams& P, const MomentIndex& n);
};

/// \int_{[0,W]} e^{-beta w.r} \int f(x + theta^T w) dmu(x) dw for f = e_n, by
/// composite Gauss-Legendre in each w_j. Atomic measures are translated atom by
/// atom; any other representation contributes moment(mu, n).
Complex laplace_quadrature(const TorusMeasure& mu, const BlockParams& P, const MomentIndex& n,
                           const QuadratureSpec& q);
Complex laplace_quadrature(const TorusMeasure& mu, const BlockParams& P, const MomentIndex& n);

/// sum_{p in N^k, p outside [0,B]^k} e^{-beta p.r}, in closed form.
double geometric_tail_weight(const BlockParams& P, int B);

struct FockTruncation {
  int box = 0;  ///< p ranges over [0, box]^k

  double tail_weight(const BlockParams& P) const { return geometric_tail_weight(P, box); }
  /// Smallest box whose tail weight is at most tol.
  static FockTruncation for_tolerance(const BlockParams& P, double tol = 1e-10);
};

/// Total variation for atomic measures, |moment(0)| otherwise.
double measure_norm(const TorusMeasure& mu);

/// phi_nu evaluated in the Fock picture: for each word
/// delta_{p,q} sum_{b in [0,box]^k} e^{-beta (b+p).r} e^{2 pi i b.theta n} moment(kappa, n).
Complex fock_state_eval(const TorusMeasure& kappa, const BlockParams& P, const AlgebraElement& a,
                        const FockTruncation& T);

/// Bound on |fock_state_eval - state_eval(nu_from_kappa(kappa))|.
double fock_error_bound(const TorusMeasure& kappa, const BlockParams& P, const AlgebraElement& a,
                        const FockTruncation& T);

/// sum_{p in [0,B]^k} e^{-beta p.r} moment(R_{theta^T p *} kappa, n), the truncated
/// inverse of kappa_from_nu.
Complex geometric_series_moment(const TorusMeasure& kappa, const BlockParams& P, const MomentIndex& n, int B);

/// Truncated Fock space l^2([0,box]^k) (x) L^2(kappa) for an atomic kappa with
/// positive weights; the atoms give an orthogonal basis of L^2(kappa).
class DenseFock {
 public:
  DenseFock(const TorusMeasure& kappa, const BlockParams& P, int box);

  int dimension() const { return static_cast<int>(cells_.size() * atoms_.size()); }
  Eigen::MatrixXcd matrix(const Word& w) const;
  Eigen::MatrixXcd matrix(const AlgebraElement& a) const;

  /// Largest entry of pi(a) pi(b) - pi(ab) over the basis vectors e_c (x) delta_x
  /// with c + p_a + p_b <= box for every word, where truncation cannot interfere.
  double product_discrepancy(const Word& a, const Word& b) const;

 private:
  int cell_index(const IntVector& c) const;

  BlockParams params_;
  int box_;
  std::vector<Atom> atoms_;
  std::vector<IntVector> cells_;
};

/// (A, B) for the one-dimensional case: A is moment(nu_from_mu(delta_y), n), B the
/// Laplace transform of a periodic function in closed form. Throws ThetaZero.
std::pair<Complex, Complex> bhs_reconciliation(double y, double theta, double r, double beta, std::int64_t n);

}  // namespace kms::oracle
