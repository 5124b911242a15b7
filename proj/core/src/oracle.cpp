#include "kms/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "kms/errors.hpp"

namespace kms::oracle {

namespace {

constexpr double kTruncationLog = 27.631021115928547;  // ln(1e12)

// Composite Gauss-Legendre for \int_0^W e^{(-a + 2 pi i c) w} dw.
Complex integrate_axis(double a, double c, double W, int panels, const GaussRule& rule) {
  Complex sum = 0.0;
  const double h = W / panels;
  for (int k = 0; k < panels; ++k) {
    const double left = k * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double w = left + 0.5 * h * (rule.nodes[i] + 1.0);
      sum += 0.5 * h * rule.weights[i] * std::exp(-a * w) * character(c * w);
    }
  }
  return sum;
}

std::vector<IntVector> cube(int k, int box) {
  std::vector<IntVector> out;
  IntVector c(static_cast<std::size_t>(k), 0);
  while (true) {
    out.push_back(c);
    int axis = k - 1;
    while (axis >= 0 && c[static_cast<std::size_t>(axis)] == box) {
      c[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++c[static_cast<std::size_t>(axis)];
  }
  return out;
}

}  // namespace

QuadratureSpec QuadratureSpec::for_params(const BlockParams& P, const MomentIndex& n) {
  QuadratureSpec q;
  const RealVector c = apply_theta(P.theta, n);
  q.W = RealVector(P.k());
  double panels = 0.0;
  for (int j = 0; j < P.k(); ++j) {
    const double a = P.beta * P.r(j);
    q.W(j) = kTruncationLog / a;
    panels = std::max(panels, std::ceil(q.W(j) * (std::abs(c(j)) + a) * 2.0));
  }
  q.panels = static_cast<int>(panels) + 16;
  return q;
}

Complex laplace_quadrature(const TorusMeasure& mu, const BlockParams& P, const MomentIndex& n,
                           const QuadratureSpec& q) {
  const GaussRule rule = gauss_legendre(q.nodes);
  const RealVector c = apply_theta(P.theta, n);
  Complex weight = 1.0;
  for (int j = 0; j < P.k(); ++j) weight *= integrate_axis(P.beta * P.r(j), c(j), q.W(j), q.panels, rule);
  const auto* atomic = mu.as_atomic();
  if (atomic == nullptr) return weight * mu.moment(n);
  Complex sum = 0.0;
  for (const auto& atom : atomic->atoms) {
    double phase = 0.0;
    for (int i = 0; i < mu.dim(); ++i) phase += atom.x.coords()(i) * static_cast<double>(n[static_cast<std::size_t>(i)]);
    sum += atom.weight * character(phase);
  }
  return weight * sum;
}

Complex laplace_quadrature(const TorusMeasure& mu, const BlockParams& P, const MomentIndex& n) {
  return laplace_quadrature(mu, P, n, QuadratureSpec::for_params(P, n));
}

double geometric_tail_weight(const BlockParams& P, int B) {
  // y_beta (1 - prod_j (1 - t_j)), t_j = e^{-beta (B+1) r_j}, without cancellation.
  double log_kept = 0.0;
  for (int j = 0; j < P.k(); ++j) log_kept += std::log1p(-std::exp(-P.beta * (B + 1) * P.r(j)));
  return y_beta(P) * -std::expm1(log_kept);
}

FockTruncation FockTruncation::for_tolerance(const BlockParams& P, double tol) {
  FockTruncation T;
  while (geometric_tail_weight(P, T.box) > tol) ++T.box;
  return T;
}

double measure_norm(const TorusMeasure& mu) {
  if (const auto* atomic = mu.as_atomic()) {
    double total = 0.0;
    for (const auto& a : atomic->atoms) total += std::abs(a.weight);
    return total;
  }
  return std::abs(mu.moment(MomentIndex(static_cast<std::size_t>(mu.dim()), 0)));
}

Complex fock_state_eval(const TorusMeasure& kappa, const BlockParams& P, const AlgebraElement& a,
                        const FockTruncation& T) {
  Complex total = 0.0;
  for (const auto& [w, coef] : a.terms()) {
    if (w.p != w.q) continue;
    const RealVector c = apply_theta(P.theta, w.n);
    // The box sum factorises over the k axes.
    Complex sum = std::exp(-P.beta * dot(w.p, P.r));
    for (int j = 0; j < P.k(); ++j) {
      Complex axis = 0.0;
      for (int b = 0; b <= T.box; ++b) axis += std::exp(-P.beta * b * P.r(j)) * character(b * c(j));
      sum *= axis;
    }
    total += coef * sum * kappa.moment(w.n);
  }
  return total;
}

double fock_error_bound(const TorusMeasure& kappa, const BlockParams& P, const AlgebraElement& a,
                        const FockTruncation& T) {
  double coef_sum = 0.0;
  for (const auto& [w, coef] : a.terms()) {
    if (w.p == w.q) coef_sum += std::abs(coef) * std::exp(-P.beta * dot(w.p, P.r));
  }
  return coef_sum * T.tail_weight(P) * measure_norm(kappa);
}

Complex geometric_series_moment(const TorusMeasure& kappa, const BlockParams& P, const MomentIndex& n, int B) {
  const RealVector c = apply_theta(P.theta, n);
  Complex sum = 0.0;
  for (const auto& p : cube(P.k(), B)) sum += std::exp(-P.beta * dot(p, P.r)) * character(dot(p, c));
  return sum * kappa.moment(n);
}

DenseFock::DenseFock(const TorusMeasure& kappa, const BlockParams& P, int box)
    : params_(P), box_(box), cells_(cube(P.k(), box)) {
  const auto* atomic = kappa.as_atomic();
  if (atomic == nullptr) raise(Errc::InvalidArgument, "dense Fock mode needs an atomic kappa");
  for (const auto& atom : atomic->atoms) {
    if (atom.weight.real() <= 0.0 || atom.weight.imag() != 0.0) {
      raise(Errc::InvalidArgument, "dense Fock mode needs positive atom weights");
    }
  }
  atoms_ = atomic->atoms;
}

int DenseFock::cell_index(const IntVector& c) const {
  int idx = 0;
  for (auto v : c) {
    if (v < 0 || v > box_) return -1;
    idx = idx * (box_ + 1) + static_cast<int>(v);
  }
  return idx;
}

Eigen::MatrixXcd DenseFock::matrix(const Word& w) const {
  // V_p U_n V_q^* (e_c (x) delta_x) = e^{2 pi i (c - q).theta n} e^{2 pi i n.x} e_{c-q+p} (x) delta_x for c >= q.
  const int N = dimension();
  const int atoms = static_cast<int>(atoms_.size());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  const RealVector tn = apply_theta(params_.theta, w.n);
  for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
    const IntVector& c = cells_[ci];
    const IntVector shifted = subtract(c, w.q);
    if (!is_nonnegative(shifted)) continue;
    const int target = cell_index(add(shifted, w.p));
    if (target < 0) continue;
    const Complex cell_phase = character(dot(shifted, tn));
    for (int x = 0; x < atoms; ++x) {
      double phase = 0.0;
      const RealVector& pt = atoms_[static_cast<std::size_t>(x)].x.coords();
      for (Eigen::Index i = 0; i < pt.size(); ++i) phase += pt(i) * static_cast<double>(w.n[static_cast<std::size_t>(i)]);
      M(target * atoms + x, static_cast<int>(ci) * atoms + x) = cell_phase * character(phase);
    }
  }
  return M;
}

Eigen::MatrixXcd DenseFock::matrix(const AlgebraElement& a) const {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dimension(), dimension());
  for (const auto& [w, c] : a.terms()) M += c * matrix(w);
  return M;
}

double DenseFock::product_discrepancy(const Word& a, const Word& b) const {
  Word ab;
  const Complex phase = multiply_words(a, b, params_.theta, ab);
  const Eigen::MatrixXcd lhs = matrix(a) * matrix(b);
  const Eigen::MatrixXcd rhs = phase * matrix(ab);
  const int atoms = static_cast<int>(atoms_.size());
  const IntVector reach = add(a.p, b.p);
  double worst = 0.0;
  for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
    if (cell_index(add(cells_[ci], reach)) < 0) continue;
    for (int x = 0; x < atoms; ++x) {
      const int col = static_cast<int>(ci) * atoms + x;
      worst = std::max(worst, (lhs.col(col) - rhs.col(col)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

std::pair<Complex, Complex> bhs_reconciliation(double y, double theta, double r, double beta, std::int64_t n) {
  if (theta == 0.0) raise(Errc::ThetaZero, "reconciliation divides by theta");
  if (theta < 0.0 || r <= 0.0 || beta <= 0.0) raise(Errc::InvalidArgument, "theta, r and beta must be positive");
  BlockParams P;
  P.theta = RealMatrix::Constant(1, 1, theta);
  P.r = RealVector::Constant(1, r);
  P.beta = beta;
  RealVector pt(1);
  pt << y;
  const MomentIndex idx{n};
  const Complex A = nu_from_mu(TorusMeasure::point_mass(TorusPoint(pt)), P, InputCheck::Unchecked).moment(idx);

  const double c = beta * r / theta;
  const Complex freq(c, -kTwoPi * static_cast<double>(n));
  const Complex finite = (1.0 - std::exp(-c) * character(static_cast<double>(n))) / freq;
  const Complex B = character(static_cast<double>(n) * y) / (theta * -std::expm1(-c)) * finite;
  return {A, B};
}

}  // namespace kms::oracle
