#pragma once

#include <variant>
#include <vector>

#include "kms/scenario.hpp"
#include "kms/subinvariance.hpp"
#include "kms/toeplitz_algebra.hpp"
#include "kms/torus_measure.hpp"

namespace kms {

/// c_m = prod_j beta r^m_j and d_m = det D_m; they satisfy d_m c_{m+1} = c_m.
struct LevelConstants {
  double c = 1.0;
  std::int64_t d = 1;
};

LevelConstants level_constants(const Scenario& s, int m);

/// pi_m on a spanning word: (p, n, q) @ m -> (D_m p, E_m n, D_m q) @ m+1.
Word embed_word(const Word& w, const Scenario& s);
AlgebraElement embed_element(const AlgebraElement& a, const Scenario& s);

/// A finite stand-in for a probability measure on the solenoid: one measure
/// per level, linked by moment(mu_m, n) = moment(mu_{m+1}, E_m n).
class SolenoidMeasureThread {
 public:
  SolenoidMeasureThread(Scenario scenario, std::vector<TorusMeasure> levels);

  const Scenario& scenario() const { return scenario_; }
  int depth() const { return static_cast<int>(levels_.size()); }
  /// 1-based.
  const TorusMeasure& level(int m) const;

 private:
  Scenario scenario_;
  std::vector<TorusMeasure> levels_;
};

/// Generators of threads.
struct PointThread {
  std::vector<RealVector> points;  ///< y_1, ..., optionally more levels
};
struct TopLevelThread {
  TorusMeasure top;  ///< measure at level M, pushed down with E_m^T
};
struct UniformThread {};

using ThreadGenerator = std::variant<PointThread, TopLevelThread, UniformThread>;

/// Missing point levels are filled with the canonical lift (E_m^T)^{-1} y_m mod 1.
/// Supplied points must satisfy E_m^T y_{m+1} = y_m mod Z^d to 1e-10
/// (IncompatibleThread); a TopLevel generator must have mass 1.
SolenoidMeasureThread build_thread(const ThreadGenerator& generator, const Scenario& s);

/// The det(E) points x in [0,1)^d with E^T x = y mod Z^d.
std::vector<RealVector> preimages(const RealVector& y, const IntMatrix& E);

struct ThreadCheck {
  double max_compatibility_error = 0.0;
  double max_mass_error = 0.0;
  bool nonnegative = true;
  bool ok(double tol = 1e-12) const { return nonnegative && max_compatibility_error <= tol && max_mass_error <= tol; }
};

/// Compatibility and normalisation over the moment box |n_i| <= box.
ThreadCheck check_thread(const SolenoidMeasureThread& thread, int box = 5, bool check_positivity = true);

/// sigma_m(nu) = d_m^{-1} E^T_{m*}(nu), mapping level m+1 measures to level m.
TorusMeasure sigma_map(const TorusMeasure& nu_next, const Scenario& s, int m);

/// nu_m = c_m nu_{mu_m}: the probability measure implementing psi on level m.
TorusMeasure level_state_measure(const SolenoidMeasureThread& thread, int m);

/// psi_mu(V_{m,p} U_{m,n} V_{m,q}^*) =
///   delta_{p,q} e^{-beta p.r^m} prod_j beta r^m_j / (beta r^m_j - 2 pi i (theta_m n)_j) moment(mu_m, n).
Complex psi_eval(const SolenoidMeasureThread& thread, const Word& w);
Complex psi_eval(const SolenoidMeasureThread& thread, const AlgebraElement& a);

/// |psi(pi_m(w)) - psi(w)|.
double consistency_residual(const SolenoidMeasureThread& thread, const Word& w);

}  // namespace kms
