#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kms/scenario.hpp"
#include "kms/torus_measure.hpp"

namespace kms {

/// theta, r and beta of a single Toeplitz noncommutative torus. Row j of theta
/// is the translation direction paired with r_j.
struct BlockParams {
  RealMatrix theta;  ///< k x d, entries >= 0
  RealVector r;      ///< k entries, > 0
  double beta = 1.0;

  int k() const { return static_cast<int>(theta.rows()); }
  int d() const { return static_cast<int>(theta.cols()); }

  static BlockParams at_level(const Scenario& s, int m);
  /// Throws InvalidArgument on shape or sign violations.
  void validate() const;
};

enum class InputCheck { Checked, Unchecked };

/// prod_j (beta r_j - 2 pi i (theta n)_j)^{-1}
Complex nu_multiplier(const BlockParams& P, const MomentIndex& n);
/// prod_j (beta r_j - 2 pi i (theta n)_j)
Complex mu_multiplier(const BlockParams& P, const MomentIndex& n);
/// prod_j (1 - e^{-beta r_j} e^{2 pi i (theta n)_j})
Complex kappa_multiplier(const BlockParams& P, const MomentIndex& n);
/// y_beta = sum_{p in N^k} e^{-beta p.r} = prod_j (1 - e^{-beta r_j})^{-1}
double y_beta(const BlockParams& P);
/// prod_j beta r_j (the constant c_m at a scenario level).
double c_constant(const BlockParams& P);

/// nu_mu, the Laplace-type average of translates of mu along theta^T w,
/// w in [0, inf)^k with weight e^{-beta w.r}. Mass ||mu|| prod_j (beta r_j)^{-1}.
/// Checked mode rejects inputs that fail positivity_test (NegativeInput).
TorusMeasure nu_from_mu(const TorusMeasure& mu, const BlockParams& P, InputCheck check = InputCheck::Checked);

/// mu_nu, the inverse of nu_from_mu: the iterated s -> 0+ limit of the scaled
/// defect measures, evaluated exactly on characters. Checked mode runs
/// check_subinvariance first (NegativeInput on failure).
TorusMeasure mu_from_nu(const TorusMeasure& nu, const BlockParams& P, InputCheck check = InputCheck::Checked);

/// nu_kappa = prod_j (id - e^{-beta r_j} R_{theta_j^T *})^{-1} kappa.
TorusMeasure nu_from_kappa(const TorusMeasure& kappa, const BlockParams& P);
/// kappa = prod_j (id - e^{-beta r_j} R_{theta_j^T *}) nu.
TorusMeasure kappa_from_nu(const TorusMeasure& nu, const BlockParams& P);

/// The signed measure obtained by applying a subinvariance operator product to nu.
struct DefectMeasure {
  TorusMeasure base;
  MomentMultiplier multiplier;
  std::string description;
  TorusMeasure measure;  ///< moment(measure, n) = multiplier(n) * moment(base, n)

  Complex moment(const MomentIndex& n) const { return measure.moment(n); }
};

/// prod_{p in F} (id - e^{-beta p.r} R_{theta^T p *}) nu. Distinct elements of
/// F must have zero meet (MeetNotZero). Each moment is computed both as the
/// product and as its inclusion-exclusion expansion; a disagreement beyond
/// 1e-14 raises InternalConsistency.
DefectMeasure defect_measure_finite(const TorusMeasure& nu, const std::vector<IntVector>& F, const BlockParams& P);

/// prod_j (id - e^{-beta s_j r_j} R_{s_j theta_j^T *}) nu for s in [0, inf)^k.
DefectMeasure defect_measure_cts(const TorusMeasure& nu, const RealVector& s, const BlockParams& P);

/// Same as defect_measure_cts but only with the factors j in `factors`.
DefectMeasure defect_measure_partial(const TorusMeasure& nu, const RealVector& s, const std::vector<int>& factors,
                                     const BlockParams& P);

/// Multiplier of the continuous defect at s, with 1 - e^{z} evaluated without cancellation.
Complex defect_multiplier(const BlockParams& P, const RealVector& s, const MomentIndex& n);

struct LimitSequence {
  std::vector<double> schedule;
  std::vector<Complex> values;
  Complex exact;         ///< moment(mu_from_nu(nu), n)
  double mass_bound = 0;  ///< prod_j (beta r_j) ||nu||
  /// At n = 0: every value is real, positive and <= mass_bound. True otherwise.
  bool bound_respected = true;
};

/// Values multiplier_s(n) / s^k * moment(nu, n) along the diagonal s_1 = ... = s_k = s.
LimitSequence numeric_limit_mu(const TorusMeasure& nu, const BlockParams& P, const MomentIndex& n,
                               const std::vector<double>& schedule);

/// Least-squares slope of log|value - exact| against log s.
double empirical_order(const LimitSequence& seq);

/// s_max = 5 / (beta min_j r_j): the scale on which the defects decay.
double subinvariance_s_max(const BlockParams& P);

/// `count` deterministic uniform samples of [0, s_max]^k.
std::vector<RealVector> sample_s(const BlockParams& P, int count, std::uint64_t seed);

/// Lattice points D_{m,m+l}^{-1} p for 1 <= l <= l_max (bounded by the scenario
/// depth) and p in {0..p_max}^k.
std::vector<RealVector> subinvariance_lattice(const Scenario& s, int m, int l_max, int p_max);

struct SubinvarianceCheck {
  std::string label;
  RealVector s;  ///< empty for the check on nu itself
  PositivityVerdict verdict;
};

struct SubinvarianceOptions {
  int samples = 50;
  std::uint64_t seed = 1;
  PositivityOptions positivity{};
  std::vector<RealVector> extra_points;  ///< e.g. subinvariance_lattice(...)
};

struct SubinvarianceReport {
  std::vector<SubinvarianceCheck> checks;
  bool passed() const;
};

/// Positivity of nu and of the continuous defects at sampled s plus any extra points.
SubinvarianceReport check_subinvariance(const TorusMeasure& nu, const BlockParams& P,
                                        const SubinvarianceOptions& options = {});

}  // namespace kms
