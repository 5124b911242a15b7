#include "kms/subinvariance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kms/errors.hpp"

namespace kms {

namespace {

// Representative of t mod 1 in [-1/2, 1/2]; keeps small phases exact.
double centred_frac(double t) { return t - std::nearbyint(t); }

// 1 - e^{-a} e^{2 pi i t}
Complex damped_defect_factor(double a, double t) { return one_minus_exp(Complex(-a, kTwoPi * centred_frac(t))); }

std::string vec_str(const RealVector& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ")";
  return os.str();
}

std::string vec_str(const IntVector& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

BlockParams BlockParams::at_level(const Scenario& s, int m) {
  const LevelData& L = s.level(m);
  return BlockParams{L.theta, L.r, s.beta};
}

void BlockParams::validate() const {
  if (theta.rows() < 1 || theta.cols() < 1) raise(Errc::InvalidArgument, "theta must be a non-empty k x d matrix");
  if (r.size() != theta.rows()) raise(Errc::InvalidArgument, "r must have k entries");
  if ((theta.array() < 0.0).any()) raise(Errc::InvalidArgument, "theta entries must be >= 0");
  if (!(r.array() > 0.0).all()) raise(Errc::InvalidArgument, "r entries must be > 0");
  if (!(beta > 0.0)) raise(Errc::InvalidArgument, "beta must be > 0");
}

Complex nu_multiplier(const BlockParams& P, const MomentIndex& n) { return 1.0 / mu_multiplier(P, n); }

Complex mu_multiplier(const BlockParams& P, const MomentIndex& n) {
  const RealVector tn = apply_theta(P.theta, n);
  Complex prod = 1.0;
  for (int j = 0; j < P.k(); ++j) prod *= Complex(P.beta * P.r(j), -kTwoPi * tn(j));
  return prod;
}

Complex kappa_multiplier(const BlockParams& P, const MomentIndex& n) {
  const RealVector tn = apply_theta(P.theta, n);
  Complex prod = 1.0;
  for (int j = 0; j < P.k(); ++j) prod *= damped_defect_factor(P.beta * P.r(j), tn(j));
  return prod;
}

double y_beta(const BlockParams& P) {
  double prod = 1.0;
  for (int j = 0; j < P.k(); ++j) prod /= -std::expm1(-P.beta * P.r(j));
  return prod;
}

double c_constant(const BlockParams& P) {
  double prod = 1.0;
  for (int j = 0; j < P.k(); ++j) prod *= P.beta * P.r(j);
  return prod;
}

TorusMeasure nu_from_mu(const TorusMeasure& mu, const BlockParams& P, InputCheck check) {
  P.validate();
  if (mu.dim() != P.d()) raise(Errc::InvalidArgument, "measure dimension differs from theta columns");
  if (check == InputCheck::Checked) {
    const auto verdict = positivity_test(mu);
    if (!verdict.positive()) raise(Errc::NegativeInput, "nu_from_mu requires a nonnegative measure");
  }
  return TorusMeasure::multiplied(
      mu, [P](const MomentIndex& n) { return nu_multiplier(P, n); }, "nu_from_mu");
}

TorusMeasure mu_from_nu(const TorusMeasure& nu, const BlockParams& P, InputCheck check) {
  P.validate();
  if (nu.dim() != P.d()) raise(Errc::InvalidArgument, "measure dimension differs from theta columns");
  if (check == InputCheck::Checked) {
    SubinvarianceOptions opts;
    opts.samples = 16;
    if (!check_subinvariance(nu, P, opts).passed()) {
      raise(Errc::NegativeInput, "mu_from_nu requires a subinvariant measure");
    }
  }
  return TorusMeasure::multiplied(
      nu, [P](const MomentIndex& n) { return mu_multiplier(P, n); }, "mu_from_nu");
}

TorusMeasure nu_from_kappa(const TorusMeasure& kappa, const BlockParams& P) {
  P.validate();
  return TorusMeasure::multiplied(
      kappa, [P](const MomentIndex& n) { return 1.0 / kappa_multiplier(P, n); }, "nu_from_kappa");
}

TorusMeasure kappa_from_nu(const TorusMeasure& nu, const BlockParams& P) {
  P.validate();
  return TorusMeasure::multiplied(
      nu, [P](const MomentIndex& n) { return kappa_multiplier(P, n); }, "kappa_from_nu");
}

DefectMeasure defect_measure_finite(const TorusMeasure& nu, const std::vector<IntVector>& F, const BlockParams& P) {
  P.validate();
  for (const auto& p : F) {
    if (static_cast<int>(p.size()) != P.k() || !is_nonnegative(p)) {
      raise(Errc::InvalidArgument, "elements of F must lie in N^k");
    }
  }
  for (std::size_t a = 0; a < F.size(); ++a) {
    for (std::size_t b = a + 1; b < F.size(); ++b) {
      if (!is_zero(meet(F[a], F[b]))) {
        raise(Errc::MeetNotZero, vec_str(F[a]) + " and " + vec_str(F[b]) + " have nonzero meet");
      }
    }
  }
  if (F.size() > 20) raise(Errc::InvalidArgument, "F too large for inclusion-exclusion");

  MomentMultiplier mult = [P, F](const MomentIndex& n) -> Complex {
    const RealVector tn = apply_theta(P.theta, n);
    std::vector<double> decay(F.size());
    std::vector<double> phase(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
      decay[i] = P.beta * dot(F[i], P.r);
      phase[i] = dot(F[i], tn);
    }
    Complex product = 1.0;
    for (std::size_t i = 0; i < F.size(); ++i) product *= damped_defect_factor(decay[i], phase[i]);

    Complex expansion = 0.0;
    const std::size_t subsets = std::size_t{1} << F.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      double a = 0.0;
      double t = 0.0;
      int size = 0;
      for (std::size_t i = 0; i < F.size(); ++i) {
        if (mask & (std::size_t{1} << i)) {
          a += decay[i];
          t += centred_frac(phase[i]);
          ++size;
        }
      }
      const Complex term = std::exp(-a) * character(t);
      expansion += (size % 2 == 0) ? term : -term;
    }
    if (std::abs(product - expansion) > 1e-14) {
      std::ostringstream os;
      os << "product and inclusion-exclusion disagree by " << std::abs(product - expansion);
      raise(Errc::InternalConsistency, os.str());
    }
    return product;
  };

  std::ostringstream desc;
  desc << "prod_{p in F}(id - e^{-beta p.r} R) with F = {";
  for (std::size_t i = 0; i < F.size(); ++i) desc << (i ? "," : "") << vec_str(F[i]);
  desc << "}";
  DefectMeasure out{nu, mult, desc.str(), TorusMeasure::multiplied(nu, mult, "defect_finite")};
  return out;
}

Complex defect_multiplier(const BlockParams& P, const RealVector& s, const MomentIndex& n) {
  const RealVector tn = apply_theta(P.theta, n);
  Complex prod = 1.0;
  for (int j = 0; j < P.k(); ++j) prod *= damped_defect_factor(P.beta * s(j) * P.r(j), s(j) * tn(j));
  return prod;
}

DefectMeasure defect_measure_cts(const TorusMeasure& nu, const RealVector& s, const BlockParams& P) {
  std::vector<int> all(static_cast<std::size_t>(P.k()));
  for (int j = 0; j < P.k(); ++j) all[static_cast<std::size_t>(j)] = j;
  return defect_measure_partial(nu, s, all, P);
}

DefectMeasure defect_measure_partial(const TorusMeasure& nu, const RealVector& s, const std::vector<int>& factors,
                                     const BlockParams& P) {
  P.validate();
  if (s.size() != P.k()) raise(Errc::InvalidArgument, "s must have k entries");
  if ((s.array() < 0.0).any()) raise(Errc::NegativeS, "s must be componentwise >= 0, got " + vec_str(s));
  for (int j : factors) {
    if (j < 0 || j >= P.k()) raise(Errc::InvalidArgument, "factor index out of range");
  }
  MomentMultiplier mult = [P, s, factors](const MomentIndex& n) -> Complex {
    const RealVector tn = apply_theta(P.theta, n);
    Complex prod = 1.0;
    for (int j : factors) prod *= damped_defect_factor(P.beta * s(j) * P.r(j), s(j) * tn(j));
    return prod;
  };
  std::string desc = "prod_j(id - e^{-beta s_j r_j} R_{s_j theta_j}) at s = " + vec_str(s);
  return DefectMeasure{nu, mult, desc, TorusMeasure::multiplied(nu, mult, "defect_cts")};
}

LimitSequence numeric_limit_mu(const TorusMeasure& nu, const BlockParams& P, const MomentIndex& n,
                               const std::vector<double>& schedule) {
  P.validate();
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
      raise(Errc::InvalidArgument, "schedule must be positive and strictly decreasing");
    }
  }
  LimitSequence out;
  out.schedule = schedule;
  const Complex base = nu.moment(n);
  out.exact = mu_multiplier(P, n) * base;
  out.mass_bound = c_constant(P) * nu.mass();
  for (double s : schedule) {
    const RealVector sv = RealVector::Constant(P.k(), s);
    const Complex v = defect_multiplier(P, sv, n) / std::pow(s, P.k()) * base;
    out.values.push_back(v);
  }
  if (is_zero(n)) {
    const double slack = 1e-12 * std::max(1.0, out.mass_bound);
    for (const auto& v : out.values) {
      if (std::abs(v.imag()) > slack || v.real() < -slack || v.real() > out.mass_bound + slack) {
        out.bound_respected = false;
      }
    }
  }
  return out;
}

double empirical_order(const LimitSequence& seq) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < seq.values.size(); ++i) {
    const double err = std::abs(seq.values[i] - seq.exact);
    if (err <= 0.0) continue;
    xs.push_back(std::log(seq.schedule[i]));
    ys.push_back(std::log(err));
  }
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

double subinvariance_s_max(const BlockParams& P) { return 5.0 / (P.beta * P.r.minCoeff()); }

std::vector<RealVector> sample_s(const BlockParams& P, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double smax = subinvariance_s_max(P);
  std::vector<RealVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    RealVector s(P.k());
    for (int j = 0; j < P.k(); ++j) s(j) = smax * unit(rng);
    out.push_back(s);
  }
  return out;
}

std::vector<RealVector> subinvariance_lattice(const Scenario& s, int m, int l_max, int p_max) {
  std::vector<RealVector> out;
  const int k = s.dims.k;
  const int top = std::min(l_max, s.depth() - m);
  for (int l = 1; l <= top; ++l) {
    const IntVector Dc = composite_D(s, m, l);
    IntVector p(static_cast<std::size_t>(k), 0);
    while (true) {
      RealVector v(k);
      for (int j = 0; j < k; ++j) {
        v(j) = static_cast<double>(p[static_cast<std::size_t>(j)]) / static_cast<double>(Dc[static_cast<std::size_t>(j)]);
      }
      out.push_back(v);
      int axis = k - 1;
      while (axis >= 0 && p[static_cast<std::size_t>(axis)] == p_max) {
        p[static_cast<std::size_t>(axis)] = 0;
        --axis;
      }
      if (axis < 0) break;
      ++p[static_cast<std::size_t>(axis)];
    }
  }
  return out;
}

bool SubinvarianceReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict.positive(); });
}

SubinvarianceReport check_subinvariance(const TorusMeasure& nu, const BlockParams& P,
                                        const SubinvarianceOptions& options) {
  SubinvarianceReport report;
  report.checks.push_back({"nu", RealVector(), positivity_test(nu, options.positivity)});
  auto points = sample_s(P, options.samples, options.seed);
  points.insert(points.end(), options.extra_points.begin(), options.extra_points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto defect = defect_measure_cts(nu, points[i], P);
    report.checks.push_back({"defect " + vec_str(points[i]), points[i], positivity_test(defect.measure, options.positivity)});
  }
  return report;
}

}  // namespace kms
