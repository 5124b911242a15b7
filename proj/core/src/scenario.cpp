#include "kms/scenario.hpp"

#include <cmath>
#include <sstream>

#include "kms/errors.hpp"

namespace kms {

const LevelData& Scenario::level(int m) const {
  if (m < 1 || m > depth()) {
    raise(Errc::InvalidArgument, "level " + std::to_string(m) + " outside 1.." + std::to_string(depth()));
  }
  return levels[static_cast<std::size_t>(m - 1)];
}

LevelData derive_next_level(const LevelData& current, const IntVector& next_D, const IntMatrix& next_E) {
  const Eigen::Index k = current.theta.rows();
  const Eigen::Index d = current.theta.cols();
  if (static_cast<Eigen::Index>(next_D.size()) != k || next_E.rows() != d || next_E.cols() != d) {
    raise(Errc::InvalidArgument, "D/E dimensions do not match theta");
  }
  for (auto dj : next_D) {
    if (dj < 2) raise(Errc::InvalidArgument, "diagonal entries of D must be >= 2");
  }
  const std::int64_t det = determinant(next_E);
  if (det == 0) raise(Errc::SingularE, "E is not invertible");
  if (det < 2) raise(Errc::InvalidArgument, "det E must be >= 2");

  // theta E^{-1} = (theta adj(E)) / det(E); the adjugate keeps the inverse exact
  // up to one final division.
  const RealMatrix adj = adjugate(next_E).cast<double>();
  RealMatrix next_theta = current.theta * adj / static_cast<double>(det);
  for (Eigen::Index j = 0; j < k; ++j) next_theta.row(j) /= static_cast<double>(next_D[j]);

  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      double& v = next_theta(j, i);
      if (v < -kClampTolerance) {
        std::ostringstream os;
        os << "derived theta(" << j << "," << i << ") = " << v << " is negative";
        raise(Errc::NonNonnegativeTheta, os.str());
      }
      if (v < 0.0) v = 0.0;
    }
  }

  LevelData next;
  next.theta = next_theta;
  next.r = current.r;
  for (Eigen::Index j = 0; j < k; ++j) next.r(j) /= static_cast<double>(next_D[j]);
  return next;
}

Scenario derive_scenario(Dimensions dims, double beta, const RealMatrix& theta1, const RealVector& r1,
                         const std::vector<IntVector>& Ds, const std::vector<IntMatrix>& Es, int depth) {
  if (depth < 1) raise(Errc::InvalidArgument, "depth must be >= 1");
  if (static_cast<int>(Ds.size()) < depth - 1 || static_cast<int>(Es.size()) < depth - 1) {
    raise(Errc::InvalidArgument, "need at least depth-1 D and E matrices");
  }
  Scenario s;
  s.dims = dims;
  s.beta = beta;
  LevelData first;
  first.theta = theta1;
  first.r = r1;
  s.levels.push_back(first);
  for (int m = 1; m <= depth; ++m) {
    const auto idx = static_cast<std::size_t>(m - 1);
    LevelData& cur = s.levels.back();
    if (idx < Ds.size() && idx < Es.size()) {
      cur.D = Ds[idx];
      cur.E = Es[idx];
    }
    if (m < depth) s.levels.push_back(derive_next_level(cur, Ds[idx], Es[idx]));
  }
  return s;
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport out;
  const int d = s.dims.d;
  const int k = s.dims.k;
  if (d < 1 || k < 1) out.push_back({"dimensions", 0, "d and k must be >= 1"});
  if (!(s.beta > 0.0) || !std::isfinite(s.beta)) out.push_back({"beta", 0, "beta must be > 0"});
  if (s.levels.empty()) out.push_back({"depth", 0, "scenario has no levels"});
  if (!out.empty() && (d < 1 || k < 1)) return out;

  for (int m = 1; m <= s.depth(); ++m) {
    const LevelData& L = s.level(m);
    if (L.theta.rows() != k || L.theta.cols() != d) {
      out.push_back({"theta_shape", m, "theta must be k x d"});
      continue;
    }
    if (L.r.size() != k) {
      out.push_back({"r_shape", m, "r must have k entries"});
      continue;
    }
    if ((L.theta.array() < 0.0).any() || !L.theta.allFinite()) {
      out.push_back({"theta_nonnegative", m, "theta entries must be finite and >= 0"});
    }
    if (!(L.r.array() > 0.0).all() || !L.r.allFinite()) {
      out.push_back({"r_positive", m, "r entries must be > 0"});
    }
    const bool needs_link = m < s.depth();
    if (!L.has_link()) {
      if (needs_link) out.push_back({"link_missing", m, "D_m and E_m required below the top level"});
      continue;
    }
    if (static_cast<int>(L.D.size()) != k || L.E.rows() != d || L.E.cols() != d) {
      out.push_back({"link_shape", m, "D must have k entries and E must be d x d"});
      continue;
    }
    for (int j = 0; j < k; ++j) {
      if (L.D[static_cast<std::size_t>(j)] < 2) {
        out.push_back({"D_entries", m, "diagonal entry " + std::to_string(j) + " of D is " +
                                           std::to_string(L.D[static_cast<std::size_t>(j)]) + " (< 2)"});
      }
    }
    const std::int64_t det = determinant(L.E);
    if (det < 2) out.push_back({"E_det", m, "det E = " + std::to_string(det) + " (< 2)"});

    if (!needs_link) continue;
    const LevelData& N = s.level(m + 1);
    if (N.theta.rows() != k || N.theta.cols() != d || N.r.size() != k) continue;

    // D_m theta_{m+1} E_m = theta_m, exactly (no reduction mod Z).
    RealMatrix lhs = N.theta * L.E.cast<double>();
    for (int j = 0; j < k; ++j) lhs.row(j) *= static_cast<double>(L.D[static_cast<std::size_t>(j)]);
    const double theta_err = (lhs - L.theta).cwiseAbs().maxCoeff();
    if (!(theta_err <= kRelationTolerance)) {
      out.push_back({"relatetheta", m, "max |D_m theta_{m+1} E_m - theta_m| = " + fmt_double(theta_err)});
    }
    double r_err = 0.0;
    for (int j = 0; j < k; ++j) {
      r_err = std::max(r_err, std::abs(static_cast<double>(L.D[static_cast<std::size_t>(j)]) * N.r(j) - L.r(j)));
    }
    if (!(r_err <= kRelationTolerance)) {
      out.push_back({"relater", m, "max |D_m r^{m+1} - r^m| = " + fmt_double(r_err)});
    }
  }
  return out;
}

Scenario example_scenario(std::int64_t N, double theta1, double r1, double beta, int depth) {
  RealMatrix th(1, 1);
  th(0, 0) = theta1;
  RealVector r(1);
  r(0) = r1;
  std::vector<IntVector> Ds(static_cast<std::size_t>(depth), IntVector{N});
  std::vector<IntMatrix> Es(static_cast<std::size_t>(depth), IntMatrix::Constant(1, 1, N));
  return derive_scenario({1, 1}, beta, th, r, Ds, Es, depth);
}

IntVector composite_D(const Scenario& s, int m, int l) {
  IntVector out(static_cast<std::size_t>(s.dims.k), 1);
  for (int i = 0; i < l; ++i) {
    const LevelData& L = s.level(m + i);
    if (!L.has_link()) raise(Errc::TopLevel, "no D matrix above level " + std::to_string(m + i));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= L.D[j];
  }
  return out;
}

}  // namespace kms
