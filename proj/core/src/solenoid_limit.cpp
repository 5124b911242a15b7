#include "kms/solenoid_limit.hpp"

#include <cmath>
#include <set>

#include "kms/errors.hpp"

namespace kms {

namespace {

const LevelData& link_at(const Scenario& s, int m) {
  if (m < 1 || m >= s.depth()) {
    raise(Errc::TopLevel, "level " + std::to_string(m) + " has no successor (depth " + std::to_string(s.depth()) + ")");
  }
  const LevelData& L = s.level(m);
  if (!L.has_link()) raise(Errc::TopLevel, "level " + std::to_string(m) + " has no D/E matrices");
  return L;
}

IntVector scale_diag(const IntVector& D, const IntVector& p) {
  IntVector out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) out[j] = D[j] * p[j];
  return out;
}

}  // namespace

LevelConstants level_constants(const Scenario& s, int m) {
  LevelConstants out;
  out.c = c_constant(BlockParams::at_level(s, m));
  const LevelData& L = s.level(m);
  out.d = 1;
  for (auto dj : L.D) out.d *= dj;
  return out;
}

Word embed_word(const Word& w, const Scenario& s) {
  const LevelData& L = link_at(s, w.level);
  return Word{scale_diag(L.D, w.p), multiply(L.E, w.n), scale_diag(L.D, w.q), w.level + 1};
}

AlgebraElement embed_element(const AlgebraElement& a, const Scenario& s) {
  link_at(s, a.level());
  AlgebraElement out(a.level() + 1);
  for (const auto& [w, c] : a.terms()) out.add(embed_word(w, s), c);
  return out;
}

SolenoidMeasureThread::SolenoidMeasureThread(Scenario scenario, std::vector<TorusMeasure> levels)
    : scenario_(std::move(scenario)), levels_(std::move(levels)) {
  if (static_cast<int>(levels_.size()) != scenario_.depth()) {
    raise(Errc::InvalidThread, "thread needs one measure per scenario level");
  }
  for (const auto& mu : levels_) {
    if (mu.empty() || mu.dim() != scenario_.dims.d) raise(Errc::InvalidThread, "level measure has wrong dimension");
  }
}

const TorusMeasure& SolenoidMeasureThread::level(int m) const {
  if (m < 1 || m > depth()) raise(Errc::InvalidThread, "level " + std::to_string(m) + " outside the thread");
  return levels_[static_cast<std::size_t>(m - 1)];
}

std::vector<RealVector> preimages(const RealVector& y, const IntMatrix& E) {
  const Eigen::Index d = E.rows();
  const std::int64_t det = determinant(E);
  if (det == 0) raise(Errc::SingularMatrix, "E is singular");
  // x = (E^T)^{-1}(y + j) for j ranging over coset representatives of Z^d / E^T Z^d;
  // j in {0..|det|-1}^d covers all of them.
  const RealMatrix inv = adjugate(IntMatrix(E.transpose())).cast<double>() / static_cast<double>(det);
  const std::int64_t side = std::llabs(det);
  std::vector<RealVector> out;
  std::set<std::vector<long long>> seen;
  IntVector j(static_cast<std::size_t>(d), 0);
  while (true) {
    RealVector shifted = y;
    for (Eigen::Index i = 0; i < d; ++i) shifted(i) += static_cast<double>(j[static_cast<std::size_t>(i)]);
    RealVector x = reduce_mod1(inv * shifted);
    std::vector<long long> key(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
      long long q = std::llround(x(i) * 1e9);
      if (q == 1000000000LL) q = 0;
      key[static_cast<std::size_t>(i)] = q;
    }
    if (seen.insert(key).second) out.push_back(x);
    int axis = static_cast<int>(d) - 1;
    while (axis >= 0 && j[static_cast<std::size_t>(axis)] == side - 1) {
      j[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++j[static_cast<std::size_t>(axis)];
  }
  return out;
}

namespace {

double torus_distance(const RealVector& a, const RealVector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double diff = a(i) - b(i);
    worst = std::max(worst, std::abs(diff - std::nearbyint(diff)));
  }
  return worst;
}

}  // namespace

SolenoidMeasureThread build_thread(const ThreadGenerator& generator, const Scenario& s) {
  const int M = s.depth();
  const int d = s.dims.d;
  std::vector<TorusMeasure> levels;

  if (std::holds_alternative<UniformThread>(generator)) {
    for (int m = 1; m <= M; ++m) levels.push_back(TorusMeasure::uniform(d));
  } else if (const auto* top = std::get_if<TopLevelThread>(&generator)) {
    if (top->top.empty() || top->top.dim() != d) raise(Errc::InvalidThread, "top-level measure has wrong dimension");
    if (std::abs(top->top.mass() - 1.0) > 1e-12) raise(Errc::InvalidThread, "top-level measure must have mass 1");
    levels.assign(static_cast<std::size_t>(M), top->top);
    for (int m = M - 1; m >= 1; --m) {
      const LevelData& L = link_at(s, m);
      levels[static_cast<std::size_t>(m - 1)] = pushforward_dual(levels[static_cast<std::size_t>(m)], L.E);
    }
  } else {
    const auto& pts = std::get<PointThread>(generator).points;
    if (pts.empty()) raise(Errc::InvalidThread, "point thread needs at least y_1");
    if (static_cast<int>(pts.size()) > M) raise(Errc::InvalidThread, "more points than scenario levels");
    std::vector<RealVector> ys;
    for (const auto& p : pts) {
      if (p.size() != d) raise(Errc::InvalidThread, "point has wrong dimension");
      ys.push_back(reduce_mod1(p));
    }
    for (std::size_t m = 1; m < ys.size(); ++m) {
      const LevelData& L = link_at(s, static_cast<int>(m));
      const RealVector image = L.E.transpose().cast<double>() * ys[m];
      const double err = torus_distance(image, ys[m - 1]);
      if (err > 1e-10) {
        raise(Errc::IncompatibleThread, "E_" + std::to_string(m) + "^T y_" + std::to_string(m + 1) +
                                            " differs from y_" + std::to_string(m) + " by " + std::to_string(err));
      }
    }
    while (static_cast<int>(ys.size()) < M) {
      const int m = static_cast<int>(ys.size());
      const LevelData& L = link_at(s, m);
      const std::int64_t det = determinant(L.E);
      const RealMatrix inv = adjugate(IntMatrix(L.E.transpose())).cast<double>() / static_cast<double>(det);
      ys.push_back(reduce_mod1(inv * ys.back()));
    }
    for (const auto& y : ys) levels.push_back(TorusMeasure::point_mass(TorusPoint(y)));
  }
  return SolenoidMeasureThread(s, std::move(levels));
}

ThreadCheck check_thread(const SolenoidMeasureThread& thread, int box, bool check_positivity) {
  ThreadCheck out;
  const Scenario& s = thread.scenario();
  const auto indices = box_indices(s.dims.d, box);
  for (int m = 1; m <= thread.depth(); ++m) {
    const TorusMeasure& mu = thread.level(m);
    out.max_mass_error = std::max(out.max_mass_error, std::abs(mu.moment(MomentIndex(indices.front().size(), 0)) - 1.0));
    if (check_positivity && !positivity_test(mu).positive()) out.nonnegative = false;
    if (m == thread.depth()) continue;
    const LevelData& L = link_at(s, m);
    const TorusMeasure& next = thread.level(m + 1);
    for (const auto& n : indices) {
      const double err = std::abs(mu.moment(n) - next.moment(multiply(L.E, n)));
      out.max_compatibility_error = std::max(out.max_compatibility_error, err);
    }
  }
  return out;
}

TorusMeasure sigma_map(const TorusMeasure& nu_next, const Scenario& s, int m) {
  const LevelData& L = link_at(s, m);
  const LevelConstants lc = level_constants(s, m);
  return scale(pushforward_dual(nu_next, L.E), 1.0 / static_cast<double>(lc.d));
}

TorusMeasure level_state_measure(const SolenoidMeasureThread& thread, int m) {
  const BlockParams P = BlockParams::at_level(thread.scenario(), m);
  return scale(nu_from_mu(thread.level(m), P, InputCheck::Unchecked), c_constant(P));
}

Complex psi_eval(const SolenoidMeasureThread& thread, const Word& w) {
  const Scenario& s = thread.scenario();
  if (w.level < 1 || w.level > thread.depth()) raise(Errc::InvalidThread, "word level outside the thread");
  if (static_cast<int>(w.p.size()) != s.dims.k || static_cast<int>(w.q.size()) != s.dims.k ||
      static_cast<int>(w.n.size()) != s.dims.d) {
    raise(Errc::InvalidArgument, "word dimensions do not match the scenario");
  }
  if (w.p != w.q) return 0.0;
  const LevelData& L = s.level(w.level);
  const RealVector tn = apply_theta(L.theta, w.n);
  Complex factor = std::exp(-s.beta * dot(w.p, L.r));
  for (int j = 0; j < s.dims.k; ++j) {
    const double br = s.beta * L.r(j);
    factor *= br / Complex(br, -kTwoPi * tn(j));
  }
  return factor * thread.level(w.level).moment(w.n);
}

Complex psi_eval(const SolenoidMeasureThread& thread, const AlgebraElement& a) {
  Complex sum = 0.0;
  for (const auto& [w, c] : a.terms()) sum += c * psi_eval(thread, w);
  return sum;
}

double consistency_residual(const SolenoidMeasureThread& thread, const Word& w) {
  return std::abs(psi_eval(thread, embed_word(w, thread.scenario())) - psi_eval(thread, w));
}

}  // namespace kms
