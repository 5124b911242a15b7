#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "kms/errors.hpp"
#include "kms/oracle.hpp"
#include "kms/sampling.hpp"
#include "kms/subinvariance.hpp"
#include "kms/toeplitz_algebra.hpp"

namespace kmscli {

namespace {

using kms::Complex;
using Task = std::function<std::vector<CheckResult>()>;

const Complex kNoReference(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());

std::string level_id(const std::string& suite, int m, const std::string& what) {
  return suite + "/L" + std::to_string(m) + "/" + what;
}

std::string index_str(const kms::IntVector& n) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
  os << ')';
  return os.str();
}

// Each task gets its own generator so results do not depend on scheduling.
std::mt19937_64 task_rng(std::uint64_t seed, const std::string& key) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

double max_moment_gap(const kms::TorusMeasure& a, const kms::TorusMeasure& b, int dim, int box) {
  double worst = 0.0;
  for (const auto& n : kms::box_indices(dim, box)) worst = std::max(worst, std::abs(a.moment(n) - b.moment(n)));
  return worst;
}

// ---------------------------------------------------------------- kms

std::vector<CheckResult> kms_level(const Context& ctx, int m) {
  const auto& cfg = ctx.config;
  const kms::BlockParams P = kms::BlockParams::at_level(ctx.scenario, m);
  const kms::TorusMeasure nu = kms::level_state_measure(ctx.thread, m);
  auto rng = task_rng(cfg.seed, level_id("kms", m, ""));
  const kms::Dimensions dims = ctx.scenario.dims;

  std::vector<CheckResult> out;
  const kms::AlgebraElement one(kms::Word::identity(dims, m));
  out.push_back(make_check(level_id("kms", m, "unit"), m, "psi(1)", kms::psi_eval(ctx.thread, one), 1.0,
                           cfg.tol.identity));

  double worst = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const kms::AlgebraElement a(kms::random_word(rng, dims, m));
    const kms::AlgebraElement b(kms::random_word(rng, dims, m));
    worst = std::max(worst, kms::kms_residual(nu, P, a, b));
  }
  out.push_back(make_bound_check(level_id("kms", m, "residual"), m, "max |phi(ab) - phi(b alpha_ib(a))|", worst,
                                 cfg.tol.engine));

  double lowest = std::numeric_limits<double>::infinity();
  double imag = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const kms::AlgebraElement a = kms::random_element(rng, dims, 3, m);
    const Complex v = kms::state_eval(nu, P, kms::multiply(kms::adjoint(a), a, P.theta));
    lowest = std::min(lowest, v.real());
    imag = std::max(imag, std::abs(v.imag()));
  }
  auto pos = make_bound_check(level_id("kms", m, "positivity"), m, "min Re psi(a*a)", std::max(0.0, -lowest),
                              cfg.tol.engine);
  pos.value = lowest;
  pos.pass = pos.pass && imag <= cfg.tol.engine * 100.0;
  out.push_back(pos);

  if (cfg.oracle) {
    const kms::TorusMeasure kappa = kms::kappa_from_nu(nu, P);
    const auto T = kms::oracle::FockTruncation::for_tolerance(P);
    double gap = 0.0;
    double bound = 0.0;
    bool ok = true;
    for (int i = 0; i < cfg.samples; ++i) {
      const kms::AlgebraElement a(kms::random_word(rng, dims, m));
      const double g = std::abs(kms::state_eval(nu, P, a) - kms::oracle::fock_state_eval(kappa, P, a, T));
      const double b = kms::oracle::fock_error_bound(kappa, P, a, T) + cfg.tol.identity;
      ok = ok && g <= b;
      gap = std::max(gap, g);
      bound = std::max(bound, b);
    }
    auto fock = make_bound_check(level_id("kms", m, "fock"), m, "max |state_eval - fock_state_eval|", gap, bound);
    fock.pass = ok;
    fock.note = "truncation box " + std::to_string(T.box);
    out.push_back(fock);
  }
  return out;
}

// ---------------------------------------------------------------- subinv

std::vector<CheckResult> subinv_level(const Context& ctx, int m) {
  const auto& cfg = ctx.config;
  const kms::BlockParams P = kms::BlockParams::at_level(ctx.scenario, m);
  kms::TorusMeasure nu = kms::level_state_measure(ctx.thread, m);
  if (cfg.corrupt) {
    nu = kms::TorusMeasure::multiplied(
        nu, [](const kms::MomentIndex& n) { return kms::is_zero(n) ? Complex(-1.0) : Complex(1.0); }, "corrupted");
  }

  std::vector<CheckResult> out;
  const kms::TorusMeasure plain = kms::nu_from_mu(ctx.thread.level(m), P, kms::InputCheck::Unchecked);
  out.push_back(make_check(level_id("subinv", m, "mass"), m, "||nu_mu||", plain.mass(),
                           ctx.thread.level(m).mass() / kms::c_constant(P), cfg.tol.identity));

  kms::SubinvarianceOptions opts;
  opts.samples = cfg.s_samples;
  opts.seed = cfg.seed + static_cast<std::uint64_t>(m);
  opts.positivity.box = cfg.moment_box;
  opts.positivity.tol = cfg.tol.positivity;
  opts.extra_points = kms::subinvariance_lattice(ctx.scenario, m, ctx.scenario.depth() - m, 2);
  const auto report = kms::check_subinvariance(nu, P, opts);
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const auto& c = report.checks[i];
    const auto& v = c.verdict;
    std::ostringstream id;
    if (i == 0) {
      id << "nu";
    } else {
      id << "defect" << std::string(4 - std::min<std::size_t>(4, std::to_string(i).size()), '0') << i;
    }
    const double lowest = std::min(v.min_density, v.min_eigenvalue);
    auto row = make_bound_check(level_id("subinv", m, id.str()), m, "lowest certificate " + c.label,
                                std::max(0.0, -lowest), cfg.tol.positivity);
    row.value = lowest;
    row.pass = v.positive();
    if (v.witness) {
      std::ostringstream note;
      if (v.witness->check == kms::PositivityCheck::FejerGrid) {
        note << "witness: Fejer density " << v.witness->value << " at x = (";
        for (Eigen::Index j = 0; j < v.witness->point.size(); ++j) note << (j ? "," : "") << v.witness->point(j);
        note << ")";
      } else {
        note << "witness: moment-matrix eigenvalue " << v.witness->value;
      }
      row.note = note.str();
    } else if (v.kind == kms::PositivityVerdict::Kind::Inconclusive) {
      row.note = "inconclusive";
    }
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------- roundtrip

std::vector<CheckResult> roundtrip_level(const Context& ctx, int m) {
  const auto& cfg = ctx.config;
  const int d = ctx.scenario.dims.d;
  const kms::BlockParams P = kms::BlockParams::at_level(ctx.scenario, m);
  const kms::TorusMeasure& mu = ctx.thread.level(m);
  const kms::TorusMeasure nu = kms::nu_from_mu(mu, P, kms::InputCheck::Unchecked);
  const kms::TorusMeasure mu_back = kms::mu_from_nu(nu, P, kms::InputCheck::Unchecked);
  const kms::TorusMeasure nu_back = kms::nu_from_mu(mu_back, P, kms::InputCheck::Unchecked);
  const kms::TorusMeasure nu_kappa = kms::nu_from_kappa(kms::kappa_from_nu(nu, P), P);
  const int box = cfg.moment_box;

  std::vector<CheckResult> out;
  out.push_back(make_bound_check(level_id("roundtrip", m, "mu_nu_mu"), m, "max |mu_{nu_mu} - mu|",
                                 max_moment_gap(mu_back, mu, d, box), cfg.tol.engine));
  out.push_back(make_bound_check(level_id("roundtrip", m, "nu_mu_nu"), m, "max |nu_{mu_nu} - nu|",
                                 max_moment_gap(nu_back, nu, d, box), cfg.tol.engine));
  out.push_back(make_bound_check(level_id("roundtrip", m, "nu_kappa_nu"), m, "max |nu_{kappa(nu)} - nu|",
                                 max_moment_gap(nu_kappa, nu, d, box), cfg.tol.engine));
  out.push_back(make_check(level_id("roundtrip", m, "mass_nu"), m, "||nu_mu||", nu.mass(),
                           mu.mass() / kms::c_constant(P), cfg.tol.identity));
  out.push_back(make_check(level_id("roundtrip", m, "mass_mu"), m, "||mu_nu||", mu_back.mass(),
                           nu.mass() * kms::c_constant(P), cfg.tol.identity));

  // Limit of scaled defects: use n = e_1 unless that moment vanishes.
  kms::MomentIndex n(static_cast<std::size_t>(d), 0);
  n[0] = 1;
  if (std::abs(nu.moment(n)) < 1e-12) n[0] = 0;
  const std::vector<double> schedule{1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
  const auto seq = kms::numeric_limit_mu(nu, P, n, schedule);
  const double order = kms::empirical_order(seq);
  CheckResult lim;
  lim.check_id = level_id("roundtrip", m, "limit_order");
  lim.level = m;
  lim.quantity = "empirical order at n = " + index_str(n);
  lim.value = std::isfinite(order) ? order : 0.0;
  lim.reference = kNoReference;
  lim.residual = std::max(0.0, 0.9 - order);
  lim.bound = 0.0;
  lim.pass = order >= 0.9 && seq.bound_respected;
  if (!std::isfinite(order)) lim.note = "sequence exact at every step";
  out.push_back(lim);

  if (cfg.oracle) {
    double gap = 0.0;
    for (const auto& idx : kms::box_indices(d, std::min(3, box))) {
      gap = std::max(gap, std::abs(nu.moment(idx) - kms::oracle::laplace_quadrature(mu, P, idx)));
    }
    out.push_back(make_bound_check(level_id("roundtrip", m, "quadrature"), m, "max |nu_mu - quadrature|", gap,
                                   cfg.tol.oracle));
  }
  return out;
}

// ---------------------------------------------------------------- consistency

std::vector<CheckResult> consistency_level(const Context& ctx, int m) {
  const auto& cfg = ctx.config;
  const auto& s = ctx.scenario;
  const int d = s.dims.d;
  const kms::LevelData& L = s.level(m);
  const kms::LevelData& Ln = s.level(m + 1);
  const kms::BlockParams P = kms::BlockParams::at_level(s, m);
  const kms::BlockParams Pn = kms::BlockParams::at_level(s, m + 1);
  auto rng = task_rng(cfg.seed, level_id("consistency", m, ""));
  std::vector<CheckResult> out;

  double worst = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    worst = std::max(worst, kms::consistency_residual(ctx.thread, kms::random_word(rng, s.dims, m)));
  }
  out.push_back(make_bound_check(level_id("consistency", m, "psi"), m, "max |psi(pi_m(w)) - psi(w)|", worst,
                                 cfg.tol.engine));

  double thread_gap = 0.0;
  for (const auto& n : kms::box_indices(d, cfg.moment_box)) {
    thread_gap = std::max(thread_gap,
                          std::abs(ctx.thread.level(m).moment(n) - ctx.thread.level(m + 1).moment(kms::multiply(L.E, n))));
  }
  out.push_back(make_bound_check(level_id("consistency", m, "thread"), m, "max |mu_m(n) - mu_{m+1}(E n)|", thread_gap,
                                 cfg.tol.identity));

  const auto lc = kms::level_constants(s, m);
  const auto lcn = kms::level_constants(s, m + 1);
  out.push_back(make_check(level_id("consistency", m, "constants"), m, "d_m c_{m+1}",
                           static_cast<double>(lc.d) * lcn.c, lc.c, cfg.tol.identity * std::max(1.0, lc.c)));

  const kms::TorusMeasure sigma =
      kms::sigma_map(kms::nu_from_mu(ctx.thread.level(m + 1), Pn, kms::InputCheck::Unchecked), s, m);
  const kms::TorusMeasure nu_m = kms::nu_from_mu(ctx.thread.level(m), P, kms::InputCheck::Unchecked);
  out.push_back(make_bound_check(level_id("consistency", m, "sigma"), m, "max |sigma_m(nu_{m+1}) - nu_m|",
                                 max_moment_gap(sigma, nu_m, d, cfg.moment_box), cfg.tol.identity));

  double tele = 0.0;
  for (const auto& n : kms::box_indices(d, cfg.moment_box)) {
    const kms::RealVector lhs_im = kms::apply_theta(Ln.theta, kms::multiply(L.E, n));
    const kms::RealVector rhs_im = kms::apply_theta(L.theta, n);
    for (int j = 0; j < s.dims.k; ++j) {
      const double dj = static_cast<double>(L.D[static_cast<std::size_t>(j)]);
      const Complex lhs(s.beta * Ln.r(j), -kms::kTwoPi * lhs_im(j));
      const Complex rhs = Complex(s.beta * L.r(j), -kms::kTwoPi * rhs_im(j)) / dj;
      tele = std::max(tele, std::abs(lhs - rhs));
    }
  }
  out.push_back(make_bound_check(level_id("consistency", m, "telescoping"), m, "max moment-factor mismatch", tele,
                                 cfg.tol.identity));

  double hom = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const auto a = kms::random_element(rng, s.dims, 2, m);
    const auto b = kms::random_element(rng, s.dims, 2, m);
    const auto lhs = kms::embed_element(kms::multiply(a, b, L.theta), s);
    const auto rhs = kms::multiply(kms::embed_element(a, s), kms::embed_element(b, s), Ln.theta);
    hom = std::max(hom, kms::max_coefficient_distance(lhs, rhs));
  }
  out.push_back(make_bound_check(level_id("consistency", m, "embed"), m, "max |pi(ab) - pi(a)pi(b)|", hom,
                                 cfg.tol.identity));
  return out;
}

// ---------------------------------------------------------------- reconcile

std::vector<CheckResult> reconcile_level(const Context& ctx, int m) {
  const auto& cfg = ctx.config;
  const auto& L = ctx.scenario.level(m);
  const double theta = L.theta(0, 0);
  const double r = L.r(0);
  const double beta = ctx.scenario.beta;
  std::vector<CheckResult> out;
  if (theta == 0.0) {
    CheckResult skip = make_bound_check(level_id("reconcile", m, "skipped"), m, "reconciliation", 0.0, 0.0);
    skip.note = "theta_m = 0";
    return {skip};
  }
  auto rng = task_rng(cfg.seed, level_id("reconcile", m, ""));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> freq(-cfg.moment_box, cfg.moment_box);
  double worst = 0.0;
  double oracle_gap = 0.0;
  const int count = std::max(20, cfg.samples / 5);
  for (int i = 0; i < count; ++i) {
    const double y = unit(rng);
    const std::int64_t n = freq(rng);
    const auto [A, B] = kms::oracle::bhs_reconciliation(y, theta, r, beta, n);
    worst = std::max(worst, std::abs(A - B));
    if (cfg.oracle) {
      kms::RealVector pt(1);
      pt << y;
      const auto mu = kms::TorusMeasure::point_mass(kms::TorusPoint(pt));
      oracle_gap = std::max(oracle_gap, std::abs(A - kms::oracle::laplace_quadrature(
                                                           mu, kms::BlockParams::at_level(ctx.scenario, m), {n})));
    }
  }
  out.push_back(make_bound_check(level_id("reconcile", m, "closed_vs_reference"), m, "max |A - B|", worst,
                                 cfg.tol.engine));
  if (cfg.oracle) {
    out.push_back(make_bound_check(level_id("reconcile", m, "quadrature"), m, "max |A - quadrature|", oracle_gap,
                                   cfg.tol.oracle));
  }
  return out;
}

void add_tasks(const std::string& name, const Context& ctx, std::vector<Task>& tasks) {
  const int M = ctx.scenario.depth();
  if (name == "kms") {
    for (int m = 1; m <= M; ++m) tasks.push_back([&ctx, m] { return kms_level(ctx, m); });
  } else if (name == "subinv") {
    for (int m = 1; m <= M; ++m) tasks.push_back([&ctx, m] { return subinv_level(ctx, m); });
  } else if (name == "roundtrip") {
    for (int m = 1; m <= M; ++m) tasks.push_back([&ctx, m] { return roundtrip_level(ctx, m); });
  } else if (name == "consistency") {
    for (int m = 1; m < M; ++m) tasks.push_back([&ctx, m] { return consistency_level(ctx, m); });
  } else if (name == "reconcile") {
    if (ctx.scenario.dims.d != 1 || ctx.scenario.dims.k != 1) {
      tasks.push_back([] {
        CheckResult skip = make_bound_check("reconcile/skipped", 0, "reconciliation", 0.0, 0.0);
        skip.note = "requires d = k = 1";
        return std::vector<CheckResult>{skip};
      });
      return;
    }
    for (int m = 1; m <= M; ++m) tasks.push_back([&ctx, m] { return reconcile_level(ctx, m); });
  } else if (name == "all") {
    for (const auto& s : suite_names()) {
      if (s != "all") add_tasks(s, ctx, tasks);
    }
  } else {
    kms::raise(kms::Errc::UnknownSuite, "unknown suite \"" + name + "\"");
  }
}

std::vector<CheckResult> run_tasks(const std::vector<Task>& tasks) {
  std::vector<std::future<std::vector<CheckResult>>> futures;
  futures.reserve(tasks.size());
  for (const auto& t : tasks) futures.push_back(std::async(std::launch::async, t));
  std::vector<CheckResult> out;
  for (auto& f : futures) {
    auto part = f.get();
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.check_id < b.check_id; });
  return out;
}

}  // namespace

CheckResult make_check(std::string id, int level, std::string quantity, Complex value, Complex reference,
                       double bound) {
  CheckResult c;
  c.check_id = std::move(id);
  c.level = level;
  c.quantity = std::move(quantity);
  c.value = value;
  c.reference = reference;
  c.residual = std::abs(value - reference);
  c.bound = bound;
  c.pass = c.residual <= bound;
  return c;
}

CheckResult make_bound_check(std::string id, int level, std::string quantity, double residual, double bound) {
  CheckResult c;
  c.check_id = std::move(id);
  c.level = level;
  c.quantity = std::move(quantity);
  c.value = residual;
  c.reference = kNoReference;
  c.residual = residual;
  c.bound = bound;
  c.pass = residual <= bound;
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kms", "subinv", "roundtrip", "consistency", "reconcile", "all"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const Context& ctx) {
  std::vector<Task> tasks;
  add_tasks(name, ctx, tasks);
  return run_tasks(tasks);
}

std::vector<CheckResult> moment_table(const Context& ctx) {
  std::vector<Task> tasks;
  for (int m = 1; m <= ctx.scenario.depth(); ++m) {
    tasks.push_back([&ctx, m] {
      const kms::BlockParams P = kms::BlockParams::at_level(ctx.scenario, m);
      const kms::TorusMeasure nu = kms::level_state_measure(ctx.thread, m);
      std::vector<CheckResult> rows;
      const kms::IntVector zero(static_cast<std::size_t>(ctx.scenario.dims.k), 0);
      for (const auto& n : kms::box_indices(ctx.scenario.dims.d, ctx.config.moment_box)) {
        const kms::Word w{zero, n, zero, m};
        rows.push_back(make_check(level_id("moments", m, "n=" + index_str(n)), m, "psi(U_n)",
                                  kms::psi_eval(ctx.thread, w), kms::state_eval(nu, P, kms::AlgebraElement(w)),
                                  ctx.config.tol.identity));
      }
      return rows;
    });
  }
  return run_tasks(tasks);
}

}  // namespace kmscli
