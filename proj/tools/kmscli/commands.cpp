#include "commands.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "kms/errors.hpp"
#include "kms/oracle.hpp"
#include "kms/subinvariance.hpp"
#include "kms/toeplitz_algebra.hpp"

namespace kmscli {

namespace {

using kms::Complex;

std::string scenario_title(const kms::Scenario& s) {
  std::ostringstream os;
  os << "d=" << s.dims.d << " k=" << s.dims.k << " beta=" << s.beta << " depth=" << s.depth();
  return os.str();
}

std::vector<CheckResult> violation_rows(const kms::ValidationReport& violations) {
  std::vector<CheckResult> rows;
  for (const auto& v : violations) {
    CheckResult c = make_bound_check("validate/" + v.invariant + "/L" + std::to_string(v.level), v.level, v.invariant,
                                     1.0, 0.0);
    c.pass = false;
    c.note = v.detail;
    rows.push_back(std::move(c));
  }
  return rows;
}

// Loads and validates the scenario; violations end up as failed rows in `report`.
std::optional<kms::Scenario> valid_scenario(const RunConfig& config, Report& report) {
  if (config.scenario_path.empty()) kms::raise(kms::Errc::ParseError, "--scenario is required");
  kms::Scenario s = load_scenario(config.scenario_path, config.levels);
  const auto violations = kms::validate_scenario(s);
  if (!violations.empty()) {
    report.checks = violation_rows(violations);
    return std::nullopt;
  }
  return s;
}

std::vector<CheckResult> measure_rows(const std::string& prefix, const kms::TorusMeasure& result, int dim, int box) {
  std::vector<CheckResult> rows;
  for (const auto& n : kms::box_indices(dim, box)) {
    std::ostringstream id;
    id << prefix << "/n=(";
    for (std::size_t i = 0; i < n.size(); ++i) id << (i ? "," : "") << n[i];
    id << ")";
    CheckResult c = make_bound_check(id.str(), 0, "moment", 0.0, 0.0);
    c.value = result.moment(n);
    rows.push_back(std::move(c));
  }
  return rows;
}

}  // namespace

Report cmd_validate(const RunConfig& config) {
  Report report{"validate", "", {}, {}};
  if (config.scenario_path.empty()) kms::raise(kms::Errc::ParseError, "--scenario is required");
  kms::Scenario s;
  try {
    s = load_scenario(config.scenario_path, config.levels);
  } catch (const kms::Error& e) {
    if (e.code() == kms::Errc::ParseError || e.code() == kms::Errc::FileNotFound) throw;
    CheckResult c = make_bound_check("validate/derivation", 0, std::string(kms::to_string(e.code())), 1.0, 0.0);
    c.pass = false;
    c.note = e.what();
    report.checks.push_back(c);
    return report;
  }
  report.title = scenario_title(s);
  const auto violations = kms::validate_scenario(s);
  report.checks = violation_rows(violations);
  if (violations.empty()) report.checks.push_back(make_bound_check("validate/scenario", 0, "violations", 0.0, 0.0));
  if (!violations.empty() || config.thread_path.empty()) return report;

  try {
    const auto thread = load_thread(config.thread_path, s);
    const auto tc = kms::check_thread(thread, config.moment_box);
    report.checks.push_back(make_bound_check("validate/thread/compatibility", 0, "max |mu_m(n) - mu_{m+1}(E n)|",
                                             tc.max_compatibility_error, config.tol.identity));
    report.checks.push_back(
        make_bound_check("validate/thread/mass", 0, "max |mass - 1|", tc.max_mass_error, config.tol.identity));
    CheckResult pos = make_bound_check("validate/thread/positivity", 0, "level measures nonnegative",
                                       tc.nonnegative ? 0.0 : 1.0, 0.0);
    report.checks.push_back(pos);
  } catch (const kms::Error& e) {
    if (e.code() == kms::Errc::ParseError || e.code() == kms::Errc::FileNotFound) throw;
    CheckResult c = make_bound_check("validate/thread/build", 0, std::string(kms::to_string(e.code())), 1.0, 0.0);
    c.pass = false;
    c.note = e.what();
    report.checks.push_back(c);
  }
  return report;
}

Report cmd_state(const RunConfig& config) {
  Report report{"state", config.word, {}, {}};
  const kms::Word w = kms::parse_word(config.word);
  const auto s = valid_scenario(config, report);
  if (!s) return report;
  const auto thread = load_thread(config.thread_path, *s);
  if (w.level < 1 || w.level > s->depth()) {
    kms::raise(kms::Errc::WordParseError, "word level " + std::to_string(w.level) + " outside 1.." +
                                              std::to_string(s->depth()));
  }
  const kms::BlockParams P = kms::BlockParams::at_level(*s, w.level);
  const Complex psi = kms::psi_eval(thread, w);
  const Complex engine =
      kms::state_eval(kms::level_state_measure(thread, w.level), P, kms::AlgebraElement(w));
  report.checks.push_back(make_check("state/closed_form", w.level, "psi", psi, engine, config.tol.identity));
  if (config.oracle) {
    Complex quad = 0.0;
    if (w.p == w.q) {
      quad = std::exp(-s->beta * kms::dot(w.p, P.r)) * kms::c_constant(P) *
             kms::oracle::laplace_quadrature(thread.level(w.level), P, w.n);
    }
    report.checks.push_back(make_check("state/oracle", w.level, "psi", psi, quad, config.tol.oracle));
  }
  return report;
}

Report cmd_transform(const RunConfig& config) {
  Report report{"transform", config.transform, {}, {}};
  const auto s = valid_scenario(config, report);
  if (!s) return report;
  const int m = config.level;
  if (m < 1 || m > s->depth()) kms::raise(kms::Errc::InvalidArgument, "--level outside the scenario");
  const kms::BlockParams P = kms::BlockParams::at_level(*s, m);
  kms::TorusMeasure input;
  if (config.measure_path.empty()) {
    input = load_thread(config.thread_path, *s).level(m);
  } else {
    input = load_measure(config.measure_path, s->dims.d);
  }
  kms::TorusMeasure result;
  const std::string& kind = config.transform;
  if (kind == "nu") {
    result = kms::nu_from_mu(input, P);
  } else if (kind == "mu") {
    result = kms::mu_from_nu(input, P);
  } else if (kind == "kappa") {
    result = kms::kappa_from_nu(input, P);
  } else if (kind == "nu_kappa") {
    result = kms::nu_from_kappa(input, P);
  } else {
    kms::raise(kms::Errc::InvalidArgument, "unknown transform \"" + kind + "\" (nu, mu, kappa, nu_kappa)");
  }
  report.title = kind + " at level " + std::to_string(m);
  // A moment table only knows its own box.
  const int box = std::min(config.moment_box, result.moment_radius().value_or(config.moment_box));
  report.checks = measure_rows("transform/" + kind, result, s->dims.d, box);
  for (auto& c : report.checks) c.level = m;
  if (config.oracle && kind == "nu") {
    for (auto& c : report.checks) {
      const std::string inside = c.check_id.substr(c.check_id.find("n=(") + 3);
      kms::MomentIndex n;
      std::stringstream ss(inside.substr(0, inside.size() - 1));
      std::string part;
      while (std::getline(ss, part, ',')) n.push_back(std::stoll(part));
      c.reference = kms::oracle::laplace_quadrature(input, P, n);
      c.residual = std::abs(c.value - c.reference);
      c.bound = config.tol.oracle;
      c.pass = c.residual <= c.bound;
    }
  }
  return report;
}

Report cmd_suite(const RunConfig& config) {
  Report report{"suite", config.suite, {}, {}};
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), config.suite) == names.end()) {
    kms::raise(kms::Errc::UnknownSuite, "unknown suite \"" + config.suite + "\"");
  }
  const auto s = valid_scenario(config, report);
  if (!s) return report;
  const auto thread = load_thread(config.thread_path, *s);
  report.messages.push_back("scenario: " + scenario_title(*s));
  report.checks = run_suite(config.suite, Context{*s, thread, config});
  return report;
}

Report cmd_report(const RunConfig& config) {
  Report report{"report", "", {}, {}};
  const auto s = valid_scenario(config, report);
  if (!s) return report;
  const auto thread = load_thread(config.thread_path, *s);
  report.title = scenario_title(*s);
  const Context ctx{*s, thread, config};
  report.checks = run_suite("all", ctx);
  auto table = moment_table(ctx);
  report.checks.insert(report.checks.end(), table.begin(), table.end());
  return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verify KMS states of Toeplitz noncommutative tori and solenoids"};
  RunConfig config;
  std::string arg;
  std::string format = "text";
  app.add_option("command", config.command, "validate | state | transform | suite | report")
      ->required()
      ->check(CLI::IsMember({"validate", "state", "transform", "suite", "report"}));
  app.add_option("argument", arg, "word literal (state) or suite name (suite)");
  app.add_option("--scenario", config.scenario_path, "scenario JSON file");
  app.add_option("--thread", config.thread_path, "thread JSON file (default: uniform)");
  app.add_option("--measure", config.measure_path, "transform input: atomic JSON or moment CSV");
  app.add_option("--transform", config.transform, "nu | mu | kappa | nu_kappa");
  app.add_option("--level", config.level, "scenario level for transform");
  app.add_option("--tol", config.tol.engine, "engine residual tolerance");
  app.add_option("--samples", config.samples, "random words per level");
  app.add_option("--s-samples", config.s_samples, "subinvariance samples per level");
  app.add_option("--seed", config.seed, "random seed");
  app.add_flag("--oracle", config.oracle, "also compare against the quadrature and Fock oracles");
  app.add_flag("--corrupt-nu", config.corrupt, "negate the mass of nu in the subinv suite (negative control)");
  app.add_option("--format", format, "text | json | csv")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--moment-box", config.moment_box, "moment box radius")->check(CLI::Range(0, 12));
  app.add_option("--levels", config.levels, "override the scenario depth")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  config.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text;
  if (config.command == "state") config.word = arg;
  if (config.command == "suite" && !arg.empty()) config.suite = arg;

  try {
    Report report;
    if (config.command == "validate") {
      report = cmd_validate(config);
    } else if (config.command == "state") {
      if (config.word.empty()) kms::raise(kms::Errc::WordParseError, "state needs a word literal");
      report = cmd_state(config);
    } else if (config.command == "transform") {
      report = cmd_transform(config);
    } else if (config.command == "suite") {
      report = cmd_suite(config);
    } else {
      report = cmd_report(config);
    }
    write_report(out, report, config.format);
    return report.passed() ? kExitOk : kExitViolation;
  } catch (const kms::Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == kms::Errc::NegativeInput ? kExitViolation : kExitInputError;
  }
}

}  // namespace kmscli
