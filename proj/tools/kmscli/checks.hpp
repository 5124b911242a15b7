#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "kms/linalg.hpp"
#include "kms/scenario.hpp"
#include "kms/solenoid_limit.hpp"

namespace kmscli {

struct CheckResult {
  std::string check_id;
  int level = 0;
  std::string quantity;
  kms::Complex value;
  kms::Complex reference;  ///< NaN when there is nothing to compare against
  double residual = 0.0;
  double bound = 0.0;
  bool pass = true;
  std::string note;
};

CheckResult make_check(std::string id, int level, std::string quantity, kms::Complex value, kms::Complex reference,
                       double bound);
CheckResult make_bound_check(std::string id, int level, std::string quantity, double residual, double bound);

struct Context {
  const kms::Scenario& scenario;
  const kms::SolenoidMeasureThread& thread;
  const RunConfig& config;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs the named suite (kms, subinv, roundtrip, consistency, reconcile or all).
/// Checks run in parallel; the result is sorted by check_id. Throws UnknownSuite.
std::vector<CheckResult> run_suite(const std::string& name, const Context& ctx);

/// psi(U_{m,n}) against the algebra-engine state over the moment box, all levels.
std::vector<CheckResult> moment_table(const Context& ctx);

}  // namespace kmscli
