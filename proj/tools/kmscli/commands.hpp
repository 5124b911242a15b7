#pragma once

#include <ostream>

#include "config.hpp"
#include "report.hpp"

namespace kmscli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

/// Scenario invariants and, with a thread file, thread compatibility.
Report cmd_validate(const RunConfig& config);
/// psi of the word literal in config.word; --oracle adds the quadrature value.
Report cmd_state(const RunConfig& config);
/// Moments of nu_mu, mu_nu, kappa(nu) or nu_kappa applied to the level measure or --measure.
Report cmd_transform(const RunConfig& config);
Report cmd_suite(const RunConfig& config);
/// Every suite plus the per-level psi moment table.
Report cmd_report(const RunConfig& config);

/// Parses the command line and runs; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kmscli
