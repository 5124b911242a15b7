#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kms/linalg.hpp"

namespace kms {

/// Torus rank d and semigroup rank k.
struct Dimensions {
  int d = 1;
  int k = 1;
};

/// Data of one block B_m together with the connecting matrices D_m, E_m
/// that embed it into the next block. At the top level of a finite
/// scenario `D` and `E` may be empty.
struct LevelData {
  RealMatrix theta;  ///< k x d, entries >= 0
  RealVector r;      ///< k entries, all > 0
  IntVector D;       ///< diagonal of D_m, entries >= 2
  IntMatrix E;       ///< d x d, det >= 2

  bool has_link() const { return !D.empty() && E.size() > 0; }
};

struct Scenario {
  Dimensions dims;
  double beta = 1.0;
  std::vector<LevelData> levels;  ///< levels[m - 1] holds level m

  int depth() const { return static_cast<int>(levels.size()); }
  /// 1-based access.
  const LevelData& level(int m) const;
};

/// Tolerance of the exact compatibility relations between consecutive levels.
inline constexpr double kRelationTolerance = 1e-12;
/// Derived theta entries in [-kClampTolerance, 0) are rounding noise and become 0.
inline constexpr double kClampTolerance = 1e-12;

/// Level m+1 from level m and its outgoing matrices (D_m, E_m):
/// theta_{m+1} = D_m^{-1} theta_m E_m^{-1} and r^{m+1} = D_m^{-1} r^m, in real
/// arithmetic with no reduction mod Z. The returned level has no link yet.
LevelData derive_next_level(const LevelData& current, const IntVector& next_D, const IntMatrix& next_E);

/// Builds levels 1..depth from theta_1, r^1 and the matrix sequences
/// (at least depth - 1 of each). Extra trailing matrices are kept on the top level.
Scenario derive_scenario(Dimensions dims, double beta, const RealMatrix& theta1, const RealVector& r1,
                         const std::vector<IntVector>& Ds, const std::vector<IntMatrix>& Es, int depth);

struct Violation {
  std::string invariant;  ///< short machine-friendly name, e.g. "relatetheta"
  int level = 0;          ///< 1-based level, 0 for scenario-wide
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

/// Checks every scenario invariant; never throws, never mutates.
ValidationReport validate_scenario(const Scenario& s);

/// The d=k=1 scenario with D_m = E_m = N, depth M.
Scenario example_scenario(std::int64_t N = 2, double theta1 = 1.0, double r1 = 1.0, double beta = 1.0,
                          int depth = 4);

/// Product D_{m+l-1} ... D_m (diagonal), i.e. the D matrix of the l-step embedding.
IntVector composite_D(const Scenario& s, int m, int l);

}  // namespace kms
