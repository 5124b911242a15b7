#pragma once

#include <cstdint>
#include <string>

namespace kmscli {

enum class Format { Text, Json, Csv };

struct Tolerances {
  double identity = 1e-12;   ///< closed-form identities
  double engine = 1e-10;     ///< algebra-engine residuals
  double oracle = 1e-6;      ///< comparisons against quadrature and Fock sums
  double positivity = 1e-8;  ///< positivity_test threshold
};

struct RunConfig {
  std::string command;
  std::string scenario_path;
  std::string thread_path;   ///< empty: uniform thread
  std::string measure_path;  ///< transform input; empty: the thread's level measure
  std::string word;
  std::string suite = "all";
  std::string transform = "nu";
  Tolerances tol;
  int samples = 100;    ///< word pairs per level
  int s_samples = 50;   ///< subinvariance samples per level
  std::uint64_t seed = 1;
  bool oracle = false;
  bool corrupt = false;  ///< negate the mass of nu in the subinv suite
  Format format = Format::Text;
  int moment_box = 5;
  int levels = 0;  ///< 0: depth from the scenario file
  int level = 1;
};

}  // namespace kmscli
