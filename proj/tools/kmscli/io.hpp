#pragma once

#include <string>

#include <json.hpp>

#include "kms/scenario.hpp"
#include "kms/solenoid_limit.hpp"
#include "kms/torus_measure.hpp"

namespace kmscli {

using Json = nlohmann::json;

/// Reads and parses a JSON file (FileNotFound, ParseError).
Json read_json(const std::string& path);

/// Scenario object:
///   {"d":1,"k":1,"beta":1.0,"mode":"derive","theta1":[[1.0]],"r1":[1.0],
///    "D":[[2],...],"E":[[[2]],...],"depth":4}
/// or "mode":"explicit" with "levels":[{"theta":..,"r":..,"D":..,"E":..},...].
/// A positive `depth_override` replaces the depth (derive) or truncates the levels (explicit).
kms::Scenario scenario_from_json(const Json& j, int depth_override = 0);
kms::Scenario load_scenario(const std::string& path, int depth_override = 0);

/// {"atoms":[{"x":[..],"w":..},...]}; "w" may also be [re, im].
kms::TorusMeasure measure_from_json(const Json& j, int dim);

/// Moment table rows "n_1,..,n_d,Re,Im" over a full box |n_i| <= radius.
kms::TorusMeasure load_moment_csv(const std::string& path, int dim);

/// Atomic JSON (.json) or moment CSV (anything else).
kms::TorusMeasure load_measure(const std::string& path, int dim);

/// {"kind":"uniform"|"point"|"toplevel","y1":[..],"points":[[..],..],"toplevel_measure":{..}}
kms::ThreadGenerator thread_from_json(const Json& j, int dim);
kms::SolenoidMeasureThread load_thread(const std::string& path, const kms::Scenario& s);

}  // namespace kmscli
