#include "io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "kms/errors.hpp"

namespace kmscli {

using kms::Errc;
using kms::raise;

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) raise(Errc::ParseError, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    raise(Errc::ParseError, std::string("field \"") + key + "\": " + e.what());
  }
}

kms::RealMatrix real_matrix(const Json& j, const char* what) {
  try {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) raise(Errc::ParseError, std::string(what) + " is empty");
    kms::RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) raise(Errc::ParseError, std::string(what) + " is ragged");
      for (std::size_t c = 0; c < rows[i].size(); ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
    return m;
  } catch (const Json::exception& e) {
    raise(Errc::ParseError, std::string(what) + ": " + e.what());
  }
}

kms::IntMatrix int_matrix(const Json& j, const char* what) {
  try {
    const auto rows = j.get<std::vector<std::vector<std::int64_t>>>();
    if (rows.empty()) raise(Errc::ParseError, std::string(what) + " is empty");
    kms::IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) raise(Errc::ParseError, std::string(what) + " is ragged");
      for (std::size_t c = 0; c < rows[i].size(); ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
    return m;
  } catch (const Json::exception& e) {
    raise(Errc::ParseError, std::string(what) + ": " + e.what());
  }
}

kms::RealVector real_vector(const Json& j, const char* what) {
  try {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const kms::RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  } catch (const Json::exception& e) {
    raise(Errc::ParseError, std::string(what) + ": " + e.what());
  }
}

kms::IntVector int_vector(const Json& j, const char* what) {
  try {
    return j.get<kms::IntVector>();
  } catch (const Json::exception& e) {
    raise(Errc::ParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::FileNotFound, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    raise(Errc::ParseError, path + ": " + e.what());
  }
}

kms::Scenario scenario_from_json(const Json& j, int depth_override) {
  if (!j.is_object()) raise(Errc::ParseError, "scenario must be a JSON object");
  const kms::Dimensions dims{field<int>(j, "d"), field<int>(j, "k")};
  const double beta = field<double>(j, "beta");
  const std::string mode = j.value("mode", std::string("derive"));

  if (mode == "derive") {
    const kms::RealMatrix theta1 = real_matrix(field<Json>(j, "theta1"), "theta1");
    const kms::RealVector r1 = real_vector(field<Json>(j, "r1"), "r1");
    std::vector<kms::IntVector> Ds;
    for (const auto& d : field<Json>(j, "D")) Ds.push_back(int_vector(d, "D"));
    std::vector<kms::IntMatrix> Es;
    for (const auto& e : field<Json>(j, "E")) Es.push_back(int_matrix(e, "E"));
    const int depth = depth_override > 0 ? depth_override : j.value("depth", static_cast<int>(Ds.size()) + 1);
    return kms::derive_scenario(dims, beta, theta1, r1, Ds, Es, depth);
  }
  if (mode == "explicit") {
    kms::Scenario s;
    s.dims = dims;
    s.beta = beta;
    for (const auto& lv : field<Json>(j, "levels")) {
      kms::LevelData L;
      L.theta = real_matrix(field<Json>(lv, "theta"), "theta");
      L.r = real_vector(field<Json>(lv, "r"), "r");
      if (lv.contains("D")) L.D = int_vector(lv.at("D"), "D");
      if (lv.contains("E")) L.E = int_matrix(lv.at("E"), "E");
      s.levels.push_back(std::move(L));
    }
    if (depth_override > 0 && depth_override < s.depth()) s.levels.resize(static_cast<std::size_t>(depth_override));
    return s;
  }
  raise(Errc::ParseError, "unknown scenario mode \"" + mode + "\"");
}

kms::Scenario load_scenario(const std::string& path, int depth_override) {
  return scenario_from_json(read_json(path), depth_override);
}

kms::TorusMeasure measure_from_json(const Json& j, int dim) {
  if (!j.is_object() || !j.contains("atoms")) raise(Errc::ParseError, "measure needs an \"atoms\" array");
  std::vector<kms::Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    const kms::RealVector x = real_vector(field<Json>(a, "x"), "x");
    if (x.size() != dim) raise(Errc::ParseError, "atom has the wrong dimension");
    const Json& w = field<Json>(a, "w");
    kms::Complex weight;
    if (w.is_array()) {
      const auto parts = w.get<std::vector<double>>();
      if (parts.size() != 2) raise(Errc::ParseError, "complex weight must be [re, im]");
      weight = {parts[0], parts[1]};
    } else if (w.is_number()) {
      weight = w.get<double>();
    } else {
      raise(Errc::ParseError, "atom weight must be a number or [re, im]");
    }
    atoms.push_back(kms::Atom{kms::TorusPoint(x), weight});
  }
  return kms::TorusMeasure::atomic(dim, std::move(atoms));
}

kms::TorusMeasure load_moment_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) raise(Errc::FileNotFound, "cannot open " + path);
  std::vector<std::pair<kms::MomentIndex, kms::Complex>> rows;
  int radius = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != dim + 2) {
      // A header line is allowed before the first data row.
      if (rows.empty() && lineno == 1) continue;
      raise(Errc::ParseError, path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim + 2) + " columns");
    }
    try {
      kms::MomentIndex n(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) {
        n[static_cast<std::size_t>(i)] = std::stoll(cells[static_cast<std::size_t>(i)]);
        radius = std::max(radius, static_cast<int>(std::llabs(n[static_cast<std::size_t>(i)])));
      }
      rows.emplace_back(n, kms::Complex(std::stod(cells[static_cast<std::size_t>(dim)]),
                                        std::stod(cells[static_cast<std::size_t>(dim + 1)])));
    } catch (const std::logic_error&) {
      if (rows.empty() && lineno == 1) continue;
      raise(Errc::ParseError, path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  const std::size_t side = static_cast<std::size_t>(2 * radius + 1);
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= side;
  std::vector<kms::Complex> table(total);
  std::vector<bool> seen(total, false);
  for (const auto& [n, v] : rows) {
    const auto off = kms::box_offset(n, radius);
    table[*off] = v;
    seen[*off] = true;
  }
  for (bool b : seen) {
    if (!b) raise(Errc::ParseError, path + ": moment table does not cover the full box");
  }
  try {
    return kms::TorusMeasure::fourier_table(dim, radius, std::move(table));
  } catch (const kms::Error& e) {
    raise(Errc::ParseError, path + ": " + e.what());
  }
}

kms::TorusMeasure load_measure(const std::string& path, int dim) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return measure_from_json(read_json(path), dim);
  }
  return load_moment_csv(path, dim);
}

kms::ThreadGenerator thread_from_json(const Json& j, int dim) {
  if (!j.is_object()) raise(Errc::ParseError, "thread must be a JSON object");
  const std::string kind = field<std::string>(j, "kind");
  if (kind == "uniform") return kms::UniformThread{};
  if (kind == "point") {
    kms::PointThread t;
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) t.points.push_back(real_vector(p, "points"));
    } else {
      t.points.push_back(real_vector(field<Json>(j, "y1"), "y1"));
    }
    for (const auto& p : t.points) {
      if (p.size() != dim) raise(Errc::ParseError, "thread point has the wrong dimension");
    }
    return t;
  }
  if (kind == "toplevel") return kms::TopLevelThread{measure_from_json(field<Json>(j, "toplevel_measure"), dim)};
  raise(Errc::ParseError, "unknown thread kind \"" + kind + "\"");
}

kms::SolenoidMeasureThread load_thread(const std::string& path, const kms::Scenario& s) {
  if (path.empty()) return kms::build_thread(kms::UniformThread{}, s);
  return kms::build_thread(thread_from_json(read_json(path), s.dims.d), s);
}

}  // namespace kmscli
