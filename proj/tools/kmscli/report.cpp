#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace kmscli {

namespace {

// Fixed formatting keeps reports byte-identical across runs.
std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

void write_text(std::ostream& os, const Report& r) {
  os << r.command;
  if (!r.title.empty()) os << " " << r.title;
  os << "\n";
  for (const auto& m : r.messages) os << m << "\n";
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << c.check_id << "  " << c.quantity << " = ";
    if (c.value.imag() == 0.0) {
      os << short_num(c.value.real());
    } else {
      os << short_num(c.value.real()) << (c.value.imag() < 0 ? " - " : " + ") << short_num(std::abs(c.value.imag()))
         << "i";
    }
    os << "  residual " << short_num(c.residual) << " (bound " << short_num(c.bound) << ")";
    if (!c.note.empty()) os << "  [" << c.note << "]";
    os << "\n";
  }
  if (!r.checks.empty()) os << r.checks.size() << " checks, " << r.failures() << " failed\n";
}

void write_json(std::ostream& os, const Report& r) {
  nlohmann::json j;
  j["command"] = r.command;
  j["title"] = r.title;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json row;
    row["check_id"] = c.check_id;
    row["level"] = c.level;
    row["quantity"] = c.quantity;
    row["value"] = {json_number(c.value.real()), json_number(c.value.imag())};
    row["reference"] = {json_number(c.reference.real()), json_number(c.reference.imag())};
    row["residual"] = json_number(c.residual);
    row["bound"] = json_number(c.bound);
    row["pass"] = c.pass;
    if (!c.note.empty()) row["note"] = c.note;
    j["checks"].push_back(std::move(row));
  }
  j["messages"] = r.messages;
  j["failed"] = r.failures();
  j["passed"] = r.passed();
  os << j.dump(2) << "\n";
}

void write_csv(std::ostream& os, const Report& r) {
  os << kCsvHeader << "\n";
  for (const auto& c : r.checks) {
    os << csv_field(c.check_id) << ',' << c.level << ',' << csv_field(c.quantity) << ',' << num(c.value.real()) << ','
       << num(c.value.imag()) << ',' << num(c.reference.real()) << ',' << num(c.reference.imag()) << ','
       << num(c.residual) << ',' << num(c.bound) << ',' << (c.pass ? "true" : "false") << ',' << csv_field(c.note) << "\n";
  }
}

}  // namespace

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
}

void write_report(std::ostream& os, const Report& report, Format format) {
  switch (format) {
    case Format::Text:
      write_text(os, report);
      break;
    case Format::Json:
      write_json(os, report);
      break;
    case Format::Csv:
      write_csv(os, report);
      break;
  }
}

}  // namespace kmscli
