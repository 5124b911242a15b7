#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "config.hpp"

namespace kmscli {

struct Report {
  std::string command;
  std::string title;  ///< e.g. the suite name or the word literal
  std::vector<CheckResult> checks;
  std::vector<std::string> messages;  ///< free-form lines (text format only)

  bool passed() const;
  std::size_t failures() const;
};

/// Column order of the CSV format.
inline constexpr const char* kCsvHeader =
    "check_id,level,quantity,value_re,value_im,reference_re,reference_im,residual,bound,pass,note";

void write_report(std::ostream& os, const Report& report, Format format);

}  // namespace kmscli
