#pragma once

#include <map>
#include <string>

#include "spme/format.hpp"

namespace spme {

// Uniform record for one verified inequality. `margin` is oriented so that
// the inequality is satisfied when margin >= -tolerance; `warning` marks
// results obtained outside the regime where the bound is guaranteed.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool holds = false;
  bool warning = false;
  std::map<std::string, std::string> metadata;

  void finalize() { holds = margin >= -tolerance; }

  void set_meta(const std::string& key, double value) { metadata[key] = format_double(value); }
  void set_meta(const std::string& key, const std::string& value) { metadata[key] = value; }

  // One-line record: name, parameters, lhs, rhs, margin, holds.
  std::string line() const {
    std::string out = name;
    for (const auto& [k, v] : metadata) out += " " + k + "=" + v;
    out += " lhs=" + format_double(lhs);
    out += " rhs=" + format_double(rhs);
    out += " margin=" + format_double(margin);
    out += " tol=" + format_double(tolerance);
    out += std::string(" holds=") + (holds ? "1" : "0");
    if (warning) out += " warning=1";
    return out;
  }
};

}  // namespace spme
