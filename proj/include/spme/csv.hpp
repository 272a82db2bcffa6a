#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "spme/format.hpp"

namespace spme {

// Minimal CSV emitter; all doubles go through the shortest round-trip
// formatter so output bytes are schedule- and platform-run independent.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  static std::string cell(double x) { return format_double(x); }
  static std::string cell(std::uint64_t x) { return format_u64(x); }
  static std::string cell(const std::string& s) { return s; }

 private:
  std::ofstream out_;
};

}  // namespace spme
