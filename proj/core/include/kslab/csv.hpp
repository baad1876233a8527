#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kslab {

/// CSV writer with fixed 17-significant-digit formatting, so identical runs
/// produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns)
      : os_(path, std::ios::trunc) {
    if (!os_) throw std::runtime_error("csv: cannot open " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
      os_ << (i == 0 ? "" : ",") << columns[i];
    os_ << "\n";
  }

  void row(std::span<const double> values) {
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", values[i]);
      os_ << (i == 0 ? "" : ",") << buf;
    }
    os_ << "\n";
  }

 private:
  std::ofstream os_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace kslab
