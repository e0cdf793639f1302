#pragma once

#include <string>
#include <vector>

#include "drpid/engine.hpp"
#include "drpid/metrics.hpp"

namespace drpid {

// All floating values are serialized with 17 significant digits so that
// re-reading a trace reproduces the doubles bit for bit.
std::string fmt_g17(double v);

void write_trace_csv(const std::string& path, const SimTrace& trace);
void write_events_csv(const std::string& path, const SimTrace& trace);
void write_report_csv(const std::string& path, const IndexReport& report);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace drpid
