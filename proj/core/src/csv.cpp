#include "drpid/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drpid {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const SimTrace& trace) {
  auto out = open_out(path);
  out << "axis,tick,time_s,reference_m,output_m,u_raw_cau,u_applied_cau\n";
  for (std::size_t axis = 0; axis < trace.axes.size(); ++axis) {
    const TickSeries& t = trace.axes[axis].ticks;
    for (std::size_t i = 0; i < t.time.size(); ++i) {
      out << axis << ',' << i << ',' << fmt_g17(t.time[i]) << ',' << fmt_g17(t.reference[i])
          << ',' << fmt_g17(t.output[i]) << ',' << fmt_g17(t.u_raw[i]) << ','
          << fmt_g17(t.u_applied[i]) << '\n';
    }
  }
}

void write_events_csv(const std::string& path, const SimTrace& trace) {
  auto out = open_out(path);
  out << "axis,k,time_s,tau_rt_s,tau_lr_s,tau_rl_s,delivered_lr,delivered_rl,forced_lr,"
         "forced_rl,arrival_tick,pattern,remote_sent,remote_estimated,u_pi_used,kpd_used,"
         "td_used,pkt_seq,pkt_estimated,pkt_current";
  for (int i = 0; i < trace.m_horizon; ++i) out << ",pkt_future_" << i;
  out << '\n';
  for (std::size_t axis = 0; axis < trace.axes.size(); ++axis) {
    for (const PeriodEvent& ev : trace.axes[axis].periods) {
      out << axis << ',' << ev.k << ',' << fmt_g17(ev.time) << ',' << fmt_g17(ev.tau_rt) << ','
          << fmt_g17(ev.tau_lr) << ',' << fmt_g17(ev.tau_rl) << ',' << ev.delivered_lr << ','
          << ev.delivered_rl << ',' << ev.forced_lr << ',' << ev.forced_rl << ','
          << ev.arrival_tick << ',' << to_string(ev.pattern) << ',' << ev.remote_sent << ','
          << ev.remote_estimated << ',' << fmt_g17(ev.u_pi_used) << ',' << fmt_g17(ev.kpd_used)
          << ',' << fmt_g17(ev.td_used) << ',' << ev.packet.seq << ',' << ev.packet.estimated
          << ',' << fmt_g17(ev.packet.u_pi_current);
      for (int i = 0; i < trace.m_horizon; ++i) {
        out << ',';
        if (i < static_cast<int>(ev.packet.u_pi_future.size())) {
          out << fmt_g17(ev.packet.u_pi_future[static_cast<std::size_t>(i)]);
        }
      }
      out << '\n';
    }
  }
}

void write_report_csv(const std::string& path, const IndexReport& report) {
  auto out = open_out(path);
  out << "output,E,J1_pct,O,J2_pct\n";
  for (const IndexRow& row : report.rows) {
    out << row.name << ',' << fmt_g17(row.e) << ',' << fmt_g17(row.j1) << ',' << fmt_g17(row.o)
        << ',' << fmt_g17(row.j2) << '\n';
  }
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace drpid
