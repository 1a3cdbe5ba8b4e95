#include "ntf/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ntf {

void RunTrace::validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0) {
      if (records[i].iter <= records[i - 1].iter)
        throw std::logic_error("trace iterations must strictly increase");
      if (records[i].time_s < records[i - 1].time_s)
        throw std::logic_error("trace time must not decrease");
    }
  }
}

int RunTrace::restart_count() const {
  int n = 0;
  for (const auto& rec : records)
    if (rec.restarted && *rec.restarted) ++n;
  return n;
}

double RunTrace::final_f() const {
  if (records.empty()) throw std::logic_error("empty trace");
  return records.back().f;
}

namespace {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunTrace::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "iter,time_s,f,e,restarted,beta\n";
  for (const auto& rec : records) {
    out << rec.iter << ',' << format_g17(rec.time_s) << ',' << format_g17(rec.f) << ',';
    if (rec.e) out << format_g17(*rec.e);
    out << ',';
    if (rec.restarted) out << (*rec.restarted ? 1 : 0);
    out << ',';
    if (rec.beta) out << format_g17(*rec.beta);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunTrace RunTrace::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "iter,time_s,f,e,restarted,beta")
    throw std::runtime_error(path + ": unexpected CSV header");
  RunTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(6);
    TraceRecord rec;
    rec.iter = std::stoi(cells[0]);
    rec.time_s = std::stod(cells[1]);
    rec.f = std::stod(cells[2]);
    if (!cells[3].empty()) rec.e = std::stod(cells[3]);
    if (!cells[4].empty()) rec.restarted = cells[4] != "0";
    if (!cells[5].empty()) rec.beta = std::stod(cells[5]);
    trace.records.push_back(rec);
  }
  return trace;
}

}  // namespace ntf
