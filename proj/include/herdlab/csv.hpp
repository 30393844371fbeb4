#pragma once
// CSV emission and parsing. Every emitted file starts with '#'-prefixed
// metadata lines (key=value), then a header row, then data rows. Doubles are
// printed with 17 significant digits so re-parsing reproduces the exact bits.

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "herdlab/dynamics.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/version.hpp"

namespace herdlab {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

using MetaLines = std::vector<std::pair<std::string, std::string>>;

inline void write_meta(std::ostream& out, const MetaLines& meta) {
  out << "# herdlab " << kVersion << "\n";
  for (const auto& [key, value] : meta) out << "# " << key << "=" << value << "\n";
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << "\n";
}

// Header `t,x1,...,xN`, one row per stored state.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                                 MetaLines meta = {}) {
  meta.emplace_back("config_digest", traj.config_digest);
  if (traj.stride > 1) meta.emplace_back("stride", std::to_string(traj.stride));
  write_meta(out, meta);
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().x.size();
  std::vector<std::string> cells;
  cells.push_back("t");
  for (std::size_t i = 1; i <= n; ++i) cells.push_back("x" + std::to_string(i));
  write_csv_row(out, cells);
  for (const auto& state : traj.states) {
    cells.clear();
    cells.push_back(std::to_string(state.t));
    for (double v : state.x) cells.push_back(format_g17(v));
    write_csv_row(out, cells);
  }
}

// Header `t,a1,...,aN`, one row per recorded action vector.
inline void write_actions_csv(std::ostream& out, const Trajectory& traj, MetaLines meta = {}) {
  meta.emplace_back("config_digest", traj.config_digest);
  write_meta(out, meta);
  const std::size_t n = traj.actions.empty() ? 0 : traj.actions.front().a.size();
  std::vector<std::string> cells;
  cells.push_back("t");
  for (std::size_t i = 1; i <= n; ++i) cells.push_back("a" + std::to_string(i));
  write_csv_row(out, cells);
  for (const auto& av : traj.actions) {
    cells.clear();
    cells.push_back(std::to_string(av.t));
    for (auto bit : av.a) cells.push_back(bit ? "1" : "0");
    write_csv_row(out, cells);
  }
}

struct CsvDocument {
  MetaLines meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  const std::string* find_meta(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return &v;
    return nullptr;
  }
};

inline CsvDocument parse_csv(std::istream& in, const std::string& name = "<stream>") {
  CsvDocument doc;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = line.find_first_not_of("# ");
      if (start == std::string::npos) continue;
      const std::string body = line.substr(start);
      const std::size_t eq = body.find('=');
      if (eq != std::string::npos)
        doc.meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!header_seen) {
      doc.header = std::move(cells);
      header_seen = true;
    } else {
      if (cells.size() != doc.header.size())
        throw ParseError(name, line_no, "row has " + std::to_string(cells.size()) +
                                            " cells, header has " +
                                            std::to_string(doc.header.size()));
      doc.rows.push_back(std::move(cells));
    }
  }
  if (!header_seen) throw ParseError(name, line_no, "no header row found");
  return doc;
}

// Inverse of write_trajectory_csv, exact to the bit for the states.
inline Trajectory read_trajectory_csv(std::istream& in, const std::string& name = "<stream>") {
  const CsvDocument doc = parse_csv(in, name);
  if (doc.header.empty() || doc.header[0] != "t")
    throw ParseError(name, 0, "expected header starting with 't'");
  Trajectory traj;
  if (const auto* digest = doc.find_meta("config_digest")) traj.config_digest = *digest;
  if (const auto* stride = doc.find_meta("stride")) traj.stride = std::stoll(*stride);
  for (const auto& row : doc.rows) {
    OpinionState state;
    state.t = std::stoll(row[0]);
    state.x.reserve(row.size() - 1);
    for (std::size_t i = 1; i < row.size(); ++i)
      state.x.push_back(detail::parse_double_token(row[i], name, 0));
    traj.states.push_back(std::move(state));
  }
  return traj;
}

}  // namespace herdlab
