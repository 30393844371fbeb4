#pragma once
// Row-stochastic trust matrices. Entry (i,j) is the weight agent i places on
// agent j's action, so influence travels along the directed edge j -> i and
// the successors of u are the agents that listen to u (column u's support).

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "herdlab/errors.hpp"

namespace herdlab {

// Absolute row-sum tolerance. Inputs are never renormalized: a row that is
// off by more than this is a config error, not something to paper over.
inline constexpr double kRowSumTol = 1e-12;

class WeightMatrix {
 public:
  WeightMatrix() = default;  // empty; usable instances come from the factory below

  int size() const { return n_; }
  bool empty() const { return n_ == 0; }

  double operator()(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_ + j]; }

  // row-major storage, preserved bit-exactly from the validated input
  const std::vector<double>& entries() const { return w_; }

  // agents influenced by u: heads of edges u -> v
  std::vector<int> successors(int u) const {
    std::vector<int> out;
    for (int v = 0; v < n_; ++v)
      if ((*this)(v, u) > 0.0) out.push_back(v);
    return out;
  }

  static WeightMatrix identity(int n) {
    WeightMatrix w;
    w.n_ = n;
    w.w_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) w.w_[static_cast<std::size_t>(i) * n + i] = 1.0;
    return w;
  }

  friend WeightMatrix validate_weight_matrix(const std::vector<std::vector<double>>& raw);

 private:
  int n_ = 0;
  std::vector<double> w_;
};

// Sole path to a usable WeightMatrix: rejects non-square input, negative (or
// NaN) entries, and rows whose sum strays from 1 by more than kRowSumTol.
inline WeightMatrix validate_weight_matrix(const std::vector<std::vector<double>>& raw) {
  const std::size_t n = raw.size();
  if (n == 0) throw NonSquare("weight matrix must have at least one row");
  WeightMatrix w;
  w.n_ = static_cast<int>(n);
  w.w_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i].size() != n)
      throw NonSquare("row " + std::to_string(i) + " has " + std::to_string(raw[i].size()) +
                      " entries, expected " + std::to_string(n));
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = raw[i][j];
      if (!(v >= 0.0))  // also catches NaN
        throw NegativeEntry(static_cast<int>(i), static_cast<int>(j), v);
      sum += v;
      w.w_.push_back(v);
    }
    if (std::fabs(sum - 1.0) > kRowSumTol) throw RowSumViolation(static_cast<int>(i), sum);
  }
  return w;
}

namespace detail {

// Strips a '#' comment and returns whitespace-separated tokens.
inline std::vector<std::string> tokenize_data_line(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < body.size()) {
    while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < body.size() && !std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    if (pos > start) tokens.push_back(body.substr(start, pos - start));
  }
  return tokens;
}

inline double parse_double_token(const std::string& tok, const std::string& file, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size()) throw ParseError(file, line, "not a number: '" + tok + "'");
  return v;
}

}  // namespace detail

// Plain-text format: first line is n, then n lines of n whitespace-separated
// numbers. '#' starts a comment anywhere; blank lines are skipped.
inline WeightMatrix load_weight_matrix(std::istream& in, const std::string& name = "<stream>") {
  int n = -1;
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::tokenize_data_line(line);
    if (tokens.empty()) continue;
    if (n < 0) {
      if (tokens.size() != 1)
        throw ParseError(name, line_no, "expected the agent count alone on the first data line");
      const double v = detail::parse_double_token(tokens[0], name, line_no);
      n = static_cast<int>(v);
      if (n < 1 || static_cast<double>(n) != v)
        throw ParseError(name, line_no, "agent count must be a positive integer");
      continue;
    }
    if (static_cast<int>(rows.size()) == n)
      throw ParseError(name, line_no, "extra data after " + std::to_string(n) + " matrix rows");
    if (static_cast<int>(tokens.size()) != n)
      throw ParseError(name, line_no,
                       "expected " + std::to_string(n) + " entries, got " +
                           std::to_string(tokens.size()));
    std::vector<double> row;
    row.reserve(n);
    for (const auto& tok : tokens) row.push_back(detail::parse_double_token(tok, name, line_no));
    rows.push_back(std::move(row));
  }
  if (n < 0) throw ParseError(name, line_no, "no data found");
  if (static_cast<int>(rows.size()) != n)
    throw ParseError(name, line_no,
                     "expected " + std::to_string(n) + " matrix rows, got " +
                         std::to_string(rows.size()));
  return validate_weight_matrix(rows);
}

inline WeightMatrix load_weight_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return load_weight_matrix(in, path);
}

// Writes the same format with 17 significant digits (round-trip exact).
inline void save_weight_matrix(std::ostream& out, const WeightMatrix& w) {
  out << w.size() << "\n";
  char buf[64];
  for (int i = 0; i < w.size(); ++i) {
    for (int j = 0; j < w.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", w(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace herdlab
