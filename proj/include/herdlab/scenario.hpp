#pragma once
// Scenario configs: flat `key = value` lines with '#' comments. Matrices are
// either a path to a weight file (resolved relative to the scenario file) or
// inline with ';' between rows. Agent lists are 1-based in files, matching
// the way nodes are usually numbered on paper; the library is 0-based.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "herdlab/dynamics.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/time_variant.hpp"
#include "herdlab/weight_matrix.hpp"

namespace herdlab {

struct Scenario {
  std::optional<WeightMatrix> weights;
  std::optional<double> alpha;
  std::optional<std::vector<double>> x1;  // single entry broadcasts to all agents
  std::optional<long long> t_max;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta;
  std::optional<long long> window;
  std::vector<int> stubborn;  // 0-based after parsing
  std::optional<Schedule> schedule;
  std::optional<std::string> output_dir;
};

namespace detail {

inline long long parse_int_token(const std::string& tok, const std::string& file, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end != begin + tok.size())
    throw ParseError(file, line, "not an integer: '" + tok + "'");
  return v;
}

inline std::vector<double> parse_double_list(const std::string& value, const std::string& file,
                                             int line) {
  std::vector<double> out;
  for (const auto& tok : tokenize_data_line(value)) out.push_back(parse_double_token(tok, file, line));
  if (out.empty()) throw ParseError(file, line, "expected at least one number");
  return out;
}

inline WeightMatrix parse_inline_matrix(const std::string& value, const std::string& file,
                                        int line) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t semi = value.find(';', pos);
    const std::string part =
        value.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
    rows.push_back(parse_double_list(part, file, line));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  try {
    return validate_weight_matrix(rows);
  } catch (const Error& e) {
    throw ParseError(file, line, std::string("invalid inline matrix: ") + e.what());
  }
}

inline std::string dirname_of(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

}  // namespace detail

inline Scenario parse_scenario(std::istream& in, const std::string& name = "<stream>",
                               const std::string& base_dir = "") {
  Scenario sc;
  std::vector<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string body = line.substr(0, line.find('#'));
    if (detail::tokenize_data_line(body).empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError(name, line_no, "expected 'key = value'");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(name, line_no, "missing key before '='");
    if (value.empty()) throw ParseError(name, line_no, "missing value for '" + key + "'");
    for (const auto& k : seen)
      if (k == key) throw ParseError(name, line_no, "duplicate key '" + key + "'");
    seen.push_back(key);

    if (key == "weights") {
      if (value.find(';') != std::string::npos) {
        sc.weights = detail::parse_inline_matrix(value, name, line_no);
      } else {
        const std::string path =
            (!value.empty() && value[0] == '/') ? value : base_dir + value;
        try {
          sc.weights = load_weight_matrix_file(path);
        } catch (const Error& e) {
          throw ParseError(name, line_no, std::string("weights: ") + e.what());
        }
      }
    } else if (key == "alpha") {
      sc.alpha = detail::parse_double_token(value, name, line_no);
    } else if (key == "x1") {
      sc.x1 = detail::parse_double_list(value, name, line_no);
    } else if (key == "t_max") {
      sc.t_max = detail::parse_int_token(value, name, line_no);
    } else if (key == "runs") {
      const long long v = detail::parse_int_token(value, name, line_no);
      if (v < 1) throw ParseError(name, line_no, "runs must be >= 1");
      sc.runs = static_cast<std::uint64_t>(v);
    } else if (key == "seed") {
      const char* begin = value.c_str();
      char* end = nullptr;
      sc.seed = std::strtoull(begin, &end, 10);
      if (end != begin + value.size()) throw ParseError(name, line_no, "seed must be a u64");
    } else if (key == "delta") {
      sc.delta = detail::parse_double_token(value, name, line_no);
    } else if (key == "window") {
      sc.window = detail::parse_int_token(value, name, line_no);
    } else if (key == "stubborn") {
      for (const auto& tok : detail::tokenize_data_line(value)) {
        const long long agent = detail::parse_int_token(tok, name, line_no);
        if (agent < 1) throw ParseError(name, line_no, "stubborn agents are 1-based");
        sc.stubborn.push_back(static_cast<int>(agent - 1));
      }
    } else if (key == "schedule") {
      if (value == "constant")
        sc.schedule = Schedule::constant;
      else if (value == "halving")
        sc.schedule = Schedule::halving;
      else
        throw ParseError(name, line_no, "schedule must be 'constant' or 'halving'");
    } else if (key == "output_dir") {
      sc.output_dir = value;
    } else {
      throw ParseError(name, line_no, "unknown key '" + key + "'");
    }
  }
  return sc;
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_scenario(in, path, detail::dirname_of(path));
}

// Builds the engine config; requires weights, alpha and x1, fills documented
// defaults for the rest (t_max 1000, seed 0). Scalar x1 broadcasts.
inline SimulationConfig scenario_to_config(const Scenario& sc) {
  if (!sc.weights) throw InvalidArgument("scenario: missing 'weights'");
  if (!sc.alpha) throw InvalidArgument("scenario: missing 'alpha'");
  if (!sc.x1) throw InvalidArgument("scenario: missing 'x1'");
  SimulationConfig cfg;
  cfg.w = *sc.weights;
  cfg.alpha = *sc.alpha;
  cfg.x1 = *sc.x1;
  if (cfg.x1.size() == 1 && cfg.w.size() > 1) cfg.x1.assign(cfg.w.size(), cfg.x1[0]);
  cfg.t_max = sc.t_max.value_or(1000);
  cfg.seed = sc.seed.value_or(0);
  cfg.stubborn = sc.stubborn;
  std::sort(cfg.stubborn.begin(), cfg.stubborn.end());
  validate_config(cfg);
  return cfg;
}

}  // namespace herdlab
