#pragma once
// Failure types for the whole library. Each carries the context needed to
// reproduce the offending input; all derive from Error so callers can catch
// one base.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace herdlab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- weight-matrix validation ----

struct NonSquare : Error {
  explicit NonSquare(const std::string& what) : Error(what) {}
};

struct NegativeEntry : Error {
  int i, j;
  NegativeEntry(int i_, int j_, double value)
      : Error("negative weight at (" + std::to_string(i_) + "," + std::to_string(j_) +
              "): " + std::to_string(value)),
        i(i_),
        j(j_) {}
};

struct RowSumViolation : Error {
  int row;
  double actual_sum;
  RowSumViolation(int row_, double actual)
      : Error("row " + std::to_string(row_) + " sums to " + std::to_string(actual) +
              ", expected 1 within 1e-12"),
        row(row_),
        actual_sum(actual) {}
};

// ---- text parsing (weight files, scenario configs) ----

struct ParseError : Error {
  std::string file;
  int line;  // 1-based; 0 when not tied to a line
  ParseError(std::string file_, int line_, const std::string& what)
      : Error(file_ + ":" + std::to_string(line_) + ": " + what),
        file(std::move(file_)),
        line(line_) {}
};

// ---- spectral ----

struct ReducibleMatrix : Error {
  explicit ReducibleMatrix(const std::string& what) : Error(what) {}
};

struct NoConvergence : Error {
  long long iterations;
  double residual;
  NoConvergence(long long iters, double resid)
      : Error("power iteration did not reach tolerance after " + std::to_string(iters) +
              " iterations (residual " + std::to_string(resid) + ")"),
        iterations(iters),
        residual(resid) {}
};

// ---- dynamics / analysis ----

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct InvalidDelta : Error {
  explicit InvalidDelta(double delta)
      : Error("corner radius delta must lie in (0, 1/2), got " + std::to_string(delta)) {}
};

struct TrajectoryTooShort : Error {
  explicit TrajectoryTooShort(const std::string& what) : Error(what) {}
};

struct MissingActions : Error {
  explicit MissingActions(const std::string& what) : Error(what) {}
};

struct UndecidedRuns : Error {
  std::uint64_t count;
  explicit UndecidedRuns(std::uint64_t count_)
      : Error(std::to_string(count_) + " undecided runs; report requires every run decided"),
        count(count_) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace herdlab
