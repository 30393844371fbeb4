#pragma once
// Normalized left Perron eigenvector of an irreducible row-stochastic matrix:
// pi^T W = pi^T, entries positive, sum 1. Damped power iteration on the
// transpose, v <- (v + W^T v)/2: damping shifts the spectrum into the open
// right half so periodic chains (the swap matrix) converge too, without
// moving the fixed point.

#include <cmath>
#include <vector>

#include "herdlab/errors.hpp"
#include "herdlab/scc.hpp"
#include "herdlab/weight_matrix.hpp"

namespace herdlab {

struct PerronVector {
  std::vector<double> values;
  long long iterations = 0;
  double residual = 0.0;  // max_j |(pi^T W - pi^T)_j| at return
};

// `start` exists for the scaling-invariance property test; default is the
// uniform vector 1/n. tol must be <= 1e-10 for the residual contract.
inline PerronVector perron_left_vector(const WeightMatrix& w, double tol = 1e-12,
                                       long long max_iters = 100000,
                                       const std::vector<double>* start = nullptr) {
  if (w.empty()) throw InvalidArgument("perron_left_vector: empty matrix");
  if (!(tol > 0.0)) throw InvalidArgument("perron_left_vector: tol must be positive");
  if (max_iters < 1) throw InvalidArgument("perron_left_vector: max_iters must be >= 1");
  if (!is_irreducible(w)) throw ReducibleMatrix("matrix is reducible; no unique positive pi");

  const int n = w.size();
  std::vector<double> v(n, 1.0 / n);
  if (start) {
    if (static_cast<int>(start->size()) != n)
      throw DimensionMismatch("perron_left_vector: start vector size mismatch");
    double s = 0.0;
    for (double x : *start) {
      if (!(x > 0.0)) throw InvalidArgument("perron_left_vector: start entries must be positive");
      s += x;
    }
    for (int i = 0; i < n; ++i) v[i] = (*start)[i] / s;
  }

  std::vector<double> u(n);
  double residual = 0.0;
  for (long long iter = 1; iter <= max_iters; ++iter) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += v[i] * w(i, j);
      u[j] = acc;
    }
    residual = 0.0;
    for (int j = 0; j < n; ++j) residual = std::max(residual, std::fabs(u[j] - v[j]));
    if (residual <= tol) return PerronVector{v, iter, residual};
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      v[j] = 0.5 * (v[j] + u[j]);  // entries stay strictly positive
      sum += v[j];
    }
    for (int j = 0; j < n; ++j) v[j] /= sum;
  }
  throw NoConvergence(max_iters, residual);
}

}  // namespace herdlab
