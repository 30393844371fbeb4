#pragma once
// Deterministic two-agent averaging with a time-varying mixing rate:
// x_{t+1} = W_t x_t for t = 0, 1, 2, ... with W_t = ((1-b_t, b_t),(b_t, 1-b_t)).
// In the eigenbasis U = (1/sqrt 2)((1,-1),(1,1)) each W_t is diag(1, 1-2 b_t),
// so the disagreement coordinate shrinks by prod (1 - 2 b_t). With the
// halving schedule b_t = beta / 2^t that product converges to a positive
// limit g_{1/2,1}(2 beta): the pair stops short of agreement forever.

#include <array>
#include <vector>

#include "herdlab/errors.hpp"
#include "herdlab/g_function.hpp"

namespace herdlab {

enum class Schedule { constant, halving };

struct TimeVariantResult {
  std::vector<std::array<double, 2>> states;   // x_0 .. x_T
  std::array<std::array<double, 2>, 2> limit_matrix;
};

// beta in (0, 1/2]; beta = 0 is allowed for testing and gives identity
// dynamics. The trajectory is the exact step-by-step recursion; the limit
// matrix is U diag(1, p) U^T with p the infinite product (g_function for the
// halving schedule, 0 for any constant beta > 0).
inline TimeVariantResult time_variant_two_agent(double beta, Schedule schedule,
                                                std::array<double, 2> x0, long long t_steps) {
  if (!(beta >= 0.0 && beta <= 0.5))
    throw InvalidArgument("time_variant_two_agent: beta must lie in (0, 1/2] (0 for testing)");
  if (t_steps < 0) throw InvalidArgument("time_variant_two_agent: negative step count");

  TimeVariantResult result;
  result.states.reserve(static_cast<std::size_t>(t_steps) + 1);
  result.states.push_back(x0);
  double x1 = x0[0], x2 = x0[1];
  double b = beta;  // b_t; halving multiplies by 1/2 each step (exact)
  for (long long t = 0; t < t_steps; ++t) {
    const double n1 = x1 + b * (x2 - x1);
    const double n2 = x2 + b * (x1 - x2);
    x1 = n1;
    x2 = n2;
    result.states.push_back({x1, x2});
    if (schedule == Schedule::halving) b *= 0.5;
  }

  double p;  // limit of prod_{t>=0} (1 - 2 b_t)
  if (schedule == Schedule::constant)
    p = beta == 0.0 ? 1.0 : 0.0;
  else
    p = beta == 0.0 ? 1.0 : g_function(0.5, 1, 2.0 * beta);
  const double avg = 0.5 * (1.0 + p), off = 0.5 * (1.0 - p);
  result.limit_matrix = {{{avg, off}, {off, avg}}};
  return result;
}

}  // namespace herdlab
