#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "herdlab/errors.hpp"
#include "herdlab/perron.hpp"
#include "herdlab/scc.hpp"
#include "herdlab/verify.hpp"
#include "herdlab/weight_matrix.hpp"

using namespace herdlab;

namespace {

WeightMatrix cycle3() {
  // 1 -> 2 -> 3 -> 1 listening ring: row i puts all weight on (i+1) mod 3.
  return validate_weight_matrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
}

}  // namespace

// ---- weight matrix ----

TEST_CASE("weight matrix validation accepts row-stochastic input") {
  const WeightMatrix w = validate_weight_matrix({{0.25, 0.75}, {1.0, 0.0}});
  REQUIRE(w.size() == 2);
  REQUIRE(w(0, 1) == 0.75);
  REQUIRE(w(0, 0) + w(0, 1) == 1.0);
}

TEST_CASE("weight matrix validation rejects malformed input") {
  REQUIRE_THROWS_AS(validate_weight_matrix({{1.0}, {0.5, 0.5}}), NonSquare);
  REQUIRE_THROWS_AS(validate_weight_matrix({{1.5, -0.5}, {0.5, 0.5}}), NegativeEntry);
  try {
    validate_weight_matrix({{0.6, 0.6}, {0.5, 0.5}});
    FAIL("row sum 1.2 must throw");
  } catch (const RowSumViolation& e) {
    REQUIRE(e.row == 0);
  }
}

TEST_CASE("weight matrix text round trip is exact") {
  const WeightMatrix w = demo_network();
  std::ostringstream os;
  save_weight_matrix(os, w);
  std::istringstream is(os.str());
  const WeightMatrix back = load_weight_matrix(is, "round-trip");
  REQUIRE(back.size() == w.size());
  for (int i = 0; i < w.size(); ++i)
    for (int j = 0; j < w.size(); ++j) REQUIRE(back(i, j) == w(i, j));
}

TEST_CASE("weight matrix loader skips comments and reports bad lines") {
  std::istringstream good("# demo\n\n2\n0.5 0.5\n0.5 0.5\n");
  REQUIRE(load_weight_matrix(good).size() == 2);

  std::istringstream bad("2\n0.5 0.5\n0.5 oops\n");
  try {
    load_weight_matrix(bad, "bad.weights");
    FAIL("junk token must throw");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 3);
  }

  std::istringstream headless("0.5 0.5\n0.5 0.5\n");
  REQUIRE_THROWS_AS(load_weight_matrix(headless), ParseError);  // count line required
}

TEST_CASE("successors are the agents listening to a node") {
  const WeightMatrix w = demo_network();
  REQUIRE(w.successors(0) == std::vector<int>{0, 1});  // self-loop plus v2
  REQUIRE(w.successors(2) == std::vector<int>{1, 5});
  REQUIRE(w.successors(6) == std::vector<int>{5});
}

// ---- strongly connected components ----

TEST_CASE("demo network condenses into the documented poset") {
  const SccPoset poset = strongly_connected_components(demo_network());
  REQUIRE(poset.count() == 4);
  REQUIRE(poset.components[0] == std::vector<int>{0});
  REQUIRE(poset.components[1] == std::vector<int>{1, 2});
  REQUIRE(poset.components[2] == std::vector<int>{3, 4});
  REQUIRE(poset.components[3] == std::vector<int>{5, 6});
  REQUIRE(poset.covers == std::vector<std::pair<int, int>>{{1, 0}, {3, 1}, {3, 2}});
  REQUIRE(poset.maximal == std::vector<int>{0, 2});
  REQUIRE(poset.minimal == std::vector<int>{3});
  REQUIRE(poset.component_of[4] == 2);
}

TEST_CASE("identity matrix gives isolated singleton components") {
  const WeightMatrix w = validate_weight_matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const SccPoset poset = strongly_connected_components(w);
  REQUIRE(poset.count() == 3);
  REQUIRE(poset.covers.empty());
  REQUIRE(poset.maximal == std::vector<int>{0, 1, 2});
  REQUIRE(poset.minimal == std::vector<int>{0, 1, 2});
}

TEST_CASE("a listening ring is one component") {
  const SccPoset poset = strongly_connected_components(cycle3());
  REQUIRE(poset.count() == 1);
  REQUIRE(is_irreducible(cycle3()));
  REQUIRE_FALSE(is_irreducible(demo_network()));
}

TEST_CASE("component order is reflexive, antisymmetric, and transitive") {
  const SccPoset poset = strongly_connected_components(demo_network());
  const int m = poset.count();
  for (int r = 0; r < m; ++r) REQUIRE(poset.order[r][r]);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      if (r != s && poset.order[r][s]) REQUIRE_FALSE(poset.order[s][r]);
      for (int u = 0; u < m; ++u)
        if (poset.order[r][s] && poset.order[s][u]) REQUIRE(poset.order[r][u]);
    }
  // C4 is below everything; C1 and C3 only below themselves.
  REQUIRE(poset.order[3][0]);
  REQUIRE(poset.order[3][2]);
  REQUIRE_FALSE(poset.order[0][3]);
}

// ---- stationary distribution ----

TEST_CASE("two-agent chain has the analytic stationary vector") {
  // W = [[0.7, 0.3], [0.6, 0.4]] has left vector proportional to (0.6, 0.3).
  const WeightMatrix w = validate_weight_matrix({{0.7, 0.3}, {0.6, 0.4}});
  const PerronVector pi = perron_left_vector(w);
  // residual tolerance 1e-12 bounds the solution error only up to the
  // spectral gap, so allow a little slack beyond it
  REQUIRE(pi.values[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-9));
  REQUIRE(pi.values[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-9));
  REQUIRE(pi.residual <= 1e-12);
}

TEST_CASE("ring stationary vector is uniform") {
  const PerronVector pi = perron_left_vector(cycle3());
  for (double v : pi.values) REQUIRE(v == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary solver refuses reducible matrices") {
  REQUIRE_THROWS_AS(perron_left_vector(demo_network()), ReducibleMatrix);
}

TEST_CASE("stationary vector satisfies the fixed-point residual") {
  Xoshiro256PlusPlus rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const WeightMatrix w = verify_detail::random_stochastic(rng, 2 + rep % 5, true);
    const PerronVector pi = perron_left_vector(w);
    double sum = 0.0;
    for (double v : pi.values) {
      REQUIRE(v > 0.0);
      sum += v;
    }
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
    // independent residual: || pi^T W - pi^T ||_inf
    double res = 0.0;
    for (int j = 0; j < w.size(); ++j) {
      double dot = 0.0;
      for (int i = 0; i < w.size(); ++i) dot += pi.values[i] * w(i, j);
      res = std::max(res, std::abs(dot - pi.values[j]));
    }
    REQUIRE(res <= 1e-10);
  }
}
