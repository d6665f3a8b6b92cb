#include <doctest.h>

#include <cmath>
#include <random>

#include "heatlab/graph.hpp"
#include "heatlab/solvers.hpp"
#include "oracle.hpp"

using namespace heatlab;

// Frozen values from the pattern-search oracle (oracle.hpp, rng seed 12345,
// 60 restarts): {seed, size, rho_E(0, n-1), rho_S(0, n-1, S=1)} on
// build_random_connected(6, seed).
struct FrozenCase {
  std::uint64_t seed;
  int n;
  double rho_e, rho_s;
};
static const FrozenCase kFrozen[] = {
    {1, 2, 1.5118095169, 1.0000000000}, {2, 4, 2.6510161923, 1.8725163223},
    {3, 6, 1.1948603480, 0.8448938547}, {4, 3, 1.2842864772, 0.9081276770},
    {5, 6, 1.3330919263, 0.9426383410}, {6, 2, 0.9691282062, 0.6852771264},
    {7, 6, 1.3119529834, 0.9276908511}, {8, 5, 1.1130594043, 0.7870518526},
    {9, 4, 1.3198364806, 0.9332653255}, {10, 2, 1.6511847299, 1.0000000000},
};

TEST_CASE("closed forms: two vertices and path of three") {
  Graph p2 = Graph::build({{"a", 1}, {"b", 1}}, {{"a", "b", 1}});
  auto [e2, c2] = davies_metric(p2, 0, 1, 1e-8);
  CHECK(c2.converged);
  CHECK(e2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  Graph p3 = build_lattice_box(1, 1, ConductanceRule::constant(1),
                               MeasureRule::constant(1));
  int l = p3.index_of("-1"), r = p3.index_of("1");
  auto [e3, c3] = davies_metric(p3, l, r, 1e-8);
  CHECK(c3.converged);
  CHECK(e3 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("closed forms agree with a fresh oracle run") {
  std::mt19937_64 rng(999);
  Graph p2 = Graph::build({{"a", 1}, {"b", 1}}, {{"a", "b", 1}});
  CHECK(testoracle::metric_oracle(p2, 0, 1, true, 0, rng, 20) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  Graph p3 = build_lattice_box(1, 1, ConductanceRule::constant(1),
                               MeasureRule::constant(1));
  CHECK(testoracle::metric_oracle(p3, p3.index_of("-1"), p3.index_of("1"), true, 0,
                                  rng, 20) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("solvers match the frozen oracle table within 1e-4") {
  for (const auto& fc : kFrozen) {
    Graph g = build_random_connected(6, fc.seed);
    REQUIRE(g.size() == fc.n);
    auto [e, ce] = davies_metric(g, 0, g.size() - 1, 1e-7);
    auto [s, cs] = max_intrinsic_metric(g, 0, g.size() - 1, 1.0, 1e-7);
    CHECK(ce.converged);
    CHECK(cs.converged);
    CHECK(std::abs(e - fc.rho_e) < 1e-4);
    CHECK(std::abs(s - fc.rho_s) < 1e-4);
  }
}

TEST_CASE("certificates report a small duality gap") {
  Graph g = build_random_connected(6, 2);
  auto [v, cert] = davies_metric(g, 0, g.size() - 1, 1e-8);
  CHECK(cert.converged);
  REQUIRE(cert.gap.has_value());
  CHECK(*cert.gap <= 1e-8);
  CHECK(cert.tolerance == doctest::Approx(1e-8));
  CHECK(v > 0);
}

TEST_CASE("metric tables are symmetric, zero-diagonal, triangle-closed") {
  Graph g = build_random_connected(8, 5);
  auto tab = davies_metric_table(g, 1e-6);
  for (int i = 0; i < g.size(); ++i) {
    CHECK(tab(i, i) == 0);
    for (int j = 0; j < i; ++j) {
      CHECK(tab(i, j) == doctest::Approx(tab(j, i)));
      for (int k = 0; k < g.size(); ++k)
        CHECK(tab(i, j) <= tab(i, k) + tab(k, j) + 1e-9);
    }
  }
}

TEST_CASE("triangle closure only shrinks") {
  std::vector<double> t = {0, 1, 5, 1, 0, 1, 5, 1, 0};
  auto orig = t;
  triangle_closure(t, 3);
  CHECK(t[2] == doctest::Approx(2));  // through the middle vertex
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] <= orig[i] + 1e-15);
}

TEST_CASE("regularity constant of the unit line is sqrt(2)") {
  Graph g = build_lattice_box(1, 4, ConductanceRule::constant(1),
                              MeasureRule::constant(1));
  CHECK(regularity_constant(g, 1e-7) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("rho_S respects the jump size cap") {
  Graph g = build_random_connected(6, 3);
  for (double S : {0.25, 1.0}) {
    auto tab = max_intrinsic_table(g, S, 1e-6);
    for (auto [u, v, b] : g.edges()) CHECK(tab(u, v) <= S + 1e-5);
  }
}
