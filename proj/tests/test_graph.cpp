#include <doctest.h>

#include "heatlab/graph.hpp"

using namespace heatlab;

TEST_CASE("build validates input") {
  CHECK_THROWS_AS(Graph::build({{"a", 1}, {"a", 1}}, {{"a", "a", 1}}), GraphError);
  CHECK_THROWS_AS(Graph::build({{"a", 0}, {"b", 1}}, {{"a", "b", 1}}), GraphError);
  CHECK_THROWS_AS(Graph::build({{"a", 1}, {"b", 1}}, {{"a", "b", -1}}), GraphError);
  CHECK_THROWS_AS(Graph::build({{"a", 1}, {"b", 1}}, {{"a", "a", 1}}), GraphError);
  // disconnected
  CHECK_THROWS_AS(Graph::build({{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", "b", 1}}),
                  GraphError);
  // unknown endpoint
  CHECK_THROWS_AS(Graph::build({{"a", 1}, {"b", 1}}, {{"a", "c", 1}}), GraphError);
}

TEST_CASE("degrees and measures") {
  Graph g = Graph::build({{"a", 2}, {"b", 1}, {"c", 4}},
                         {{"a", "b", 3}, {"b", "c", 5}});
  CHECK(g.size() == 3);
  CHECK(g.deg(g.index_of("b")) == doctest::Approx(8));
  CHECK(g.weighted_deg(g.index_of("b")) == doctest::Approx(8));
  CHECK(g.weighted_deg(g.index_of("a")) == doctest::Approx(1.5));
  CHECK(g.total_measure() == doctest::Approx(7));
  CHECK(g.edge_weight(g.index_of("a"), g.index_of("b")) == doctest::Approx(3));
  CHECK(g.edge_weight(g.index_of("a"), g.index_of("c")) == 0);
  CHECK(g.max_weighted_deg() == doctest::Approx(8));
}

TEST_CASE("lattice box sizes and ids") {
  Graph line = build_lattice_box(1, 50, ConductanceRule::constant(1),
                                 MeasureRule::constant(1));
  CHECK(line.size() == 101);
  CHECK(line.index_of("-50") >= 0);
  Graph sq = build_lattice_box(2, 3, ConductanceRule::constant(1),
                               MeasureRule::constant(1));
  CHECK(sq.size() == 49);
  CHECK(sq.edges().size() == 2 * 7 * 6);
  CHECK(lattice_coords("-1,2") == std::vector<int>{-1, 2});
  CHECK(lattice_id({-1, 2}) == "-1,2");
}

TEST_CASE("iid conductances are seed-stable and order-independent") {
  auto c = ConductanceRule::iid_uniform(1, 2, 7);
  Graph a = build_lattice_box(2, 4, c, MeasureRule::constant(1));
  Graph b = build_lattice_box(2, 4, c, MeasureRule::constant(1));
  CHECK(a.hash() == b.hash());
  // the same physical edge gets the same weight inside a larger box
  Graph big = build_lattice_box(2, 5, c, MeasureRule::constant(1));
  int u = a.index_of("0,0"), v = a.index_of("0,1");
  CHECK(a.edge_weight(u, v) ==
        big.edge_weight(big.index_of("0,0"), big.index_of("0,1")));
  for (auto [x, y, w] : a.edges()) {
    CHECK(w >= 1);
    CHECK(w <= 2);
  }
}

TEST_CASE("normalizing measure gives m = deg") {
  Graph g = build_lattice_box(1, 3, ConductanceRule::constant(2),
                              MeasureRule::normalizing());
  for (int v = 0; v < g.size(); ++v) CHECK(g.measure(v) == doctest::Approx(g.deg(v)));
}

TEST_CASE("sphere function and anti-tree") {
  SphereFunction s(0.5);
  CHECK(s.size(0) == 1);
  CHECK(s.size(1) == 1);
  CHECK(s.size(4) == 2);
  CHECK(s.size(9) == 3);
  CHECK_THROWS_AS(SphereFunction(2.5), GraphError);

  Graph at = build_anti_tree(0.5, 4);
  CHECK(at.size() == 6);  // 1+1+1+1+2
  // complete join between consecutive spheres
  CHECK(at.edge_weight(at.index_of("3:0"), at.index_of("4:0")) == 1);
  CHECK(at.edge_weight(at.index_of("3:0"), at.index_of("4:1")) == 1);
  CHECK(at.edge_weight(at.index_of("4:0"), at.index_of("4:1")) == 0);
}

TEST_CASE("random connected graphs are deterministic and connected") {
  Graph a = build_random_connected(12, 3);
  Graph b = build_random_connected(12, 3);
  CHECK(a.hash() == b.hash());
  CHECK(a.size() <= 12);
  CHECK(a.size() >= 2);
  for (int v = 0; v < a.size(); ++v) {
    CHECK(a.measure(v) >= 0.5);
    CHECK(a.measure(v) <= 2.0);
  }
  // different seeds give different graphs (overwhelmingly)
  CHECK(build_random_connected(12, 4).hash() != a.hash());
}

TEST_CASE("vertex set") {
  Graph g = build_lattice_box(1, 2, ConductanceRule::constant(1),
                              MeasureRule::constant(1));
  auto u = VertexSet::of(g, {3, 1, 3});
  CHECK(u.vertices == std::vector<int>{1, 3});
  CHECK(u.measure == doctest::Approx(2));
  CHECK(u.contains(3));
  CHECK(!u.contains(0));
}
