#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

enum class MetricProvenance {
  Combinatorial,
  PathDegree,
  Chemical,
  Davies,
  MaxIntrinsic,
  Custom,
};

std::string to_string(MetricProvenance p);

// Symmetric pairwise distances on a graph. Path metrics are computed one
// Dijkstra row at a time and cached; solver metrics are stored as explicit
// tables.
class PseudoMetric {
 public:
  // Path metric from per-edge weights (indexed like Graph::edges()).
  static PseudoMetric path_metric(const Graph& g, std::vector<double> edge_weights,
                                  MetricProvenance prov, std::optional<double> jump_bound);
  // Explicit dense table (row-major n*n).
  static PseudoMetric from_table(const Graph& g, std::vector<double> table,
                                 MetricProvenance prov, std::optional<double> jump_bound);

  double operator()(int u, int v) const;
  // Distances from u to every vertex.
  std::vector<double> row(int u) const;

  const Graph& graph() const { return *graph_; }
  MetricProvenance provenance() const { return prov_; }
  std::optional<double> jump_bound() const { return jump_bound_; }

  // Closed ball {y : rho(x,y) <= r}.
  VertexSet ball(int x, double r) const;

  // Largest rho over edges.
  double measured_jump_size() const;

 private:
  PseudoMetric() = default;
  const Graph* graph_ = nullptr;
  MetricProvenance prov_ = MetricProvenance::Custom;
  std::optional<double> jump_bound_;
  std::vector<double> edge_weights_;  // path-metric mode
  std::vector<std::vector<std::pair<int, double>>> wadj_;  // metric-weighted adjacency
  std::vector<double> table_;         // table mode (empty otherwise)
  mutable std::mutex mu_;
  mutable std::unordered_map<int, std::shared_ptr<const std::vector<double>>> cache_;

  std::vector<double> dijkstra(int source) const;

 public:
  PseudoMetric(PseudoMetric&& o) noexcept;
  PseudoMetric& operator=(PseudoMetric&&) = delete;
  PseudoMetric(const PseudoMetric&) = delete;
};

// BFS hop counts from a source.
std::vector<int> combinatorial_distance(const Graph& g, int source);
PseudoMetric combinatorial_metric(const Graph& g);

// Degree path metric: edge weight S ^ sqrt(m(x)/deg(x)) ^ sqrt(m(y)/deg(y)).
PseudoMetric path_degree_metric(const Graph& g, double S);

// Chemical distance: edge weight sqrt((m(x) ^ m(y)) / b(x,y)).
PseudoMetric chemical_distance(const Graph& g);

struct IntrinsicReport {
  double max_ratio = 0;       // max_x sum_y b rho^2 / m(x)
  double jump_size = 0;       // sup rho over edges
  int worst_vertex = -1;
  bool is_intrinsic = false;  // max_ratio <= 1 + 1e-12
};

IntrinsicReport check_intrinsic(const Graph& g, const PseudoMetric& rho);

}  // namespace heatlab
