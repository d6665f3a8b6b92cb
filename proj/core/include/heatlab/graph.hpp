#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace heatlab {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite weighted graph (X, b, m): positive vertex measure m, symmetric
// positive edge weights b, no loops, connected. Immutable after construction.
class Graph {
 public:
  struct VertexSpec {
    std::string id;
    double m;
  };
  struct EdgeSpec {
    std::string u, v;
    double b;
  };

  static Graph build(std::vector<VertexSpec> vertices, const std::vector<EdgeSpec>& edges);

  int size() const { return static_cast<int>(measure_.size()); }
  const std::string& id(int v) const { return ids_[v]; }
  int index_of(const std::string& id) const;

  double measure(int v) const { return measure_[v]; }
  double total_measure() const { return total_measure_; }
  double deg(int v) const { return deg_[v]; }
  double weighted_deg(int v) const { return deg_[v] / measure_[v]; }
  double max_weighted_deg() const;

  // Neighbors of v with edge weights; both directions materialized.
  const std::vector<std::pair<int, double>>& neighbors(int v) const { return adj_[v]; }
  // Canonical undirected edges, u < v, sorted.
  const std::vector<std::tuple<int, int, double>>& edges() const { return edges_; }
  double edge_weight(int u, int v) const;  // 0 if not adjacent

  // Stable content hash (ids, measures, weights).
  std::uint64_t hash() const;

 private:
  Graph() = default;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<double> measure_;
  std::vector<double> deg_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<std::tuple<int, int, double>> edges_;
  double total_measure_ = 0;
};

// Sphere-size rule s_k = floor(k^gamma), s_0 = 1, s_{-1} = 0.
struct SphereFunction {
  double gamma;  // in (0,2)
  explicit SphereFunction(double g);
  long size(long k) const;
};

// Sorted vertex subset with cached total measure.
struct VertexSet {
  std::vector<int> vertices;  // sorted, unique
  double measure = 0;

  static VertexSet of(const Graph& g, std::vector<int> vs);
  bool contains(int v) const;
};

struct ConductanceRule {
  enum class Kind { Constant, IidUniform } kind = Kind::Constant;
  double value = 1.0;           // Constant
  double lo = 1.0, hi = 2.0;    // IidUniform
  std::uint64_t seed = 0;
  static ConductanceRule constant(double c) { return {Kind::Constant, c, 0, 0, 0}; }
  static ConductanceRule iid_uniform(double lo, double hi, std::uint64_t seed) {
    return {Kind::IidUniform, 0, lo, hi, seed};
  }
};

struct MeasureRule {
  enum class Kind { Constant, Normalizing } kind = Kind::Constant;
  double value = 1.0;
  static MeasureRule constant(double c) { return {Kind::Constant, c}; }
  static MeasureRule normalizing() { return {Kind::Normalizing, 0}; }  // m = deg
};

// Box {-R,...,R}^n with nearest-neighbor edges. Vertex ids are
// comma-joined coordinates ("-1,2"). Deterministic under fixed seed.
Graph build_lattice_box(int dimension, int radius, const ConductanceRule& cond,
                        const MeasureRule& meas);

// Anti-tree truncated at level K: root "0:0", sphere S_k of size floor(k^gamma),
// consecutive spheres completely joined, b in {0,1}, m = 1.
Graph build_anti_tree(double gamma, int levels);

// Seeded random connected graph for campaigns: spanning tree plus a few extra
// edges, b and m uniform in [0.5, 2].
Graph build_random_connected(int max_vertices, std::uint64_t seed);

// Lattice coordinate helpers.
std::string lattice_id(const std::vector<int>& coords);
std::vector<int> lattice_coords(const std::string& id);

}  // namespace heatlab
