#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heatlab/graph.hpp"
#include "heatlab/laplacian.hpp"

namespace heatlab {

enum class KernelBackend { DenseEig, ExpmAction };

struct TruncationRecord {
  long radius = 0;           // box radius / anti-tree level of the final run
  double previous_value = 0; // value at the preceding schedule radius
  double tolerance = 0;
  bool converged = true;
};

// Values p_t(x,y) over a (t, x, y) grid.
struct HeatKernelSlice {
  std::vector<double> t_grid;
  std::vector<int> sources;  // x
  std::vector<int> targets;  // y
  // value(ti, xi, yi); row-major over (t, source, target)
  std::vector<double> values;
  KernelBackend backend = KernelBackend::DenseEig;
  std::optional<TruncationRecord> truncation;

  double value(int ti, int xi, int yi) const {
    return values[(static_cast<std::size_t>(ti) * sources.size() + xi) * targets.size() + yi];
  }
};

// Spectral backend: full eigendecomposition of the m-symmetrized Laplacian.
// Reusable across t. n <= 2000.
class DenseHeatKernel {
 public:
  explicit DenseHeatKernel(const Graph& g, std::optional<VertexSet> restriction = std::nullopt);
  // p_t(x,y) for global vertex indices inside the restriction.
  double at(double t, int x, int y) const;
  const LaplacianOperator& op() const { return op_; }

 private:
  LaplacianOperator op_;
  Eigen::VectorXd eval_;
  Eigen::MatrixXd evec_;
};

// Uniformization: e^{-tA} column advanced by Poisson-weighted powers of
// P = I - A/lambda with lambda = 2 max Deg + 1. All terms are nonnegative,
// so small kernel values keep full relative accuracy.
class UniformizationPropagator {
 public:
  UniformizationPropagator(const Graph& g, int target,
                           std::optional<VertexSet> restriction = std::nullopt,
                           double tail_mass = 1e-45);
  // Advance from the current time to t (t must be nondecreasing).
  void advance_to(double t);
  double time() const { return t_; }
  // p_t(x, target) for global index x.
  double at(int x) const;
  std::vector<double> column() const;  // indexed by global vertex

 private:
  LaplacianOperator op_;
  int target_local_;
  double lambda_;
  double tail_mass_;
  double t_ = 0;
  std::vector<double> state_;  // e^{-tA} e_y in symmetrized coordinates
};

double heat_kernel_value(const Graph& g, double t, int x, int y, KernelBackend backend);

HeatKernelSlice heat_kernel_finite(const Graph& g, const std::vector<double>& t_list,
                                   const std::vector<int>& sources,
                                   const std::vector<int>& targets, KernelBackend backend);

// ---- infinite families --------------------------------------------------

struct FamilySpec {
  enum class Kind { Lattice, AntiTree } kind = Kind::Lattice;
  // lattice
  int dimension = 1;
  ConductanceRule conductance = ConductanceRule::constant(1.0);
  MeasureRule measure = MeasureRule::constant(1.0);
  // anti-tree
  double gamma = 0.5;

  static FamilySpec lattice(int dim, ConductanceRule c = ConductanceRule::constant(1.0),
                            MeasureRule m = MeasureRule::constant(1.0));
  static FamilySpec anti_tree(double gamma);
};

// Finite truncation at the given radius (box radius / anti-tree level) with a
// one-layer margin so the Dirichlet diagonal keeps the full degree.
struct Truncation {
  Graph graph;            // radius + 1 layers
  VertexSet interior;     // vertices within `radius`
  long radius;
};
Truncation truncate_family(const FamilySpec& fam, long radius);

struct ExhaustionResult {
  double value = 0;
  TruncationRecord record;
};

// Dirichlet ball exhaustion: doubling radius schedule, stops when two
// consecutive values agree within tol. Vertex ids are family coordinates
// ("3" on the line, "-1,2" in 2-D, "k:i" on anti-trees).
ExhaustionResult heat_kernel_exhaustion(const FamilySpec& fam, double t,
                                        const std::string& x, const std::string& y,
                                        double tol);

// Radial quotient of an anti-tree truncated at `levels`: the path graph on
// levels 0..K with b'(k,k+1) = s_k s_{k+1} and m'(k) = s_k. For |x| != |y|
// the anti-tree kernel equals the quotient kernel at the level pair.
Graph anti_tree_quotient(double gamma, int levels);

}  // namespace heatlab
