#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

// Graph Laplacian Delta f(x) = (1/m(x)) sum_y b(x,y)(f(x) - f(y)), optionally
// restricted to a subset U with Dirichlet condition: rows/columns outside U
// are dropped while the diagonal keeps the full degree.
//
// Internally everything is expressed through the m-symmetrized matrix
// A = M^{1/2} Delta M^{-1/2}, with A[i][i] = Deg(x_i) and
// A[i][j] = -b(x_i,x_j)/sqrt(m_i m_j).
class LaplacianOperator {
 public:
  LaplacianOperator(const Graph& g, std::optional<VertexSet> restriction = std::nullopt);

  int dim() const { return static_cast<int>(verts_.size()); }
  const Graph& graph() const { return *graph_; }
  // Global vertex index of local row i.
  int vertex(int i) const { return verts_[i]; }
  // Local row of a global vertex, or -1 when outside the restriction.
  int local(int v) const;
  double measure(int i) const { return m_[i]; }
  double diag(int i) const { return diag_[i]; }
  double max_diag() const;

  // y = A x (symmetrized form).
  void apply_sym(const std::vector<double>& x, std::vector<double>& y) const;
  Eigen::MatrixXd dense_sym() const;

  // Delta f for a function on the restriction (Dirichlet outside).
  std::vector<double> apply(const std::vector<double>& f) const;

  // Dirichlet energy sum m f Delta f.
  double energy(const std::vector<double>& f) const;

 private:
  const Graph* graph_;
  std::vector<int> verts_;            // global indices, sorted
  std::vector<int> local_;            // global -> local or -1
  std::vector<double> m_;             // measures
  std::vector<double> diag_;          // Deg with full degree
  // CSR of the off-diagonal part of A (values already negative).
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

// Smallest eigenvalue of the Dirichlet restriction to U. Dense solve for
// |U| <= 2000, Lanczos with full reorthogonalization beyond.
double dirichlet_lambda(const Graph& g, const VertexSet& U);
double dirichlet_lambda_dense(const Graph& g, const VertexSet& U);
double dirichlet_lambda_lanczos(const Graph& g, const VertexSet& U);

}  // namespace heatlab
