#include "heatlab/laplacian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "heatlab/rng.hpp"

namespace heatlab {

LaplacianOperator::LaplacianOperator(const Graph& g, std::optional<VertexSet> restriction)
    : graph_(&g) {
  if (restriction) {
    if (restriction->vertices.empty()) throw GraphError("empty Dirichlet restriction");
    verts_ = restriction->vertices;
  } else {
    verts_.resize(g.size());
    std::iota(verts_.begin(), verts_.end(), 0);
  }
  local_.assign(g.size(), -1);
  for (int i = 0; i < dim(); ++i) local_[verts_[i]] = i;

  m_.resize(dim());
  diag_.resize(dim());
  row_ptr_.assign(dim() + 1, 0);
  for (int i = 0; i < dim(); ++i) {
    int v = verts_[i];
    m_[i] = g.measure(v);
    diag_[i] = g.weighted_deg(v);  // full degree also at the Dirichlet boundary
    for (auto [y, b] : g.neighbors(v))
      if (local_[y] >= 0) ++row_ptr_[i + 1];
  }
  for (int i = 0; i < dim(); ++i) row_ptr_[i + 1] += row_ptr_[i];
  col_.resize(row_ptr_.back());
  val_.resize(row_ptr_.back());
  std::vector<int> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (int i = 0; i < dim(); ++i) {
    int v = verts_[i];
    for (auto [y, b] : g.neighbors(v)) {
      int j = local_[y];
      if (j < 0) continue;
      col_[fill[i]] = j;
      val_[fill[i]] = -b / std::sqrt(m_[i] * m_[j]);
      ++fill[i];
    }
  }
}

int LaplacianOperator::local(int v) const { return local_[v]; }

double LaplacianOperator::max_diag() const {
  return *std::max_element(diag_.begin(), diag_.end());
}

void LaplacianOperator::apply_sym(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(dim());
  for (int i = 0; i < dim(); ++i) {
    double s = diag_[i] * x[i];
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
}

Eigen::MatrixXd LaplacianOperator::dense_sym() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    A(i, i) = diag_[i];
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) A(i, col_[k]) = val_[k];
  }
  return A;
}

std::vector<double> LaplacianOperator::apply(const std::vector<double>& f) const {
  // Delta = M^{-1/2} A M^{1/2}
  std::vector<double> x(dim()), y;
  for (int i = 0; i < dim(); ++i) x[i] = f[i] * std::sqrt(m_[i]);
  apply_sym(x, y);
  for (int i = 0; i < dim(); ++i) y[i] /= std::sqrt(m_[i]);
  return y;
}

double LaplacianOperator::energy(const std::vector<double>& f) const {
  auto df = apply(f);
  double e = 0;
  for (int i = 0; i < dim(); ++i) e += m_[i] * f[i] * df[i];
  return e;
}

double dirichlet_lambda_dense(const Graph& g, const VertexSet& U) {
  LaplacianOperator op(g, U);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense_sym(),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double dirichlet_lambda_lanczos(const Graph& g, const VertexSet& U) {
  LaplacianOperator op(g, U);
  const int n = op.dim();
  const int max_iter = std::min(n, 400);

  rng::Stream st(0x1a5c0000u);
  std::vector<std::vector<double>> V;
  std::vector<double> alpha, beta;
  std::vector<double> v(n), w(n);
  for (int i = 0; i < n; ++i) v[i] = st.next(-1.0, 1.0);
  double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (auto& x : v) x /= nrm;

  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_iter; ++k) {
    V.push_back(v);
    op.apply_sym(v, w);
    double a = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    alpha.push_back(a);
    for (int i = 0; i < n; ++i) w[i] -= a * v[i];
    if (k > 0)
      for (int i = 0; i < n; ++i) w[i] -= beta.back() * V[k - 1][i];
    // full reorthogonalization
    for (const auto& q : V) {
      double c = std::inner_product(q.begin(), q.end(), w.begin(), 0.0);
      for (int i = 0; i < n; ++i) w[i] -= c * q[i];
    }
    double b = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));

    if (k >= 2 || b < 1e-14) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (int i = 0; i <= k; ++i) T(i, i) = alpha[i];
      for (int i = 0; i < k; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
      double cur = es.eigenvalues()(0);
      if (b < 1e-14 || std::abs(cur - prev) < 1e-13 * std::max(1.0, std::abs(cur)))
        return cur;
      prev = cur;
    }
    if (b < 1e-14) break;
    beta.push_back(b);
    for (int i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  return prev;
}

double dirichlet_lambda(const Graph& g, const VertexSet& U) {
  if (U.vertices.empty()) throw GraphError("dirichlet_lambda: empty subset");
  if (static_cast<int>(U.vertices.size()) <= 2000) return dirichlet_lambda_dense(g, U);
  return dirichlet_lambda_lanczos(g, U);
}

}  // namespace heatlab
