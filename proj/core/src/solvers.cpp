#include "heatlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "heatlab/parallel.hpp"

namespace heatlab {
namespace {

// Both metric programs reduce to: maximize phi[x]-phi[y] over homogeneous
// quadratic constraints h_i(phi) <= 1. By homogeneity this is
// 1/sqrt(min over {phi[x]-phi[y]=1} of max_i h_i), and the inner minimax is
// smoothed by log-sum-exp with an increasing beta schedule. The returned
// value always comes from an exact rescale of the current iterate, so it is a
// feasible lower bound regardless of solver accuracy.
struct Potential {
  const Graph* g;
  std::vector<double> cap;   // per-vertex constraint level c_u
  double edge_cap = 0;       // jump cap S; 0 disables edge constraints
  int x = 0, y = 0;

  int constraint_count() const {
    return g->size() + (edge_cap > 0 ? static_cast<int>(g->edges().size()) : 0);
  }

  // h_i values for the current phi.
  void constraints(const std::vector<double>& phi, std::vector<double>& h) const {
    const int n = g->size();
    h.assign(constraint_count(), 0.0);
    for (std::size_t e = 0; e < g->edges().size(); ++e) {
      auto [u, v, b] = g->edges()[e];
      double d = phi[u] - phi[v];
      h[u] += b * d * d;
      h[v] += b * d * d;
      if (edge_cap > 0) h[n + e] = d * d / (edge_cap * edge_cap);
    }
    for (int u = 0; u < n; ++u) h[u] /= cap[u];
  }

  // Smoothed max M = (1/beta) log sum exp(beta h_i) and its gradient.
  double smoothed(const std::vector<double>& phi, double beta, std::vector<double>& grad,
                  std::vector<double>& h, std::vector<double>& w) const {
    const int n = g->size();
    constraints(phi, h);
    double hmax = *std::max_element(h.begin(), h.end());
    double z = 0;
    w.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      w[i] = std::exp(beta * (h[i] - hmax));
      z += w[i];
    }
    for (auto& wi : w) wi /= z;
    grad.assign(n, 0.0);
    for (std::size_t e = 0; e < g->edges().size(); ++e) {
      auto [u, v, b] = g->edges()[e];
      double d = phi[u] - phi[v];
      double c = 2.0 * b * d * (w[u] / cap[u] + w[v] / cap[v]);
      if (edge_cap > 0) c += 2.0 * d * w[n + e] / (edge_cap * edge_cap);
      grad[u] += c;
      grad[v] -= c;
    }
    grad[x] = 0;
    grad[y] = 0;
    return hmax + std::log(z) / beta;
  }

  // Hessian of the smoothed max at phi with weights w from smoothed():
  //   H = sum_i w_i grad^2 h_i + beta (sum_i w_i g_i g_i^T - gbar gbar^T),
  // g_i = grad h_i. Constraint gradients have star support, so the rank-one
  // terms stay cheap on sparse graphs.
  Eigen::MatrixXd hessian(const std::vector<double>& phi,
                          const std::vector<double>& w, double beta) const {
    const int n = g->size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    // sum_i w_i grad^2 h_i: a weighted graph Laplacian.
    for (std::size_t e = 0; e < g->edges().size(); ++e) {
      auto [u, v, b] = g->edges()[e];
      double omega = 2.0 * b * (w[u] / cap[u] + w[v] / cap[v]);
      if (edge_cap > 0) omega += 2.0 * w[n + e] / (edge_cap * edge_cap);
      H(u, u) += omega;
      H(v, v) += omega;
      H(u, v) -= omega;
      H(v, u) -= omega;
    }
    // Rank-one curvature of the soft-max.
    Eigen::VectorXd gbar = Eigen::VectorXd::Zero(n);
    std::vector<int> idx;
    std::vector<double> gv;
    auto add_rank_one = [&](double wi) {
      if (wi <= 0) return;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        gbar[idx[a]] += wi * gv[a];
        for (std::size_t c = 0; c < idx.size(); ++c)
          H(idx[a], idx[c]) += beta * wi * gv[a] * gv[c];
      }
    };
    for (int u = 0; u < n; ++u) {
      idx.assign(1, u);
      gv.assign(1, 0.0);
      for (auto [v, b] : g->neighbors(u)) {
        double d = 2.0 * b * (phi[u] - phi[v]) / cap[u];
        gv[0] += d;
        idx.push_back(v);
        gv.push_back(-d);
      }
      add_rank_one(w[u]);
    }
    if (edge_cap > 0)
      for (std::size_t e = 0; e < g->edges().size(); ++e) {
        auto [u, v, b] = g->edges()[e];
        double d = 2.0 * (phi[u] - phi[v]) / (edge_cap * edge_cap);
        idx = {u, v};
        gv = {d, -d};
        add_rank_one(w[n + e]);
      }
    H -= beta * gbar * gbar.transpose();
    return H;
  }
};

// Dual step: for simplex weights w over the constraints, the partial problem
// min { sum_i w_i h_i(phi) : phi[x] = 1, phi[y] = 0 } is a weighted-Laplacian
// solve with per-edge conductance
//   omega_e = b_e (w_u/c_u + w_v/c_v) + w_edge_e / S^2,
// and its value d(w) satisfies d(w) <= min max_i h_i, so 1/sqrt(d(w)) is an
// upper bound of the metric value. Returns {d(w), minimizer}; d(w) <= 0 when
// the solve fails.
std::pair<double, std::vector<double>> dual_step(const Potential& prob,
                                                 const std::vector<double>& w) {
  const int n = prob.g->size();
  std::vector<int> free_idx(n, -1);
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (i != prob.x && i != prob.y) free_idx[i] = nf++;

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  std::vector<double> diag(nf, 0.0);
  const auto& edges = prob.g->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v, b] = edges[e];
    double omega = b * (w[u] / prob.cap[u] + w[v] / prob.cap[v]);
    if (prob.edge_cap > 0)
      omega += w[n + e] / (prob.edge_cap * prob.edge_cap);
    int fu = free_idx[u], fv = free_idx[v];
    if (fu >= 0) diag[fu] += omega;
    if (fv >= 0) diag[fv] += omega;
    if (fu >= 0 && fv >= 0) {
      trip.emplace_back(fu, fv, -omega);
      trip.emplace_back(fv, fu, -omega);
    } else if (fu >= 0 && (v == prob.x)) {
      rhs[fu] += omega;
    } else if (fv >= 0 && (u == prob.x)) {
      rhs[fv] += omega;
    }
  }
  // Tiny Tikhonov shift keeps the factorization alive when some weights
  // underflow; it only perturbs d(w) at the 1e-14 relative level.
  double dmax = *std::max_element(diag.begin(), diag.end());
  for (int i = 0; i < nf; ++i) trip.emplace_back(i, i, diag[i] + 1e-14 * dmax);

  Eigen::SparseMatrix<double> L(nf, nf);
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(L);
  if (chol.info() != Eigen::Success) return {0.0, {}};
  Eigen::VectorXd sol = chol.solve(rhs);
  if (chol.info() != Eigen::Success) return {0.0, {}};

  std::vector<double> phi(n, 0.0);
  phi[prob.x] = 1.0;
  for (int i = 0; i < n; ++i)
    if (free_idx[i] >= 0) phi[i] = sol[free_idx[i]];
  double d = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v, b] = edges[e];
    double omega = b * (w[u] / prob.cap[u] + w[v] / prob.cap[v]);
    if (prob.edge_cap > 0)
      omega += w[n + e] / (prob.edge_cap * prob.edge_cap);
    double dphi = phi[u] - phi[v];
    d += omega * dphi * dphi;
  }
  return {d, std::move(phi)};
}

std::pair<double, SolverCertificate> solve_potential(const Potential& prob,
                                                     const std::vector<double>& warm,
                                                     double tol) {
  const int n = prob.g->size();
  SolverCertificate cert;
  cert.tolerance = tol;
  if (prob.x == prob.y) {
    cert.converged = true;
    return {0.0, cert};
  }

  std::vector<double> phi = warm;
  phi[prob.x] = 1.0;
  phi[prob.y] = 0.0;

  std::vector<double> h, w, grad, grad2, trial;

  // With only the two pinned vertices the problem is fully determined.
  if (n == 2) {
    prob.constraints(phi, h);
    double hm = *std::max_element(h.begin(), h.end());
    cert.objective = 1.0 / std::sqrt(hm);
    cert.converged = true;
    cert.gap = 0.0;
    return {cert.objective, cert};
  }

  auto hmax_of = [&](const std::vector<double>& p) {
    prob.constraints(p, h);
    return *std::max_element(h.begin(), h.end());
  };

  double best_hmax = hmax_of(phi);
  std::vector<double> best_phi = phi;
  double best_upper = std::numeric_limits<double>::infinity();
  double scale = 16.0;  // beta * hmax target
  for (int stage = 0; stage < 80; ++stage) {
    double hm = hmax_of(phi);
    double beta = scale / std::max(hm, 1e-300);

    // Damped Newton on the smoothed max over the free coordinates.
    std::vector<int> free_of(n, -1);
    int nf = 0;
    for (int i = 0; i < n; ++i)
      if (i != prob.x && i != prob.y) free_of[i] = nf++;
    double f = prob.smoothed(phi, beta, grad, h, w);
    double mu = 0;
    for (int it = 0; it < 60; ++it) {
      double gnorm2 = 0;
      for (double gi : grad) gnorm2 += gi * gi;
      if (gnorm2 < 1e-24 * (1.0 + f * f)) break;

      Eigen::MatrixXd H = prob.hessian(phi, w, beta);
      Eigen::MatrixXd Hf(nf, nf);
      Eigen::VectorXd gf(nf);
      for (int i = 0; i < n; ++i) {
        if (free_of[i] < 0) continue;
        gf[free_of[i]] = grad[i];
        for (int j = 0; j < n; ++j)
          if (free_of[j] >= 0) Hf(free_of[i], free_of[j]) = H(i, j);
      }
      double hscale = Hf.diagonal().cwiseAbs().maxCoeff() + 1e-300;

      trial.resize(n);
      bool accepted = false;
      for (int lev = 0; lev < 30 && !accepted; ++lev) {
        Eigen::LLT<Eigen::MatrixXd> llt(
            Hf + (mu * hscale) * Eigen::MatrixXd::Identity(nf, nf));
        if (llt.info() == Eigen::Success) {
          Eigen::VectorXd dir = llt.solve(-gf);
          double slope = gf.dot(dir);  // negative descent slope
          double step = 1.0;
          for (int bt = 0; bt < 40; ++bt) {
            trial = phi;
            for (int i = 0; i < n; ++i)
              if (free_of[i] >= 0) trial[i] += step * dir[free_of[i]];
            double f2 = prob.smoothed(trial, beta, grad2, h, w);
            if (f2 <= f + 1e-4 * step * slope) {
              phi.swap(trial);
              grad.swap(grad2);
              f = f2;
              accepted = true;
              break;
            }
            step *= 0.5;
          }
        }
        if (!accepted) mu = mu > 0 ? mu * 10.0 : 1e-12;
      }
      ++cert.iterations;
      if (!accepted) break;
      mu = std::max(mu / 10.0, 0.0);
      if (mu < 1e-14) mu = 0;
    }

    double hm2 = hmax_of(phi);
    if (hm2 < best_hmax) {
      best_hmax = hm2;
      best_phi = phi;
    }

    // Duality gap: LSE weights at the current point feed the dual step; the
    // dual minimizer is also a strong primal candidate (reweighted solve).
    prob.smoothed(phi, beta, grad, h, w);
    auto [d, dual_phi] = dual_step(prob, w);
    if (d > 0) {
      best_upper = std::min(best_upper, 1.0 / std::sqrt(d));
      double hd = hmax_of(dual_phi);
      if (hd < best_hmax) {
        best_hmax = hd;
        best_phi = dual_phi;
      }
      if (hd < hm2) phi = dual_phi;
    }
    double lower = 1.0 / std::sqrt(best_hmax);
    cert.gap = best_upper - lower;
    if (*cert.gap <= tol) {
      cert.converged = true;
      break;
    }
    scale *= 4.0;
  }

  phi = best_phi;
  // Exact rescale onto the feasible set; residual is fp noise only.
  double hm = hmax_of(phi);
  std::vector<double> psi(n);
  double r = 1.0 / std::sqrt(hm);
  for (int i = 0; i < n; ++i) psi[i] = phi[i] * r;
  prob.constraints(psi, h);
  double worst = *std::max_element(h.begin(), h.end());
  cert.residual = std::max(0.0, worst - 1.0);
  cert.objective = psi[prob.x] - psi[prob.y];
  return {cert.objective, cert};
}

std::vector<double> warm_start(const Graph& g, int x, int y) {
  PseudoMetric pd = path_degree_metric(g, 1.0);
  auto row = pd.row(y);
  double dxy = row[x] > 0 ? row[x] : 1.0;
  std::vector<double> phi(g.size());
  for (int u = 0; u < g.size(); ++u) phi[u] = std::min(row[u], dxy) / dxy;
  return phi;
}

Potential davies_problem(const Graph& g, int x, int y) {
  Potential p;
  p.g = &g;
  p.x = x;
  p.y = y;
  p.cap.resize(g.size());
  for (int u = 0; u < g.size(); ++u) p.cap[u] = 2.0 * g.measure(u);
  return p;
}

Potential intrinsic_problem(const Graph& g, int x, int y, double S) {
  Potential p;
  p.g = &g;
  p.x = x;
  p.y = y;
  p.edge_cap = S;
  p.cap.resize(g.size());
  for (int u = 0; u < g.size(); ++u) p.cap[u] = g.measure(u);
  return p;
}

}  // namespace

std::pair<double, SolverCertificate> davies_metric(const Graph& g, int x, int y, double tol) {
  if (!(tol > 0)) throw GraphError("solver tolerance must be positive");
  return solve_potential(davies_problem(g, x, y), warm_start(g, x, y), tol);
}

std::pair<double, SolverCertificate> max_intrinsic_metric(const Graph& g, int x, int y,
                                                          double S, double tol) {
  if (!(S > 0)) throw GraphError("jump size S must be positive");
  if (!(tol > 0)) throw GraphError("solver tolerance must be positive");
  return solve_potential(intrinsic_problem(g, x, y, S), warm_start(g, x, y), tol);
}

void triangle_closure(std::vector<double>& table, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      double v = std::min(table[i * n + j], table[j * n + i]);
      table[i * n + j] = table[j * n + i] = v;
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double ik = table[i * n + k];
      for (int j = 0; j < n; ++j) {
        double v = ik + table[k * n + j];
        if (v < table[i * n + j]) table[i * n + j] = table[j * n + i] = v;
      }
    }
}

namespace {

PseudoMetric solve_table(const Graph& g, double tol, MetricProvenance prov,
                         std::optional<double> S) {
  const int n = g.size();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) pairs.push_back({i, j});

  std::vector<double> table(static_cast<std::size_t>(n) * n, 0.0);
  parallel_for(pairs.size(), [&](std::size_t k) {
    auto [i, j] = pairs[k];
    double v = S ? max_intrinsic_metric(g, i, j, *S, tol).first
                 : davies_metric(g, i, j, tol).first;
    table[static_cast<std::size_t>(i) * n + j] = v;
    table[static_cast<std::size_t>(j) * n + i] = v;
  });
  triangle_closure(table, n);
  return PseudoMetric::from_table(g, std::move(table), prov, S);
}

}  // namespace

PseudoMetric davies_metric_table(const Graph& g, double tol) {
  return solve_table(g, tol, MetricProvenance::Davies, std::nullopt);
}

PseudoMetric max_intrinsic_table(const Graph& g, double S, double tol) {
  return solve_table(g, tol, MetricProvenance::MaxIntrinsic, S);
}

double regularity_constant(const Graph& g, double tol) {
  std::vector<double> vals(g.edges().size());
  parallel_for(vals.size(), [&](std::size_t e) {
    auto [u, v, b] = g.edges()[e];
    vals[e] = davies_metric(g, u, v, tol).first;
  });
  double s = 0;
  for (double v : vals) s = std::max(s, v);
  return s;
}

}  // namespace heatlab
