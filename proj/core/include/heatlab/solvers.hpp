#pragma once

#include <optional>
#include <utility>

#include "heatlab/metric.hpp"

namespace heatlab {

struct SolverCertificate {
  double objective = 0;
  double residual = 0;      // max constraint violation of the returned point
  int iterations = 0;
  std::optional<double> gap;  // last inter-stage objective change
  double tolerance = 0;
  bool converged = false;
};

// Davies' form metric rho_E(x,y) = sup psi(x)-psi(y) over
// (1/(2 m(z))) sum_w b(z,w)(psi(z)-psi(w))^2 <= 1 for every z.
// The returned value comes from an exactly rescaled feasible psi, so it is a
// certified lower bound of the optimum.
std::pair<double, SolverCertificate> davies_metric(const Graph& g, int x, int y, double tol);

// Maximal intrinsic metric rho_S(x,y): sup of rho(x,y) over intrinsic metrics
// with jump size <= S. Solved in potential form (phi_u = rho(u,y) at the
// optimum): maximize phi_x - phi_y over
//   sum_w b(u,w)(phi_u - phi_w)^2 <= m(u) for every u,
//   |phi_u - phi_v| <= S on edges.
std::pair<double, SolverCertificate> max_intrinsic_metric(const Graph& g, int x, int y,
                                                          double S, double tol);

// Full pairwise tables; triangle inequalities enforced by a min-plus closure
// (values can only shrink, preserving the lower-bound certificates).
PseudoMetric davies_metric_table(const Graph& g, double tol);
PseudoMetric max_intrinsic_table(const Graph& g, double S, double tol);

// max over edges (u,v) of davies_metric(u,v).
double regularity_constant(const Graph& g, double tol);

// Min-plus (Floyd-Warshall) closure of a symmetric n*n table, in place.
void triangle_closure(std::vector<double>& table, int n);

}  // namespace heatlab
