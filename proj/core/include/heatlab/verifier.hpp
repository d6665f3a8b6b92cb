#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/bounds.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/metric.hpp"
#include "heatlab/solvers.hpp"

namespace heatlab {

struct GridPoint {
  double t = 0;
  std::string x, y;
  double lhs_log = 0;
  double rhs_log = 0;
  double ratio_log() const { return lhs_log - rhs_log; }
};

struct BoundReport {
  std::string campaign;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<GridPoint> points;      // stored up to point_cap; stats stay exact
  std::vector<GridPoint> violations;  // ratio_log > tolerance
  std::size_t point_cap = 2000000;
  std::size_t total_points = 0;
  double worst_log_ratio = 0;
  std::optional<double> fitted_log_c;  // smallest ln C making the bound hold
  std::vector<std::pair<std::string, double>> stats;
  std::vector<std::string> notes;
  double tolerance = 0;
  bool pass = true;
  std::uint64_t graph_hash = 0;
  std::string metric_provenance;
  std::string backend;

  void add(GridPoint p);
  void finish();  // pass = violations empty; fitted from worst ratio
};

std::string report_json(const BoundReport& rep);
std::string report_csv(const BoundReport& rep);

// Log-spaced time grid, `per_decade` points per decade, endpoints included.
std::vector<double> log_t_grid(double tmin, double tmax, int per_decade);

using PairSet = std::vector<std::pair<int, int>>;
PairSet all_pairs(const Graph& g, bool include_diagonal = true);

// Universal bound: p_t(x,y) <= universal_rhs. Refuses non-intrinsic metrics or
// jump size beyond S. Positive-sum expm backend keeps relative accuracy of
// tiny kernel values.
BoundReport verify_universal(const Graph& g, const PseudoMetric& rho, double S,
                             const std::vector<double>& t_grid, const PairSet& pairs,
                             KernelBackend backend = KernelBackend::ExpmAction,
                             double tol = 1e-10);

// Davies' bound with S = regularity_constant and rho_E from the metric solver.
BoundReport verify_davies(const Graph& g, const std::vector<double>& t_grid,
                          const PairSet& pairs, double solver_tol);

// Smallest c >= 1 so that both sides of Pang's sandwich hold on the grid.
BoundReport fit_pang_constant(long d_max, const std::vector<double>& t_grid);

struct SubsetFamily {
  enum class Kind { AllBalls, RandomSubsets, HeatSublevel } kind = Kind::AllBalls;
  int count = 20;
  std::uint64_t seed = 0;
  std::vector<double> thresholds;  // relative to the column maximum
  double t = 1.0;

  static SubsetFamily all_balls();
  static SubsetFamily random_subsets(int count, std::uint64_t seed);
  static SubsetFamily heat_sublevel(std::vector<double> thresholds, double t);

  std::vector<VertexSet> realize(const Graph& g, const PseudoMetric& rho, int center,
                                 double R) const;
};

// a_est = min over sampled U of lambda(U) R^2 (m(U)/m(B))^{2/n}; an upper
// bound on the true FK constant (the universal quantifier is sampled).
BoundReport verify_fk(const Graph& g, const PseudoMetric& rho, int center, double R,
                      double n, const SubsetFamily& family);

// Volume doubling against vd_rhs; log_phi(x, r) supplies ln Phi_x(r).
BoundReport verify_vd(const Graph& g, const PseudoMetric& rho,
                      const std::vector<int>& centers,
                      const std::vector<std::pair<double, double>>& radius_pairs,
                      double N, const std::function<double(int, double)>& log_phi);

// Gaussian upper bound against g_rhs; log_psi_fn(x, y, t) supplies ln Psi.
// Ball volumes at sqrt(t) are computed from the metric, so sqrt(tmax) must
// stay inside the graph.
BoundReport verify_g(const Graph& g, const PseudoMetric& rho, double S,
                     const std::vector<double>& t_grid, const PairSet& pairs, double N,
                     const std::function<double(int, int, double)>& log_psi_fn,
                     KernelBackend backend = KernelBackend::ExpmAction);

// Forward composite: from an FK-style hypothesis at scale r, check the
// Gaussian bound with the Psi-form RHS and volume doubling with the Phi-form
// RHS, each with a fitted C; joint_log_c is the single constant serving both.
// hypothesis_relaxed flags r < 1000 S.
struct CompositeForwardReport {
  BoundReport gaussian;
  BoundReport doubling;
  double joint_log_c = 0;
  bool hypothesis_relaxed = false;
};
CompositeForwardReport forward_composite_check(
    const Graph& g, const PseudoMetric& rho, double S, const ErrorParams& params,
    double N, const std::vector<double>& t_grid, const PairSet& pairs,
    const std::vector<int>& vd_centers,
    const std::vector<std::pair<double, double>>& vd_radius_pairs,
    KernelBackend backend = KernelBackend::ExpmAction);

// Metric comparison lemma: sqrt(2) rho_S <= rho_E everywhere; the reverse when the
// regularity constant is at most sqrt(2) S.
BoundReport lemma_metric_comparison(const Graph& g, double S, double tol);

// rho_E(0,(k,k)) / (sqrt(2) k) on Z^2 boxes of radius 2k.
BoundReport davies_z2_trend(const std::vector<int>& k_list, double solver_tol);

// Grigor'yan two-point transfer: fits (c1,c2,c3) for
// p_t(x,y) <= c1 / (sqrt(m_x m_y) sqrt(f_x(c2 t) f_y(c2 t))) e^{-c3 rho^2/t}
// over grid t >= rho(x,y), after validating the on-diagonal hypothesis.
struct TransferFit {
  bool hypothesis_ok = false;
  double c1 = 0, c2 = 0, c3 = 0;
  BoundReport base;
};
TransferFit two_point_transfer_check(const Graph& g, const PseudoMetric& rho, int x,
                                     int y, const std::function<double(double)>& f_x,
                                     const std::function<double(double)>& f_y, double A,
                                     double gamma, double delta,
                                     const std::vector<double>& t_grid,
                                     KernelBackend backend = KernelBackend::ExpmAction);

// Anti-tree campaign on the radial quotient (valid for |x| != |y|): fits C in
// both displayed bounds over admissible grid points.
struct AntitreeReport {
  double n = 0;
  double fitted_c1 = 0;  // first display, multiplicative
  double fitted_c2 = 0;  // second display, bisected (C sits in the exponent too)
  BoundReport display1;
  BoundReport display2;
};
AntitreeReport verify_antitree(double gamma, int levels,
                               const std::vector<double>& t_grid, int pair_count,
                               std::uint64_t seed);

// Nash functional probe: c_min = max over family members of
// ||f||_2^{2+4/n} / (E(f) ||f||_1^{4/n}); a lower bound on any Nash constant.
struct NashMember {
  std::string label;
  double contribution = 0;
};
struct NashReport {
  double c_min = 0;
  std::vector<NashMember> members;
  int skipped = 0;  // E(f) = 0 members
};
NashReport nash_probe(const Graph& g, double n, const std::vector<int>& delta_vertices,
                      const PseudoMetric* ball_metric,
                      const std::vector<std::pair<int, double>>& balls,
                      const std::vector<std::pair<int, double>>& heat_columns);

// Bella-form fit: smallest c >= 1 with p_t(x,y) <= c t^{-n/2} e^{-rho^2/(c t)}
// over grid t >= rho(x,y).
struct BellaFit {
  double fitted_c = 0;
  BoundReport base;
};
BellaFit fit_bella_constant(const Graph& g, const PseudoMetric& rho, double n,
                            const std::vector<double>& t_grid, const PairSet& pairs,
                            KernelBackend backend = KernelBackend::ExpmAction);

}  // namespace heatlab
