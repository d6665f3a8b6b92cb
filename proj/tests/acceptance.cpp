// Acceptance gate: runs the fourteen release criteria and prints one
// pass/fail line each. Exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "heatlab/bounds.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/laplacian.hpp"
#include "heatlab/line_kernel.hpp"
#include "heatlab/metric.hpp"
#include "heatlab/solvers.hpp"
#include "heatlab/verifier.hpp"

using namespace heatlab;

namespace {

int failures = 0;

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void line(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. expm-action exhaustion vs the exact integer-line kernel.
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  auto fam = FamilySpec::lattice(1);
  double worst = 0;
  for (double t : {0.5, 1.0, 5.0, 20.0})
    for (long d = 0; d <= 20; ++d) {
      auto res = heat_kernel_exhaustion(fam, t, std::to_string(d), "0", 1e-12);
      double exact = exact_integer_line_kernel(d, t);
      worst = std::max(worst, std::abs(res.value - exact) / exact);
    }
  double el = elapsed_since(t0);
  line(1, worst < 1e-8 && el < 60,
       fmt("worst_rel=%.2e elapsed=%.1fs (limits 1e-8, 60s)", worst, el));
}

// 2. Pang sandwich: finite fitted c, stable under grid refinement.
void criterion2() {
  auto rep = fit_pang_constant(30, log_t_grid(0.1, 100, 40));
  auto fine = fit_pang_constant(30, log_t_grid(0.1, 100, 80));
  double c = rep.fitted_log_c ? std::exp(*rep.fitted_log_c) : 0;
  double cf = fine.fitted_log_c ? std::exp(*fine.fitted_log_c) : 0;
  bool ok = rep.pass && fine.pass && std::isfinite(c) && c >= 1 &&
            std::abs(cf - c) <= 0.01 * c;
  line(2, ok, fmt("c=%.6f refined=%.6f (drift limit 1%%)", c, cf));
}

// 3. zeta quadratic asymptotics and short-time decay.
void criterion3() {
  double d = 3, t = 1000;
  double ratio = 2 * t * zeta(d / (2 * t)) / (d * d / (4 * t));
  Graph g = build_lattice_box(1, 40, ConductanceRule::constant(1),
                              MeasureRule::constant(1));
  double p = heat_kernel_value(g, 1e-3, g.index_of("1"), g.index_of("0"),
                               KernelBackend::ExpmAction);
  bool ok = std::abs(ratio - 1) < 0.01 && 1e-3 * p < 1e-5;
  line(3, ok, fmt("|2t zeta/(d^2/4t)-1|=%.2e  t*p_t(0,1)=%.2e", std::abs(ratio - 1),
                  1e-3 * p));
}

// 4. Universal bound campaigns on three families.
void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  auto t_grid = log_t_grid(0.1, 50, 40);
  bool ok = true;
  double worst = -1e300;

  {
    Graph g = build_lattice_box(1, 60, ConductanceRule::constant(1),
                                MeasureRule::constant(1));
    PairSet pairs;
    for (int a = -20; a <= 20; ++a)
      for (int b = a; b <= 20; ++b)
        pairs.push_back({g.index_of(std::to_string(a)), g.index_of(std::to_string(b))});
    auto rep = verify_universal(g, path_degree_metric(g, 1.0), 1.0, t_grid, pairs);
    ok = ok && rep.pass;
    worst = std::max(worst, rep.worst_log_ratio);
  }
  {
    Graph g = build_lattice_box(2, 15, ConductanceRule::iid_uniform(1, 2, 7),
                                MeasureRule::constant(1));
    auto rep = verify_universal(g, path_degree_metric(g, 1.0), 1.0, t_grid, all_pairs(g));
    ok = ok && rep.pass;
    worst = std::max(worst, rep.worst_log_ratio);
  }
  {
    Graph g = build_anti_tree(0.5, 12);
    auto rep = verify_universal(g, path_degree_metric(g, 1.0), 1.0, t_grid, all_pairs(g));
    ok = ok && rep.pass;
    worst = std::max(worst, rep.worst_log_ratio);
  }
  double el = elapsed_since(t0);
  ok = ok && el < 600;
  line(4, ok, fmt("worst_log_ratio=%.2e elapsed=%.0fs (limits 1e-10, 600s)", worst, el));
}

// 5. Davies bound on the line.
void criterion5() {
  Graph g = build_lattice_box(1, 20, ConductanceRule::constant(1),
                              MeasureRule::constant(1));
  auto rep = verify_davies(g, log_t_grid(0.5, 20, 40), all_pairs(g), 1e-6);
  line(5, rep.pass, fmt("worst_log_ratio=%.2e points=%.0f", rep.worst_log_ratio,
                        static_cast<double>(rep.total_points)));
}

// 6. Metric solvers vs closed forms and the frozen oracle table.
void criterion6() {
  struct Frozen {
    std::uint64_t seed;
    double rho_e, rho_s;
  };
  static const Frozen table[] = {
      {1, 1.5118095169, 1.0000000000}, {2, 2.6510161923, 1.8725163223},
      {3, 1.1948603480, 0.8448938547}, {4, 1.2842864772, 0.9081276770},
      {5, 1.3330919263, 0.9426383410}, {6, 0.9691282062, 0.6852771264},
      {7, 1.3119529834, 0.9276908511}, {8, 1.1130594043, 0.7870518526},
      {9, 1.3198364806, 0.9332653255}, {10, 1.6511847299, 1.0000000000},
  };
  double worst = 0;
  Graph p2 = Graph::build({{"a", 1}, {"b", 1}}, {{"a", "b", 1}});
  worst = std::max(worst,
                   std::abs(davies_metric(p2, 0, 1, 1e-7).first - std::sqrt(2.0)));
  Graph p3 = build_lattice_box(1, 1, ConductanceRule::constant(1),
                               MeasureRule::constant(1));
  worst = std::max(
      worst,
      std::abs(davies_metric(p3, p3.index_of("-1"), p3.index_of("1"), 1e-7).first - 2.0));
  for (const auto& fc : table) {
    Graph g = build_random_connected(6, fc.seed);
    worst = std::max(worst,
                     std::abs(davies_metric(g, 0, g.size() - 1, 1e-7).first - fc.rho_e));
    worst = std::max(
        worst,
        std::abs(max_intrinsic_metric(g, 0, g.size() - 1, 1.0, 1e-7).first - fc.rho_s));
  }
  line(6, worst < 1e-4, fmt("worst_abs_err=%.2e (limit 1e-4)", worst));
}

// 7. sqrt(2) rho_S <= rho_E across 20 random graphs; reverse on the regular subset.
void criterion7() {
  int viol = 0, reverse_applicable = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Graph g = build_random_connected(12, seed);
    auto rep = lemma_metric_comparison(g, 1.0, 1e-5);
    if (!rep.pass) ++viol;
    for (auto& [k, v] : rep.stats)
      if (k == "reverse_applicable" && v == 1.0) ++reverse_applicable;
  }
  line(7, viol == 0 && reverse_applicable > 0,
       fmt("violating_graphs=%.0f reverse_subset=%.0f", static_cast<double>(viol),
           static_cast<double>(reverse_applicable)));
}

// 8. Z^2 metric ratios trend toward sqrt(2) k.
void criterion8() {
  auto rep = davies_z2_trend({2, 4, 6, 8}, 1e-6);
  std::string detail = "ratios:";
  for (auto& [k, v] : rep.stats)
    if (k.rfind("ratio_k", 0) == 0) detail += " " + fmt("%.3f", v);
  line(8, rep.pass, detail + " (window [0.9,1.5], nonincreasing)");
}

// 9. Semigroup identities on every test family plus eigenvalue backend agreement.
void criterion9() {
  std::vector<Graph> graphs;
  graphs.push_back(build_lattice_box(1, 10, ConductanceRule::constant(1),
                                     MeasureRule::constant(1)));
  graphs.push_back(build_lattice_box(2, 4, ConductanceRule::iid_uniform(0.5, 2, 11),
                                     MeasureRule::normalizing()));
  graphs.push_back(build_anti_tree(0.5, 8));
  graphs.push_back(build_random_connected(12, 17));

  double worst_ck = 0, worst_sym = 0, worst_mass = 0, worst_id = 0;
  bool mono_ok = true;
  for (const auto& g : graphs) {
    DenseHeatKernel k(g);
    double t = 0.8, s = 1.7;
    for (int x = 0; x < g.size(); ++x) {
      worst_id = std::max(worst_id, std::abs(k.at(0, x, x) - 1.0 / g.measure(x)));
      double mass = 0;
      for (int y = 0; y < g.size(); ++y) {
        worst_sym = std::max(worst_sym, std::abs(k.at(t, x, y) - k.at(t, y, x)));
        if (y != x) worst_id = std::max(worst_id, std::abs(k.at(0, x, y)));
        mass += k.at(t, x, y) * g.measure(y);
        double conv = 0;
        for (int z = 0; z < g.size(); ++z)
          conv += k.at(t, x, z) * k.at(s, z, y) * g.measure(z);
        worst_ck = std::max(worst_ck, std::abs(conv - k.at(t + s, x, y)));
      }
      worst_mass = std::max(worst_mass, mass - 1.0);
    }
    // Dirichlet domain monotonicity: drop the last vertex
    std::vector<int> in;
    for (int v = 0; v + 1 < g.size(); ++v) in.push_back(v);
    DenseHeatKernel kd(g, VertexSet::of(g, std::move(in)));
    for (int x = 0; x + 1 < g.size(); ++x)
      if (kd.at(t, x, 0) > k.at(t, x, 0) + 1e-12) mono_ok = false;
  }

  Graph g = build_lattice_box(2, 7, ConductanceRule::iid_uniform(1, 2, 3),
                              MeasureRule::constant(1));
  std::vector<int> in;
  for (int v = 0; v < g.size() && static_cast<int>(in.size()) < 200; v += 2)
    in.push_back(v);
  auto u = VertexSet::of(g, std::move(in));
  double lam_rel = std::abs(dirichlet_lambda_dense(g, u) - dirichlet_lambda_lanczos(g, u)) /
                   dirichlet_lambda_dense(g, u);

  bool ok = worst_ck < 1e-9 && worst_sym < 1e-12 && worst_mass < 1e-12 &&
            worst_id < 1e-12 && mono_ok && lam_rel < 1e-8;
  line(9, ok, fmt("ck=%.1e mass_excess=%.1e lambda_rel=%.1e", worst_ck, worst_mass,
                  lam_rel));
}

// 10. Error-function formulas vs hand-derived constants.
void criterion10() {
  ErrorParams p{1, 1, 1};
  double c_theta_want = 3.0 * std::cbrt(288.0);  // 19.8116...
  double tau_want = 0.5 / std::pow(std::asinh(4.0), 2);  // 0.11396...
  double np_want =
      std::log(20001.0) / (std::log(1e4) - 4.0 * std::log(std::log(1e4)));  // 30.1
  auto logvol = [](double lr) { return std::log(2.0 * std::exp(lr) + 1.0); };
  auto loginv = [](double) { return 0.0; };
  double np = dimension_prime(1, 1e4, logvol, loginv, 0.0);
  double e1 = std::abs(p.c_theta() - c_theta_want) / c_theta_want;
  double e2 = std::abs(tau_rho(1, 4, 1) - tau_want) / tau_want;
  double e3 = std::abs(np - np_want) / np_want;
  bool ok = e1 < 1e-6 && e2 < 1e-6 && e3 < 1e-6 &&
            std::abs(p.c_theta() - 19.8116) < 1e-4 &&
            std::abs(tau_rho(1, 4, 1) - 0.11396) < 1e-5 && std::abs(np - 30.1) < 0.05;
  line(10, ok, fmt("C_theta=%.6f tau=%.6f n'=%.4f", p.c_theta(), tau_rho(1, 4, 1), np));
}

// 11. Composite forward campaign on the line with the Psi/Phi error forms.
void criterion11() {
  double S = 1.0 / std::sqrt(2.0);
  Graph g = build_lattice_box(1, 600, ConductanceRule::constant(1),
                              MeasureRule::constant(1));
  auto rho = path_degree_metric(g, S);
  ErrorParams params{1, 750, S};
  // translation invariance: pairs (d, 0) cover all |x|,|y| <= 200 gaps
  PairSet pairs;
  int y0 = g.index_of("0");
  for (int d = 0; d <= 400; ++d) pairs.push_back({g.index_of(std::to_string(d)), y0});
  std::vector<std::pair<double, double>> rp;
  for (double r : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0})
    for (double R : {2.0, 5.0, 10.0, 50.0, 100.0, 200.0})
      if (R >= r) rp.push_back({r, R});
  auto rep = forward_composite_check(g, rho, S, params, 1.0, log_t_grid(1, 1e4, 40),
                                     pairs, {y0, g.index_of("100")}, rp);
  // Psi -> 1 for large t
  bool psi_ok = true;
  double prev = 1e300;
  for (double t : {1e4, 1e8, 1e16, 1e30}) {
    double lp = log_psi(t, 1.0, S, 2.0, 2.0, params);
    if (!(lp >= 0) || !(lp < prev)) psi_ok = false;
    prev = lp;
  }
  psi_ok = psi_ok && prev < 1e-3;
  bool ok = rep.gaussian.pass && rep.doubling.pass && !rep.hypothesis_relaxed &&
            rep.joint_log_c <= std::log(1e3) && psi_ok;
  line(11, ok, fmt("joint_C=%.4f (limit 1e3)  psi_tail=%.1e", std::exp(rep.joint_log_c),
                   prev));
}

// 12. Anti-tree bound with a fitted constant on the radial quotient.
void criterion12() {
  auto t0 = std::chrono::steady_clock::now();
  auto rep = verify_antitree(0.5, 600, {10368.0, 1.5e4, 2e4}, 50, 101);
  double el = elapsed_since(t0);
  bool ok = rep.display1.pass && rep.display1.violations.empty() &&
            rep.display1.total_points >= 50 && std::isfinite(rep.fitted_c1) && el < 900;
  line(12, ok, fmt("fitted_C=%.4f points=%.0f elapsed=%.0fs", rep.fitted_c1,
                   static_cast<double>(rep.display1.total_points), el));
}

// 13. Nash functional: the delta member gives exactly 1/2 on the line.
void criterion13() {
  Graph g = build_lattice_box(1, 30, ConductanceRule::constant(1),
                              MeasureRule::constant(1));
  auto rho = combinatorial_metric(g);
  int o = g.index_of("0");
  auto bare = nash_probe(g, 1, {o}, nullptr, {}, {});
  auto with_balls =
      nash_probe(g, 1, {o}, &rho, {{o, 3}, {o, 6}, {g.index_of("5"), 4}}, {});
  double delta_c = 0;
  for (auto& m : bare.members)
    if (m.label == "delta:0") delta_c = m.contribution;
  bool ok = std::abs(delta_c - 0.5) < 1e-12 && bare.c_min >= 0.5 &&
            with_balls.c_min == bare.c_min;
  line(13, ok, fmt("delta_member=%.12f c_min=%.12f (stable under balls)", delta_c,
                   with_balls.c_min));
}

// 14. Bella-form fit on a disordered Z^2 box.
void criterion14() {
  Graph g = build_lattice_box(2, 30, ConductanceRule::iid_uniform(0.5, 2, 11),
                              MeasureRule::constant(1));
  auto rho = path_degree_metric(g, 1.0);
  PairSet pairs;
  int c = g.index_of("0,0");
  for (int v = 0; v < g.size(); v += 37) pairs.push_back({v, c});
  auto fit = fit_bella_constant(g, rho, 2, log_t_grid(1, 100, 20), pairs);
  bool ok = fit.base.pass && std::isfinite(fit.fitted_c) && fit.fitted_c >= 1 &&
            fit.base.total_points > 0;
  line(14, ok, fmt("fitted_c=%.4f points=%.0f", fit.fitted_c,
                   static_cast<double>(fit.base.total_points)));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  criterion13();
  criterion14();
  std::printf("%s (%d/14)\n", failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              14 - failures);
  return failures == 0 ? 0 : 1;
}
