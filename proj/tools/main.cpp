// Command-line front end: build | kernel | metric | verify | report.
// Exit codes: 0 pass, 2 bound violation, 1 error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatlab/bounds.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/io.hpp"
#include "heatlab/metric.hpp"
#include "heatlab/solvers.hpp"
#include "heatlab/verifier.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string provenance_header(int argc, char** argv, std::uint64_t seed) {
  std::ostringstream canon;
  for (int i = 1; i < argc; ++i) canon << argv[i] << '\n';
  std::ostringstream out;
  out << "# heatlab " << kVersion << " config_hash=" << heatlab::config_hash(canon.str())
      << " seed=" << seed << "\n";
  return out.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    heatlab::write_text_file(path, text);
}

heatlab::PseudoMetric make_metric(const heatlab::Graph& g, const std::string& kind,
                                  double S, double tol) {
  if (kind == "combinatorial") return heatlab::combinatorial_metric(g);
  if (kind == "path-degree") return heatlab::path_degree_metric(g, S);
  if (kind == "chemical") return heatlab::chemical_distance(g);
  if (kind == "davies") return heatlab::davies_metric_table(g, tol);
  if (kind == "max-intrinsic") return heatlab::max_intrinsic_table(g, S, tol);
  throw heatlab::GraphError("unknown metric kind: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace heatlab;
  CLI::App app{"heat kernel bound laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // ---- build ----
  auto* build = app.add_subcommand("build", "construct a graph and write JSON");
  std::string family, out_path;
  int dim = 1, radius = 10, levels = 4, max_vertices = 12;
  double gamma = 0.5, b_const = 1.0, m_const = 1.0;
  std::vector<double> b_iid;
  bool m_normalizing = false;
  std::uint64_t seed = 0;
  build->add_option("family", family, "lattice | anti-tree | random")->required();
  build->add_option("--dim", dim);
  build->add_option("--radius", radius);
  build->add_option("--gamma", gamma);
  build->add_option("--levels", levels);
  build->add_option("--max-vertices", max_vertices);
  build->add_option("--b", b_const, "constant conductance");
  build->add_option("--b-iid", b_iid, "lo hi: iid uniform conductances")->expected(2);
  build->add_option("--m", m_const, "constant measure");
  build->add_flag("--m-normalizing", m_normalizing, "m = deg");
  build->add_option("--seed", seed);
  build->add_option("-o,--out", out_path);

  // ---- kernel ----
  auto* kernel = app.add_subcommand("kernel", "heat kernel values as CSV");
  std::string graph_path, backend_name = "expm";
  std::vector<double> t_list;
  double tmin = 0, tmax = 0;
  int per_decade = 40;
  std::vector<std::string> x_ids, y_ids;
  kernel->add_option("graph", graph_path)->required();
  kernel->add_option("--t", t_list, "explicit time points");
  kernel->add_option("--tmin", tmin);
  kernel->add_option("--tmax", tmax);
  kernel->add_option("--per-decade", per_decade);
  kernel->add_option("--x", x_ids, "source vertex ids")->required();
  kernel->add_option("--y", y_ids, "target vertex ids")->required();
  kernel->add_option("--backend", backend_name, "dense | expm");
  kernel->add_option("-o,--out", out_path);

  // ---- metric ----
  auto* metric = app.add_subcommand("metric", "pairwise metric table as CSV");
  std::string metric_kind = "path-degree";
  double S = 1.0, solver_tol = 1e-6;
  metric->add_option("graph", graph_path)->required();
  metric->add_option("--kind", metric_kind,
                     "combinatorial | path-degree | chemical | davies | max-intrinsic");
  metric->add_option("--S", S, "jump size bound");
  metric->add_option("--tol", solver_tol);
  metric->add_option("-o,--out", out_path);

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run a bound campaign");
  std::string campaign, report_json_path, report_csv_path;
  double tol = 1e-10;
  long d_max = 30;
  std::vector<int> k_list = {2, 4, 6, 8};
  int pair_count = 50;
  verify->add_option("campaign", campaign,
                     "universal | davies | lemma | pang | trend | antitree")
      ->required();
  verify->add_option("--graph", graph_path);
  verify->add_option("--metric", metric_kind);
  verify->add_option("--S", S);
  verify->add_option("--tol", tol);
  verify->add_option("--solver-tol", solver_tol);
  verify->add_option("--tmin", tmin);
  verify->add_option("--tmax", tmax);
  verify->add_option("--per-decade", per_decade);
  verify->add_option("--t", t_list);
  verify->add_option("--d-max", d_max);
  verify->add_option("--k", k_list);
  verify->add_option("--gamma", gamma);
  verify->add_option("--levels", levels);
  verify->add_option("--pairs", pair_count);
  verify->add_option("--seed", seed);
  verify->add_option("--backend", backend_name);
  verify->add_option("--report-json", report_json_path);
  verify->add_option("--report-csv", report_csv_path);

  // ---- report ----
  auto* report = app.add_subcommand("report", "summarize report JSON files");
  std::vector<std::string> report_files;
  report->add_option("files", report_files)->required();

  CLI11_PARSE(app, argc, argv);
  std::string header = provenance_header(argc, argv, seed);

  try {
    if (*build) {
      Graph g = [&] {
        if (family == "lattice") {
          auto cond = b_iid.size() == 2
                          ? ConductanceRule::iid_uniform(b_iid[0], b_iid[1], seed)
                          : ConductanceRule::constant(b_const);
          auto meas = m_normalizing ? MeasureRule::normalizing()
                                    : MeasureRule::constant(m_const);
          return build_lattice_box(dim, radius, cond, meas);
        }
        if (family == "anti-tree") return build_anti_tree(gamma, levels);
        if (family == "random") return build_random_connected(max_vertices, seed);
        throw GraphError("unknown family: " + family);
      }();
      emit(out_path, graph_to_json(g));
      std::cerr << g.size() << " vertices, " << g.edges().size() << " edges\n";
      return 0;
    }

    if (*kernel) {
      Graph g = load_graph(graph_path);
      KernelBackend backend =
          backend_name == "dense" ? KernelBackend::DenseEig : KernelBackend::ExpmAction;
      if (backend == KernelBackend::DenseEig && g.size() > 2000)
        throw GraphError("dense backend limited to 2000 vertices");
      if (t_list.empty()) t_list = log_t_grid(tmin, tmax, per_decade);
      std::vector<int> xs, ys;
      for (const auto& id : x_ids) xs.push_back(g.index_of(id));
      for (const auto& id : y_ids) ys.push_back(g.index_of(id));
      auto slice = heat_kernel_finite(g, t_list, xs, ys, backend);
      emit(out_path, header + kernel_csv(g, slice));
      return 0;
    }

    if (*metric) {
      Graph g = load_graph(graph_path);
      PseudoMetric rho = make_metric(g, metric_kind, S, solver_tol);
      emit(out_path, header + metric_csv(g, rho, all_pairs(g)));
      return 0;
    }

    if (*verify) {
      std::optional<BoundReport> rep;
      if (campaign == "universal") {
        Graph g = load_graph(graph_path);
        PseudoMetric rho = make_metric(g, metric_kind, S, solver_tol);
        if (t_list.empty()) t_list = log_t_grid(tmin, tmax, per_decade);
        KernelBackend backend = backend_name == "dense" ? KernelBackend::DenseEig
                                                        : KernelBackend::ExpmAction;
        rep = verify_universal(g, rho, S, t_list, all_pairs(g), backend, tol);
      } else if (campaign == "davies") {
        Graph g = load_graph(graph_path);
        if (t_list.empty()) t_list = log_t_grid(tmin, tmax, per_decade);
        rep = verify_davies(g, t_list, all_pairs(g), solver_tol);
      } else if (campaign == "lemma") {
        Graph g = load_graph(graph_path);
        rep = lemma_metric_comparison(g, S, tol > 1e-9 ? tol : 1e-5);
      } else if (campaign == "pang") {
        if (t_list.empty()) t_list = log_t_grid(tmin, tmax, per_decade);
        rep = fit_pang_constant(d_max, t_list);
      } else if (campaign == "trend") {
        rep = davies_z2_trend(k_list, solver_tol);
      } else if (campaign == "antitree") {
        if (t_list.empty()) t_list = log_t_grid(tmin, tmax, per_decade);
        auto at = verify_antitree(gamma, levels, t_list, pair_count, seed);
        rep = at.display1.pass && at.display2.pass ? at.display1 : at.display2;
        rep->stats.push_back({"fitted_c2", at.fitted_c2});
      } else {
        throw GraphError("unknown campaign: " + campaign);
      }
      if (!report_json_path.empty()) emit(report_json_path, header + report_json(*rep));
      if (!report_csv_path.empty()) emit(report_csv_path, header + report_csv(*rep));
      std::cout << rep->campaign << ": " << (rep->pass ? "PASS" : "FAIL")
                << " worst_log_ratio=" << format_double(rep->worst_log_ratio)
                << " violations=" << rep->violations.size() << "\n";
      return rep->pass ? 0 : 2;
    }

    if (*report) {
      bool all_pass = true;
      for (const auto& f : report_files) {
        std::string text = read_text_file(f);
        // Tolerate a leading provenance comment before the JSON body.
        auto pos = text.find('{');
        if (pos == std::string::npos) throw GraphError("no JSON object in " + f);
        auto j = nlohmann::json::parse(text.substr(pos));
        bool pass = j.value("pass", false);
        all_pass = all_pass && pass;
        std::cout << f << ": " << j.value("campaign", "?") << " "
                  << (pass ? "PASS" : "FAIL")
                  << " worst_log_ratio=" << j.value("worst_log_ratio", 0.0)
                  << " violations=" << j.value("violation_count", 0) << "\n";
      }
      return all_pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
