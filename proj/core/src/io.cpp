#include "heatlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heatlab/logdomain.hpp"
#include "heatlab/rng.hpp"

namespace heatlab {

std::string format_double(double v) {
  // Shortest representation that round-trips.
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < g.size(); ++v)
    j["vertices"].push_back({{"id", g.id(v)}, {"m", g.measure(v)}});
  j["edges"] = nlohmann::json::array();
  for (const auto& [u, v, b] : g.edges())
    j["edges"].push_back({{"u", g.id(u)}, {"v", g.id(v)}, {"b", b}});
  return j.dump(2);
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("graph JSON parse error: ") + e.what());
  }
  if (!j.contains("vertices") || !j.contains("edges"))
    throw GraphError("graph JSON needs \"vertices\" and \"edges\"");
  std::vector<Graph::VertexSpec> verts;
  for (const auto& v : j["vertices"])
    verts.push_back({v.at("id").get<std::string>(), v.at("m").get<double>()});
  std::vector<Graph::EdgeSpec> edges;
  for (const auto& e : j["edges"])
    edges.push_back({e.at("u").get<std::string>(), e.at("v").get<std::string>(),
                     e.at("b").get<double>()});
  return Graph::build(std::move(verts), edges);
}

void save_graph(const Graph& g, const std::string& path) {
  write_text_file(path, graph_to_json(g));
}

Graph load_graph(const std::string& path) { return graph_from_json(read_text_file(path)); }

std::string metric_csv(const Graph& g, const PseudoMetric& rho,
                       const std::vector<std::pair<int, int>>& pairs) {
  std::ostringstream out;
  out << "# metric provenance=" << to_string(rho.provenance());
  if (rho.jump_bound()) out << " jump_bound=" << format_double(*rho.jump_bound());
  out << " graph_hash=" << g.hash() << "\n";
  out << "x_id,y_id,value\n";
  for (auto [x, y] : pairs)
    out << g.id(x) << "," << g.id(y) << "," << format_double(rho(x, y)) << "\n";
  return out.str();
}

std::string to_string(KernelBackend b) {
  return b == KernelBackend::DenseEig ? "dense-eig" : "expm-action";
}

std::string kernel_csv(const Graph& g, const HeatKernelSlice& slice) {
  std::ostringstream out;
  out << "t,x_id,y_id,value,log_value,backend,radius\n";
  std::string backend = to_string(slice.backend);
  std::string radius = slice.truncation ? std::to_string(slice.truncation->radius) : "";
  for (std::size_t ti = 0; ti < slice.t_grid.size(); ++ti)
    for (std::size_t xi = 0; xi < slice.sources.size(); ++xi)
      for (std::size_t yi = 0; yi < slice.targets.size(); ++yi) {
        double v = slice.value(static_cast<int>(ti), static_cast<int>(xi),
                               static_cast<int>(yi));
        out << format_double(slice.t_grid[ti]) << "," << g.id(slice.sources[xi]) << ","
            << g.id(slice.targets[yi]) << "," << format_double(v) << ","
            << format_double(log_or_zero(v)) << "," << backend << "," << radius << "\n";
      }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot open for writing: " + path);
  out << text;
  if (!out) throw GraphError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t config_hash(const std::string& canonical) {
  return rng::fnv1a(canonical);
}

}  // namespace heatlab
