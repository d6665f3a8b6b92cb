#include "heatlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "heatlab/rng.hpp"

namespace heatlab {

Graph Graph::build(std::vector<VertexSpec> vertices, const std::vector<EdgeSpec>& edges) {
  if (vertices.empty()) throw GraphError("vertex spec is empty");
  Graph g;
  g.ids_.reserve(vertices.size());
  for (const auto& vs : vertices) {
    if (!(vs.m > 0)) throw GraphError("nonpositive measure at vertex " + vs.id);
    if (g.index_.count(vs.id)) throw GraphError("duplicate vertex id " + vs.id);
    g.index_[vs.id] = static_cast<int>(g.ids_.size());
    g.ids_.push_back(vs.id);
    g.measure_.push_back(vs.m);
    g.total_measure_ += vs.m;
  }

  std::map<std::pair<int, int>, double> canon;
  for (const auto& es : edges) {
    auto iu = g.index_.find(es.u), iv = g.index_.find(es.v);
    if (iu == g.index_.end() || iv == g.index_.end())
      throw GraphError("edge references undeclared vertex " +
                       (iu == g.index_.end() ? es.u : es.v));
    int u = iu->second, v = iv->second;
    if (u == v) throw GraphError("loop edge at " + es.u);
    if (!(es.b > 0)) throw GraphError("nonpositive edge weight on (" + es.u + "," + es.v + ")");
    auto key = std::minmax(u, v);
    auto [it, inserted] = canon.emplace(std::pair{key.first, key.second}, es.b);
    if (!inserted && it->second != es.b)
      throw GraphError("asymmetric duplicate edge (" + es.u + "," + es.v + ")");
  }
  if (canon.empty() && g.size() > 1) throw GraphError("graph is disconnected");

  g.adj_.resize(g.size());
  g.deg_.assign(g.size(), 0.0);
  g.edges_.reserve(canon.size());
  for (const auto& [uv, w] : canon) {
    auto [u, v] = uv;
    g.edges_.emplace_back(u, v, w);
    g.adj_[u].emplace_back(v, w);
    g.adj_[v].emplace_back(u, w);
    g.deg_[u] += w;
    g.deg_[v] += w;
  }
  for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());

  // connectivity
  std::vector<char> seen(g.size(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (auto [y, w] : g.adj_[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        q.push(y);
      }
  }
  if (reached != g.size()) throw GraphError("graph is disconnected");
  return g;
}

int Graph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw GraphError("unknown vertex id " + id);
  return it->second;
}

double Graph::max_weighted_deg() const {
  double d = 0;
  for (int v = 0; v < size(); ++v) d = std::max(d, weighted_deg(v));
  return d;
}

double Graph::edge_weight(int u, int v) const {
  for (auto [y, w] : adj_[u])
    if (y == v) return w;
  return 0.0;
}

std::uint64_t Graph::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) { h = rng::splitmix64(h ^ v); };
  for (int v = 0; v < size(); ++v) {
    mix(rng::fnv1a(ids_[v]));
    std::uint64_t bits;
    static_assert(sizeof(double) == sizeof(bits));
    std::memcpy(&bits, &measure_[v], sizeof(bits));
    mix(bits);
  }
  for (const auto& [u, v, w] : edges_) {
    mix(static_cast<std::uint64_t>(u) << 32 | static_cast<std::uint64_t>(v));
    std::uint64_t bits;
    std::memcpy(&bits, &w, sizeof(bits));
    mix(bits);
  }
  return h;
}

SphereFunction::SphereFunction(double g) : gamma(g) {
  if (!(g > 0.0 && g < 2.0)) throw GraphError("sphere exponent must lie in (0,2)");
}

long SphereFunction::size(long k) const {
  if (k < 0) return 0;
  if (k == 0) return 1;
  return static_cast<long>(std::floor(std::pow(static_cast<double>(k), gamma)));
}

VertexSet VertexSet::of(const Graph& g, std::vector<int> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  VertexSet s;
  for (int v : vs) {
    if (v < 0 || v >= g.size()) throw GraphError("vertex index outside host graph");
    s.measure += g.measure(v);
  }
  s.vertices = std::move(vs);
  return s;
}

bool VertexSet::contains(int v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::string lattice_id(const std::vector<int>& coords) {
  std::ostringstream os;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) os << ',';
    os << coords[i];
  }
  return os.str();
}

std::vector<int> lattice_coords(const std::string& id) {
  std::vector<int> c;
  std::istringstream is(id);
  std::string tok;
  while (std::getline(is, tok, ',')) c.push_back(std::stoi(tok));
  return c;
}

Graph build_lattice_box(int dimension, int radius, const ConductanceRule& cond,
                        const MeasureRule& meas) {
  if (dimension < 1) throw GraphError("dimension must be >= 1");
  if (radius < 1) throw GraphError("radius must be >= 1");
  if (cond.kind == ConductanceRule::Kind::IidUniform && !(cond.lo > 0))
    throw GraphError("iid conductance lower bound must be positive");

  const int side = 2 * radius + 1;
  long total = 1;
  for (int d = 0; d < dimension; ++d) total *= side;

  std::vector<std::vector<int>> coords(total);
  std::vector<std::string> ids(total);
  {
    std::vector<int> c(dimension, -radius);
    for (long i = 0; i < total; ++i) {
      coords[i] = c;
      ids[i] = lattice_id(c);
      for (int d = dimension - 1; d >= 0; --d) {
        if (++c[d] <= radius) break;
        c[d] = -radius;
      }
    }
  }

  auto weight = [&](const std::string& u, const std::string& v) {
    if (cond.kind == ConductanceRule::Kind::Constant) return cond.value;
    return rng::uniform(cond.seed, rng::edge_key(u, v), cond.lo, cond.hi);
  };

  std::vector<Graph::EdgeSpec> edges;
  std::vector<double> deg(total, 0.0);
  std::unordered_map<std::string, long> pos;
  pos.reserve(total);
  for (long i = 0; i < total; ++i) pos[ids[i]] = i;
  for (long i = 0; i < total; ++i) {
    for (int d = 0; d < dimension; ++d) {
      if (coords[i][d] == radius) continue;
      auto c2 = coords[i];
      ++c2[d];
      const std::string v = lattice_id(c2);
      double w = weight(ids[i], v);
      edges.push_back({ids[i], v, w});
      deg[i] += w;
      deg[pos[v]] += w;
    }
  }

  std::vector<Graph::VertexSpec> verts(total);
  for (long i = 0; i < total; ++i) {
    double m = meas.kind == MeasureRule::Kind::Constant ? meas.value : deg[i];
    verts[i] = {ids[i], m};
  }
  return Graph::build(std::move(verts), edges);
}

Graph build_anti_tree(double gamma, int levels) {
  SphereFunction s(gamma);
  if (levels < 1) throw GraphError("levels must be >= 1");

  std::vector<Graph::VertexSpec> verts;
  std::vector<Graph::EdgeSpec> edges;
  auto name = [](int k, long i) { return std::to_string(k) + ":" + std::to_string(i); };
  for (int k = 0; k <= levels; ++k)
    for (long i = 0; i < s.size(k); ++i) verts.push_back({name(k, i), 1.0});
  for (int k = 0; k < levels; ++k)
    for (long i = 0; i < s.size(k); ++i)
      for (long j = 0; j < s.size(k + 1); ++j)
        edges.push_back({name(k, i), name(k + 1, j), 1.0});
  return Graph::build(std::move(verts), edges);
}

Graph build_random_connected(int max_vertices, std::uint64_t seed) {
  if (max_vertices < 2) throw GraphError("need at least 2 vertices");
  rng::Stream st(seed);
  int n = 2 + static_cast<int>(st.next_below(static_cast<std::uint64_t>(max_vertices - 1)));

  std::vector<Graph::VertexSpec> verts(n);
  for (int v = 0; v < n; ++v) verts[v] = {"v" + std::to_string(v), st.next(0.5, 2.0)};

  std::vector<Graph::EdgeSpec> edges;
  std::set<std::pair<int, int>> used;
  for (int v = 1; v < n; ++v) {
    int u = static_cast<int>(st.next_below(v));
    edges.push_back({verts[u].id, verts[v].id, st.next(0.5, 2.0)});
    used.insert({u, v});
  }
  int extra = static_cast<int>(st.next_below(n));
  for (int e = 0; e < extra; ++e) {
    int u = static_cast<int>(st.next_below(n));
    int v = static_cast<int>(st.next_below(n));
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (!used.insert({key.first, key.second}).second) continue;
    edges.push_back({verts[key.first].id, verts[key.second].id, st.next(0.5, 2.0)});
  }
  return Graph::build(std::move(verts), edges);
}

}  // namespace heatlab
