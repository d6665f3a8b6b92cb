#include "heatlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace heatlab {

std::string to_string(MetricProvenance p) {
  switch (p) {
    case MetricProvenance::Combinatorial: return "combinatorial";
    case MetricProvenance::PathDegree: return "path-degree";
    case MetricProvenance::Chemical: return "chemical";
    case MetricProvenance::Davies: return "davies";
    case MetricProvenance::MaxIntrinsic: return "max-intrinsic";
    case MetricProvenance::Custom: return "custom";
  }
  return "custom";
}

PseudoMetric::PseudoMetric(PseudoMetric&& o) noexcept
    : graph_(o.graph_),
      prov_(o.prov_),
      jump_bound_(o.jump_bound_),
      edge_weights_(std::move(o.edge_weights_)),
      wadj_(std::move(o.wadj_)),
      table_(std::move(o.table_)),
      cache_(std::move(o.cache_)) {}

PseudoMetric PseudoMetric::path_metric(const Graph& g, std::vector<double> edge_weights,
                                       MetricProvenance prov,
                                       std::optional<double> jump_bound) {
  if (edge_weights.size() != g.edges().size())
    throw GraphError("edge weight count mismatch");
  PseudoMetric m;
  m.graph_ = &g;
  m.prov_ = prov;
  m.jump_bound_ = jump_bound;
  m.edge_weights_ = std::move(edge_weights);
  m.wadj_.resize(g.size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    auto [u, v, b] = g.edges()[e];
    m.wadj_[u].emplace_back(v, m.edge_weights_[e]);
    m.wadj_[v].emplace_back(u, m.edge_weights_[e]);
  }
  return m;
}

PseudoMetric PseudoMetric::from_table(const Graph& g, std::vector<double> table,
                                      MetricProvenance prov,
                                      std::optional<double> jump_bound) {
  const std::size_t n = static_cast<std::size_t>(g.size());
  if (table.size() != n * n) throw GraphError("metric table size mismatch");
  PseudoMetric m;
  m.graph_ = &g;
  m.prov_ = prov;
  m.jump_bound_ = jump_bound;
  m.table_ = std::move(table);
  return m;
}

std::vector<double> PseudoMetric::dijkstra(int source) const {
  const Graph& g = *graph_;
  const int n = g.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  // Tie-break on equal tentative distance lexicographically by vertex id.
  using Item = std::pair<double, int>;
  auto cmp = [&g](const Item& a, const Item& b) {
    if (a.first != b.first) return a.first > b.first;
    return g.id(a.second) > g.id(b.second);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
  dist[source] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (auto [v, w] : wadj_[u]) {
      double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  return dist;
}

std::vector<double> PseudoMetric::row(int u) const {
  if (!table_.empty()) {
    const int n = graph_->size();
    return std::vector<double>(table_.begin() + static_cast<std::size_t>(u) * n,
                               table_.begin() + static_cast<std::size_t>(u + 1) * n);
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(u);
    if (it != cache_.end()) return *it->second;
  }
  auto r = std::make_shared<const std::vector<double>>(dijkstra(u));
  {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(u, r);
  }
  return *r;
}

double PseudoMetric::operator()(int u, int v) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(u) * graph_->size() + v];
  if (u == v) return 0.0;
  std::shared_ptr<const std::vector<double>> r;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(u);
    if (it == cache_.end()) it = cache_.find(v);
    if (it != cache_.end()) {
      int other = it->first == u ? v : u;
      return (*it->second)[other];
    }
  }
  auto fresh = std::make_shared<const std::vector<double>>(dijkstra(u));
  double d = (*fresh)[v];
  {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(u, fresh);
  }
  return d;
}

VertexSet PseudoMetric::ball(int x, double r) const {
  if (r < 0) throw GraphError("ball radius must be nonnegative");
  auto dist = row(x);
  std::vector<int> in;
  for (int v = 0; v < graph_->size(); ++v)
    if (dist[v] <= r) in.push_back(v);
  return VertexSet::of(*graph_, std::move(in));
}

double PseudoMetric::measured_jump_size() const {
  double s = 0;
  for (const auto& [u, v, b] : graph_->edges()) s = std::max(s, (*this)(u, v));
  return s;
}

std::vector<int> combinatorial_distance(const Graph& g, int source) {
  std::vector<int> dist(g.size(), -1);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (auto [v, w] : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

PseudoMetric combinatorial_metric(const Graph& g) {
  std::vector<double> w(g.edges().size(), 1.0);
  return PseudoMetric::path_metric(g, std::move(w), MetricProvenance::Combinatorial, 1.0);
}

PseudoMetric path_degree_metric(const Graph& g, double S) {
  if (!(S > 0)) throw GraphError("jump size S must be positive");
  std::vector<double> w;
  w.reserve(g.edges().size());
  for (const auto& [u, v, b] : g.edges()) {
    double wu = std::sqrt(g.measure(u) / g.deg(u));
    double wv = std::sqrt(g.measure(v) / g.deg(v));
    w.push_back(std::min({S, wu, wv}));
  }
  return PseudoMetric::path_metric(g, std::move(w), MetricProvenance::PathDegree, S);
}

PseudoMetric chemical_distance(const Graph& g) {
  std::vector<double> w;
  w.reserve(g.edges().size());
  for (const auto& [u, v, b] : g.edges())
    w.push_back(std::sqrt(std::min(g.measure(u), g.measure(v)) / b));
  return PseudoMetric::path_metric(g, std::move(w), MetricProvenance::Chemical, std::nullopt);
}

IntrinsicReport check_intrinsic(const Graph& g, const PseudoMetric& rho) {
  IntrinsicReport rep;
  for (int x = 0; x < g.size(); ++x) {
    double s = 0;
    for (auto [y, b] : g.neighbors(x)) {
      double r = rho(x, y);
      s += b * r * r;
      rep.jump_size = std::max(rep.jump_size, r);
    }
    double ratio = s / g.measure(x);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_vertex = x;
    }
  }
  rep.is_intrinsic = rep.max_ratio <= 1.0 + 1e-12;
  return rep;
}

}  // namespace heatlab
