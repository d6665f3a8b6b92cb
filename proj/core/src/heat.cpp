#include "heatlab/heat.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heatlab {

DenseHeatKernel::DenseHeatKernel(const Graph& g, std::optional<VertexSet> restriction)
    : op_(g, std::move(restriction)) {
  if (op_.dim() > 2000) throw GraphError("dense-eig backend limited to 2000 vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op_.dense_sym());
  eval_ = es.eigenvalues();
  evec_ = es.eigenvectors();
}

double DenseHeatKernel::at(double t, int x, int y) const {
  if (!(t >= 0) || !std::isfinite(t)) throw GraphError("nonfinite time");
  int i = op_.local(x), j = op_.local(y);
  if (i < 0 || j < 0) throw GraphError("vertex outside restriction");
  double s = 0;
  for (int k = 0; k < eval_.size(); ++k)
    s += std::exp(-t * eval_(k)) * evec_(i, k) * evec_(j, k);
  return s / std::sqrt(op_.measure(i) * op_.measure(j));
}

UniformizationPropagator::UniformizationPropagator(const Graph& g, int target,
                                                   std::optional<VertexSet> restriction,
                                                   double tail_mass)
    : op_(g, std::move(restriction)), tail_mass_(tail_mass) {
  target_local_ = op_.local(target);
  if (target_local_ < 0) throw GraphError("target outside restriction");
  lambda_ = 2.0 * op_.max_diag() + 1.0;
  state_.assign(op_.dim(), 0.0);
  state_[target_local_] = 1.0;
}

void UniformizationPropagator::advance_to(double t) {
  if (!(t >= t_) || !std::isfinite(t)) throw GraphError("nonmonotone or nonfinite time");
  double dt = t - t_;
  t_ = t;
  if (dt == 0) return;
  const double mu = lambda_ * dt;
  const double log_mu = std::log(mu);

  std::vector<double> acc(state_.size(), 0.0), next(state_.size());
  long k = 0;
  for (;;) {
    double log_w = k * log_mu - mu - std::lgamma(static_cast<double>(k) + 1.0);
    double w = std::exp(log_w);
    if (w > 0) {
      for (std::size_t i = 0; i < state_.size(); ++i) acc[i] += w * state_[i];
    }
    // For k >= mu the weights decay geometrically with ratio mu/(k+1), so the
    // dropped tail is at most w_k (k+1)/(k+1-mu). Bounding that absolutely
    // (not via 1-cum, which saturates at 1) keeps relative accuracy of
    // far-field entries whose whole mass sits in the late terms.
    if (k >= static_cast<long>(mu) + 1 &&
        log_w + std::log((k + 1.0) / (k + 1.0 - mu)) <= std::log(tail_mass_))
      break;
    // v_{k+1} = P v_k = v_k - A v_k / lambda
    op_.apply_sym(state_, next);
    for (std::size_t i = 0; i < state_.size(); ++i)
      state_[i] -= next[i] / lambda_;
    ++k;
  }
  state_ = std::move(acc);
}

double UniformizationPropagator::at(int x) const {
  int i = op_.local(x);
  if (i < 0) throw GraphError("vertex outside restriction");
  return state_[i] / std::sqrt(op_.measure(i) * op_.measure(target_local_));
}

std::vector<double> UniformizationPropagator::column() const {
  std::vector<double> col(op_.graph().size(), 0.0);
  double my = op_.measure(target_local_);
  for (int i = 0; i < op_.dim(); ++i)
    col[op_.vertex(i)] = state_[i] / std::sqrt(op_.measure(i) * my);
  return col;
}

double heat_kernel_value(const Graph& g, double t, int x, int y, KernelBackend backend) {
  if (backend == KernelBackend::DenseEig) return DenseHeatKernel(g).at(t, x, y);
  UniformizationPropagator prop(g, y);
  prop.advance_to(t);
  return prop.at(x);
}

HeatKernelSlice heat_kernel_finite(const Graph& g, const std::vector<double>& t_list,
                                   const std::vector<int>& sources,
                                   const std::vector<int>& targets, KernelBackend backend) {
  for (double t : t_list)
    if (!(t >= 0) || !std::isfinite(t)) throw GraphError("nonfinite time in grid");

  HeatKernelSlice slice;
  slice.t_grid = t_list;
  slice.sources = sources;
  slice.targets = targets;
  slice.backend = backend;
  slice.values.assign(t_list.size() * sources.size() * targets.size(), 0.0);
  auto put = [&](std::size_t ti, std::size_t xi, std::size_t yi, double v) {
    slice.values[(ti * sources.size() + xi) * targets.size() + yi] = v;
  };

  if (backend == KernelBackend::DenseEig) {
    DenseHeatKernel k(g);
    for (std::size_t ti = 0; ti < t_list.size(); ++ti)
      for (std::size_t xi = 0; xi < sources.size(); ++xi)
        for (std::size_t yi = 0; yi < targets.size(); ++yi)
          put(ti, xi, yi, k.at(t_list[ti], sources[xi], targets[yi]));
    return slice;
  }

  std::vector<std::size_t> order(t_list.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return t_list[a] < t_list[b]; });

  for (std::size_t yi = 0; yi < targets.size(); ++yi) {
    UniformizationPropagator prop(g, targets[yi]);
    for (std::size_t ti : order) {
      prop.advance_to(t_list[ti]);
      for (std::size_t xi = 0; xi < sources.size(); ++xi)
        put(ti, xi, yi, prop.at(sources[xi]));
    }
  }
  return slice;
}

FamilySpec FamilySpec::lattice(int dim, ConductanceRule c, MeasureRule m) {
  FamilySpec f;
  f.kind = Kind::Lattice;
  f.dimension = dim;
  f.conductance = c;
  f.measure = m;
  return f;
}

FamilySpec FamilySpec::anti_tree(double gamma) {
  FamilySpec f;
  f.kind = Kind::AntiTree;
  f.gamma = gamma;
  return f;
}

Truncation truncate_family(const FamilySpec& fam, long radius) {
  if (fam.kind == FamilySpec::Kind::Lattice) {
    Graph g = build_lattice_box(fam.dimension, static_cast<int>(radius) + 1,
                                fam.conductance, fam.measure);
    std::vector<int> in;
    for (int v = 0; v < g.size(); ++v) {
      auto c = lattice_coords(g.id(v));
      int norm = 0;
      for (int x : c) norm = std::max(norm, std::abs(x));
      if (norm <= radius) in.push_back(v);
    }
    auto interior = VertexSet::of(g, std::move(in));
    return {std::move(g), std::move(interior), radius};
  }
  Graph g = build_anti_tree(fam.gamma, static_cast<int>(radius) + 1);
  std::vector<int> in;
  for (int v = 0; v < g.size(); ++v) {
    int level = std::stoi(g.id(v).substr(0, g.id(v).find(':')));
    if (level <= radius) in.push_back(v);
  }
  auto interior = VertexSet::of(g, std::move(in));
  return {std::move(g), std::move(interior), radius};
}

ExhaustionResult heat_kernel_exhaustion(const FamilySpec& fam, double t,
                                        const std::string& x, const std::string& y,
                                        double tol) {
  if (!(tol > 0)) throw GraphError("exhaustion tolerance must be positive");

  auto needed_radius = [&](const std::string& id) -> long {
    if (fam.kind == FamilySpec::Kind::Lattice) {
      long norm = 0;
      for (int c : lattice_coords(id)) norm = std::max(norm, static_cast<long>(std::abs(c)));
      return norm;
    }
    return std::stol(id.substr(0, id.find(':')));
  };

  long R = 8;
  while (R < needed_radius(x) || R < needed_radius(y)) R *= 2;

  constexpr long kMaxVertices = 1 << 16;
  double prev = -1;
  long prev_R = 0;
  bool have_prev = false;
  for (;;) {
    Truncation tr = truncate_family(fam, R);
    int xi = tr.graph.index_of(x), yi = tr.graph.index_of(y);
    double value;
    if (t == 0) {
      value = xi == yi ? 1.0 / tr.graph.measure(xi) : 0.0;
      return {value, {R, value, tol, true}};
    }
    UniformizationPropagator prop(tr.graph, yi, tr.interior);
    prop.advance_to(t);
    value = prop.at(xi);

    if (have_prev) {
      if (value + 1e-12 < prev)
        throw GraphError("Dirichlet exhaustion lost monotonicity");
      if (std::abs(value - prev) <= tol * value)
        return {value, {R, prev, tol, true}};
    }
    double last = have_prev ? prev : value;
    prev = value;
    prev_R = R;
    have_prev = true;

    long next_R = R * 2;
    // stop if the next truncation would exceed the vertex budget
    if (fam.kind == FamilySpec::Kind::Lattice) {
      double cnt = std::pow(2.0 * next_R + 3.0, fam.dimension);
      if (cnt > kMaxVertices) return {value, {R, last, tol, false}};
    } else {
      double cnt = 1 + std::pow(next_R + 1.0, fam.gamma + 1.0);  // rough upper bound
      if (cnt > kMaxVertices) return {value, {R, last, tol, false}};
    }
    R = next_R;
  }
}

Graph anti_tree_quotient(double gamma, int levels) {
  SphereFunction s(gamma);
  std::vector<Graph::VertexSpec> verts;
  std::vector<Graph::EdgeSpec> edges;
  for (int k = 0; k <= levels; ++k)
    verts.push_back({std::to_string(k), static_cast<double>(s.size(k))});
  for (int k = 0; k < levels; ++k)
    edges.push_back({std::to_string(k), std::to_string(k + 1),
                     static_cast<double>(s.size(k) * s.size(k + 1))});
  return Graph::build(std::move(verts), edges);
}

}  // namespace heatlab
