#pragma once

// Test-only brute-force oracle for the metric solvers: maximize
// (psi[x]-psi[y]) / sqrt(max_i h_i) by random restarts plus coordinate
// pattern search. Shares only graph construction with the library.

#include <cmath>
#include <random>
#include <vector>

#include "heatlab/graph.hpp"

namespace testoracle {

inline double ratio(const heatlab::Graph& g, const std::vector<double>& psi, int x,
                    int y, bool davies, double S) {
  int n = g.size();
  std::vector<double> h(n, 0.0);
  double hedge = 0;
  for (auto [u, v, b] : g.edges()) {
    double d = psi[u] - psi[v];
    h[u] += b * d * d;
    h[v] += b * d * d;
    if (!davies) hedge = std::max(hedge, d * d / (S * S));
  }
  double hmax = hedge;
  for (int u = 0; u < n; ++u)
    hmax = std::max(hmax, h[u] / ((davies ? 2.0 : 1.0) * g.measure(u)));
  if (hmax <= 0) return 0;
  return (psi[x] - psi[y]) / std::sqrt(hmax);
}

// davies=true: rho_E (factor-2 vertex cap, no edge constraint);
// davies=false: rho_S with jump size S.
inline double metric_oracle(const heatlab::Graph& g, int x, int y, bool davies,
                            double S, std::mt19937_64& rng, int restarts = 60) {
  int n = g.size();
  double best = 0;
  std::uniform_real_distribution<double> u01(0, 1);
  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<double> psi(n);
    for (int i = 0; i < n; ++i) psi[i] = u01(rng);
    psi[x] = 1;
    psi[y] = 0;
    double r = ratio(g, psi, x, y, davies, S);
    double step = 0.5;
    while (step > 1e-9) {
      bool improved = false;
      for (int i = 0; i < n; ++i)
        for (double s : {step, -step}) {
          psi[i] += s;
          double r2 = ratio(g, psi, x, y, davies, S);
          if (r2 > r + 1e-15) {
            r = r2;
            improved = true;
          } else {
            psi[i] -= s;
          }
        }
      if (!improved) step *= 0.6;
    }
    best = std::max(best, r);
  }
  return best;
}

}  // namespace testoracle
