#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hopd/chain.hpp"
#include "hopd/wasserstein.hpp"

namespace hopd {

/// Uncapacitated transshipment on a complete digraph with dense costs,
/// solved by successive shortest paths with Johnson potentials.
class DenseTransport {
public:
  DenseTransport(std::size_t n, std::vector<double> cost, std::vector<double> supply)
      : n_(n), cost_(std::move(cost)), supply_(std::move(supply)), flow_(n * n, 0.0) {}

  double solve(double tol = 1e-12) {
    double scale = 0;
    for (double s : supply_) scale = std::max(scale, std::abs(s));
    const double eps = tol * std::max(1.0, scale);
    std::vector<double> pot(n_, 0.0), dist(n_), residual = supply_;
    std::vector<int> prev(n_);
    std::vector<char> done(n_);
    for (;;) {
      bool any = false;
      for (double s : residual) any |= s > eps;
      if (!any) break;
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(prev.begin(), prev.end(), -1);
      std::fill(done.begin(), done.end(), 0);
      for (std::size_t i = 0; i < n_; ++i)
        if (residual[i] > eps) dist[i] = 0;
      int sink = -1;
      for (std::size_t it = 0; it < n_; ++it) {
        int u = -1;
        for (std::size_t i = 0; i < n_; ++i)
          if (!done[i] && dist[i] < kInf && (u < 0 || dist[i] < dist[u])) u = static_cast<int>(i);
        if (u < 0) break;
        done[u] = 1;
        if (residual[u] < -eps) {
          sink = u;
          break;
        }
        for (std::size_t v = 0; v < n_; ++v) {
          if (done[v] || v == static_cast<std::size_t>(u)) continue;
          // forward arc always open; reverse arc open when it carries flow
          double c = cost_[u * n_ + v];
          if (flow_[v * n_ + u] > eps) c = std::min(c, -cost_[v * n_ + u]);
          double nd = dist[u] + c + pot[u] - pot[v];
          if (nd < dist[v]) dist[v] = nd, prev[v] = u;
        }
      }
      if (sink < 0) throw Error("transport problem is infeasible");
      for (std::size_t i = 0; i < n_; ++i)
        if (dist[i] < kInf) pot[i] += std::min(dist[i], dist[sink]);
      double amount = -residual[sink];
      int v = sink;
      while (prev[v] >= 0) {
        int u = prev[v];
        if (flow_[v * n_ + u] > eps && -cost_[v * n_ + u] <= cost_[u * n_ + v])
          amount = std::min(amount, flow_[v * n_ + u]);
        v = u;
      }
      amount = std::min(amount, residual[v]);
      v = sink;
      while (prev[v] >= 0) {
        int u = prev[v];
        if (flow_[v * n_ + u] > eps && -cost_[v * n_ + u] <= cost_[u * n_ + v]) {
          flow_[v * n_ + u] -= amount;
        } else {
          flow_[u * n_ + v] += amount;
        }
        v = u;
      }
      residual[v] -= amount;
      residual[sink] += amount;
    }
    double total = 0;
    for (std::size_t i = 0; i < n_ * n_; ++i)
      if (flow_[i] > 0) total += flow_[i] * cost_[i];
    return total;
  }

  const std::vector<double>& flow() const { return flow_; }

private:
  std::size_t n_;
  std::vector<double> cost_, supply_, flow_;
};

/// Norm on V^(n): min-cost flow over supp(xi) plus the basepoint (node 0)
/// with d1 arc costs and divergence c_i at each atom.
inline double linear_w1_norm(Universe& U, const LinearDiagram& xi, DiagonalConfig cfg = {}) {
  if (xi.empty()) return 0;
  const std::size_t n = xi.size() + 1;
  std::vector<AtomId> atoms;
  std::vector<double> supply(n, 0.0);
  double total = 0;
  for (const auto& [a, c] : xi) {
    atoms.push_back(a);
    supply[atoms.size()] = c;
    total += c;
  }
  supply[0] = -total;
  CertifiedWasserstein w(U, 1, std::move(cfg));
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double d = w.diagonal_cost(atoms[i - 1]);
    if (!std::isfinite(d)) throw InvalidArgument("infinite diagonal distance on support");
    cost[i * n] = cost[i] = d;
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = std::min(w.product_cost(atoms[i - 1], atoms[j - 1]), cost[i] + cost[j]);
      cost[i * n + j] = cost[j * n + i] = d;
    }
  return DenseTransport(n, std::move(cost), std::move(supply)).solve();
}

} // namespace hopd
