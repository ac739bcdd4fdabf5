#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "hopd/assign.hpp"
#include "hopd/graph.hpp"
#include "hopd/preorder.hpp"
#include "hopd/universe.hpp"

namespace hopd {

struct Simplex {
  std::array<int, 3> v{};  // sorted vertices; unused slots are -1
  int dim = 0;
  double value = 0;
  friend bool operator==(const Simplex&, const Simplex&) = default;
};

struct Filtration {
  int vertex_count = 0;
  double max_value = 0;  // cap value for essential classes
  std::vector<Simplex> simplices;
};

inline bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.dim != b.dim) return a.dim < b.dim;
  return a.v < b.v;
}

/// Flag complex up to triangles: vertices at 0, edges at their weight,
/// triangles at their heaviest edge.
inline Filtration build_clique_filtration(const WeightedGraph& g, bool normalize) {
  validate(g);
  Filtration f;
  f.vertex_count = g.n;
  double wmax = 0;
  for (const auto& e : g.edges) wmax = std::max(wmax, e.w);
  const double scale = (normalize && wmax > 0) ? wmax : 1.0;
  std::vector<std::vector<std::pair<int, double>>> adj(g.n);
  for (const auto& e : g.edges) {
    double w = e.w / scale;
    adj[e.u].emplace_back(e.v, w);
    adj[e.v].emplace_back(e.u, w);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  for (int i = 0; i < g.n; ++i) f.simplices.push_back({{i, -1, -1}, 0, 0.0});
  for (const auto& e : g.edges) {
    auto [a, b] = std::minmax(e.u, e.v);
    f.simplices.push_back({{a, b, -1}, 1, e.w / scale});
  }
  auto weight = [&](int a, int b) -> const double* {
    auto it = std::lower_bound(adj[a].begin(), adj[a].end(), std::pair{b, -kInf});
    return (it != adj[a].end() && it->first == b) ? &it->second : nullptr;
  };
  for (int a = 0; a < g.n; ++a)
    for (const auto& [b, wab] : adj[a]) {
      if (b <= a) continue;
      for (const auto& [c, wac] : adj[a]) {
        if (c <= b) continue;
        if (const double* wbc = weight(b, c)) f.simplices.push_back({{a, b, c}, 2, std::max({wab, wac, *wbc})});
      }
    }
  std::sort(f.simplices.begin(), f.simplices.end(), filtration_less);
  f.max_value = normalize ? (g.edges.empty() ? 0.0 : 1.0) : wmax;
  return f;
}

/// Throws unless sorted and every face precedes its cofaces.
inline void check_filtration(const Filtration& f) {
  std::map<std::array<int, 3>, std::size_t> pos;
  for (std::size_t i = 0; i < f.simplices.size(); ++i) {
    const auto& s = f.simplices[i];
    if (i > 0 && filtration_less(s, f.simplices[i - 1])) throw InvalidArgument("filtration is not sorted");
    if (s.dim >= 1) {
      for (int drop = 0; drop <= s.dim; ++drop) {
        std::array<int, 3> face{-1, -1, -1};
        for (int k = 0, t = 0; k <= s.dim; ++k)
          if (k != drop) face[t++] = s.v[k];
        auto it = pos.find(face);
        if (it == pos.end()) throw InvalidArgument("face appears after its coface");
      }
    }
    pos[s.v] = i;
  }
}

struct EssentialPolicy {
  enum class Kind { cap, infinite };
  Kind kind = Kind::cap;
  double delta = 0;  // essential death = cap value + delta
};

struct PersistencePair {
  double birth = 0, death = 0;
  bool essential = false;
  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

namespace detail {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

inline double essential_death(const Filtration& f, const EssentialPolicy& pol) {
  return pol.kind == EssentialPolicy::Kind::infinite ? kInf : f.max_value + pol.delta;
}

} // namespace detail

/// H1 pairs: edges that close a cycle are positive; the triangle boundary
/// matrix is reduced over GF(2) against them. Zero-persistence pairs are
/// kept here and dropped when building the diagram.
inline std::vector<PersistencePair> h1_pairs(const Filtration& f, const EssentialPolicy& pol = {}) {
  check_filtration(f);
  std::map<std::pair<int, int>, int> edge_index;
  std::vector<double> edge_value;
  std::vector<char> positive;
  detail::UnionFind uf(f.vertex_count);
  for (const auto& s : f.simplices) {
    if (s.dim != 1) continue;
    edge_index[{s.v[0], s.v[1]}] = static_cast<int>(edge_value.size());
    edge_value.push_back(s.value);
    positive.push_back(!uf.unite(s.v[0], s.v[1]));
  }
  std::vector<int> pivot_owner(edge_value.size(), -1);
  std::vector<std::vector<int>> reduced;
  std::vector<char> paired(edge_value.size(), 0);
  std::vector<PersistencePair> out;
  for (const auto& s : f.simplices) {
    if (s.dim != 2) continue;
    std::vector<int> col{edge_index.at({s.v[0], s.v[1]}), edge_index.at({s.v[0], s.v[2]}),
                         edge_index.at({s.v[1], s.v[2]})};
    std::sort(col.begin(), col.end());
    while (!col.empty() && pivot_owner[col.back()] >= 0) {
      const auto& other = reduced[pivot_owner[col.back()]];
      std::vector<int> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(sum));
      col.swap(sum);
    }
    if (col.empty()) continue;
    int low = col.back();
    pivot_owner[low] = static_cast<int>(reduced.size());
    reduced.push_back(std::move(col));
    paired[low] = 1;
    out.push_back({edge_value[low], s.value, false});
  }
  const double cap = detail::essential_death(f, pol);
  for (std::size_t e = 0; e < edge_value.size(); ++e)
    if (positive[e] && !paired[e]) out.push_back({edge_value[e], cap, true});
  return out;
}

/// H0 pairs by the elder rule; every component is born at 0.
inline std::vector<PersistencePair> h0_pairs(const Filtration& f, const EssentialPolicy& pol = {}) {
  check_filtration(f);
  detail::UnionFind uf(f.vertex_count);
  std::vector<PersistencePair> out;
  for (const auto& s : f.simplices)
    if (s.dim == 1 && uf.unite(s.v[0], s.v[1])) out.push_back({0.0, s.value, false});
  const double cap = detail::essential_death(f, pol);
  for (int v = 0; v < f.vertex_count; ++v)
    if (uf.find(v) == v) out.push_back({0.0, cap, true});
  return out;
}

inline DiagramId pairs_to_diagram(Universe& U, const std::vector<PersistencePair>& ps) {
  std::vector<DiagramEntry> es;
  for (const auto& p : ps)
    if (p.birth != p.death) es.push_back({U.interval(p.birth, p.death), 1});
  return make_diagram(U, 1, std::move(es));
}

inline DiagramId persistence_h1(Universe& U, const Filtration& f, const EssentialPolicy& pol = {}) {
  return pairs_to_diagram(U, h1_pairs(f, pol));
}

inline DiagramId persistence_h0(Universe& U, const Filtration& f, const EssentialPolicy& pol = {}) {
  return pairs_to_diagram(U, h0_pairs(f, pol));
}

} // namespace hopd
