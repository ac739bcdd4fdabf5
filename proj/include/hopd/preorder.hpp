#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "hopd/chain.hpp"
#include "hopd/universe.hpp"

namespace hopd {

inline bool point_leq(const Universe& U, PointId a, PointId b) {
  if (a == b) return true;
  auto x = U.coords(a), y = U.coords(b);
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!(x[k] <= y[k])) return false;
  return true;
}

bool diagram_leq(Universe& U, DiagramId G, DiagramId L);

inline bool atom_leq(Universe& U, AtomId u, AtomId v) {
  if (u == v) return true;
  AtomNode a = U.atom(u), b = U.atom(v);
  if (a.level != b.level) throw LevelMismatch(a.level, b.level);
  if (a.level == 1)
    return point_leq(U, PointId{b.minus}, PointId{a.minus}) &&
           point_leq(U, PointId{a.plus}, PointId{b.plus});
  if (auto hit = U.cached_leq(u, v)) return *hit;
  bool r = diagram_leq(U, DiagramId{b.minus}, DiagramId{a.minus}) &&
           diagram_leq(U, DiagramId{a.plus}, DiagramId{b.plus});
  U.store_leq(u, v, r);
  return r;
}

namespace detail {

inline bool endpoint_leq(Universe& U, int level, std::uint32_t x, std::uint32_t y) {
  return level == 1 ? point_leq(U, PointId{x}, PointId{y})
                    : diagram_leq(U, DiagramId{x}, DiagramId{y});
}

/// Kuhn's augmenting paths; returns true when every row is matched.
inline bool has_perfect_matching(const std::vector<std::vector<int>>& adj, int cols) {
  std::vector<int> match_col(cols, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int r) {
    for (int c : adj[r]) {
      if (seen[c]) continue;
      seen[c] = 1;
      if (match_col[c] < 0 || augment(match_col[c])) {
        match_col[c] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < static_cast<int>(adj.size()); ++r) {
    seen.assign(cols, 0);
    if (!augment(r)) return false;
  }
  return true;
}

} // namespace detail

/// u can be sent to the diagonal on the left of a comparison (u <= eta).
inline bool left_admissible(Universe& U, AtomId u) {
  if (U.spec().diagonal_always_admissible) return true;
  AtomNode a = U.atom(u);
  return detail::endpoint_leq(U, a.level, a.plus, a.minus);
}

/// v can absorb the diagonal on the right of a comparison (eta <= v).
inline bool right_admissible(Universe& U, AtomId v) {
  if (U.spec().diagonal_always_admissible) return true;
  AtomNode a = U.atom(v);
  return detail::endpoint_leq(U, a.level, a.minus, a.plus);
}

inline bool diagram_leq(Universe& U, DiagramId G, DiagramId L) {
  if (G == L) return true;
  const DiagramNode& g = U.diagram(G);
  const DiagramNode& l = U.diagram(L);
  if (g.level != l.level) throw LevelMismatch(g.level, l.level);
  std::vector<AtomId> left, right;
  for (const auto& e : g.entries) left.insert(left.end(), e.mult, e.atom);
  for (const auto& e : l.entries) right.insert(right.end(), e.mult, e.atom);
  const int a = static_cast<int>(left.size()), b = static_cast<int>(right.size());
  std::vector<char> ladm(a), radm(b);
  for (int i = 0; i < a; ++i) ladm[i] = left_admissible(U, left[i]);
  for (int j = 0; j < b; ++j) radm[j] = right_admissible(U, right[j]);
  // rows: left atoms then b diagonal slots; cols: right atoms then a slots
  std::vector<std::vector<int>> adj(a + b);
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j)
      if (atom_leq(U, left[i], right[j])) adj[i].push_back(j);
    if (ladm[i]) adj[i].push_back(b + i);
    if (adj[i].empty()) return false;
  }
  for (int j = 0; j < b; ++j) {
    if (radm[j]) adj[a + j].push_back(j);
    for (int i = 0; i < a; ++i) adj[a + j].push_back(b + i);
  }
  return detail::has_perfect_matching(adj, a + b);
}

inline bool is_diagonal(Universe& U, AtomId u) {
  AtomNode a = U.atom(u);
  return detail::endpoint_leq(U, a.level, a.minus, a.plus) &&
         detail::endpoint_leq(U, a.level, a.plus, a.minus);
}

/// Order-embedding coordinates (-minus, plus) of a level-1 atom.
inline std::vector<double> coordinates(const Universe& U, AtomId u) {
  AtomNode a = U.atom(u);
  if (a.level != 1)
    throw CoordinatesUnavailable("no coordinate representation at level " + std::to_string(a.level));
  auto m = U.coords(PointId{a.minus});
  auto p = U.coords(PointId{a.plus});
  std::vector<double> out;
  out.reserve(m.size() * 2);
  for (double x : m) out.push_back(-x);
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// Canonical diagram: merged, positive, diagonal atoms removed.
inline DiagramId make_diagram(Universe& U, int level, std::vector<DiagramEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const DiagramEntry& x, const DiagramEntry& y) { return x.atom < y.atom; });
  std::vector<DiagramEntry> out;
  for (const auto& e : entries) {
    if (e.mult < 0) throw InvalidArgument("negative multiplicity in diagram");
    if (U.level(e.atom) != level) throw LevelMismatch(U.level(e.atom), level);
    if (!out.empty() && out.back().atom == e.atom)
      out.back().mult = detail::checked_add(out.back().mult, e.mult, OverflowPolicy::error);
    else
      out.push_back(e);
  }
  std::erase_if(out, [&](const DiagramEntry& e) { return e.mult == 0 || is_diagonal(U, e.atom); });
  return U.intern_diagram(level, std::move(out));
}

inline DiagramId make_diagram(Universe& U, int level, std::span<const AtomId> atoms) {
  std::vector<DiagramEntry> es;
  for (AtomId a : atoms) es.push_back({a, 1});
  return make_diagram(U, level, std::move(es));
}

template <class Coeff>
Chain<Coeff> canonicalize(Universe& U, int level, std::vector<typename Chain<Coeff>::Term> terms) {
  for (const auto& t : terms)
    if (U.level(t.first) != level) throw LevelMismatch(U.level(t.first), level);
  std::erase_if(terms, [&](const auto& t) { return is_diagonal(U, t.first); });
  return Chain<Coeff>::from_terms(level, std::move(terms));
}

inline VirtualDiagram make_virtual(Universe& U, int level, std::vector<VirtualDiagram::Term> terms) {
  return canonicalize<std::int64_t>(U, level, std::move(terms));
}

template <class Coeff> Chain<Coeff> canonicalize(Universe& U, const Chain<Coeff>& x) {
  return canonicalize<Coeff>(U, x.level(), {x.begin(), x.end()});
}

} // namespace hopd
