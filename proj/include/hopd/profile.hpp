#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "hopd/chain.hpp"
#include "hopd/universe.hpp"

namespace hopd {

struct ComplexityProfile {
  std::uint64_t components = 0;  // c
  std::uint64_t sources = 0;     // vertices without a parent in the forest
  int depth = 0;                 // N
  std::uint64_t support_size = 0;
  std::uint64_t vertices = 0;    // |V|, interned nodes reachable from the support

  /// 2^(N+1) - 1 nodes per binary decomposition tree.
  std::uint64_t tree_size() const { return (std::uint64_t{1} << (depth + 1)) - 1; }
  bool bound_holds() const { return support_size <= components * tree_size(); }
  bool source_bound_holds() const { return support_size <= sources * tree_size(); }
  bool vertex_bound_holds() const { return vertices <= sources * tree_size(); }
};

/// Expands each support atom into its decomposition (atoms, endpoint atoms,
/// ground points), shares interned sub-objects and counts components.
inline ComplexityProfile complexity_profile(const Universe& U, const VirtualDiagram& xi) {
  ComplexityProfile pr;
  pr.support_size = xi.size();
  if (xi.empty()) return pr;
  // node keys: atoms as (id << 1), points as (id << 1 | 1)
  absl::flat_hash_map<std::uint64_t, std::uint32_t> index;
  std::vector<std::uint32_t> parent;
  std::vector<char> has_parent;
  auto node = [&](std::uint64_t k) {
    auto [it, fresh] = index.try_emplace(k, static_cast<std::uint32_t>(parent.size()));
    if (fresh) {
      parent.push_back(it->second);
      has_parent.push_back(0);
    }
    return std::pair{it->second, fresh};
  };
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); };

  std::vector<AtomId> stack;
  for (const auto& [a, c] : xi) {
    pr.depth = std::max(pr.depth, U.level(a));
    if (node(std::uint64_t{a.value} << 1).second) stack.push_back(a);
  }
  while (!stack.empty()) {
    AtomId a = stack.back();
    stack.pop_back();
    auto self = index.at(std::uint64_t{a.value} << 1);
    AtomNode n = U.atom(a);
    auto link = [&](std::uint64_t k, bool is_atom) {
      auto [child, fresh] = node(k);
      has_parent[child] = 1;
      unite(self, child);
      if (fresh && is_atom) stack.push_back(AtomId{static_cast<std::uint32_t>(k >> 1)});
    };
    if (n.level == 1) {
      link((std::uint64_t{n.minus} << 1) | 1, false);
      link((std::uint64_t{n.plus} << 1) | 1, false);
    } else {
      for (auto d : {n.minus, n.plus})
        for (const auto& e : U.diagram(DiagramId{d}).entries) link(std::uint64_t{e.atom.value} << 1, true);
    }
  }
  pr.vertices = parent.size();
  for (std::uint32_t i = 0; i < parent.size(); ++i) {
    if (find(i) == i) ++pr.components;
    if (!has_parent[i]) ++pr.sources;
  }
  return pr;
}

} // namespace hopd
