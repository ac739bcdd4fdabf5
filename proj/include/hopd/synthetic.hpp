#pragma once

#include <cstdint>
#include <vector>

#include <absl/container/flat_hash_set.h>

#include "hopd/chain.hpp"
#include "hopd/harmonic.hpp"
#include "hopd/preorder.hpp"
#include "hopd/rng.hpp"

namespace hopd {

/// Nonzero integer uniform in [-bound, bound].
inline std::int64_t random_coefficient(Pcg32& rng, std::int64_t bound) {
  auto k = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint32_t>(2 * bound))) - bound;
  return k >= 0 ? k + 1 : k;
}

/// Virtual diagram on `support` distinct random intervals with birth and
/// death drawn by `draw(rng) -> {birth, death}`.
template <class Draw>
VirtualDiagram random_virtual(Universe& U, Pcg32& rng, std::size_t support, std::int64_t bound, Draw draw) {
  absl::flat_hash_set<AtomId> seen;
  std::vector<VirtualDiagram::Term> terms;
  terms.reserve(support);
  std::size_t attempts = 0;
  while (terms.size() < support) {
    if (++attempts > 100 * support + 100) throw Error("could not draw enough distinct intervals");
    auto [b, d] = draw(rng);
    if (!(b < d)) continue;
    AtomId a = U.interval(b, d);
    if (!seen.insert(a).second) continue;
    terms.emplace_back(a, random_coefficient(rng, bound));
  }
  return VirtualDiagram::from_terms(1, std::move(terms));
}

/// Birth and death uniform on [0,1), sorted.
inline VirtualDiagram random_interval_virtual(Universe& U, Pcg32& rng, std::size_t support, std::int64_t bound = 10) {
  return random_virtual(U, rng, support, bound, [](Pcg32& r) {
    double x = r.uniform(), y = r.uniform();
    return std::pair{std::min(x, y), std::max(x, y)};
  });
}

/// Birth uniform on [0,1), length 0.1 + U[0, 0.01): comparable pairs are rare.
inline VirtualDiagram windowed_virtual(Universe& U, Pcg32& rng, std::size_t support, std::int64_t bound = 10) {
  return random_virtual(U, rng, support, bound, [](Pcg32& r) {
    double b = r.uniform();
    return std::pair{b, b + 0.1 + 0.01 * r.uniform()};
  });
}

/// Intervals on a coarse grid so that coordinates repeat.
inline VirtualDiagram grid_virtual(Universe& U, Pcg32& rng, std::size_t support, int grid, std::int64_t bound = 10) {
  return random_virtual(U, rng, support, bound, [grid](Pcg32& r) {
    auto x = static_cast<int>(r.bounded(grid + 1)), y = static_cast<int>(r.bounded(grid + 1));
    return std::pair{static_cast<double>(std::min(x, y)) / grid, static_cast<double>(std::max(x, y)) / grid};
  });
}

/// psi drawn uniformly on the circle for every atom of the support.
inline CoboundaryCharacter random_psi(const VirtualDiagram& xi, Pcg32& rng) {
  absl::flat_hash_map<AtomId, Phase> t;
  for (const auto& [a, c] : xi) t[a] = Phase::from_turns((std::uint64_t{rng.next()} << 32) | rng.next());
  return CoboundaryCharacter::from_table(xi.level(), std::move(t));
}

/// Level-1 diagram with up to `max_atoms` random intervals on [0,1).
inline DiagramId random_level1_diagram(Universe& U, Pcg32& rng, int min_atoms, int max_atoms) {
  int k = min_atoms + static_cast<int>(rng.bounded(max_atoms - min_atoms + 1));
  std::vector<DiagramEntry> es;
  for (int i = 0; i < k; ++i) {
    double x = rng.uniform(), y = rng.uniform();
    if (x == y) continue;
    es.push_back({U.interval(std::min(x, y), std::max(x, y)), 1});
  }
  return make_diagram(U, 1, std::move(es));
}

/// Level-2 diagram of at most `max_atoms` atoms. Half of the atoms are
/// near-diagonal (plus endpoint = minus endpoint with one extra short
/// interval) so endpoint masses vary a lot between atoms.
inline DiagramId random_level2_diagram(Universe& U, Pcg32& rng, int max_atoms, int max_inner = 4) {
  int k = 1 + static_cast<int>(rng.bounded(max_atoms));
  std::vector<DiagramEntry> es;
  for (int i = 0; i < k; ++i) {
    DiagramId m = random_level1_diagram(U, rng, 0, max_inner);
    DiagramId p;
    if (rng.uniform() < 0.5) {
      auto entries = U.diagram(m).entries;
      double b = rng.uniform();
      entries.push_back({U.interval(b, b + 0.01 + 0.02 * rng.uniform()), 1});
      p = make_diagram(U, 1, std::move(entries));
    } else {
      p = random_level1_diagram(U, rng, 0, max_inner);
    }
    AtomId a = U.pair(m, p);
    if (!is_diagonal(U, a)) es.push_back({a, 1});
  }
  return make_diagram(U, 2, std::move(es));
}

} // namespace hopd
