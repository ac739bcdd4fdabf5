#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "hopd/aggregation.hpp"
#include "hopd/chain.hpp"
#include "hopd/dominance.hpp"
#include "hopd/phase.hpp"
#include "hopd/preorder.hpp"

namespace hopd {

/// Anything that assigns an exact lifted angle to atoms of one level.
template <class X>
concept CharacterLike = requires(const X& x, const Universe& U, AtomId a) {
  { x.level() } -> std::convertible_to<int>;
  { x.lift(U, a) } -> std::same_as<RawPhase>;
};

/// Explicit angle table on level-n classes; the basepoint maps to 0.
class Character {
public:
  explicit Character(int level) : level_(level) {}

  int level() const { return level_; }
  void set(AtomId a, Phase angle) { angles_[a] = angle; }
  bool contains(AtomId a) const { return angles_.contains(a); }

  RawPhase lift(const Universe&, AtomId a) const {
    auto it = angles_.find(a);
    if (it == angles_.end()) throw MissingAngle("character has no angle for atom " + std::to_string(a.value));
    return static_cast<RawPhase>(it->second.turns());
  }

private:
  int level_;
  absl::flat_hash_map<AtomId, Phase> angles_;
};

inline constexpr std::uint64_t kGoldenTurns = 0x9E3779B97F4A7C15ull;

/// psi on level-n atoms, extended additively to diagrams. As a character
/// on level n+1 classes it sends (u, v) to psi(v) - psi(u).
class CoboundaryCharacter {
public:
  /// Golden-ratio hashing of the interned id.
  static CoboundaryCharacter golden(int psi_level) {
    CoboundaryCharacter c(psi_level);
    return c;
  }

  static CoboundaryCharacter from_table(int psi_level, absl::flat_hash_map<AtomId, Phase> table,
                                        bool golden_fallback = false) {
    CoboundaryCharacter c(psi_level);
    c.table_ = std::move(table);
    c.use_table_ = true;
    c.fallback_ = golden_fallback;
    return c;
  }

  int psi_level() const { return psi_level_; }
  int level() const { return psi_level_ + 1; }

  std::uint64_t psi(AtomId a) const {
    if (use_table_) {
      if (auto it = table_.find(a); it != table_.end()) return it->second.turns();
      if (!fallback_) throw MissingAngle("psi has no angle for atom " + std::to_string(a.value));
    }
    return (std::uint64_t{a.value} + 1) * kGoldenTurns;
  }

  RawPhase psi_diagram(const Universe& U, DiagramId d) const {
    RawPhase s = 0;
    for (const auto& e : U.diagram(d).entries) s += static_cast<RawPhase>(psi(e.atom)) * e.mult;
    return s;
  }

  RawPhase lift(const Universe& U, AtomId a) const {
    AtomNode n = U.atom(a);
    if (n.level != level()) throw LevelMismatch(n.level, level());
    return psi_diagram(U, DiagramId{n.plus}) - psi_diagram(U, DiagramId{n.minus});
  }

private:
  explicit CoboundaryCharacter(int psi_level) : psi_level_(psi_level) {}

  int psi_level_;
  bool use_table_ = false;
  bool fallback_ = false;
  absl::flat_hash_map<AtomId, Phase> table_;
};

template <CharacterLike X> RawPhase evaluate_character_raw(const Universe& U, const X& chi, const VirtualDiagram& xi) {
  if (!xi.empty() && xi.level() != chi.level()) throw LevelMismatch(xi.level(), chi.level());
  RawPhase s = 0;
  for (const auto& [a, c] : xi) s += chi.lift(U, a) * c;
  return s;
}

/// Sum of xi(a) theta_a, reduced to the circle.
template <CharacterLike X> Phase evaluate_character(const Universe& U, const X& chi, const VirtualDiagram& xi) {
  if (!xi.empty() && xi.level() != chi.level()) throw LevelMismatch(xi.level(), chi.level());
  std::uint64_t s = 0;
  for (const auto& [a, c] : xi) s += static_cast<std::uint64_t>(chi.lift(U, a)) * static_cast<std::uint64_t>(c);
  return Phase::from_turns(s);
}

/// Rational coefficients: exact up to one unit of 2^-64 turn (floor).
template <CharacterLike X> Phase evaluate_character(const Universe& U, const X& chi, const RationalDiagram& xi) {
  if (!xi.empty() && xi.level() != chi.level()) throw LevelMismatch(xi.level(), chi.level());
  std::int64_t L = 1;
  for (const auto& t : xi) L = std::lcm(L, t.second.denominator());
  RawPhase s = 0;
  for (const auto& [a, c] : xi) s += chi.lift(U, a) * (c.numerator() * (L / c.denominator()));
  return Phase::reduce(floor_div(s, L));
}

/// Phase of chi on B(xi, xi) computed from the pair double sum, without
/// forming the aggregate. Diagonal classes contribute 0.
template <CharacterLike X> Phase quadratic_phase(Universe& U, const VirtualDiagram& xi, const X& chi) {
  auto t = xi.terms();
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (!atom_leq(U, t[i].first, t[j].first) || atom_leq(U, t[j].first, t[i].first)) continue;
      AtomId cls = U.pair(U.singleton(t[i].first), U.singleton(t[j].first));
      std::uint64_t th = static_cast<std::uint64_t>(chi.lift(U, cls));
      s += th * static_cast<std::uint64_t>(t[i].second) * static_cast<std::uint64_t>(t[j].second);
    }
  }
  return Phase::from_turns(s);
}

struct HarmonicStats {
  DominanceStats dominance;
};

/// Reusable buffers for repeated fast evaluations.
struct HarmonicWorkspace {
  std::vector<AtomId> atoms;
  std::vector<double> minus, plus, flat;
  std::vector<std::int64_t> coeff;
};

/// Exact lift of S = sum_v psi(v) xi_v Z-(v) - sum_u psi(u) xi_u Z+(u).
inline RawPhase harmonic_eval_raw(const Universe& U, const VirtualDiagram& xi, const CoboundaryCharacter& psi,
                                  HarmonicStats* st = nullptr, HarmonicWorkspace* ws = nullptr) {
  if (xi.empty()) return 0;
  if (xi.level() != psi.psi_level()) throw LevelMismatch(xi.level(), psi.psi_level());
  if (xi.level() != 1)
    throw CoordinatesUnavailable("no coordinate representation at level " + std::to_string(xi.level()) +
                                 "; use quadratic_phase");
  HarmonicWorkspace local;
  HarmonicWorkspace& w = ws ? *ws : local;
  const int r0 = U.ground_dim();
  const int r = 2 * r0;
  w.atoms.clear();
  w.coeff.clear();
  for (const auto& [a, c] : xi) {
    w.atoms.push_back(a);
    w.coeff.push_back(c);
  }
  U.interval_coords(w.atoms, w.minus, w.plus);
  w.flat.resize(w.atoms.size() * r);
  for (std::size_t i = 0; i < w.atoms.size(); ++i)
    for (int k = 0; k < r0; ++k) {
      w.flat[i * r + k] = -w.minus[i * r0 + k];
      w.flat[i * r + r0 + k] = w.plus[i * r0 + k];
    }
  DominanceStats* ds = st ? &st->dominance : nullptr;
  auto [zdown, zup] = dominance_sums_both(r, w.flat, w.coeff, ds);
  RawPhase s = 0;
  std::size_t i = 0;
  for (const auto& [a, c] : xi) {
    RawPhase pc = static_cast<RawPhase>(psi.psi(a)) * c;
    s += pc * (zdown[i] - zup[i]);
    ++i;
  }
  return s;
}

inline Phase harmonic_eval(const Universe& U, const VirtualDiagram& xi, const CoboundaryCharacter& psi,
                           HarmonicStats* st = nullptr) {
  return Phase::reduce(harmonic_eval_raw(U, xi, psi, st));
}

/// Phase of chi on Xi_s summed directly over tree labelings.
template <CharacterLike X>
Phase iterated_character_phase(Universe& U, const VirtualDiagram& xi, int s, const X& chi,
                               const AggregateOptions& opt = {}, std::uint64_t max_labelings = std::uint64_t{1} << 22) {
  if (!xi.empty() && xi.level() + s != chi.level()) throw LevelMismatch(xi.level() + s, chi.level());
  std::uint64_t acc = 0;
  detail::for_each_labeling(U, xi, s, opt, max_labelings, [&](AtomId root, std::int64_t c) {
    acc += static_cast<std::uint64_t>(chi.lift(U, root)) * static_cast<std::uint64_t>(c);
  });
  return Phase::from_turns(acc);
}

} // namespace hopd
