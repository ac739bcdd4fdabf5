#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/hash/hash.h>

#include "hopd/errors.hpp"

namespace hopd {

template <class Tag> struct Id {
  std::uint32_t value = 0;
  friend auto operator<=>(const Id&, const Id&) = default;
  template <class H> friend H AbslHashValue(H h, Id id) {
    return H::combine(std::move(h), id.value);
  }
};

using PointId = Id<struct PointTag>;
using AtomId = Id<struct AtomTag>;
using DiagramId = Id<struct DiagramTag>;

struct PreorderSpec {
  int ground_dim = 1;
  /// permissive reading of diagram_leq: any atom may stay unmatched
  bool diagonal_always_admissible = false;
};

/// minus/plus are PointId values at level 1 and DiagramId values above
struct AtomNode {
  int level = 0;
  std::uint32_t minus = 0;
  std::uint32_t plus = 0;
};

struct DiagramEntry {
  AtomId atom;
  std::int64_t mult = 0;
  friend bool operator==(const DiagramEntry&, const DiagramEntry&) = default;
};

struct DiagramNode {
  int level = 0;
  std::vector<DiagramEntry> entries;  // sorted by atom id, mult > 0
};

/// Hash-consing table for points, atoms and diagrams. Structurally equal
/// objects receive the same id, so ids double as memo keys.
class Universe {
public:
  explicit Universe(PreorderSpec spec = {}) : spec_(spec) {
    if (spec_.ground_dim < 1) throw InvalidArgument("ground dimension must be >= 1");
  }
  Universe(const Universe&) = delete;
  Universe& operator=(const Universe&) = delete;

  const PreorderSpec& spec() const { return spec_; }
  int ground_dim() const { return spec_.ground_dim; }

  PointId point(std::span<const double> coords) {
    if (static_cast<int>(coords.size()) != spec_.ground_dim)
      throw InvalidArgument("point has wrong dimension");
    std::vector<double> key(coords.begin(), coords.end());
    for (std::size_t k = 0; k < key.size(); ++k) {
      double& x = key[k];
      if (std::isnan(x)) throw InvalidArgument("NaN coordinate");
      if (x == -std::numeric_limits<double>::infinity())
        throw InvalidArgument("-inf coordinate");
      if (x == 0.0) x = 0.0;
    }
    {
      std::shared_lock lock(mu_);
      if (auto it = point_ids_.find(key); it != point_ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, fresh] = point_ids_.try_emplace(key, PointId{static_cast<std::uint32_t>(points_.size())});
    if (fresh) points_.push_back(std::move(key));
    return it->second;
  }

  PointId point(double x) { return point(std::span<const double>(&x, 1)); }

  std::span<const double> coords(PointId p) const {
    std::shared_lock lock(mu_);
    return points_.at(p.value);
  }

  AtomId interval(PointId minus, PointId plus) { return intern_atom({1, minus.value, plus.value}); }

  AtomId interval(double birth, double death) { return interval(point(birth), point(death)); }

  AtomId pair(DiagramId minus, DiagramId plus) {
    int lm = level(minus), lp = level(plus);
    if (lm != lp) throw LevelMismatch(lm, lp);
    return intern_atom({lm + 1, minus.value, plus.value});
  }

  /// Interns many pairs under one lock.
  std::vector<AtomId> pairs(std::span<const std::pair<DiagramId, DiagramId>> ps) {
    std::vector<AtomId> out(ps.size());
    std::unique_lock lock(mu_);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      int lm = diagrams_.at(ps[i].first.value).level;
      int lp = diagrams_.at(ps[i].second.value).level;
      if (lm != lp) throw LevelMismatch(lm, lp);
      out[i] = intern_atom_locked({lm + 1, ps[i].first.value, ps[i].second.value});
    }
    return out;
  }

  /// Entries must already be canonical (sorted by id, merged, positive,
  /// diagonal-free); see make_diagram for the checked path.
  DiagramId intern_diagram(int level, std::vector<DiagramEntry> entries) {
    std::unique_lock lock(mu_);
    return intern_diagram_locked(level, std::move(entries));
  }

  DiagramId singleton(AtomId a) {
    std::unique_lock lock(mu_);
    int lv = atoms_.at(a.value).level;
    return intern_diagram_locked(lv, {{a, 1}});
  }

  std::vector<DiagramId> singletons(std::span<const AtomId> as) {
    std::vector<DiagramId> out(as.size());
    std::unique_lock lock(mu_);
    for (std::size_t i = 0; i < as.size(); ++i)
      out[i] = intern_diagram_locked(atoms_.at(as[i].value).level, {{as[i], 1}});
    return out;
  }

  DiagramId empty_diagram(int level) { return intern_diagram(level, {}); }

  AtomNode atom(AtomId a) const {
    std::shared_lock lock(mu_);
    return atoms_.at(a.value);
  }

  /// Row-major endpoint coordinates of level-1 atoms under one lock.
  void interval_coords(std::span<const AtomId> as, std::vector<double>& minus, std::vector<double>& plus) const {
    const std::size_t r = spec_.ground_dim;
    minus.resize(as.size() * r);
    plus.resize(as.size() * r);
    std::shared_lock lock(mu_);
    for (std::size_t i = 0; i < as.size(); ++i) {
      const AtomNode& n = atoms_.at(as[i].value);
      if (n.level != 1) throw LevelMismatch(n.level, 1);
      std::copy_n(points_[n.minus].begin(), r, minus.begin() + i * r);
      std::copy_n(points_[n.plus].begin(), r, plus.begin() + i * r);
    }
  }

  int level(AtomId a) const { return atom(a).level; }

  /// Reference stays valid: nodes live in a deque and are never mutated.
  const DiagramNode& diagram(DiagramId d) const {
    std::shared_lock lock(mu_);
    return diagrams_.at(d.value);
  }

  int level(DiagramId d) const { return diagram(d).level; }

  std::size_t point_count() const { std::shared_lock l(mu_); return points_.size(); }
  std::size_t atom_count() const { std::shared_lock l(mu_); return atoms_.size(); }
  std::size_t diagram_count() const { std::shared_lock l(mu_); return diagrams_.size(); }

  /// Cache for level >= 2 preorder queries.
  std::optional<bool> cached_leq(AtomId u, AtomId v) const {
    std::shared_lock lock(mu_);
    auto it = leq_cache_.find(key(u, v));
    if (it == leq_cache_.end()) return std::nullopt;
    return it->second;
  }
  void store_leq(AtomId u, AtomId v, bool r) {
    std::unique_lock lock(mu_);
    leq_cache_.emplace(key(u, v), r);
  }

private:
  static std::uint64_t key(AtomId u, AtomId v) {
    return (std::uint64_t{u.value} << 32) | v.value;
  }

  AtomId intern_atom(AtomNode n) {
    AtomKey k{n.level, (std::uint64_t{n.minus} << 32) | n.plus};
    {
      std::shared_lock lock(mu_);
      if (auto it = atom_ids_.find(k); it != atom_ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    return intern_atom_locked(n);
  }

  AtomId intern_atom_locked(AtomNode n) {
    AtomKey k{n.level, (std::uint64_t{n.minus} << 32) | n.plus};
    auto [it, fresh] = atom_ids_.try_emplace(k, AtomId{static_cast<std::uint32_t>(atoms_.size())});
    if (fresh) atoms_.push_back(n);
    return it->second;
  }

  DiagramId intern_diagram_locked(int level, std::vector<DiagramEntry> entries) {
    if (level < 1) throw InvalidArgument("diagram level must be >= 1");
    DiagramKey k{level, {}};
    k.second.reserve(entries.size());
    for (const auto& e : entries) {
      if (atoms_.at(e.atom.value).level != level)
        throw LevelMismatch(atoms_[e.atom.value].level, level);
      k.second.emplace_back(e.atom.value, e.mult);
    }
    auto [it, fresh] =
        diagram_ids_.try_emplace(std::move(k), DiagramId{static_cast<std::uint32_t>(diagrams_.size())});
    if (fresh) diagrams_.push_back(DiagramNode{level, std::move(entries)});
    return it->second;
  }

  using AtomKey = std::pair<int, std::uint64_t>;
  using DiagramKey = std::pair<int, std::vector<std::pair<std::uint32_t, std::int64_t>>>;

  PreorderSpec spec_;
  mutable std::shared_mutex mu_;
  std::deque<std::vector<double>> points_;
  std::deque<AtomNode> atoms_;
  std::deque<DiagramNode> diagrams_;
  absl::flat_hash_map<std::vector<double>, PointId> point_ids_;
  absl::flat_hash_map<AtomKey, AtomId> atom_ids_;
  absl::flat_hash_map<DiagramKey, DiagramId> diagram_ids_;
  absl::flat_hash_map<std::uint64_t, bool> leq_cache_;
};

} // namespace hopd
