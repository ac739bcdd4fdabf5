#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "hopd/assign.hpp"
#include "hopd/chain.hpp"
#include "hopd/preorder.hpp"
#include "hopd/universe.hpp"

namespace hopd {

inline double pnorm(double a, double b, double p) {
  if (a == kInf || b == kInf) return kInf;
  if (p == kInf) return std::max(a, b);
  if (p == 1) return a + b;
  if (p == 2) return std::hypot(a, b);
  return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

inline double pnorm(const std::vector<double>& xs, double p) {
  double s = 0;
  for (double x : xs) {
    if (x == kInf) return kInf;
    s = p == kInf ? std::max(s, x) : s + (p == 1 ? x : std::pow(x, p));
  }
  return (p == kInf || p == 1) ? s : std::pow(s, 1.0 / p);
}

inline void check_exponent(double p) {
  if (!(p >= 1)) throw InvalidArgument("exponent p must be >= 1");
}

/// Euclidean ground distance; equal infinite coordinates contribute 0.
inline double ground_distance(const Universe& U, PointId a, PointId b) {
  if (a == b) return 0;
  auto x = U.coords(a), y = U.coords(b);
  if (x.size() == 1) {
    if (x[0] == y[0]) return 0;
    return std::abs(x[0] - y[0]);
  }
  double s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == y[k]) continue;
    double d = x[k] - y[k];
    if (std::isinf(d)) return kInf;
    s += d * d;
  }
  return std::sqrt(s);
}

/// Closed-form distance of a level-1 atom to the diagonal.
inline double interval_diagonal_distance(const Universe& U, AtomId u, double p) {
  AtomNode a = U.atom(u);
  double d = ground_distance(U, PointId{a.minus}, PointId{a.plus});
  if (p == kInf) return d / 2;
  return d * std::pow(2.0, 1.0 / p - 1.0);
}

enum class DiagonalMode { exact, approximate };

/// How distances to the diagonal are taken at levels >= 2. Exact mode scans
/// a configured finite set of diagonal atoms per level. Approximate mode
/// scans (u-,u-), (u+,u+) and (0,0) built from the operand itself.
struct DiagonalConfig {
  DiagonalMode mode = DiagonalMode::exact;
  absl::flat_hash_map<int, std::vector<AtomId>> sets;

  static DiagonalConfig approximate() { return {DiagonalMode::approximate, {}}; }
};

struct WassersteinCounters {
  std::uint64_t atom_calls = 0;
  std::uint64_t expansions = 0;
  std::uint64_t prunes = 0;
  std::uint64_t diagram_calls = 0;
  std::uint64_t assign_calls = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_keys = 0;
};

/// Recursive W_p on level-r diagrams. The naive variant is the literal
/// recursion; the certified variant memoizes every subproblem on interned
/// ids and skips product expansions that a lower bound rules out.
template <bool Certified> class BasicWasserstein {
public:
  BasicWasserstein(Universe& U, double p, DiagonalConfig cfg = {}) : U_(U), p_(p), cfg_(std::move(cfg)) {
    check_exponent(p);
    for (const auto& [level, set] : cfg_.sets)
      for (AtomId a : set) {
        if (U_.level(a) != level) throw LevelMismatch(U_.level(a), level);
        if (!is_diagonal(U_, a)) throw InvalidArgument("configured diagonal set contains a non-diagonal atom");
      }
  }

  double distance(DiagramId G, DiagramId L) {
    int a = U_.level(G), b = U_.level(L);
    if (a != b) throw LevelMismatch(a, b);
    return diagram_cost(G, L);
  }

  double diagram_cost(DiagramId G, DiagramId L) {
    if constexpr (Certified) {
      if (auto it = MD_.find(key(G.value, L.value)); it != MD_.end()) return ++c_.memo_hits, it->second;
    }
    ++c_.diagram_calls;
    double r;
    if (G == L) {
      r = 0;
    } else {
      const auto& g = U_.diagram(G);
      const auto& l = U_.diagram(L);
      std::vector<AtomId> us, vs;
      for (const auto& e : g.entries) us.insert(us.end(), e.mult, e.atom);
      for (const auto& e : l.entries) vs.insert(vs.end(), e.mult, e.atom);
      AssignProblem P;
      P.rows = us.size();
      P.cols = vs.size();
      P.p = p_;
      P.off.resize(P.rows * P.cols);
      for (std::size_t i = 0; i < us.size(); ++i)
        for (std::size_t j = 0; j < vs.size(); ++j) P.off[i * P.cols + j] = atom_cost(us[i], vs[j]);
      for (AtomId u : us) P.left.push_back(diagonal_cost(u));
      for (AtomId v : vs) P.right.push_back(diagonal_cost(v));
      ++c_.assign_calls;
      r = assign_p(P);
    }
    if constexpr (Certified) MD_.emplace(key(G.value, L.value), r);
    return r;
  }

  double atom_cost(AtomId u, AtomId v) {
    if constexpr (Certified) {
      if (auto it = MA_.find(key(u.value, v.value)); it != MA_.end()) return ++c_.memo_hits, it->second;
    }
    ++c_.atom_calls;
    double r;
    if (u == v) {
      r = 0;
    } else {
      AtomNode a = U_.atom(u), b = U_.atom(v);
      if (a.level != b.level) throw LevelMismatch(a.level, b.level);
      double e = diagonal_cost(u), f = diagonal_cost(v);
      bool pruned = false;
      if constexpr (Certified) {
        if (a.level >= 2) {
          double lb = pnorm(std::abs(empty_cost(DiagramId{a.minus}) - empty_cost(DiagramId{b.minus})),
                            std::abs(empty_cost(DiagramId{a.plus}) - empty_cost(DiagramId{b.plus})), p_);
          if (lb >= e + f) {
            ++c_.prunes;
            pruned = true;
          }
        }
      }
      r = e + f;
      if (!pruned) {
        ++c_.expansions;
        r = std::min(product(a, b), e + f);
      }
    }
    if constexpr (Certified) MA_.emplace(key(u.value, v.value), r);
    return r;
  }

  /// d_prod: p-norm of endpoint distances.
  double product_cost(AtomId u, AtomId v) {
    AtomNode a = U_.atom(u), b = U_.atom(v);
    if (a.level != b.level) throw LevelMismatch(a.level, b.level);
    return product(a, b);
  }

  double diagonal_cost(AtomId u) {
    if constexpr (Certified) {
      if (auto it = Mdiag_.find(u.value); it != Mdiag_.end()) return ++c_.memo_hits, it->second;
    }
    AtomNode a = U_.atom(u);
    double r;
    if (a.level == 1) {
      for (PointId pt : {PointId{a.minus}, PointId{a.plus}})
        for (double x : U_.coords(pt))
          if (!std::isfinite(x)) throw InvalidArgument("Wasserstein distance requires finite coordinates");
      r = interval_diagonal_distance(U_, u, p_);
    } else if (cfg_.mode == DiagonalMode::approximate) {
      DiagramId m{a.minus}, pl{a.plus};
      r = std::min(diagram_cost(m, pl), pnorm(empty_cost(m), empty_cost(pl), p_));
    } else {
      auto it = cfg_.sets.find(a.level);
      if (it == cfg_.sets.end() || it->second.empty())
        throw UnsupportedConfiguration("no finite diagonal set configured for level " + std::to_string(a.level));
      r = kInf;
      for (AtomId eta : it->second) r = std::min(r, product(a, U_.atom(eta)));
    }
    if constexpr (Certified) Mdiag_.emplace(u.value, r);
    return r;
  }

  /// W_p(Theta, 0) = p-norm of the diagonal costs.
  double empty_cost(DiagramId T) {
    if constexpr (Certified) {
      if (auto it = M0_.find(T.value); it != M0_.end()) return ++c_.memo_hits, it->second;
    }
    std::vector<double> ds;
    for (const auto& e : U_.diagram(T).entries) {
      double d = diagonal_cost(e.atom);
      ds.insert(ds.end(), e.mult, d);
    }
    double r = pnorm(ds, p_);
    if constexpr (Certified) M0_.emplace(T.value, r);
    return r;
  }

  const WassersteinCounters& counters() {
    c_.memo_keys = MD_.size() + MA_.size() + Mdiag_.size() + M0_.size();
    return c_;
  }

  double p() const { return p_; }

private:
  static std::uint64_t key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

  double product(const AtomNode& a, const AtomNode& b) {
    if (a.level == 1)
      return pnorm(ground_distance(U_, PointId{a.minus}, PointId{b.minus}),
                   ground_distance(U_, PointId{a.plus}, PointId{b.plus}), p_);
    return pnorm(diagram_cost(DiagramId{a.minus}, DiagramId{b.minus}),
                 diagram_cost(DiagramId{a.plus}, DiagramId{b.plus}), p_);
  }

  Universe& U_;
  double p_;
  DiagonalConfig cfg_;
  WassersteinCounters c_;
  absl::flat_hash_map<std::uint64_t, double> MD_, MA_;
  absl::flat_hash_map<std::uint32_t, double> Mdiag_, M0_;
};

using NaiveWasserstein = BasicWasserstein<false>;
using CertifiedWasserstein = BasicWasserstein<true>;

inline double naive_wasserstein(Universe& U, DiagramId G, DiagramId L, double p, DiagonalConfig cfg = {},
                                WassersteinCounters* out = nullptr) {
  NaiveWasserstein w(U, p, std::move(cfg));
  double r = w.distance(G, L);
  if (out) *out = w.counters();
  return r;
}

inline double certified_wasserstein(Universe& U, DiagramId G, DiagramId L, double p, DiagonalConfig cfg = {},
                                    WassersteinCounters* out = nullptr) {
  CertifiedWasserstein w(U, p, std::move(cfg));
  double r = w.distance(G, L);
  if (out) *out = w.counters();
  return r;
}

inline double empty_cost(Universe& U, DiagramId T, double p, DiagonalConfig cfg = {}) {
  return CertifiedWasserstein(U, p, std::move(cfg)).empty_cost(T);
}

/// d_prod; at level 1 this is the p-norm of ground distances and may be +inf.
inline double d_prod(Universe& U, AtomId u, AtomId v, double p, DiagonalConfig cfg = {}) {
  check_exponent(p);
  AtomNode a = U.atom(u), b = U.atom(v);
  if (a.level != b.level) throw LevelMismatch(a.level, b.level);
  if (a.level == 1)
    return pnorm(ground_distance(U, PointId{a.minus}, PointId{b.minus}),
                 ground_distance(U, PointId{a.plus}, PointId{b.plus}), p);
  return CertifiedWasserstein(U, p, std::move(cfg)).product_cost(u, v);
}

inline double d_diag(Universe& U, AtomId u, double p, DiagonalConfig cfg = {}) {
  check_exponent(p);
  if (U.level(u) == 1) return interval_diagonal_distance(U, u, p);
  return CertifiedWasserstein(U, p, std::move(cfg)).diagonal_cost(u);
}

inline double d1(Universe& U, AtomId u, AtomId v, double p, DiagonalConfig cfg = {}) {
  if (u == v) return 0;
  double a = d_prod(U, u, v, p, cfg);
  double b = d_diag(U, u, p, cfg) + d_diag(U, v, p, cfg);
  return std::min(a, b);
}

/// rho(a, b) = W_1(a+ + b-, b+ + a-); defined for p = 1 only.
inline double group_metric(Universe& U, const VirtualDiagram& a, const VirtualDiagram& b, double p = 1,
                           DiagonalConfig cfg = {}) {
  if (p != 1) throw UnsupportedConfiguration("group metric is only defined for p = 1");
  int level = std::max(a.level(), b.level());
  if (!a.empty() && !b.empty() && a.level() != b.level()) throw LevelMismatch(a.level(), b.level());
  if (level < 1) return 0;
  std::vector<DiagramEntry> lhs, rhs;
  for (const auto& [x, c] : a) (c > 0 ? lhs : rhs).push_back({x, c > 0 ? c : -c});
  for (const auto& [x, c] : b) (c > 0 ? rhs : lhs).push_back({x, c > 0 ? c : -c});
  DiagramId G = make_diagram(U, level, std::move(lhs));
  DiagramId L = make_diagram(U, level, std::move(rhs));
  return certified_wasserstein(U, G, L, 1, std::move(cfg));
}

} // namespace hopd
