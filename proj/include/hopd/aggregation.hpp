#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "hopd/chain.hpp"
#include "hopd/preorder.hpp"
#include "hopd/universe.hpp"

namespace hopd {

struct AggregateOptions {
  bool drop_diagonal_classes = true;
  OverflowPolicy overflow = OverflowPolicy::error;
};

struct AggregateStats {
  std::uint64_t pairs_visited = 0;
  std::uint64_t classes = 0;
};

namespace detail {

/// Flattened endpoint coordinates of level-1 atoms for the hot loop.
struct IntervalTable {
  int r = 1;
  std::vector<double> m, p;

  static IntervalTable of(const Universe& U, const VirtualDiagram& x) {
    IntervalTable t;
    t.r = U.ground_dim();
    std::vector<AtomId> as;
    as.reserve(x.size());
    for (const auto& term : x) as.push_back(term.first);
    U.interval_coords(as, t.m, t.p);
    return t;
  }
};

inline bool interval_leq(const IntervalTable& A, std::size_t i, const IntervalTable& B, std::size_t j) {
  const int r = A.r;
  for (int k = 0; k < r; ++k)
    if (!(B.m[j * r + k] <= A.m[i * r + k] && A.p[i * r + k] <= B.p[j * r + k])) return false;
  return true;
}

/// Materializes the collected (i, j) -> coefficient list as level+1 classes.
inline VirtualDiagram emit_pairs(Universe& U, const VirtualDiagram& G, const VirtualDiagram& L,
                                 const std::vector<std::pair<std::uint64_t, std::int64_t>>& C) {
  std::vector<AtomId> ga, la;
  for (const auto& t : G) ga.push_back(t.first);
  for (const auto& t : L) la.push_back(t.first);
  auto gs = U.singletons(ga);
  auto ls = U.singletons(la);
  std::vector<std::pair<DiagramId, DiagramId>> ps;
  std::vector<std::int64_t> cs;
  ps.reserve(C.size());
  cs.reserve(C.size());
  for (const auto& [k, c] : C) {
    if (c == 0) continue;
    ps.emplace_back(gs[k >> 32], ls[k & 0xffffffffu]);
    cs.push_back(c);
  }
  auto ids = U.pairs(ps);
  std::vector<VirtualDiagram::Term> terms(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) terms[i] = {ids[i], cs[i]};
  return VirtualDiagram::from_terms(G.level() + 1, std::move(terms));
}

/// Visits every (i, j) once; the keep predicate decides membership.
template <class Keep>
VirtualDiagram pair_loop(Universe& U, const VirtualDiagram& G, const VirtualDiagram& L, Keep keep,
                         const AggregateOptions& opt, AggregateStats* st) {
  auto gt = G.terms();
  auto lt = L.terms();
  std::vector<std::pair<std::uint64_t, std::int64_t>> C;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < lt.size(); ++j) {
      if (!keep(i, j)) [[likely]] continue;
      C.emplace_back((std::uint64_t{i} << 32) | j, checked_mul(gt[i].second, lt[j].second, opt.overflow));
    }
  }
  if (st) {
    st->pairs_visited += static_cast<std::uint64_t>(gt.size()) * lt.size();
    st->classes += C.size();
  }
  return emit_pairs(U, G, L, C);
}

/// pair_loop specialised to r = 1 intervals.
template <bool KeepDiagonal>
VirtualDiagram interval_pair_loop(Universe& U, const VirtualDiagram& G, const VirtualDiagram& L,
                                  const IntervalTable& A, const IntervalTable& B, const AggregateOptions& opt,
                                  AggregateStats* st) {
  auto gt = G.terms();
  auto lt = L.terms();
  const double* bm = B.m.data();
  const double* bp = B.p.data();
  const std::size_t nl = lt.size();
  std::vector<std::pair<std::uint64_t, std::int64_t>> C;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double m = A.m[i], p = A.p[i];
    for (std::size_t j = 0; j < nl; ++j) {
      bool hit = (bm[j] <= m) & (p <= bp[j]);
      if constexpr (!KeepDiagonal) hit &= (bm[j] < m) | (p < bp[j]);
      if (!hit) [[likely]] continue;
      C.emplace_back((std::uint64_t{i} << 32) | j, checked_mul(gt[i].second, lt[j].second, opt.overflow));
    }
  }
  if (st) {
    st->pairs_visited += static_cast<std::uint64_t>(gt.size()) * nl;
    st->classes += C.size();
  }
  return emit_pairs(U, G, L, C);
}

} // namespace detail

/// B(G, L): every ordered pair u <= v contributes G(u) L(v) to the class
/// of (u, v). Diagonal classes (u <= v <= u) are dropped by default.
inline VirtualDiagram bilinear_aggregate(Universe& U, const VirtualDiagram& G, const VirtualDiagram& L,
                                         const AggregateOptions& opt = {}, AggregateStats* st = nullptr) {
  if (G.empty() || L.empty()) return VirtualDiagram(std::max(G.level(), L.level()) + 1);
  if (G.level() != L.level()) throw LevelMismatch(G.level(), L.level());
  if (G.level() == 1) {
    auto A = detail::IntervalTable::of(U, G);
    auto B = detail::IntervalTable::of(U, L);
    if (A.r == 1)
      return opt.drop_diagonal_classes ? detail::interval_pair_loop<false>(U, G, L, A, B, opt, st)
                                       : detail::interval_pair_loop<true>(U, G, L, A, B, opt, st);
    return detail::pair_loop(
        U, G, L,
        [&](std::size_t i, std::size_t j) {
          return detail::interval_leq(A, i, B, j) && !(opt.drop_diagonal_classes && detail::interval_leq(B, j, A, i));
        },
        opt, st);
  }
  auto gt = G.terms();
  auto lt = L.terms();
  return detail::pair_loop(
      U, G, L,
      [&](std::size_t i, std::size_t j) {
        return atom_leq(U, gt[i].first, lt[j].first) &&
               !(opt.drop_diagonal_classes && atom_leq(U, lt[j].first, gt[i].first));
      },
      opt, st);
}

/// Literal double loop over supp(xi) x supp(xi); the timed baseline.
inline VirtualDiagram naive_self_aggregate(Universe& U, const VirtualDiagram& xi, const AggregateOptions& opt = {},
                                           AggregateStats* st = nullptr) {
  return bilinear_aggregate(U, xi, xi, opt, st);
}

inline VirtualDiagram sum_aggregate(Universe& U, std::span<const VirtualDiagram> gammas,
                                    const AggregateOptions& opt = {}, AggregateStats* st = nullptr) {
  if (gammas.empty()) throw InvalidArgument("sum_aggregate needs at least one diagram");
  int level = gammas.front().level();
  VirtualDiagram acc(level + 1);
  for (const auto& g : gammas) {
    if (!g.empty() && level != 0 && g.level() != level) throw LevelMismatch(level, g.level());
    acc.add(naive_self_aggregate(U, g, opt, st), 1, opt.overflow);
  }
  return acc;
}

inline RationalDiagram mean_aggregate(Universe& U, std::span<const VirtualDiagram> gammas,
                                      const AggregateOptions& opt = {}, AggregateStats* st = nullptr) {
  auto sum = sum_aggregate(U, gammas, opt, st);
  const auto m = static_cast<std::int64_t>(gammas.size());
  std::vector<RationalDiagram::Term> terms;
  terms.reserve(sum.size());
  for (const auto& [a, c] : sum) terms.emplace_back(a, Rational(c, m));
  return RationalDiagram::from_terms(sum.level(), std::move(terms));
}

/// Xi_0 = xi, Xi_{r+1} = B(Xi_r, Xi_r). max_pairs bounds |supp Xi_r|^2 per step.
inline VirtualDiagram iterated_aggregate(Universe& U, const VirtualDiagram& xi, int s, const AggregateOptions& opt = {},
                                         std::uint64_t max_pairs = std::uint64_t{1} << 26) {
  if (s < 1) throw InvalidArgument("iteration depth must be >= 1");
  VirtualDiagram cur = xi;
  for (int r = 0; r < s; ++r) {
    auto n = static_cast<std::uint64_t>(cur.size());
    if (n * n > max_pairs) throw GuardExceeded("iterated aggregation exceeds pair guard");
    cur = bilinear_aggregate(U, cur, cur, opt);
  }
  return cur;
}

namespace detail {

/// Walks every labeling lambda: {0,1}^s -> supp(xi) of the depth-s binary
/// tree and calls fn(root_class, coefficient) for the surviving ones.
template <class Fn>
void for_each_labeling(Universe& U, const VirtualDiagram& xi, int s, const AggregateOptions& opt,
                       std::uint64_t max_labelings, Fn fn) {
  if (s < 1) throw InvalidArgument("iteration depth must be >= 1");
  const std::size_t k = xi.size();
  if (k == 0) return;
  const std::size_t leaves = std::size_t{1} << s;
  long double total = 1;
  for (std::size_t i = 0; i < leaves; ++i) total *= static_cast<long double>(k);
  if (total > static_cast<long double>(max_labelings)) throw GuardExceeded("tree expansion exceeds labeling guard");

  auto terms = xi.terms();
  absl::flat_hash_map<std::uint64_t, std::optional<AtomId>> memo;
  auto join = [&](AtomId a, AtomId b) -> std::optional<AtomId> {
    std::uint64_t key = (std::uint64_t{a.value} << 32) | b.value;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::optional<AtomId> r;
    if (atom_leq(U, a, b) && !(opt.drop_diagonal_classes && atom_leq(U, b, a)))
      r = U.pair(U.singleton(a), U.singleton(b));
    memo.emplace(key, r);
    return r;
  };

  std::vector<std::size_t> label(leaves, 0);
  std::vector<AtomId> row;
  for (;;) {
    std::int64_t coeff = 1;
    row.resize(leaves);
    for (std::size_t i = 0; i < leaves; ++i) {
      row[i] = terms[label[i]].first;
      coeff = checked_mul(coeff, terms[label[i]].second, opt.overflow);
    }
    bool alive = true;
    for (std::size_t width = leaves; width > 1 && alive; width /= 2) {
      for (std::size_t i = 0; i < width / 2; ++i) {
        auto j = join(row[2 * i], row[2 * i + 1]);
        if (!j) {
          alive = false;
          break;
        }
        row[i] = *j;
      }
    }
    if (alive) fn(row[0], coeff);
    std::size_t pos = leaves;
    while (pos > 0) {
      --pos;
      if (++label[pos] < k) break;
      label[pos] = 0;
      if (pos == 0) return;
    }
  }
}

} // namespace detail

/// Direct sum over leaf labelings of the depth-s binary tree.
inline VirtualDiagram tree_expansion_oracle(Universe& U, const VirtualDiagram& xi, int s,
                                            const AggregateOptions& opt = {},
                                            std::uint64_t max_labelings = std::uint64_t{1} << 22) {
  std::vector<VirtualDiagram::Term> terms;
  detail::for_each_labeling(U, xi, s, opt, max_labelings,
                            [&](AtomId root, std::int64_t c) { terms.emplace_back(root, c); });
  return VirtualDiagram::from_terms(xi.level() + s, std::move(terms), opt.overflow);
}

} // namespace hopd
