#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hopd/errors.hpp"

namespace hopd {

struct DominancePoint {
  std::vector<double> coords;
  std::int64_t coeff = 0;
  std::uint64_t id = 0;
};

struct DominanceInput {
  int r = 1;
  std::vector<DominancePoint> points;
};

enum class Direction { down, up };

struct DominanceStats {
  std::uint64_t ops = 0;
};

namespace detail {

/// Rank-compressed, row-major coordinates plus coefficients.
class DominanceSolver {
public:
  DominanceSolver(int r, std::size_t n, std::vector<std::int32_t> ranks, std::vector<std::int64_t> coeff,
                  DominanceStats* st)
      : r_(r), n_(n), rank_(std::move(ranks)), coeff_(std::move(coeff)), ans_(n, 0), st_(st) {}

  std::vector<std::int64_t> run() {
    std::vector<std::uint32_t> all(n_);
    std::iota(all.begin(), all.end(), 0u);
    if (r_ == 2) {
      self2(all);
    } else {
      cross(all, all, 0);
    }
    return std::move(ans_);
  }

private:
  std::int32_t at(std::uint32_t i, int k) const { return rank_[std::size_t{i} * r_ + k]; }
  void count(std::uint64_t k) { if (st_) st_->ops += k; }

  /// Both lists are the full point set: bucket by dim-0 rank plus a Fenwick sweep.
  void self2(std::vector<std::uint32_t>& idx) {
    std::int32_t xmax = 0, ymax = 0;
    for (std::uint32_t i = 0; i < n_; ++i) xmax = std::max(xmax, at(i, 0)), ymax = std::max(ymax, at(i, 1));
    std::vector<std::uint32_t> start(xmax + 2, 0);
    for (std::uint32_t i = 0; i < n_; ++i) ++start[at(i, 0) + 1];
    for (std::int32_t x = 0; x <= xmax; ++x) start[x + 1] += start[x];
    {
      std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
      for (std::uint32_t i = 0; i < n_; ++i) idx[fill[at(i, 0)]++] = i;
    }
    bit_.assign(ymax + 2, 0);
    for (std::int32_t x = 0; x <= xmax; ++x) {
      for (std::size_t t = start[x]; t < start[x + 1]; ++t) add(at(idx[t], 1) + 1, coeff_[idx[t]]);
      for (std::size_t t = start[x]; t < start[x + 1]; ++t) ans_[idx[t]] += prefix(at(idx[t], 1) + 1);
    }
  }

  void add(std::int32_t i, std::int64_t v) {
    for (; i < static_cast<std::int32_t>(bit_.size()); i += i & -i) bit_[i] += v, count(1);
  }
  std::int64_t prefix(std::int32_t i) {
    std::int64_t s = 0;
    for (; i > 0; i -= i & -i) s += bit_[i], count(1);
    return s;
  }

  /// ans[q] += sum of coeff[s] over s in src with rank(s) <= rank(q) in dims k..r-1.
  void cross(const std::vector<std::uint32_t>& src, const std::vector<std::uint32_t>& qry, int k) {
    if (src.empty() || qry.empty()) return;
    if (k == r_ - 1) return base1(src, qry, k);
    if (k == r_ - 2) return base2(src, qry, k);
    std::vector<std::int32_t> vals;
    vals.reserve(src.size() + qry.size());
    for (auto i : src) vals.push_back(at(i, k));
    for (auto i : qry) vals.push_back(at(i, k));
    auto mid = vals.begin() + vals.size() / 2;
    std::nth_element(vals.begin(), mid, vals.end());
    std::int32_t pivot = *mid;
    std::int32_t lo = *std::min_element(vals.begin(), vals.end());
    std::int32_t hi = *std::max_element(vals.begin(), vals.end());
    count(vals.size());
    if (lo == hi) return cross(src, qry, k + 1);
    if (pivot == hi) {
      pivot = lo;
      for (auto v : vals)
        if (v < hi) pivot = std::max(pivot, v);
    }
    std::vector<std::uint32_t> ls, rs, lq, rq;
    for (auto i : src) (at(i, k) <= pivot ? ls : rs).push_back(i);
    for (auto i : qry) (at(i, k) <= pivot ? lq : rq).push_back(i);
    cross(ls, lq, k);
    cross(rs, rq, k);
    cross(ls, rq, k + 1);
  }

  void base1(const std::vector<std::uint32_t>& src, const std::vector<std::uint32_t>& qry, int k) {
    std::vector<std::pair<std::int32_t, std::int64_t>> s;
    s.reserve(src.size());
    for (auto i : src) s.emplace_back(at(i, k), coeff_[i]);
    std::sort(s.begin(), s.end());
    std::vector<std::int64_t> pre(s.size() + 1, 0);
    for (std::size_t t = 0; t < s.size(); ++t) pre[t + 1] = pre[t] + s[t].second;
    for (auto q : qry) {
      auto it = std::upper_bound(s.begin(), s.end(), std::pair{at(q, k), INT64_MAX});
      ans_[q] += pre[it - s.begin()];
    }
    count(src.size() + qry.size());
  }

  void base2(const std::vector<std::uint32_t>& src, const std::vector<std::uint32_t>& qry, int k) {
    // events sorted by dim k, sources before queries on ties
    std::vector<std::pair<std::int64_t, std::uint32_t>> ev;
    ev.reserve(src.size() + qry.size());
    for (auto i : src) ev.emplace_back(std::int64_t{at(i, k)} * 2, i);
    for (auto i : qry) ev.emplace_back(std::int64_t{at(i, k)} * 2 + 1, i);
    std::sort(ev.begin(), ev.end());
    std::vector<std::int32_t> ys;
    ys.reserve(src.size());
    for (auto i : src) ys.push_back(at(i, k + 1));
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    bit_.assign(ys.size() + 1, 0);
    for (auto [key, i] : ev) {
      std::int32_t y = at(i, k + 1);
      auto pos = static_cast<std::int32_t>(std::upper_bound(ys.begin(), ys.end(), y) - ys.begin());
      if (key % 2 == 0) add(pos, coeff_[i]);
      else ans_[i] += prefix(pos);
    }
  }

  int r_;
  std::size_t n_;
  std::vector<std::int32_t> rank_;
  std::vector<std::int64_t> coeff_;
  std::vector<std::int64_t> ans_;
  std::vector<std::int64_t> bit_;
  DominanceStats* st_;
};

/// Per-dimension rank compression; ties share a rank.
inline std::vector<std::int32_t> compress(int r, std::size_t n, std::span<const double> flat, bool negate) {
  std::vector<std::int32_t> ranks(n * r);
  std::vector<std::pair<double, std::uint32_t>> col(n);
  for (int k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      col[i] = {negate ? -flat[i * r + k] : flat[i * r + k], static_cast<std::uint32_t>(i)};
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::int32_t rk = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (t == 0 || col[t].first != col[t - 1].first) ++rk;
      ranks[std::size_t{col[t].second} * r + k] = rk;
    }
  }
  return ranks;
}

} // namespace detail

/// Zeta transform over the coordinatewise order on flat row-major input.
/// down: Z(v) = sum of coeff(u) over u <= v; up: over u >= v. Inclusive.
inline std::vector<std::int64_t> dominance_sums(int r, std::span<const double> flat, std::span<const std::int64_t> coeff,
                                                Direction dir, DominanceStats* st = nullptr) {
  if (r < 1) throw InvalidArgument("dominance dimension must be >= 1");
  const std::size_t n = coeff.size();
  if (flat.size() != n * static_cast<std::size_t>(r)) throw InvalidArgument("coordinate array size mismatch");
  if (n == 0) return {};
  auto ranks = detail::compress(r, n, flat, dir == Direction::up);
  detail::DominanceSolver s(r, n, std::move(ranks), {coeff.begin(), coeff.end()}, st);
  return s.run();
}

/// Both directions from one rank compression.
inline std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>
dominance_sums_both(int r, std::span<const double> flat, std::span<const std::int64_t> coeff,
                    DominanceStats* st = nullptr) {
  if (r < 1) throw InvalidArgument("dominance dimension must be >= 1");
  const std::size_t n = coeff.size();
  if (flat.size() != n * static_cast<std::size_t>(r)) throw InvalidArgument("coordinate array size mismatch");
  if (n == 0) return {};
  auto down = detail::compress(r, n, flat, false);
  std::vector<std::int32_t> top(r, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < r; ++k) top[k] = std::max(top[k], down[i * r + k]);
  std::vector<std::int32_t> up(down.size());
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < r; ++k) up[i * r + k] = top[k] - down[i * r + k];
  std::vector<std::int64_t> c(coeff.begin(), coeff.end());
  auto zd = detail::DominanceSolver(r, n, std::move(down), c, st).run();
  auto zu = detail::DominanceSolver(r, n, std::move(up), std::move(c), st).run();
  return {std::move(zd), std::move(zu)};
}

/// Result is aligned with input.points.
inline std::vector<std::int64_t> dominance_sums(const DominanceInput& in, Direction dir, DominanceStats* st = nullptr) {
  std::vector<double> flat;
  std::vector<std::int64_t> coeff;
  flat.reserve(in.points.size() * in.r);
  for (const auto& p : in.points) {
    if (static_cast<int>(p.coords.size()) != in.r) throw InvalidArgument("point has wrong dimension");
    flat.insert(flat.end(), p.coords.begin(), p.coords.end());
    coeff.push_back(p.coeff);
  }
  return dominance_sums(in.r, flat, coeff, dir, st);
}

} // namespace hopd
