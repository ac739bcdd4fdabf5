#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hopd/errors.hpp"

namespace hopd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct AssignProblem {
  std::size_t rows = 0, cols = 0;
  std::vector<double> off;    // rows x cols, row-major
  std::vector<double> left;   // rows
  std::vector<double> right;  // cols
  double p = 1;
};

namespace detail {

/// Hungarian method with potentials on a square matrix; +inf entries are
/// forbidden. Returns the optimal assignment col -> row, or empty when
/// no finite assignment exists.
inline std::vector<int> hungarian(const std::vector<double>& a, int n) {
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double c = a[static_cast<std::size_t>(i0 - 1) * n + (j - 1)];
        double cur = c == kInf ? kInf : c - u[i0] - v[j];
        if (cur < minv[j]) minv[j] = cur, way[j] = j0;
        if (minv[j] < delta) delta = minv[j], j1 = j;
      }
      if (j1 < 0 || delta == kInf) return {};
      for (int j = 0; j <= n; ++j) {
        if (used[j]) u[p[j]] += delta, v[j] -= delta;
        else minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> col_to_row(n);
  for (int j = 1; j <= n; ++j) col_to_row[j - 1] = p[j] - 1;
  return col_to_row;
}

/// Kuhn matching on a boolean square matrix.
inline bool perfect_matching(const std::vector<char>& ok, int n) {
  std::vector<int> mc(n, -1);
  std::vector<char> seen(n);
  auto dfs = [&](auto& self, int r) -> bool {
    for (int c = 0; c < n; ++c) {
      if (!ok[static_cast<std::size_t>(r) * n + c] || seen[c]) continue;
      seen[c] = 1;
      if (mc[c] < 0 || self(self, mc[c])) {
        mc[c] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!dfs(dfs, r)) return false;
  }
  return true;
}

/// (m + l) square: [off | left on diagonal ; right on diagonal | 0].
template <class F> std::vector<double> augmented(const AssignProblem& P, F f) {
  const std::size_t m = P.rows, l = P.cols, n = m + l;
  std::vector<double> a(n * n, kInf);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < l; ++j) a[i * n + j] = f(P.off[i * l + j]);
    a[i * n + l + i] = f(P.left[i]);
  }
  for (std::size_t j = 0; j < l; ++j) {
    a[(m + j) * n + j] = f(P.right[j]);
    for (std::size_t i = 0; i < m; ++i) a[(m + j) * n + l + i] = 0;
  }
  return a;
}

inline void validate(const AssignProblem& P) {
  if (!(P.p >= 1)) throw InvalidArgument("assignment exponent p must be >= 1");
  if (P.off.size() != P.rows * P.cols || P.left.size() != P.rows || P.right.size() != P.cols)
    throw InvalidArgument("assignment problem dimensions are inconsistent");
  auto check = [](double c) {
    if (!(c >= 0)) throw InvalidArgument("assignment costs must be nonnegative");
  };
  for (double c : P.off) check(c);
  for (double c : P.left) check(c);
  for (double c : P.right) check(c);
}

} // namespace detail

/// Minimum-cost partial matching with per-element diagonal costs, in p-norm.
/// Returns +inf when every admissible matching uses a forbidden entry.
inline double assign_p(const AssignProblem& P) {
  detail::validate(P);
  const std::size_t m = P.rows, l = P.cols, n = m + l;
  if (n == 0) return 0;
  if (P.p == kInf) {
    std::vector<double> cand{0};
    for (double c : P.off) if (c < kInf) cand.push_back(c);
    for (double c : P.left) if (c < kInf) cand.push_back(c);
    for (double c : P.right) if (c < kInf) cand.push_back(c);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    auto feasible = [&](double tau) {
      auto a = detail::augmented(P, [](double c) { return c; });
      std::vector<char> ok(n * n);
      for (std::size_t k = 0; k < n * n; ++k) ok[k] = a[k] <= tau;
      return detail::perfect_matching(ok, static_cast<int>(n));
    };
    if (!feasible(cand.back())) return kInf;
    std::size_t lo = 0, hi = cand.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (feasible(cand[mid])) hi = mid;
      else lo = mid + 1;
    }
    return cand[lo];
  }
  const double p = P.p;
  auto a = detail::augmented(P, [p](double c) { return c == kInf ? kInf : (p == 1 ? c : std::pow(c, p)); });
  auto col_to_row = detail::hungarian(a, static_cast<int>(n));
  if (col_to_row.empty()) return kInf;
  double total = 0;
  for (std::size_t j = 0; j < n; ++j) total += a[static_cast<std::size_t>(col_to_row[j]) * n + j];
  if (total == kInf) return kInf;
  return p == 1 ? total : std::pow(total, 1.0 / p);
}

} // namespace hopd
