#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopd/graph.hpp"
#include "hopd/rng.hpp"

namespace hopd {

enum class Model { er, ws, ba, cm, sbm, chung_lu, ksw, girg, hrg, ergm };

inline constexpr std::array<Model, 10> kAllModels{Model::er,  Model::ws,  Model::ba,   Model::cm,  Model::sbm,
                                                  Model::chung_lu, Model::ksw, Model::girg, Model::hrg, Model::ergm};

inline constexpr std::array<std::string_view, 10> kModelNames{"er",  "ws",  "ba",   "cm",  "sbm",
                                                              "chunglu", "ksw", "girg", "hrg", "ergm"};

inline int model_index(Model m) { return static_cast<int>(m); }
inline std::string_view model_name(Model m) { return kModelNames[model_index(m)]; }

inline Model parse_model(std::string_view s) {
  for (std::size_t i = 0; i < kModelNames.size(); ++i)
    if (kModelNames[i] == s) return kAllModels[i];
  throw InvalidArgument("unknown model '" + std::string(s) + "'");
}

inline std::uint64_t seed_for(std::uint64_t model_index, std::uint64_t sample_index) {
  return 14 + 1000003 * (model_index + 1) + 9176 * (sample_index + 1);
}

struct ModelSpec {
  Model model = Model::er;
  int n = 50;
  double er_p = 0.10;
  int ws_k = 4;
  double ws_beta = 0.1;
  int ba_m = 2;
  int cm_degree = 4;
  int sbm_blocks = 2;
  double sbm_in = 0.22, sbm_out = 0.04;
  double cl_avg_degree = 4.0, cl_exponent = 2.5;
  int ksw_rows = 5, ksw_cols = 10, ksw_long = 1;
  double ksw_alpha = 2.0;
  double girg_tau = 2.5, girg_alpha = 2.0;
  double hrg_temperature = 0.5, hrg_alpha = 0.75;
  double ergm_edge = -1.5, ergm_triangle = 0.1, ergm_p0 = 0.10;
  int ergm_steps = 3000;

  static ModelSpec of(Model m) {
    ModelSpec s;
    s.model = m;
    return s;
  }
};

struct GeneratedGraph {
  WeightedGraph graph;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::string metadata_text() const {
    std::string s;
    for (const auto& [k, v] : metadata) s += k + "=" + v + "\n";
    return s;
  }
};

namespace detail {

class EdgeSet {
public:
  explicit EdgeSet(int n) : n_(n), adj_(n) {}
  bool has(int a, int b) const { return adj_[a].contains(b); }
  bool add(int a, int b) {
    if (a == b || has(a, b)) return false;
    adj_[a].insert(b);
    adj_[b].insert(a);
    return true;
  }
  void remove(int a, int b) {
    adj_[a].erase(b);
    adj_[b].erase(a);
  }
  int degree(int a) const { return static_cast<int>(adj_[a].size()); }
  const std::set<int>& neighbors(int a) const { return adj_[a]; }
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n_; ++a)
      for (int b : adj_[a])
        if (a < b) out.emplace_back(a, b);
    return out;
  }

private:
  int n_;
  std::vector<std::set<int>> adj_;
};

inline std::string num(double x) { return format_number(x); }

inline void check(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(std::string("invalid model parameter: ") + what);
}

} // namespace detail

/// Deterministic graph for (spec, seed). Structure draws use stream 0 and
/// edge marks use stream 1 of the same seed.
inline GeneratedGraph generate(const ModelSpec& s, std::uint64_t seed) {
  using detail::num;
  const int n = s.n;
  detail::check(n >= 1, "n >= 1");
  Pcg32 rng(seed, 0);
  Pcg32 marks(seed, 1);
  detail::EdgeSet E(n);
  std::vector<double> weight_of;  // geometric weights, filled alongside edges
  std::vector<std::pair<std::string, std::string>> meta{{"model", std::string(model_name(s.model))},
                                                        {"n", std::to_string(n)},
                                                        {"seed", std::to_string(seed)}};
  std::string weight_policy = "uniform_mark";
  std::uint64_t loops_removed = 0, multi_removed = 0;
  std::vector<std::array<double, 2>> pos;
  std::vector<std::array<double, 2>> polar;
  std::function<double(int, int)> geometric;

  switch (s.model) {
  case Model::er: {
    detail::check(s.er_p >= 0 && s.er_p <= 1, "er_p in [0,1]");
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.uniform() < s.er_p) E.add(a, b);
    meta.emplace_back("p", num(s.er_p));
    break;
  }
  case Model::ws: {
    detail::check(s.ws_k % 2 == 0 && s.ws_k < n && s.ws_k >= 0, "ws_k even and < n");
    detail::check(s.ws_beta >= 0 && s.ws_beta <= 1, "ws_beta in [0,1]");
    for (int j = 1; j <= s.ws_k / 2; ++j)
      for (int a = 0; a < n; ++a) E.add(a, (a + j) % n);
    for (int j = 1; j <= s.ws_k / 2; ++j)
      for (int a = 0; a < n; ++a) {
        int b = (a + j) % n;
        if (!E.has(a, b) || rng.uniform() >= s.ws_beta) continue;
        if (E.degree(a) >= n - 1) continue;
        int c;
        do c = static_cast<int>(rng.bounded(n));
        while (c == a || E.has(a, c));
        E.remove(a, b);
        E.add(a, c);
      }
    meta.emplace_back("k", std::to_string(s.ws_k));
    meta.emplace_back("beta", num(s.ws_beta));
    break;
  }
  case Model::ba: {
    const int m = s.ba_m, m0 = s.ba_m + 1;
    detail::check(m >= 1 && m0 <= n, "1 <= ba_m < n");
    std::vector<int> pool;
    for (int a = 0; a < m0; ++a)
      for (int b = a + 1; b < m0; ++b) {
        E.add(a, b);
        pool.push_back(a);
        pool.push_back(b);
      }
    for (int v = m0; v < n; ++v) {
      std::set<int> targets;
      while (static_cast<int>(targets.size()) < m) targets.insert(pool[rng.bounded(static_cast<std::uint32_t>(pool.size()))]);
      for (int t : targets) {
        E.add(v, t);
        pool.push_back(v);
        pool.push_back(t);
      }
    }
    meta.emplace_back("m", std::to_string(m));
    meta.emplace_back("m0", std::to_string(m0));
    meta.emplace_back("seed_graph", "complete");
    break;
  }
  case Model::cm: {
    detail::check(s.cm_degree >= 0 && s.cm_degree < n && (static_cast<long>(s.cm_degree) * n) % 2 == 0,
                  "cm_degree < n with even degree sum");
    std::vector<int> stubs;
    for (int a = 0; a < n; ++a) stubs.insert(stubs.end(), s.cm_degree, a);
    for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.bounded(static_cast<std::uint32_t>(i))]);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int a = stubs[i], b = stubs[i + 1];
      if (a == b) ++loops_removed;
      else if (!E.add(a, b)) ++multi_removed;
    }
    meta.emplace_back("degree", std::to_string(s.cm_degree));
    break;
  }
  case Model::sbm: {
    detail::check(s.sbm_blocks >= 1 && s.sbm_in >= 0 && s.sbm_in <= 1 && s.sbm_out >= 0 && s.sbm_out <= 1,
                  "sbm probabilities in [0,1]");
    auto block = [&](int a) { return static_cast<int>(static_cast<long>(a) * s.sbm_blocks / n); };
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.uniform() < (block(a) == block(b) ? s.sbm_in : s.sbm_out)) E.add(a, b);
    meta.emplace_back("blocks", std::to_string(s.sbm_blocks));
    meta.emplace_back("p_in", num(s.sbm_in));
    meta.emplace_back("p_out", num(s.sbm_out));
    break;
  }
  case Model::chung_lu: {
    detail::check(s.cl_exponent > 2 && s.cl_avg_degree > 0, "chung-lu exponent > 2");
    std::vector<double> w(n);
    double total = 0;
    for (int a = 0; a < n; ++a) total += w[a] = std::pow(a + 1.0, -1.0 / (s.cl_exponent - 1));
    for (auto& x : w) x *= s.cl_avg_degree * n / total;
    double W = s.cl_avg_degree * n;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.uniform() < std::min(1.0, w[a] * w[b] / W)) E.add(a, b);
    meta.emplace_back("avg_degree", num(s.cl_avg_degree));
    meta.emplace_back("exponent", num(s.cl_exponent));
    break;
  }
  case Model::ksw: {
    detail::check(s.ksw_rows * s.ksw_cols == n, "ksw grid must have n vertices");
    auto rc = [&](int a) { return std::pair{a / s.ksw_cols, a % s.ksw_cols}; };
    auto dist = [cols = s.ksw_cols](int a, int b) {
      return static_cast<double>(std::abs(a / cols - b / cols) + std::abs(a % cols - b % cols));
    };
    for (int a = 0; a < n; ++a) {
      auto [r, c] = rc(a);
      if (c + 1 < s.ksw_cols) E.add(a, a + 1);
      if (r + 1 < s.ksw_rows) E.add(a, a + s.ksw_cols);
    }
    for (int a = 0; a < n; ++a)
      for (int l = 0; l < s.ksw_long; ++l) {
        double total = 0;
        for (int b = 0; b < n; ++b)
          if (b != a) total += std::pow(dist(a, b), -s.ksw_alpha);
        double x = rng.uniform() * total;
        int pick = a == 0 ? 1 : 0;
        for (int b = 0; b < n; ++b) {
          if (b == a) continue;
          pick = b;
          x -= std::pow(dist(a, b), -s.ksw_alpha);
          if (x < 0) break;
        }
        E.add(a, pick);
      }
    geometric = dist;
    weight_policy = "manhattan_distance";
    meta.emplace_back("rows", std::to_string(s.ksw_rows));
    meta.emplace_back("cols", std::to_string(s.ksw_cols));
    meta.emplace_back("long_range", std::to_string(s.ksw_long));
    meta.emplace_back("alpha", num(s.ksw_alpha));
    break;
  }
  case Model::girg: {
    detail::check(s.girg_tau > 2 && s.girg_alpha > 1, "girg tau > 2, alpha > 1");
    std::vector<double> w(n);
    double W = 0;
    pos.resize(n);
    for (int a = 0; a < n; ++a) {
      pos[a] = {rng.uniform(), rng.uniform()};
      W += w[a] = std::pow(1.0 - rng.uniform(), -1.0 / (s.girg_tau - 1));
    }
    auto dist = [&](int a, int b) {
      double s2 = 0;
      for (int k = 0; k < 2; ++k) {
        double d = std::abs(pos[a][k] - pos[b][k]);
        d = std::min(d, 1.0 - d);
        s2 += d * d;
      }
      return std::sqrt(s2);
    };
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        double d = dist(a, b);
        double q = d == 0 ? 1.0 : std::min(1.0, std::pow(w[a] * w[b] / (W * d * d), s.girg_alpha));
        if (rng.uniform() < q) E.add(a, b);
      }
    geometric = dist;
    weight_policy = "torus_distance";
    meta.emplace_back("tau", num(s.girg_tau));
    meta.emplace_back("alpha", num(s.girg_alpha));
    meta.emplace_back("dimension", "2");
    meta.emplace_back("w_min", "1");
    break;
  }
  case Model::hrg: {
    detail::check(s.hrg_temperature > 0 && s.hrg_alpha > 0, "hrg temperature, alpha > 0");
    const double R = 2 * std::log(static_cast<double>(n));
    polar.resize(n);
    for (int a = 0; a < n; ++a) {
      double u = rng.uniform();
      double r = std::acosh(1 + (std::cosh(s.hrg_alpha * R) - 1) * u) / s.hrg_alpha;
      polar[a] = {r, 2 * std::numbers::pi * rng.uniform()};
    }
    auto dist = [&](int a, int b) {
      double dth = std::numbers::pi - std::abs(std::numbers::pi - std::abs(polar[a][1] - polar[b][1]));
      double x = std::cosh(polar[a][0]) * std::cosh(polar[b][0]) -
                 std::sinh(polar[a][0]) * std::sinh(polar[b][0]) * std::cos(dth);
      return std::acosh(std::max(1.0, x));
    };
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        double q = 1.0 / (1.0 + std::exp((dist(a, b) - R) / (2 * s.hrg_temperature)));
        if (rng.uniform() < q) E.add(a, b);
      }
    geometric = dist;
    weight_policy = "hyperbolic_distance";
    meta.emplace_back("temperature", num(s.hrg_temperature));
    meta.emplace_back("alpha", num(s.hrg_alpha));
    meta.emplace_back("radius", num(R));
    break;
  }
  case Model::ergm: {
    detail::check(s.ergm_steps >= 0 && s.ergm_p0 >= 0 && s.ergm_p0 <= 1 && n >= 2, "ergm parameters");
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.uniform() < s.ergm_p0) E.add(a, b);
    for (int step = 0; step < s.ergm_steps; ++step) {
      int a = static_cast<int>(rng.bounded(n));
      int b = static_cast<int>(rng.bounded(n - 1));
      if (b >= a) ++b;
      int common = 0;
      for (int c : E.neighbors(a))
        if (E.has(b, c)) ++common;
      double sign = E.has(a, b) ? -1.0 : 1.0;
      double log_ratio = sign * (s.ergm_edge + s.ergm_triangle * common);
      if (std::log(rng.uniform()) < log_ratio) {
        if (sign > 0) E.add(a, b);
        else E.remove(a, b);
      }
    }
    meta.emplace_back("theta_edges", num(s.ergm_edge));
    meta.emplace_back("theta_triangles", num(s.ergm_triangle));
    meta.emplace_back("steps", std::to_string(s.ergm_steps));
    meta.emplace_back("init_p", num(s.ergm_p0));
    break;
  }
  }

  GeneratedGraph out;
  out.graph.n = n;
  for (auto [a, b] : E.edges()) {
    double w = geometric ? geometric(a, b) : marks.uniform();
    out.graph.edges.push_back({a, b, w});
  }
  meta.emplace_back("weight_policy", weight_policy);
  meta.emplace_back("loops_removed", std::to_string(loops_removed));
  meta.emplace_back("multi_edges_removed", std::to_string(multi_removed));
  meta.emplace_back("edges", std::to_string(out.graph.edges.size()));
  out.metadata = std::move(meta);
  validate(out.graph);
  return out;
}

} // namespace hopd
