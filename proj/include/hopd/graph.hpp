#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hopd/errors.hpp"
#include "hopd/serialize.hpp"

namespace hopd {

struct WeightedEdge {
  int u = 0, v = 0;
  double w = 0;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct WeightedGraph {
  int n = 0;
  std::vector<WeightedEdge> edges;
  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;
};

/// Throws on loops, repeated edges, out-of-range endpoints or bad weights.
inline void validate(const WeightedGraph& g) {
  if (g.n < 0) throw InvalidArgument("negative vertex count");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n) throw InvalidArgument("edge endpoint out of range");
    if (e.u == e.v) throw InvalidArgument("graph has a self-loop");
    if (!std::isfinite(e.w)) throw InvalidArgument("edge weight is not finite");
    if (!seen.insert(std::minmax(e.u, e.v)).second) throw InvalidArgument("graph has a repeated edge");
  }
}

/// `n m` header then one `u v w` line per edge.
inline void write_edge_list(std::ostream& os, const WeightedGraph& g) {
  os << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) os << e.u << ' ' << e.v << ' ' << format_number(e.w) << '\n';
}

inline std::string edge_list_string(const WeightedGraph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  return os.str();
}

inline WeightedGraph read_edge_list(std::istream& is) {
  WeightedGraph g;
  std::size_t m = 0;
  if (!(is >> g.n >> m)) throw ParseError("missing edge list header");
  for (std::size_t i = 0; i < m; ++i) {
    WeightedEdge e;
    std::string w;
    if (!(is >> e.u >> e.v >> w)) throw ParseError("truncated edge list");
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), e.w);
    if (ec != std::errc() || p != w.data() + w.size()) throw ParseError("bad edge weight " + w);
    g.edges.push_back(e);
  }
  validate(g);
  return g;
}

} // namespace hopd
