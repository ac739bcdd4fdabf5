#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "hopd/errors.hpp"
#include "hopd/universe.hpp"

namespace hopd {

using Rational = boost::rational<std::int64_t>;

enum class OverflowPolicy { error, saturate };

namespace detail {

inline std::int64_t saturate(__int128 x) {
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  return x > hi ? hi : x < lo ? lo : static_cast<std::int64_t>(x);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, OverflowPolicy pol) {
  std::int64_t r;
  if (!__builtin_add_overflow(a, b, &r)) return r;
  if (pol == OverflowPolicy::error) throw OverflowError("coefficient overflow in addition");
  return saturate(static_cast<__int128>(a) + b);
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, OverflowPolicy pol) {
  std::int64_t r;
  if (!__builtin_mul_overflow(a, b, &r)) return r;
  if (pol == OverflowPolicy::error) throw OverflowError("coefficient overflow in product");
  return saturate(static_cast<__int128>(a) * b);
}

template <class C> struct CoeffOps {
  static C add(C a, C b, OverflowPolicy) { return a + b; }
  static C mul(C a, C b, OverflowPolicy) { return a * b; }
  static bool is_zero(C a, double) { return a == C(0); }
};

template <> struct CoeffOps<std::int64_t> {
  static std::int64_t add(std::int64_t a, std::int64_t b, OverflowPolicy p) { return checked_add(a, b, p); }
  static std::int64_t mul(std::int64_t a, std::int64_t b, OverflowPolicy p) { return checked_mul(a, b, p); }
  static bool is_zero(std::int64_t a, double) { return a == 0; }
};

template <> struct CoeffOps<double> {
  static double add(double a, double b, OverflowPolicy) { return a + b; }
  static double mul(double a, double b, OverflowPolicy) { return a * b; }
  static bool is_zero(double a, double eps) { return std::abs(a) <= eps; }
};

} // namespace detail

/// Finite formal sum of atoms of one level. Terms are kept sorted by atom
/// id with zero coefficients removed, so operator== is group equality.
/// Atoms are trusted to be non-diagonal; make_virtual checks that.
template <class Coeff> class Chain {
public:
  using Term = std::pair<AtomId, Coeff>;

  Chain() = default;
  explicit Chain(int level) : level_(level) {}

  static Chain from_terms(int level, std::vector<Term> terms,
                          OverflowPolicy pol = OverflowPolicy::error, double eps = 0.0) {
    Chain c(level);
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& t : terms) {
      if (!c.terms_.empty() && c.terms_.back().first == t.first)
        c.terms_.back().second = detail::CoeffOps<Coeff>::add(c.terms_.back().second, t.second, pol);
      else
        c.terms_.push_back(t);
    }
    c.prune(eps);
    return c;
  }

  int level() const { return level_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::span<const Term> terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  Coeff coefficient(AtomId a) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), a,
                               [](const Term& t, AtomId x) { return t.first < x; });
    return (it != terms_.end() && it->first == a) ? it->second : Coeff(0);
  }

  Chain& add(const Chain& o, Coeff scale = Coeff(1), OverflowPolicy pol = OverflowPolicy::error,
             double eps = 0.0) {
    if (o.empty()) return *this;
    if (empty() && level_ == 0) level_ = o.level_;
    if (o.level_ != level_) throw LevelMismatch(level_, o.level_);
    using Ops = detail::CoeffOps<Coeff>;
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        out.push_back(*a++);
      } else if (a == terms_.end() || b->first < a->first) {
        out.emplace_back(b->first, Ops::mul(b->second, scale, pol));
        ++b;
      } else {
        Coeff v = Ops::add(a->second, Ops::mul(b->second, scale, pol), pol);
        if (!Ops::is_zero(v, eps)) out.emplace_back(a->first, v);
        ++a, ++b;
      }
    }
    terms_ = std::move(out);
    return *this;
  }

  Chain& operator+=(const Chain& o) { return add(o); }
  Chain& operator-=(const Chain& o) { return add(o, Coeff(-1)); }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  Chain operator-() const { return scaled(Coeff(-1)); }

  Chain scaled(Coeff k, OverflowPolicy pol = OverflowPolicy::error) const {
    Chain c(level_);
    if (k == Coeff(0)) return c;
    c.terms_.reserve(terms_.size());
    for (const auto& [a, x] : terms_) c.terms_.emplace_back(a, detail::CoeffOps<Coeff>::mul(x, k, pol));
    return c;
  }

  friend bool operator==(const Chain& a, const Chain& b) {
    if (a.empty() && b.empty()) return true;
    return a.level_ == b.level_ && a.terms_ == b.terms_;
  }

private:
  void prune(double eps) {
    std::erase_if(terms_, [eps](const Term& t) { return detail::CoeffOps<Coeff>::is_zero(t.second, eps); });
  }

  int level_ = 0;
  std::vector<Term> terms_;
};

using VirtualDiagram = Chain<std::int64_t>;
using LinearDiagram = Chain<double>;
using RationalDiagram = Chain<Rational>;

inline VirtualDiagram to_virtual(const Universe& U, DiagramId d) {
  const auto& node = U.diagram(d);
  std::vector<VirtualDiagram::Term> terms;
  terms.reserve(node.entries.size());
  for (const auto& e : node.entries) terms.emplace_back(e.atom, e.mult);
  return VirtualDiagram::from_terms(node.level, std::move(terms));
}

inline LinearDiagram to_linear(const VirtualDiagram& x) {
  std::vector<LinearDiagram::Term> terms;
  for (const auto& [a, c] : x) terms.emplace_back(a, static_cast<double>(c));
  return LinearDiagram::from_terms(x.level(), std::move(terms));
}

inline DiagramId positive_part(Universe& U, const VirtualDiagram& x) {
  std::vector<DiagramEntry> es;
  for (const auto& [a, c] : x)
    if (c > 0) es.push_back({a, c});
  return U.intern_diagram(std::max(x.level(), 1), std::move(es));
}

inline DiagramId negative_part(Universe& U, const VirtualDiagram& x) {
  std::vector<DiagramEntry> es;
  for (const auto& [a, c] : x)
    if (c < 0) es.push_back({a, -c});
  return U.intern_diagram(std::max(x.level(), 1), std::move(es));
}

} // namespace hopd
