#pragma once

#include <charconv>
#include <compare>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "hopd/chain.hpp"
#include "hopd/preorder.hpp"
#include "hopd/universe.hpp"

namespace hopd {

inline std::string format_number(double x) {
  if (x == std::numeric_limits<double>::infinity()) return "inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

/// Structural total order on atoms and diagrams, independent of id
/// assignment order. Used for bit-stable output.
class StructuralOrder {
public:
  explicit StructuralOrder(const Universe& U) : U_(U) {}

  std::strong_ordering points(PointId a, PointId b) const {
    if (a == b) return std::strong_ordering::equal;
    auto x = U_.coords(a), y = U_.coords(b);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] < y[k]) return std::strong_ordering::less;
      if (x[k] > y[k]) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  std::strong_ordering atoms(AtomId u, AtomId v) {
    if (u == v) return std::strong_ordering::equal;
    AtomNode a = U_.atom(u), b = U_.atom(v);
    if (auto c = a.level <=> b.level; c != 0) return c;
    if (a.level == 1) {
      if (auto c = points(PointId{a.minus}, PointId{b.minus}); c != 0) return c;
      return points(PointId{a.plus}, PointId{b.plus});
    }
    if (auto c = diagrams(DiagramId{a.minus}, DiagramId{b.minus}); c != 0) return c;
    return diagrams(DiagramId{a.plus}, DiagramId{b.plus});
  }

  std::strong_ordering diagrams(DiagramId g, DiagramId h) {
    if (g == h) return std::strong_ordering::equal;
    const auto& x = sorted(g);
    const auto& y = sorted(h);
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      if (auto c = atoms(x[i].atom, y[i].atom); c != 0) return c;
      if (auto c = x[i].mult <=> y[i].mult; c != 0) return c;
    }
    return x.size() <=> y.size();
  }

  const std::vector<DiagramEntry>& sorted(DiagramId d) {
    if (auto it = sorted_.find(d); it != sorted_.end()) return it->second;
    std::vector<DiagramEntry> es = U_.diagram(d).entries;
    std::sort(es.begin(), es.end(),
              [&](const DiagramEntry& a, const DiagramEntry& b) { return atoms(a.atom, b.atom) < 0; });
    return sorted_.emplace(d, std::move(es)).first->second;
  }

  template <class T> void sort_terms(std::vector<std::pair<AtomId, T>>& ts) {
    std::sort(ts.begin(), ts.end(), [&](const auto& a, const auto& b) { return atoms(a.first, b.first) < 0; });
  }

private:
  const Universe& U_;
  absl::flat_hash_map<DiagramId, std::vector<DiagramEntry>> sorted_;
};

class Writer {
public:
  explicit Writer(const Universe& U) : U_(U), order_(U) {}

  std::string point(PointId p) const {
    auto c = U_.coords(p);
    if (c.size() == 1) return format_number(c[0]);
    std::string s = "<";
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) s += ' ';
      s += format_number(c[k]);
    }
    return s + ">";
  }

  std::string atom(AtomId u) {
    AtomNode a = U_.atom(u);
    if (a.level == 1) return "(" + point(PointId{a.minus}) + " " + point(PointId{a.plus}) + ")";
    return "(" + diagram(DiagramId{a.minus}) + " " + diagram(DiagramId{a.plus}) + ")";
  }

  std::string diagram(DiagramId d) {
    std::string s = "{";
    bool first = true;
    for (const auto& e : order_.sorted(d)) {
      if (!first) s += ' ';
      first = false;
      s += atom(e.atom);
      if (e.mult != 1) s += "*" + std::to_string(e.mult);
    }
    return s + "}";
  }

  template <class C> std::string chain(const Chain<C>& x) {
    std::vector<std::pair<AtomId, C>> ts(x.begin(), x.end());
    order_.sort_terms(ts);
    std::string s = "{";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) s += ' ';
      s += atom(ts[i].first);
      std::string k = coeff(ts[i].second);
      if (k != "1") s += "*" + k;
    }
    return s + "}";
  }

  static std::string coeff(std::int64_t c) { return std::to_string(c); }
  static std::string coeff(double c) { return format_number(c); }
  static std::string coeff(const Rational& c) {
    if (c.denominator() == 1) return std::to_string(c.numerator());
    return std::to_string(c.numerator()) + "/" + std::to_string(c.denominator());
  }

private:
  const Universe& U_;
  StructuralOrder order_;
};

inline std::string format_atom(const Universe& U, AtomId u) { return Writer(U).atom(u); }
inline std::string format_diagram(const Universe& U, DiagramId d) { return Writer(U).diagram(d); }
template <class C> std::string format_chain(const Universe& U, const Chain<C>& x) {
  return Writer(U).chain(x);
}

namespace detail {
template <class C> constexpr const char* kind_name();
template <> constexpr const char* kind_name<std::int64_t>() { return "virtual"; }
template <> constexpr const char* kind_name<Rational>() { return "rational"; }
template <> constexpr const char* kind_name<double>() { return "linear"; }

inline std::string header(const Universe& U, int level, const char* kind) {
  return "hopd-diagram v1 level=" + std::to_string(level) + " r0=" + std::to_string(U.ground_dim()) +
         " kind=" + kind + "\n";
}
} // namespace detail

inline std::string write_document(const Universe& U, DiagramId d) {
  return detail::header(U, U.level(d), "diagram") + format_diagram(U, d) + "\n";
}

template <class C> std::string write_document(const Universe& U, const Chain<C>& x, int level) {
  return detail::header(U, level, detail::kind_name<C>()) + format_chain(U, x) + "\n";
}

class Parser {
public:
  Parser(Universe& U, std::string_view text) : U_(U), s_(text) {}

  PointId point() {
    skip();
    std::vector<double> c;
    if (peek() == '<') {
      ++i_;
      while (skip(), peek() != '>') c.push_back(number());
      ++i_;
    } else {
      c.push_back(number());
    }
    return U_.point(c);
  }

  AtomId atom(int level) {
    expect('(');
    AtomId a;
    if (level == 1) {
      PointId m = point();
      PointId p = point();
      a = U_.interval(m, p);
    } else {
      DiagramId m = diagram(level - 1);
      DiagramId p = diagram(level - 1);
      a = U_.pair(m, p);
    }
    expect(')');
    return a;
  }

  DiagramId diagram(int level) {
    std::vector<DiagramEntry> es;
    for (auto& [a, k] : terms<std::int64_t>(level)) {
      if (k <= 0) throw ParseError("nonpositive multiplicity inside a diagram");
      es.push_back({a, k});
    }
    return make_diagram(U_, level, std::move(es));
  }

  template <class C> std::vector<std::pair<AtomId, C>> terms(int level) {
    std::vector<std::pair<AtomId, C>> out;
    expect('{');
    while (skip(), peek() != '}') {
      AtomId a = atom(level);
      C k = C(1);
      if (peek() == '*') {
        ++i_;
        k = coeff<C>();
      }
      out.emplace_back(a, k);
    }
    ++i_;
    return out;
  }

  void finish() {
    skip();
    if (i_ != s_.size()) fail("trailing input");
  }

  std::string_view line() {
    skip();
    auto e = s_.find('\n', i_);
    if (e == std::string_view::npos) e = s_.size();
    auto r = s_.substr(i_, e - i_);
    i_ = e;
    return r;
  }

private:
  template <class C> C coeff() {
    if constexpr (std::is_same_v<C, double>) {
      return number();
    } else {
      std::int64_t n = integer();
      if constexpr (std::is_same_v<C, Rational>) {
        if (peek() == '/') {
          ++i_;
          std::int64_t d = integer();
          if (d == 0) fail("zero denominator");
          return Rational(n, d);
        }
        return Rational(n);
      } else {
        return n;
      }
    }
  }

  std::int64_t integer() {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected integer");
    i_ = p - s_.data();
    return v;
  }

  double number() {
    skip();
    if (s_.substr(i_, 3) == "inf") {
      i_ += 3;
      return std::numeric_limits<double>::infinity();
    }
    double v = 0;
    auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected number");
    i_ = p - s_.data();
    return v;
  }

  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(i_));
  }

  Universe& U_;
  std::string_view s_;
  std::size_t i_ = 0;
};

struct Document {
  std::string kind;
  int level = 0;
  DiagramId diagram;         // kind=diagram
  VirtualDiagram virt;       // kind=virtual
  RationalDiagram rational;  // kind=rational
  LinearDiagram linear;      // kind=linear
};

inline Document read_document(Universe& U, std::string_view text) {
  Parser p(U, text);
  std::istringstream hdr{std::string(p.line())};
  std::string magic, version, tok;
  hdr >> magic >> version;
  if (magic != "hopd-diagram" || version != "v1") throw ParseError("bad header");
  Document doc;
  int r0 = 0;
  while (hdr >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("bad header field " + tok);
    auto k = tok.substr(0, eq), v = tok.substr(eq + 1);
    if (k == "level") doc.level = std::stoi(v);
    else if (k == "r0") r0 = std::stoi(v);
    else if (k == "kind") doc.kind = v;
  }
  if (r0 != U.ground_dim()) throw ParseError("ground dimension mismatch");
  if (doc.level < 1) throw ParseError("missing level");
  if (doc.kind == "diagram") doc.diagram = p.diagram(doc.level);
  else if (doc.kind == "virtual") doc.virt = canonicalize<std::int64_t>(U, doc.level, p.terms<std::int64_t>(doc.level));
  else if (doc.kind == "rational") doc.rational = canonicalize<Rational>(U, doc.level, p.terms<Rational>(doc.level));
  else if (doc.kind == "linear") doc.linear = canonicalize<double>(U, doc.level, p.terms<double>(doc.level));
  else throw ParseError("unknown kind " + doc.kind);
  p.finish();
  return doc;
}

} // namespace hopd
