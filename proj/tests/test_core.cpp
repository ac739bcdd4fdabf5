#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"

using namespace hopd;

namespace {

AtomId iv(Universe& U, double b, double d) { return U.interval(b, d); }

std::vector<AtomId> random_atoms(Universe& U, Pcg32& rng, int n, int grid = 0) {
  std::vector<AtomId> out;
  for (int i = 0; i < n; ++i) {
    double x, y;
    if (grid > 0) {
      x = static_cast<double>(rng.bounded(grid + 1)) / grid;
      y = static_cast<double>(rng.bounded(grid + 1)) / grid;
    } else {
      x = rng.uniform();
      y = rng.uniform();
    }
    out.push_back(iv(U, std::min(x, y), std::max(x, y)));
  }
  return out;
}

} // namespace

TEST(Universe, InterningIsStructural) {
  Universe U;
  EXPECT_EQ(U.point(0.5), U.point(0.5));
  EXPECT_EQ(U.point(0.0), U.point(-0.0));
  EXPECT_NE(U.point(0.5), U.point(0.25));
  EXPECT_EQ(iv(U, 0.1, 0.9), iv(U, 0.1, 0.9));
  DiagramId a = make_diagram(U, 1, std::vector<DiagramEntry>{{iv(U, 0.1, 0.9), 1}, {iv(U, 0.2, 0.7), 2}});
  DiagramId b = make_diagram(U, 1, std::vector<DiagramEntry>{{iv(U, 0.2, 0.7), 1}, {iv(U, 0.1, 0.9), 1}, {iv(U, 0.2, 0.7), 1}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(U.pair(a, b), U.pair(a, b));
  EXPECT_EQ(U.level(U.pair(a, b)), 2);
}

TEST(Universe, RejectsBadPoints) {
  Universe U;
  EXPECT_THROW(U.point(std::nan("")), InvalidArgument);
  EXPECT_THROW(U.point(-std::numeric_limits<double>::infinity()), InvalidArgument);
  EXPECT_NO_THROW(U.point(std::numeric_limits<double>::infinity()));
}

TEST(Universe, LevelMismatchOnPair) {
  Universe U;
  DiagramId d1 = U.singleton(iv(U, 0, 1));
  DiagramId d2 = U.singleton(U.pair(d1, d1));
  EXPECT_THROW(U.pair(d1, d2), LevelMismatch);
}

TEST(AtomLeq, ContainmentExample) {
  Universe U;
  EXPECT_TRUE(atom_leq(U, iv(U, 0.2, 0.7), iv(U, 0.1, 0.9)));
  EXPECT_FALSE(atom_leq(U, iv(U, 0.1, 0.9), iv(U, 0.2, 0.7)));
}

TEST(AtomLeq, Reflexive) {
  Universe U;
  Pcg32 rng(7);
  for (AtomId a : random_atoms(U, rng, 20)) EXPECT_TRUE(atom_leq(U, a, a));
  DiagramId g = oracle::random_level2_diagram(U, rng, 4);
  for (const auto& e : U.diagram(g).entries) EXPECT_TRUE(atom_leq(U, e.atom, e.atom));
}

TEST(AtomLeq, TwoCoordinateDominance) {
  Universe U;
  Pcg32 rng(11);
  auto atoms = random_atoms(U, rng, 20);
  for (AtomId u : atoms)
    for (AtomId v : atoms) {
      auto a = oracle::interval_of(U, u), b = oracle::interval_of(U, v);
      EXPECT_EQ(atom_leq(U, u, v), (-a.b <= -b.b && a.d <= b.d));
    }
}

TEST(AtomLeq, TransitiveOnGrid) {
  Universe U;
  Pcg32 rng(12);
  auto atoms = random_atoms(U, rng, 20, 4);
  for (AtomId a : atoms)
    for (AtomId b : atoms)
      for (AtomId c : atoms)
        if (atom_leq(U, a, b) && atom_leq(U, b, c)) EXPECT_TRUE(atom_leq(U, a, c));
}

TEST(AtomLeq, TransitiveLevel2) {
  Universe U;
  Pcg32 rng(13);
  std::vector<AtomId> atoms;
  for (int i = 0; i < 12; ++i) {
    auto m = oracle::random_level1_diagram(U, rng, 0, 2);
    auto p = oracle::random_level1_diagram(U, rng, 0, 2);
    atoms.push_back(U.pair(m, p));
  }
  for (AtomId a : atoms)
    for (AtomId b : atoms)
      for (AtomId c : atoms)
        if (atom_leq(U, a, b) && atom_leq(U, b, c)) EXPECT_TRUE(atom_leq(U, a, c));
}

TEST(AtomLeq, LevelMismatchThrows) {
  Universe U;
  AtomId a = iv(U, 0, 1);
  AtomId b = U.pair(U.singleton(a), U.singleton(a));
  EXPECT_THROW(atom_leq(U, a, b), LevelMismatch);
}

TEST(AtomLeq, MultiDimensionalGround) {
  Universe U(PreorderSpec{2, false});
  std::array<double, 2> x{0, 0}, y{1, 2}, z{2, 1};
  PointId px = U.point(x), py = U.point(y), pz = U.point(z);
  EXPECT_TRUE(point_leq(U, px, py));
  EXPECT_FALSE(point_leq(U, py, pz));
  EXPECT_FALSE(point_leq(U, pz, py));
  EXPECT_TRUE(atom_leq(U, U.interval(px, py), U.interval(px, py)));
}

TEST(DiagramLeq, Examples) {
  Universe U;
  DiagramId g = U.singleton(iv(U, 0.2, 0.7));
  DiagramId l = U.singleton(iv(U, 0.1, 0.9));
  EXPECT_TRUE(diagram_leq(U, g, g));
  EXPECT_TRUE(diagram_leq(U, g, l));
  EXPECT_FALSE(diagram_leq(U, l, g));
  EXPECT_TRUE(diagram_leq(U, U.empty_diagram(1), l));
  EXPECT_FALSE(diagram_leq(U, l, U.empty_diagram(1)));
}

TEST(DiagramLeq, AgreesWithMatchingEnumeration) {
  Universe U;
  Pcg32 rng(21);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    auto make = [&] {
      int k = static_cast<int>(rng.bounded(4));
      std::vector<DiagramEntry> es;
      for (AtomId a : random_atoms(U, rng, k, 5)) es.push_back({a, 1});
      return make_diagram(U, 1, std::move(es));
    };
    DiagramId g = make(), l = make();
    EXPECT_EQ(diagram_leq(U, g, l), oracle::diagram_leq_level1(U, g, l)) << format_diagram(U, g) << " vs "
                                                                          << format_diagram(U, l);
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(DiagramLeq, PermissiveDiagonal) {
  Universe U(PreorderSpec{1, true});
  DiagramId l = U.singleton(iv(U, 0.1, 0.9));
  EXPECT_TRUE(diagram_leq(U, l, U.empty_diagram(1)));
}

TEST(IsDiagonal, Examples) {
  Universe U;
  EXPECT_TRUE(is_diagonal(U, iv(U, 0.5, 0.5)));
  EXPECT_FALSE(is_diagonal(U, iv(U, 0.2, 0.7)));
}

TEST(IsDiagonal, Level2AgreesWithTwoDirections) {
  Universe U;
  Pcg32 rng(31);
  int diag = 0;
  for (int t = 0; t < 200; ++t) {
    auto m = oracle::random_level1_diagram(U, rng, 0, 2);
    DiagramId p = rng.uniform() < 0.3 ? m : oracle::random_level1_diagram(U, rng, 0, 2);
    AtomId a = U.pair(m, p);
    bool expect = diagram_leq(U, m, p) && diagram_leq(U, p, m);
    EXPECT_EQ(is_diagonal(U, a), expect);
    diag += expect;
  }
  EXPECT_GT(diag, 0);
}

TEST(Coordinates, Level1AndUnavailable) {
  Universe U;
  AtomId a = iv(U, 0.25, 0.75);
  EXPECT_EQ(coordinates(U, a), (std::vector<double>{-0.25, 0.75}));
  AtomId b = U.pair(U.singleton(a), U.empty_diagram(1));
  EXPECT_THROW(coordinates(U, b), CoordinatesUnavailable);
}

TEST(Distances, DProd) {
  Universe U;
  AtomId u = iv(U, 0, 1), v = iv(U, 0.1, 0.8);
  EXPECT_EQ(d_prod(U, u, u, 2), 0);
  EXPECT_NEAR(d_prod(U, u, v, kInf), 0.2, 1e-15);
  EXPECT_THROW(d_prod(U, u, v, 0.5), InvalidArgument);
}

TEST(Distances, DProdLevel2HandExpanded) {
  Universe U;
  AtomId a = iv(U, 0, 1), b = iv(U, 0.2, 0.6);
  AtomId u = U.pair(U.singleton(a), U.singleton(b));
  AtomId v = U.pair(U.singleton(b), U.empty_diagram(1));
  // W1({a},{b}) = min(d1(a,b), da+db) = min(0.2+0.4, 1+0.4) = 0.6
  // W1({b},{}) = 0.4
  EXPECT_NEAR(d_prod(U, u, v, 1), 0.6 + 0.4, 1e-12);
}

TEST(Distances, DDiagClosedForm) {
  Universe U;
  AtomId u = iv(U, 0, 1);
  EXPECT_EQ(d_diag(U, iv(U, 0.3, 0.3), 1), 0);
  EXPECT_NEAR(d_diag(U, u, 1), 1.0, 1e-15);
  EXPECT_NEAR(d_diag(U, u, kInf), 0.5, 1e-15);
  double best = kInf;
  for (int i = 0; i <= 100000; ++i) {
    double t = i / 100000.0;
    best = std::min(best, std::hypot(t - 0.0, t - 1.0));
  }
  EXPECT_NEAR(d_diag(U, u, 2), best, 1e-9);
  EXPECT_NEAR(d_diag(U, u, 2), 1 / std::sqrt(2.0), 1e-12);
}

TEST(Distances, D1Examples) {
  Universe U;
  AtomId u = iv(U, 0, 1);
  EXPECT_EQ(d1(U, u, u, 1), 0);
  EXPECT_NEAR(d1(U, u, iv(U, 0.45, 0.55), kInf), 0.45, 1e-12);
  EXPECT_NEAR(d1(U, u, iv(U, 0.49, 0.51), kInf), 0.49, 1e-12);
  EXPECT_NEAR(d1(U, iv(U, 0, 0.1), iv(U, 0.8, 0.9), 1), 0.2, 1e-12);
}

TEST(Distances, DiagonalLevel2NeedsConfiguration) {
  Universe U;
  AtomId a = iv(U, 0, 1);
  AtomId u = U.pair(U.singleton(a), U.empty_diagram(1));
  EXPECT_THROW(d_diag(U, u, 1), UnsupportedConfiguration);
  EXPECT_NEAR(d_diag(U, u, 1, DiagonalConfig::approximate()), 1.0, 1e-12);
}

TEST(Distances, UniformDiscreteness) {
  Universe U;
  Pcg32 rng(41);
  const double eps = 0.125;
  auto atoms = random_atoms(U, rng, 30, 8);
  std::erase_if(atoms, [&](AtomId a) { return is_diagonal(U, a); });
  for (double p : {1.0, 2.0, kInf})
    for (AtomId u : atoms)
      for (AtomId v : atoms) {
        double d = d1(U, u, v, p);
        if (d != 0) EXPECT_GE(d, eps - 1e-12);
      }
}

TEST(Distances, MetricLawsLevel1) {
  Universe U;
  Pcg32 rng(42);
  auto atoms = random_atoms(U, rng, 15);
  for (double p : {1.0, 2.0, kInf})
    for (AtomId a : atoms)
      for (AtomId b : atoms) {
        EXPECT_NEAR(d1(U, a, b, p), d1(U, b, a, p), 1e-15);
        if (a != b) EXPECT_GT(d1(U, a, b, p), 0);
        for (AtomId c : atoms) EXPECT_LE(d1(U, a, c, p), d1(U, a, b, p) + d1(U, b, c, p) + 1e-12);
      }
}

TEST(Distances, MetricLawsLevel2) {
  Universe U;
  Pcg32 rng(43);
  std::vector<AtomId> atoms;
  while (atoms.size() < 8) {
    auto m = oracle::random_level1_diagram(U, rng, 0, 2);
    auto pl = oracle::random_level1_diagram(U, rng, 0, 2);
    AtomId a = U.pair(m, pl);
    if (!is_diagonal(U, a)) atoms.push_back(a);
  }
  DiagonalConfig exact;
  exact.sets[2] = {U.pair(U.empty_diagram(1), U.empty_diagram(1))};
  auto check = [&](double p, const DiagonalConfig& cfg) {
    for (AtomId a : atoms)
      for (AtomId b : atoms) {
        EXPECT_NEAR(d1(U, a, b, p, cfg), d1(U, b, a, p, cfg), 1e-12);
        for (AtomId c : atoms) EXPECT_LE(d1(U, a, c, p, cfg), d1(U, a, b, p, cfg) + d1(U, b, c, p, cfg) + 1e-9);
      }
  };
  for (double p : {1.0, 2.0, kInf}) check(p, exact);
  check(1.0, DiagonalConfig::approximate());
}

TEST(Canonical, DropsDiagonalAndZeros) {
  Universe U;
  AtomId a = iv(U, 0.1, 0.9), d = iv(U, 0.4, 0.4);
  auto x = make_virtual(U, 1, {{a, 2}, {d, 5}, {a, -2}, {iv(U, 0, 1), 3}});
  EXPECT_EQ(x.size(), 1u);
  EXPECT_EQ(x.coefficient(iv(U, 0, 1)), 3);
  EXPECT_THROW(make_diagram(U, 1, std::vector<DiagramEntry>{{a, -1}}), InvalidArgument);
}

TEST(Canonical, Idempotent) {
  Universe U;
  Pcg32 rng(51);
  for (int t = 0; t < 50; ++t) {
    std::vector<VirtualDiagram::Term> terms;
    for (AtomId a : random_atoms(U, rng, 10, 3)) terms.emplace_back(a, random_coefficient(rng, 5));
    auto x = make_virtual(U, 1, terms);
    EXPECT_EQ(canonicalize(U, x), x);
    auto y = make_virtual(U, 1, {terms.rbegin(), terms.rend()});
    EXPECT_EQ(x, y);
  }
}

TEST(Chain, GroupLaws) {
  Universe U;
  Pcg32 rng(52);
  auto x = random_interval_virtual(U, rng, 10);
  auto y = random_interval_virtual(U, rng, 10);
  EXPECT_EQ(x + y, y + x);
  EXPECT_TRUE((x - x).empty());
  EXPECT_EQ(x.scaled(3), x + x + x);
  EXPECT_EQ(-(-x), x);
}

TEST(Chain, OverflowPolicy) {
  Universe U;
  AtomId a = iv(U, 0, 1);
  auto big = VirtualDiagram::from_terms(1, {{a, std::numeric_limits<std::int64_t>::max()}});
  EXPECT_THROW(big + big, OverflowError);
  auto s = big;
  s.add(big, 1, OverflowPolicy::saturate);
  EXPECT_EQ(s.coefficient(a), std::numeric_limits<std::int64_t>::max());
}

TEST(Chain, LevelMismatch) {
  Universe U;
  AtomId a = iv(U, 0, 1);
  auto x = VirtualDiagram::from_terms(1, {{a, 1}});
  auto y = VirtualDiagram::from_terms(2, {{U.pair(U.singleton(a), U.singleton(a)), 1}});
  EXPECT_THROW(x + y, LevelMismatch);
}

TEST(Serialize, Numbers) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1), "1");
  EXPECT_EQ(format_number(kInf), "inf");
}

TEST(Serialize, RoundTripDiagramAndChains) {
  Universe U;
  Pcg32 rng(61);
  DiagramId g = oracle::random_level2_diagram(U, rng, 5);
  std::string text = write_document(U, g);
  Universe V;
  auto doc = read_document(V, text);
  EXPECT_EQ(doc.kind, "diagram");
  EXPECT_EQ(doc.level, 2);
  EXPECT_EQ(write_document(V, doc.diagram), text);

  auto x = random_interval_virtual(U, rng, 20);
  std::string vt = write_document(U, x, 1);
  auto vd = read_document(V, vt);
  EXPECT_EQ(write_document(V, vd.virt, 1), vt);

  auto r = RationalDiagram::from_terms(1, {{iv(U, 0, 1), Rational(3, 2)}, {iv(U, 0.5, 2), Rational(-4)}});
  std::string rt = write_document(U, r, 1);
  auto rd = read_document(V, rt);
  EXPECT_EQ(rd.rational.coefficient(iv(V, 0, 1)), Rational(3, 2));
  EXPECT_EQ(write_document(V, rd.rational, 1), rt);
}

TEST(Serialize, IndependentOfInterningOrder) {
  Universe A, B;
  iv(B, 0.7, 0.8);
  iv(B, 0.2, 0.3);
  auto x = make_virtual(A, 1, {{iv(A, 0.2, 0.3), 1}, {iv(A, 0.7, 0.8), -2}});
  auto y = make_virtual(B, 1, {{iv(B, 0.7, 0.8), -2}, {iv(B, 0.2, 0.3), 1}});
  EXPECT_EQ(write_document(A, x, 1), write_document(B, y, 1));
}

TEST(Serialize, MultiDimensionalPoints) {
  Universe U(PreorderSpec{2, false});
  std::array<double, 2> x{0, 0.5}, y{1, 2};
  AtomId a = U.interval(U.point(x), U.point(y));
  std::string text = write_document(U, U.singleton(a));
  Universe V(PreorderSpec{2, false});
  auto doc = read_document(V, text);
  EXPECT_EQ(write_document(V, doc.diagram), text);
  Universe W;
  EXPECT_THROW(read_document(W, text), ParseError);
}

TEST(Serialize, ParseErrors) {
  Universe U;
  EXPECT_THROW(read_document(U, "nope v1 level=1 r0=1 kind=diagram\n{}\n"), ParseError);
  EXPECT_THROW(read_document(U, "hopd-diagram v1 level=1 r0=1 kind=diagram\n{(0 1)\n"), ParseError);
  EXPECT_THROW(read_document(U, "hopd-diagram v1 level=1 r0=1 kind=diagram\n{(0 1)} junk\n"), ParseError);
}
