#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "golden.hpp"
#include "oracles.hpp"

using namespace hopd;

namespace {

std::string meta(const GeneratedGraph& g, const std::string& key) {
  for (const auto& [k, v] : g.metadata)
    if (k == key) return v;
  return "";
}

std::vector<int> degrees(const WeightedGraph& g) {
  std::vector<int> d(g.n, 0);
  for (const auto& e : g.edges) ++d[e.u], ++d[e.v];
  return d;
}

} // namespace

TEST(Rng, ReferenceSequence) {
  // Reference outputs of the minimal PCG32 (pcg32_srandom(42, 54)).
  Pcg32 rng(42, 54);
  std::vector<std::uint32_t> want{0xa15c02b7, 0x7b47f409, 0xba1d3330, 0x83d2f293, 0xbfa4784b, 0xcbed606e};
  for (auto w : want) EXPECT_EQ(rng.next(), w);
}

TEST(Rng, StreamsDiffer) {
  Pcg32 a(7, 0), b(7, 1);
  EXPECT_NE(a.next(), b.next());
  Pcg32 c(7, 0);
  for (int i = 0; i < 1000; ++i) {
    double u = c.uniform();
    EXPECT_GE(u, 0);
    EXPECT_LT(u, 1);
    EXPECT_LT(c.bounded(10), 10u);
  }
}

TEST(SeedFor, Formula) {
  EXPECT_EQ(seed_for(0, 0), 1009193u);
  EXPECT_EQ(seed_for(0, 1), 1018369u);
  EXPECT_EQ(seed_for(1, 0), 2009196u);
}

TEST(Models, NamesRoundTrip) {
  for (Model m : kAllModels) EXPECT_EQ(parse_model(model_name(m)), m);
  EXPECT_THROW(parse_model("nope"), InvalidArgument);
}

TEST(Models, AllSimpleAndDeterministic) {
  for (Model m : kAllModels) {
    auto spec = ModelSpec::of(m);
    for (std::uint64_t k = 0; k < 3; ++k) {
      auto a = generate(spec, seed_for(model_index(m), k));
      auto b = generate(spec, seed_for(model_index(m), k));
      EXPECT_NO_THROW(validate(a.graph)) << model_name(m);
      EXPECT_EQ(edge_list_string(a.graph), edge_list_string(b.graph)) << model_name(m);
      EXPECT_EQ(a.metadata_text(), b.metadata_text());
      EXPECT_EQ(a.graph.n, 50);
      EXPECT_EQ(meta(a, "model"), model_name(m));
      for (const auto& e : a.graph.edges) {
        EXPECT_TRUE(std::isfinite(e.w));
        EXPECT_GE(e.w, 0);
      }
    }
  }
}

TEST(Models, SeedsChangeGraphs) {
  for (Model m : kAllModels) {
    auto spec = ModelSpec::of(m);
    EXPECT_NE(edge_list_string(generate(spec, 1).graph), edge_list_string(generate(spec, 2).graph)) << model_name(m);
  }
}

TEST(ER, MeanEdgeCountWithinThreeSigma) {
  auto spec = ModelSpec::of(Model::er);
  double sum = 0;
  const int runs = 200;
  for (int k = 0; k < runs; ++k) sum += static_cast<double>(generate(spec, seed_for(0, k)).graph.edges.size());
  const double pairs = 50.0 * 49.0 / 2.0;
  const double mu = 0.10 * pairs, sigma = std::sqrt(pairs * 0.1 * 0.9 / runs);
  EXPECT_NEAR(sum / runs, mu, 3 * sigma);
}

TEST(WS, NoRewiringIsRingLattice) {
  auto spec = ModelSpec::of(Model::ws);
  spec.ws_beta = 0;
  auto g = generate(spec, 5).graph;
  EXPECT_EQ(g.edges.size(), 100u);
  for (int d : degrees(g)) EXPECT_EQ(d, 4);
}

TEST(WS, RewiringKeepsEdgeCount) {
  auto g = generate(ModelSpec::of(Model::ws), seed_for(1, 0)).graph;
  EXPECT_EQ(g.edges.size(), 100u);
}

TEST(BA, EdgeCountGolden) {
  auto spec = ModelSpec::of(Model::ba);
  for (int k = 0; k < 5; ++k) {
    // K_3 seed graph (3 edges), then 2 edges for each of the 47 later vertices
    EXPECT_EQ(generate(spec, seed_for(2, k)).graph.edges.size(), 3u + 2u * 47u);
  }
  auto g = generate(spec, seed_for(2, 0));
  golden::expect("ba_seed_3009199.edges", edge_list_string(g.graph));
  golden::expect("ba_seed_3009199.meta", g.metadata_text());
}

TEST(CM, DegreesAtMostFour) {
  auto g = generate(ModelSpec::of(Model::cm), seed_for(3, 0));
  for (int d : degrees(g.graph)) EXPECT_LE(d, 4);
  auto removed = std::stoul(meta(g, "loops_removed")) + std::stoul(meta(g, "multi_edges_removed"));
  EXPECT_EQ(g.graph.edges.size() + removed, 100u);
}

TEST(SBM, WithinBlocksDenser) {
  auto spec = ModelSpec::of(Model::sbm);
  std::size_t within = 0, between = 0;
  for (int k = 0; k < 20; ++k)
    for (const auto& e : generate(spec, seed_for(4, k)).graph.edges) ((e.u < 25) == (e.v < 25) ? within : between)++;
  EXPECT_GT(within, 3 * between);
}

TEST(ChungLu, MeanDegreeNearFour) {
  auto spec = ModelSpec::of(Model::chung_lu);
  double sum = 0;
  for (int k = 0; k < 50; ++k) sum += 2.0 * generate(spec, seed_for(5, k)).graph.edges.size() / 50.0;
  EXPECT_NEAR(sum / 50, 4.0, 0.6);
}

TEST(KSW, LatticePlusLongRange) {
  auto g = generate(ModelSpec::of(Model::ksw), seed_for(6, 0)).graph;
  // 5x10 lattice has 5*9 + 4*10 = 85 edges; long-range links add at most 50
  EXPECT_GE(g.edges.size(), 85u);
  EXPECT_LE(g.edges.size(), 135u);
}

TEST(Geometric, WeightsAreDistances) {
  for (Model m : {Model::ksw, Model::girg, Model::hrg}) {
    auto g = generate(ModelSpec::of(m), seed_for(model_index(m), 0));
    EXPECT_NE(meta(g, "weight_policy"), "uniform_mark") << model_name(m);
    for (const auto& e : g.graph.edges) EXPECT_GT(e.w, 0);
  }
  EXPECT_EQ(meta(generate(ModelSpec::of(Model::er), 1), "weight_policy"), "uniform_mark");
}

TEST(ERGM, RunsFixedSteps) {
  auto g = generate(ModelSpec::of(Model::ergm), seed_for(9, 0));
  EXPECT_EQ(meta(g, "steps"), "3000");
  EXPECT_GT(g.graph.edges.size(), 0u);
}

TEST(Generate, InvalidParameters) {
  auto spec = ModelSpec::of(Model::er);
  spec.er_p = 1.5;
  EXPECT_THROW(generate(spec, 1), InvalidArgument);
  auto ws = ModelSpec::of(Model::ws);
  ws.ws_k = 3;
  EXPECT_THROW(generate(ws, 1), InvalidArgument);
}

TEST(EdgeList, RoundTrip) {
  auto g = generate(ModelSpec::of(Model::hrg), 77).graph;
  std::istringstream in(edge_list_string(g));
  EXPECT_EQ(read_edge_list(in), g);
  std::istringstream bad("3 1\n0 0 0.5\n");
  EXPECT_THROW(read_edge_list(bad), InvalidArgument);
  std::istringstream trunc("3 2\n0 1 0.5\n");
  EXPECT_THROW(read_edge_list(trunc), ParseError);
}
