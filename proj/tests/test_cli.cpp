#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "golden.hpp"
#include "hopd_cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hopd_bench");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  int code = hopd::cli::cli_main(static_cast<int>(argv.size()), argv.data());
  Run r{code, testing::internal::GetCapturedStdout()};
  testing::internal::GetCapturedStderr();
  return r;
}

class Cli : public testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("hopd_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::vector<std::string> lines(const std::string& file) const {
    std::ifstream in(dir / file);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }
  fs::path dir;
};

} // namespace

TEST_F(Cli, Demo) {
  auto r = run({"demo", "--models", "er", "--m", "1", "--out", dir.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("equal"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "demo_mean_aggregate.hopd"));
}

TEST_F(Cli, Envelope) {
  auto r = run({"envelope", "--c", "1", "--n", "2", "--r", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("naive_aggregation 16\n"), std::string::npos);
  EXPECT_NE(r.out.find("certified_wasserstein 2048\n"), std::string::npos);
  EXPECT_NE(r.out.find("average_naive"), std::string::npos);
}

TEST_F(Cli, SpeedupCsvSchema) {
  auto r = run({"speedup", "--models", "er,ws", "--m", "3", "--repeats", "2", "--out", dir.string()});
  ASSERT_EQ(r.code, 0);
  auto l = lines("speedup.csv");
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "model_a,model_b,m,support,t_naive_ns,t_harmonic_ns,speedup");
  EXPECT_EQ(l[1].rfind("er,ws,3,", 0), 0u);
}

TEST_F(Cli, SelfPairSingleModel) {
  auto r = run({"speedup", "--models", "ba", "--m", "1", "--repeats", "1", "--out", dir.string()});
  ASSERT_EQ(r.code, 0);
  auto l = lines("speedup.csv");
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[1].rfind("ba,ba,1,", 0), 0u);
}

TEST_F(Cli, SpeedupUnitsMs) {
  ASSERT_EQ(run({"speedup", "--models", "er", "--m", "1", "--repeats", "1", "--units", "ms", "--out", dir.string()}).code, 0);
  EXPECT_EQ(lines("speedup.csv")[0], "model_a,model_b,m,support,t_naive_ms,t_harmonic_ms,speedup");
}

TEST_F(Cli, Jsonl) {
  auto r = run({"speedup", "--models", "er,ws,ba", "--m", "2", "--repeats", "1", "--format", "jsonl", "--out",
                dir.string()});
  ASSERT_EQ(r.code, 0);
  auto l = lines("speedup.jsonl");
  ASSERT_EQ(l.size(), 3u);
  for (const auto& line : l) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("model_a"));
    EXPECT_TRUE(j.contains("speedup"));
    EXPECT_EQ(j["m"], 2);
  }
}

TEST_F(Cli, Scaling) {
  auto r = run({"scaling", "--n-range", "0..2", "--repeats", "2", "--support-min", "50", "--support-max", "200",
                "--out", dir.string()});
  ASSERT_EQ(r.code, 0);
  auto rows = lines("scaling_rows.csv");
  ASSERT_EQ(rows.size(), 1u + 3u * 2u);
  EXPECT_EQ(rows[0], "N,repeat,support,t_naive_ns,t_harmonic_ns,pairs_visited,transform_ops");
  EXPECT_EQ(lines("scaling_summary.csv").size(), 4u);
  EXPECT_TRUE(fs::exists(dir / "scaling.svg"));
  EXPECT_NE(r.out.find("slope naive="), std::string::npos);
}

TEST_F(Cli, Wbench) {
  auto r = run({"wbench", "--repeats", "3", "--out", dir.string()});
  ASSERT_EQ(r.code, 0);
  auto l = lines("wbench.csv");
  ASSERT_EQ(l.size(), 1u + 3u * 3u);
  EXPECT_EQ(l[0].rfind("instance,p,atoms_left,atoms_right,t_naive_ns,t_certified_ns", 0), 0u);
}

TEST_F(Cli, PsiFile) {
  {
    std::ofstream f(dir / "psi.txt");
    f << "hopd-psi v1 level=1 r0=1\n# partial table, other atoms use the golden phase\n(0 0.5) 1.25\n";
  }
  auto r = run({"demo", "--models", "ws", "--m", "2", "--psi", "file:" + (dir / "psi.txt").string(), "--out",
                dir.string()});
  EXPECT_EQ(r.code, 0);
  {
    std::ofstream f(dir / "bad.txt");
    f << "not-a-psi-file\n";
  }
  EXPECT_EQ(run({"demo", "--psi", "file:" + (dir / "bad.txt").string(), "--m", "1", "--out", dir.string()}).code, 1);
  EXPECT_EQ(run({"demo", "--psi", "random", "--out", dir.string()}).code, 2);
}

TEST_F(Cli, ConfigFile) {
  {
    std::ofstream f(dir / "run.ini");
    f << "[speedup]\nmodels=er\nm=1\nrepeats=1\nformat=jsonl\nout=" << dir.string() << "\n";
  }
  auto r = run({"--config", (dir / "run.ini").string(), "speedup"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir / "speedup.jsonl"));
}

TEST_F(Cli, ThreadsFromEnvironment) {
  ::setenv("HOPD_THREADS", "0", 1);
  EXPECT_EQ(run({"speedup", "--models", "er", "--m", "1", "--repeats", "1", "--out", dir.string()}).code, 2);
  ::setenv("HOPD_THREADS", "2", 1);
  EXPECT_EQ(run({"speedup", "--models", "er", "--m", "1", "--repeats", "1", "--out", dir.string()}).code, 0);
  ::unsetenv("HOPD_THREADS");
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({"speedup", "--bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"speedup", "--models", "nope"}).code, 2);
  EXPECT_EQ(run({"speedup", "--m", "0"}).code, 2);
  EXPECT_EQ(run({"scaling", "--n-range", "5..2"}).code, 2);
  EXPECT_EQ(run({"speedup", "--format", "xml"}).code, 2);
}
