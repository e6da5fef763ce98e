#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "test_support.hpp"

using nbspec::testing::corpus_path;
using nbspec::testing::fixture_path;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / ("nbspec_cli_out_" + std::to_string(::getpid()) + "_" + std::to_string(counter));
  const auto err = dir / ("nbspec_cli_err_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  const std::string cmd =
      std::string(NBSPEC_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

std::string graph(const std::string& name) { return "--graph " + corpus_path(name); }

}  // namespace

TEST(Cli, ValidateK4) {
  auto r = run("validate " + graph("k4") + " --format text");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("4 vertices, 6 edges, regular q=2"), std::string::npos) << r.out;
}

TEST(Cli, ValidationExitCodes) {
  auto path = run("validate --graph " + fixture_path("path"));
  EXPECT_EQ(path.status, 2);
  EXPECT_NE(path.err.find("terminal vertex"), std::string::npos);
  auto split = run("validate --graph " + fixture_path("two_triangles"));
  EXPECT_EQ(split.status, 3);
  EXPECT_NE(split.err.find("disconnected"), std::string::npos);
  EXPECT_EQ(run("validate --graph " + fixture_path("loop")).status, 4);
  EXPECT_EQ(run("validate --graph " + fixture_path("duplicate")).status, 5);

  const auto bad = std::filesystem::temp_directory_path() / "nbspec_cli_bad.txt";
  std::ofstream(bad) << "0 1\n1 two\n";
  EXPECT_EQ(run("validate --graph " + bad.string()).status, 6);
  std::filesystem::remove(bad);

  EXPECT_EQ(run("validate --graph /nonexistent/graph.txt").status, 1);
  EXPECT_EQ(run("spectrum " + graph("k4") + " --theta 1.5").status, 1);
  EXPECT_EQ(run("spectrum " + graph("k4") + " --depth 1").status, 1);
  EXPECT_EQ(run("spectrum " + graph("k4") + " --format xml").status, 1);
  EXPECT_EQ(run("spectrum " + graph("k4") + " --z 1,2,3").status, 1);
  EXPECT_EQ(run("").status, 1);
}

TEST(Cli, SpectrumJson) {
  auto r = run("spectrum " + graph("k4") + " --theta 0.4");
  ASSERT_EQ(r.status, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], "nbspec/1");
  EXPECT_TRUE(doc["passed"].get<bool>());
  const auto& data = doc["results"][0]["data"];
  int total = 0;
  for (const auto& e : data["eigenvalues"]) {
    total += e["algebraic"].get<int>();
    EXPECT_EQ(e["resonance"].get<bool>(), e["modulus"].get<double>() > 0.8);
  }
  EXPECT_EQ(total, 12);
  EXPECT_DOUBLE_EQ(data["essential_radius"].get<double>(), 0.8);
}

TEST(Cli, SpectrumVerdicts) {
  auto k23 = nlohmann::json::parse(run("spectrum " + graph("k23")).out);
  EXPECT_NEAR(k23["results"][0]["data"]["radius"].get<double>(), 1.41421, 1e-5);
  EXPECT_FALSE(k23["results"][0]["data"]["regular"].get<bool>());
  auto c3 = nlohmann::json::parse(run("spectrum " + graph("c3")).out);
  EXPECT_NEAR(c3["results"][0]["data"]["radius"].get<double>(), 1.0, 1e-10);
  EXPECT_TRUE(c3["results"][0]["data"]["regular"].get<bool>());
}

TEST(Cli, CorrespondK4) {
  auto r = run("correspond " + graph("k4"));
  ASSERT_EQ(r.status, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  int rows = 0;
  for (const auto& row : doc["results"][0]["data"]["correspondence"]) {
    rows += row["multiplicity"].get<int>();
    if (!row["excluded"].get<bool>()) {
      EXPECT_EQ(row["dim_turn_eigenspace"], row["dim_vertex_equalizer"]);
    }
  }
  EXPECT_EQ(rows, 12);
}

TEST(Cli, DualC3) {
  auto r = run("dual " + graph("c3"));
  ASSERT_EQ(r.status, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  const auto& rows = doc["results"][0]["data"]["eigenvalues"];
  EXPECT_EQ(rows.size(), 3u);
  for (const auto& row : rows) EXPECT_TRUE(row.contains("degenerate"));
}

TEST(Cli, ExtraZValues) {
  auto r = run("correspond " + graph("k4") + " --z 2,0 --z 0.3,0.4 --format csv");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.rfind("suite,graph,assertion,passed,detail\n", 0), 0u);
}

TEST(Cli, DeterministicJsonAndOutFile) {
  const std::string args = "report " + graph("c3") + " " + graph("k23") + " --seed 7";
  auto a = run(args);
  auto b = run(args);
  EXPECT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto file = std::filesystem::temp_directory_path() / "nbspec_cli_report.json";
  auto c = run(args + " --out " + file.string());
  EXPECT_EQ(c.status, 0);
  EXPECT_TRUE(c.out.empty());
  EXPECT_EQ(slurp(file), a.out);
  std::filesystem::remove(file);
}

TEST(Cli, ScanAndSynthetic) {
  auto scan = run("scan " + graph("petersen") + " --format text");
  EXPECT_EQ(scan.status, 0);
  EXPECT_NE(scan.out.find("no Jordan block of size > 1"), std::string::npos);
  auto synth = nlohmann::json::parse(run("synthetic").out);
  EXPECT_EQ(synth["results"][0]["data"]["cases"], 100);
  EXPECT_EQ(synth["results"][0]["data"]["mismatches"], 0);
}
