#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
Run run(const std::string& args) {
  const std::string cmd = std::string(TRANSVERSAL_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(TRANSVERSAL_CONFIGS) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("transversal-cli-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_F(CliTest, VerifyExamples) {
  auto r = run(R"c(verify dkss --group c25 --A "(0),(1),(2)" --B "(0),(0),(5)")c");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["outcome"], "witness-found");

  r = run(R"c(verify hall --group c2 --B "(0),(1)")c");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["outcome"], "no-witness-as-predicted");

  r = run(R"c(verify chi-det --group c3xc3 --A "(0,0),(1,0)" --B "(0,0),(0,1)" --strategy exhaustive)c");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["outcome"], "certificate-found");
  EXPECT_EQ(j["certificate"]["tuples"][0]["chars"].size(), 2u);

  r = run(R"c(verify dkss --group c15 --A "(0),(1),(2)" --B "(0),(0),(0)")c");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(nlohmann::json::parse(r.out)["outcome"], "refused");

  r = run(R"c(verify powers --group c6 --a "(2)" --exponents 1,2 --prime 3 --B "(1),(4)")c");
  EXPECT_EQ(r.code, 0);

  r = run(R"c(verify sun-multi --group c7 --sets "(0),(1);(0),(1);(0),(1)")c");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["witness_perms"].size(), 2u);

  r = run(R"c(verify snevily --group c3xc3 --A "(0,0),(1,0),(0,1)" --B "(1,1),(2,2),(0,2)" --backend field:2)c");
  EXPECT_EQ(r.code, 0);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run(R"c(verify dkss --group c3x --A "(0)" --B "(0)")c").code, 2);
  EXPECT_EQ(run(R"c(verify dkss --group c5 --A "(0),(7)" --B "(0),(0)")c").code, 2);
  EXPECT_EQ(run("verify tiling --group c5").code, 2);
  EXPECT_EQ(run("suite nonsense").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("campaign " + path("missing.json")).code, 2);
  std::ofstream(path("bad.json")) << "{\"kinds\": [\"dkss\"], \"samples\": -3}";
  EXPECT_EQ(run("campaign " + path("bad.json")).code, 2);
  std::ofstream(path("garbage.json")) << "{not json";
  EXPECT_EQ(run("campaign " + path("garbage.json")).code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, KLarge) {
  auto r = run("klarge 35 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
  EXPECT_EQ(run("klarge 35 4").out, "false\n");
  EXPECT_EQ(run("klarge 1 2").code, 2);
}

TEST_F(CliTest, Suites) {
  EXPECT_EQ(run("suite lemma21 --seed 7").code, 0);
  EXPECT_EQ(run("suite eq22 --seed 1 --trials 200").code, 0);
  EXPECT_EQ(run("suite chebotarev --max-p 7").code, 0);
  EXPECT_EQ(run("suite thm19 --trials 20").code, 0);
  EXPECT_EQ(run("suite rings --trials 20").code, 0);
  EXPECT_EQ(run("suite chebotarev --max-p 40").code, 2);
}

TEST_F(CliTest, BundledCampaigns) {
  auto r = run("campaign " + config("dkss-k3.json") + " --out " + path("dkss.jsonl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("failures 0"), std::string::npos);
  EXPECT_NE(slurp(path("dkss.jsonl")).find("witness-found"), std::string::npos);

  r = run("campaign " + config("empty.json") + " --out " + path("empty.jsonl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(std::filesystem::exists(path("empty.jsonl")));
  EXPECT_EQ(std::filesystem::file_size(path("empty.jsonl")), 0u);
}

TEST_F(CliTest, CampaignIsDeterministicAcrossWorkers) {
  std::ofstream(path("small.json")) << R"({"name": "small", "groups": ["c7", "c3xc3"],
      "kinds": ["dkss", "chi-det", "snevily"], "k_max": 3, "samples": 20, "seed": 3, "include_timing": false})";
  ASSERT_EQ(run("campaign " + path("small.json") + " --out " + path("w1.jsonl") + " --workers 1").code, 0);
  ASSERT_EQ(run("campaign " + path("small.json") + " --out " + path("w4.jsonl") + " --workers 4").code, 0);
  const auto a = slurp(path("w1.jsonl"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("w4.jsonl")));
}

TEST_F(CliTest, ReplayReport) {
  auto r = run(R"c(verify dkss --group c35 --A "(0),(1),(2)" --B "(3),(3),(4)")c");
  ASSERT_EQ(r.code, 0);
  std::ofstream(path("line.jsonl")) << r.out;
  const auto replayed = run("replay " + path("line.jsonl"));
  EXPECT_EQ(replayed.code, 0);
  auto a = nlohmann::json::parse(r.out), b = nlohmann::json::parse(replayed.out);
  a.erase("millis");
  b.erase("millis");
  EXPECT_EQ(a, b);
}
