#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "nprank/pipeline.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using nprank::support::data_path;
using nprank::support::slurp;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nprank_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult invoke(const std::string& args) const {
    const std::string cmd = std::string("env -u NPRANK_SIDECAR_URL ") + NPRANK_CLI_PATH + " " + args + " >" +
                            path("stdout") + " 2>" + path("stderr");
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(path("stdout")), slurp(path("stderr"))};
  }

  void write(const std::string& name, const std::string& content) const { nprank::atomic_write(dir_ / name, content); }

  fs::path dir_;
};

const std::string kToy = data_path("toy/toy.jsonl");
const std::string kRankFlags = " --backend hash --hash-dim 64 --hash-seed 42";

}  // namespace

TEST_F(CliTest, ExtractMatchesGolden) {
  ASSERT_EQ(invoke("extract --dataset " + kToy + " --out " + path("c.jsonl")).code, 0);
  EXPECT_EQ(slurp(path("c.jsonl")), slurp(data_path("toy/golden/candidates.jsonl")));
}

TEST_F(CliTest, RankMatchesGoldenForAnyWorkerCount) {
  ASSERT_EQ(invoke("rank --dataset " + kToy + " --out " + path("p1.jsonl") + kRankFlags).code, 0);
  ASSERT_EQ(invoke("rank --dataset " + kToy + " --out " + path("p2.jsonl") + kRankFlags).code, 0);
  ASSERT_EQ(invoke("rank --dataset " + kToy + " --out " + path("p4.jsonl") + kRankFlags + " --workers 4").code, 0);
  const auto golden = slurp(data_path("toy/golden/predictions.jsonl"));
  EXPECT_EQ(slurp(path("p1.jsonl")), golden);
  EXPECT_EQ(slurp(path("p2.jsonl")), golden);
  EXPECT_EQ(slurp(path("p4.jsonl")), golden);
}

TEST_F(CliTest, EvaluateMatchesGolden) {
  const auto r = invoke("evaluate --predictions " + data_path("toy/golden/predictions.jsonl") + " --dataset " + kToy +
                     " --out " + path("report.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("report.json")), slurp(data_path("toy/golden/report.json")));
  EXPECT_NE(r.out.find("  N |    R     P    F1"), std::string::npos);
}

TEST_F(CliTest, ConfigFileIsHonoured) {
  write("nprank.conf", "hash.dim = 64\nhash.seed = 42\nworkers = 2\n");
  ASSERT_EQ(invoke("rank --config " + path("nprank.conf") + " --dataset " + kToy + " --out " + path("p.jsonl")).code, 0);
  EXPECT_EQ(slurp(path("p.jsonl")), slurp(data_path("toy/golden/predictions.jsonl")));
  ASSERT_EQ(invoke("rank --config " + path("nprank.conf") + " --hash-seed 7 --dataset " + kToy + " --out " + path("q.jsonl")).code, 0);
  EXPECT_NE(slurp(path("q.jsonl")), slurp(path("p.jsonl")));
}

TEST_F(CliTest, GoldAsPredictionsScoresOne) {
  std::string preds;
  for (const auto& d : nprank::load_dataset(kToy)) {
    if (!d.gold) continue;
    nlohmann::json rec = {{"doc_id", d.id}, {"keyphrases", *d.gold}};
    preds += rec.dump() + "\n";
  }
  write("gold.jsonl", preds);
  const auto r = invoke("evaluate --predictions " + path("gold.jsonl") + " --dataset " + kToy + " --cutoffs 3,4,5");
  ASSERT_EQ(r.code, 0) << r.err;
  // every toy gold list has at most 4 entries
  EXPECT_NE(r.out.find("  4 | 1.00  1.00  1.00\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("  5 | 1.00  1.00  1.00\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("  3 | "), std::string::npos);
}

TEST_F(CliTest, BenchmarkWritesPredictionsAndReport) {
  const auto r = invoke("benchmark --dataset " + kToy + " --out-dir " + path("bench") + kRankFlags);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("bench/toy.predictions.jsonl")));
  const auto report = nlohmann::json::parse(slurp(path("bench/toy.report.json")));
  EXPECT_EQ(report["config"]["stem"], true);
  EXPECT_EQ(report["dataset"], "toy");
  EXPECT_EQ(invoke("benchmark --no-stem --dataset " + kToy + " --out-dir " + path("b2") + kRankFlags).code, 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("b2/toy.report.json")))["config"]["stem"], false);
}

TEST_F(CliTest, EmptyDatasetGivesHeaderOnly) {
  write("empty.jsonl", "");
  ASSERT_EQ(invoke("extract --dataset " + path("empty.jsonl") + " --out " + path("c.jsonl")).code, 0);
  EXPECT_EQ(slurp(path("c.jsonl")), "{\"format\":\"nprank-candidates\",\"version\":1,\"stem\":false,\"documents\":0}\n");
}

TEST_F(CliTest, ParseErrorExitsThreeWithoutOutput) {
  write("bad.jsonl", "{\"id\":\"a\",\"conllu\":\"1\\tx\\tx\\tNOUN\\t_\\t_\\t0\\troot\\t_\\t_\\n\"}\n{not json\n");
  const auto r = invoke("extract --dataset " + path("bad.jsonl") + " --out " + path("c.jsonl"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("c.jsonl")));
}

TEST_F(CliTest, BadHeadIsParseError) {
  write("bad.jsonl", "{\"id\":\"a\",\"conllu\":\"1\\tx\\tx\\tNOUN\\t_\\t_\\t9\\troot\\t_\\t_\\n\"}\n");
  EXPECT_EQ(invoke("extract --dataset " + path("bad.jsonl") + " --out " + path("c.jsonl")).code, 3);
}

TEST_F(CliTest, UnreachableSidecarExitsFour) {
  const auto r = invoke("rank --backend http --sidecar-url http://127.0.0.1:1 --retries 1 --dataset " + kToy + " --out " +
                     path("p.jsonl"));
  EXPECT_EQ(r.code, 4) << r.err;
  EXPECT_FALSE(fs::exists(path("p.jsonl")));
}

TEST_F(CliTest, UnknownPredictionIdExitsFive) {
  write("p.jsonl", "{\"doc_id\":\"nope\",\"keyphrases\":[]}\n");
  EXPECT_EQ(invoke("evaluate --predictions " + path("p.jsonl") + " --dataset " + kToy).code, 5);
}

TEST_F(CliTest, MissingInputExitsSix) {
  EXPECT_EQ(invoke("extract --dataset " + path("absent.jsonl") + " --out " + path("c.jsonl")).code, 6);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke("").code, 2);
  EXPECT_EQ(invoke("extract --dataset " + kToy).code, 2);
  EXPECT_EQ(invoke("rank --dataset " + kToy + " --out " + path("p") + " --backend gpu").code, 2);
  EXPECT_EQ(invoke("evaluate --predictions x --dataset " + kToy + " --cutoffs 10,5").code, 2);
  EXPECT_EQ(invoke("rank --dataset " + kToy + " --out " + path("p") + " --hash-dim 0").code, 2);
}

TEST_F(CliTest, EmbedCheckAgainstFakeSidecar) {
  nprank::support::FakeSidecar sidecar({});
  const auto ok = invoke("embed-check --sidecar-url " + sidecar.url() + " --batch 8");
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("PASS health"), std::string::npos);
  EXPECT_NE(ok.out.find("PASS duplicate-texts"), std::string::npos);

  nprank::support::FakeSidecar broken({.drop_last_vector = true});
  const auto bad = invoke("embed-check --sidecar-url " + broken.url() + " --retries 1");
  EXPECT_EQ(bad.code, 4);
  EXPECT_NE(bad.out.find("FAIL batch-shape"), std::string::npos) << bad.out;
}

TEST_F(CliTest, RankViaFakeSidecar) {
  nprank::support::FakeSidecar sidecar({});
  const auto r = invoke("rank --backend http --sidecar-url " + sidecar.url() + " --batch-size 5 --dataset " + kToy +
                     " --out " + path("p.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(sidecar.max_batch_seen.load(), 5u);
  // the fake serves seed-7 hash vectors of dim 16
  ASSERT_EQ(invoke("rank --hash-dim 16 --hash-seed 7 --dataset " + kToy + " --out " + path("h.jsonl")).code, 0);
  EXPECT_EQ(slurp(path("p.jsonl")), slurp(path("h.jsonl")));
}
