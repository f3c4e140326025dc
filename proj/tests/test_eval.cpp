#include <gtest/gtest.h>

#include <random>

#include "nprank/eval.hpp"
#include "test_support.hpp"

using namespace nprank;

namespace {

Document gold_doc(const std::string& id, std::optional<std::vector<std::string>> gold) {
  Document d;
  d.id = id;
  d.gold = std::move(gold);
  return d;
}

Prediction pred(const std::string& id, const std::vector<std::string>& phrases) {
  Prediction p{id, {}};
  for (const auto& s : phrases) p.keyphrases.push_back({s, "", 0.0});
  return p;
}

}  // namespace

TEST(ScoreDoc, WorkedExample) {
  const std::vector<std::string> predicted{"a", "x", "b", "y", "z"};
  const auto s = score_doc(predicted, {"a", "b", "c"}, 5);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->matched, 2);
  EXPECT_EQ(s->retrieved, 5);
  EXPECT_DOUBLE_EQ(s->precision, 0.4);
  EXPECT_DOUBLE_EQ(s->recall, 2.0 / 3.0);
  EXPECT_NEAR(s->f1, 0.5, 1e-12);
}

TEST(ScoreDoc, PerfectPrediction) {
  const std::vector<std::string> predicted{"a", "b"};
  const auto s = score_doc(predicted, {"a", "b"}, 2);
  EXPECT_EQ(s->precision, 1.0);
  EXPECT_EQ(s->recall, 1.0);
  EXPECT_EQ(s->f1, 1.0);
}

TEST(ScoreDoc, DenominatorIsRetrievedCount) {
  const std::vector<std::string> predicted{"a"};
  const auto s = score_doc(predicted, {"a", "b"}, 10);
  EXPECT_EQ(s->retrieved, 1);
  EXPECT_EQ(s->precision, 1.0);
  EXPECT_EQ(s->recall, 0.5);
  const auto none = score_doc({}, {"a"}, 5);
  EXPECT_EQ(none->precision, 0.0);
  EXPECT_EQ(none->f1, 0.0);
}

TEST(ScoreDoc, EmptyGoldIsUndefined) { EXPECT_FALSE(score_doc(std::vector<std::string>{"a"}, {}, 5)); }

TEST(ScoreDoc, AgreesWithBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> predicted, gold;
    const int np = static_cast<int>(rng() % 20), ng = 1 + static_cast<int>(rng() % 10);
    std::set<std::string> used;
    while (static_cast<int>(predicted.size()) < np) {
      auto s = "k" + std::to_string(rng() % 30);
      if (used.insert(s).second) predicted.push_back(s);
    }
    for (int i = 0; i < ng; ++i) gold.push_back("k" + std::to_string(rng() % 30));
    const int n = 1 + static_cast<int>(rng() % 20);
    const std::set<std::string> g(gold.begin(), gold.end());
    const auto s = score_doc(predicted, g, n);
    const auto b = support::brute_score(predicted, gold, n);
    ASSERT_EQ(s->matched, b.matched);
    ASSERT_NEAR(s->precision, b.precision, 1e-12);
    ASSERT_NEAR(s->recall, b.recall, 1e-12);
    if (s->precision + s->recall > 0)
      ASSERT_NEAR(s->f1, 2 * s->precision * s->recall / (s->precision + s->recall), 1e-12);
    // recall never decreases with a larger cutoff
    ASSERT_GE(score_doc(predicted, g, n + 1)->recall, s->recall);
    auto shuffled_gold = gold;
    std::shuffle(shuffled_gold.begin(), shuffled_gold.end(), rng);
    ASSERT_EQ(score_doc(predicted, {shuffled_gold.begin(), shuffled_gold.end()}, n)->f1, s->f1);
  }
}

TEST(Evaluate, MacroAveragesOverScoredDocs) {
  const std::vector<Document> ds{gold_doc("d1", {{"a", "b", "c"}}), gold_doc("d2", {{"q"}}), gold_doc("d3", std::nullopt),
                                 gold_doc("d4", {{}})};
  const std::vector<Prediction> p{pred("d1", {"a", "x", "b", "y", "z"}), pred("d2", {"q"}), pred("d3", {"q"})};
  const auto r = evaluate(p, ds, {5}, false, "toy");
  EXPECT_EQ(r.doc_count, 2);
  EXPECT_EQ(r.excluded, (std::vector<std::string>{"d3", "d4"}));
  EXPECT_NEAR(r.per_n.at(5).precision, (0.4 + 1.0) / 2, 1e-12);
  EXPECT_NEAR(r.per_n.at(5).recall, (2.0 / 3 + 1.0) / 2, 1e-12);
  EXPECT_NEAR(r.per_n.at(5).f1, (0.5 + 1.0) / 2, 1e-12);
}

TEST(Evaluate, SelfEvaluationIsPerfect) {
  const std::vector<Document> ds{gold_doc("d1", {{"Deep Learning", "graphs"}}), gold_doc("d2", {{"x"}})};
  const std::vector<Prediction> p{pred("d1", {"deep learning", "graphs"}), pred("d2", {"x"})};
  const auto r = evaluate(p, ds, {1, 2}, false);
  EXPECT_EQ(r.per_n.at(2).f1, 1.0);
  EXPECT_EQ(r.per_n.at(1).precision, 1.0);
}

TEST(Evaluate, StemmingChangesMatching) {
  const std::vector<Document> ds{gold_doc("d1", {{"neural networks"}})};
  const std::vector<Prediction> p{pred("d1", {"neural network"})};
  EXPECT_EQ(evaluate(p, ds, {5}, false).per_n.at(5).recall, 0.0);
  EXPECT_EQ(evaluate(p, ds, {5}, true).per_n.at(5).recall, 1.0);
}

TEST(Evaluate, MissingPredictionScoresZero) {
  const std::vector<Document> ds{gold_doc("d1", {{"a"}}), gold_doc("d2", {{"b"}})};
  const auto r = evaluate({pred("d1", {"a"})}, ds, {5}, false);
  EXPECT_EQ(r.doc_count, 2);
  EXPECT_EQ(r.per_n.at(5).recall, 0.5);
}

TEST(Evaluate, DuplicatePredictedPhrasesCountOnce) {
  const std::vector<Document> ds{gold_doc("d1", {{"a", "b"}})};
  const auto r = evaluate({pred("d1", {"a", "A", "b"})}, ds, {2}, false);
  EXPECT_EQ(r.per_n.at(2).precision, 1.0);
}

TEST(Evaluate, DataErrors) {
  const std::vector<Document> ds{gold_doc("d1", {{"a"}})};
  EXPECT_THROW(evaluate({pred("zz", {"a"})}, ds, {5}, false), DataError);
  EXPECT_THROW(evaluate({pred("d1", {"a"}), pred("d1", {"a"})}, ds, {5}, false), DataError);
  EXPECT_THROW(evaluate({}, {gold_doc("d1", std::nullopt)}, {5}, false), DataError);
}

TEST(Evaluate, CutoffValidation) {
  const std::vector<Document> ds{gold_doc("d1", {{"a"}})};
  EXPECT_THROW(evaluate({}, ds, {}, false), ConfigError);
  EXPECT_THROW(evaluate({}, ds, {0}, false), ConfigError);
  EXPECT_THROW(evaluate({}, ds, {10, 5}, false), ConfigError);
}

TEST(ReportJson, Shape) {
  const std::vector<Document> ds{gold_doc("d1", {{"a", "b", "c"}})};
  const auto r = evaluate({pred("d1", {"a", "x", "b", "y", "z"})}, ds, {5, 10}, false, "toy");
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["dataset"], "toy");
  EXPECT_EQ(j["config"]["averaging"], "macro");
  EXPECT_EQ(j["config"]["cutoffs"], (std::vector<int>{5, 10}));
  EXPECT_EQ(j["doc_count"], 1);
  EXPECT_NEAR(j["per_n"]["5"]["precision"].get<double>(), 0.4, 1e-12);
  EXPECT_EQ(j["per_doc"].size(), 2u);
}

TEST(FormatTable, RowsPerCutoff) {
  const std::vector<Document> ds{gold_doc("d1", {{"a", "b", "c"}})};
  const auto t = format_table(evaluate({pred("d1", {"a", "x", "b", "y", "z"})}, ds, {5, 10}, false, "toy"));
  EXPECT_NE(t.find("  5 | 0.67  0.40  0.50\n"), std::string::npos) << t;
  EXPECT_NE(t.find(" 10 | 0.67  0.40  0.50\n"), std::string::npos) << t;
}
