#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "nprank/porter.hpp"
#include "test_support.hpp"

using nprank::porter::stem;

TEST(Porter, RuleTableExamples) {
  EXPECT_EQ(stem("caresses"), "caress");
  EXPECT_EQ(stem("ponies"), "poni");
  EXPECT_EQ(stem("feed"), "feed");
  EXPECT_EQ(stem("agreed"), "agre");
  EXPECT_EQ(stem("hopping"), "hop");
  EXPECT_EQ(stem("filing"), "file");
  EXPECT_EQ(stem("happy"), "happi");
  EXPECT_EQ(stem("sky"), "sky");
  EXPECT_EQ(stem("relational"), "relat");
  EXPECT_EQ(stem("controll"), "control");
  EXPECT_EQ(stem("generalizations"), "gener");
}

TEST(Porter, NonLowercaseAsciiIsUntouched) {
  EXPECT_EQ(stem("Running"), "Running");
  EXPECT_EQ(stem("co-occurrence"), "co-occurrence");
  EXPECT_EQ(stem("naïve"), "naïve");
  EXPECT_EQ(stem(""), "");
}

// Reference outputs produced by tests/oracles/porter_fixture.py.
TEST(Porter, MatchesReferenceVocabulary) {
  std::ifstream in(nprank::support::fixture_path("porter_vocab.tsv"));
  ASSERT_TRUE(in) << "missing fixture";
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos);
    const auto word = line.substr(0, tab);
    const auto expected = line.substr(tab + 1);
    EXPECT_EQ(stem(word), expected) << "word: " << word;
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(Porter, LongYRunsTerminate) {
  const std::string ys(5000, 'y');
  EXPECT_FALSE(stem(ys).empty());
}
