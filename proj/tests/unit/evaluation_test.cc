// Copyright 2026 The UNER Corpus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "test_support.h"
#include "uner/conll.h"
#include "uner/evaluation.h"

namespace uner {
namespace {

std::vector<TagPair> Pairs(const std::vector<std::string>& gold,
                           const std::vector<std::string>& system) {
  std::vector<TagPair> out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    out.push_back({"w", IobTag::Parse(gold[i]), IobTag::Parse(system[i])});
  }
  return out;
}

TEST(MetricsTest, HandComputedExample) {
  const EvalReport r = PerTagMetrics(Pairs({"B-Name", "O", "B-Name-Person"},
                                           {"B-Name", "O", "O"}));
  EXPECT_EQ(r.per_tag.at("B-Name").precision, 100.0);
  EXPECT_EQ(r.per_tag.at("B-Name").recall, 100.0);
  EXPECT_EQ(r.per_tag.at("B-Name-Person").f1, 0.0);
  EXPECT_EQ(r.per_tag.at("B-Name-Person").support, 1u);
  EXPECT_EQ(r.counted_tags, std::vector<std::string>{"B-Name"});
  EXPECT_EQ(r.macro.precision, 100.0);
  EXPECT_EQ(r.macro.recall, 100.0);
  EXPECT_EQ(r.macro.f1, 100.0);
  // O is scored but never in the macro.
  EXPECT_EQ(r.per_tag.at("O").fn, 0u);
  EXPECT_EQ(r.per_tag.at("O").fp, 1u);
}

TEST(MetricsTest, PartialScores) {
  // B-X: tp 1, fp 1, fn 1 -> 50/50/50. I-X: tp 0, fn 1 -> zero, excluded.
  const EvalReport r = PerTagMetrics(Pairs({"B-Name", "B-Name", "I-Name", "O"},
                                           {"B-Name", "O", "O", "B-Name"}));
  const TagMetrics& b = r.per_tag.at("B-Name");
  EXPECT_EQ(b.tp, 1u);
  EXPECT_EQ(b.fp, 1u);
  EXPECT_EQ(b.fn, 1u);
  EXPECT_DOUBLE_EQ(b.precision, 50.0);
  EXPECT_DOUBLE_EQ(b.f1, 50.0);
  EXPECT_EQ(r.counted_tags, std::vector<std::string>{"B-Name"});
  EXPECT_DOUBLE_EQ(r.macro.f1, 50.0);
}

TEST(MetricsTest, CollapseDepthTwo) {
  const auto pairs = Pairs({"B-Name-Location-GPE-City"}, {"B-Name-Location-Region"});
  const EvalReport full = PerTagMetrics(pairs);
  EXPECT_EQ(full.macro.f1, 0.0);
  const EvalReport r = PerTagMetrics(pairs, 2);
  EXPECT_EQ(r.per_tag.size(), 1u);
  EXPECT_EQ(r.per_tag.at("B-Name-Location").precision, 100.0);
  EXPECT_EQ(r.per_tag.at("B-Name-Location").recall, 100.0);
  EXPECT_EQ(r.collapse_depth, 2u);
}

TEST(MetricsTest, Errors) {
  EXPECT_THROW(PerTagMetrics({}), DataError);
  const auto pairs = Pairs({"O"}, {"O"});
  EXPECT_THROW(PerTagMetrics(pairs, 0), ConfigError);
  EXPECT_THROW(PerTagMetrics(pairs, 5), ConfigError);
  EXPECT_NO_THROW(PerTagMetrics(pairs, 4));
  // Only O tokens: nothing counted, macro stays zero.
  EXPECT_TRUE(PerTagMetrics(pairs).counted_tags.empty());
  EXPECT_EQ(PerTagMetrics(pairs).macro.f1, 0.0);
}

TEST(MetricsTest, CollapseTag) {
  const IobTag t = IobTag::Parse("I-Name-Location-GPE-City");
  EXPECT_EQ(CollapseTag(t, std::nullopt), "I-Name-Location-GPE-City");
  EXPECT_EQ(CollapseTag(t, 1), "I-Name");
  EXPECT_EQ(CollapseTag(t, 3), "I-Name-Location-GPE");
  EXPECT_EQ(CollapseTag(IobTag::Outside(), 1), "O");
}

TEST(RoundingTest, HalfUpOneDecimal) {
  EXPECT_EQ(RoundOneDecimal(1.45), 1.5);
  EXPECT_EQ(RoundOneDecimal(2.25), 2.3);
  EXPECT_EQ(RoundOneDecimal(0.04), 0.0);
  EXPECT_EQ(RoundOneDecimal(66.66666), 66.7);
  EXPECT_EQ(RoundOneDecimal(100.0), 100.0);
  EXPECT_EQ(RoundOneDecimal(0.0), 0.0);
}

TEST(AlignTest, IdenticalFilesScorePerfectly) {
  const std::string text = testing::ReadFile(testing::FixtureDir() / "expected_pipeline.conll");
  std::istringstream g(text), s(text);
  const auto pairs = AlignStreams(g, "gold", s, "system");
  ASSERT_FALSE(pairs.empty());
  const EvalReport r = PerTagMetrics(pairs);
  EXPECT_EQ(r.macro.precision, 100.0);
  EXPECT_EQ(r.macro.recall, 100.0);
  EXPECT_EQ(r.macro.f1, 100.0);
}

TEST(AlignTest, BothEmpty) {
  std::istringstream g(""), s("");
  EXPECT_TRUE(AlignStreams(g, "g", s, "s").empty());
}

TEST(AlignTest, MissingTokenReportsLines) {
  std::istringstream g("# doc_id = 1\na\tO\nb\tB-Name\nc\tO\n\n");
  std::istringstream s("# doc_id = 1\na\tO\nb\tB-Name\n\n");
  try {
    AlignStreams(g, "g", s, "s");
    FAIL();
  } catch (const AlignmentError& e) {
    EXPECT_EQ(e.gold_line(), 4u);
    EXPECT_EQ(e.system_line(), 4u);
  }
}

TEST(AlignTest, TokenMismatchReportsLines) {
  std::istringstream g("x\tO\ny\tO\n");
  std::istringstream s("x\tO\n\nz\tO\n");
  try {
    AlignStreams(g, "g", s, "s");
    FAIL();
  } catch (const AlignmentError& e) {
    // Sentence boundaries differ: gold has one sentence of two tokens.
    EXPECT_EQ(e.gold_line(), 2u);
    EXPECT_EQ(e.system_line(), 2u);
  }
}

TEST(AlignTest, TextMismatch) {
  std::istringstream g("x\tO\ny\tO\n");
  std::istringstream s("x\tO\nq\tO\n");
  try {
    AlignStreams(g, "g", s, "s");
    FAIL();
  } catch (const AlignmentError& e) {
    EXPECT_EQ(e.gold_line(), 2u);
    EXPECT_EQ(e.system_line(), 2u);
  }
}

TEST(AlignTest, DocIdsRealignReorderedDocuments) {
  std::istringstream g("# doc_id = a\nx\tB-Name\n\n# doc_id = b\ny\tO\n\n");
  std::istringstream s("# doc_id = b\ny\tO\n\n# doc_id = a\nx\tB-Name\n\n");
  const auto pairs = AlignStreams(g, "g", s, "s");
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].token_text, "x");
  std::istringstream g2("# doc_id = c\nx\tO\n");
  std::istringstream s2("# doc_id = a\nx\tO\n");
  EXPECT_THROW(AlignStreams(g2, "g", s2, "s"), AlignmentError);
}

TEST(ReportTest, JsonAndText) {
  const EvalReport r = PerTagMetrics(Pairs({"B-Name", "O", "O"}, {"B-Name", "B-Name", "O"}), 1);
  const auto j = nlohmann::json::parse(ReportToJson(r, false));
  EXPECT_EQ(j["tokens"], 3);
  EXPECT_EQ(j["collapse_depth"], 1);
  EXPECT_EQ(j["per_tag"]["B-Name"]["precision"], 50.0);
  EXPECT_FALSE(j["per_tag"].contains("O"));
  EXPECT_TRUE(nlohmann::json::parse(ReportToJson(r, true))["per_tag"].contains("O"));
  const std::string text = FormatReportText(r, false);
  EXPECT_NE(text.find("macro (nonzero tags)"), std::string::npos);
  EXPECT_NE(text.find("66.7"), std::string::npos);
}

TEST(CoarseReportTest, Buckets) {
  AnnotatedCorpus c;
  c.documents.push_back({"1", {{{{"Ann", IobTag::Parse("B-Name-Person-Name")},
                                 {"Prize", IobTag::Parse("B-Name-Product-Award")}}}}});
  const auto r = CoarseReport(c);
  EXPECT_EQ(r.at("Person").count, 1u);
  EXPECT_EQ(r.at("Person").share, 0.5);
  EXPECT_EQ(r.at("Location").count, 0u);
}

std::vector<std::string> LabelPool(testing::Rng& rng) {
  static const std::vector<std::string> kPool = {
      "Name-Location-GPE-City", "Name-Location-GPE-Country", "Name-Location-Region",
      "Name-Person-Name",       "Name-Organization-Company", "Name-Event-Occasion-Game",
      "Name",                   "Name-Location"};
  std::vector<std::string> out = kPool;
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(std::uniform_int_distribution<std::size_t>(1, 5)(rng));
  return out;
}

TEST(MetricsProperty, MatchesBruteForceAndSymmetry) {
  testing::Rng rng(606);
  for (int iter = 0; iter < 3000; ++iter) {
    const auto labels = LabelPool(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    const auto gold = testing::RandomTagSequence(rng, n, labels);
    const auto system = testing::RandomTagSequence(rng, n, labels);
    std::vector<TagPair> pairs, swapped;
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back({"w", IobTag::Parse(gold[i]), IobTag::Parse(system[i])});
      swapped.push_back({"w", IobTag::Parse(system[i]), IobTag::Parse(gold[i])});
    }
    for (std::optional<std::size_t> depth : {std::optional<std::size_t>{}, std::optional<std::size_t>{1},
                                             std::optional<std::size_t>{2}}) {
      const EvalReport r = PerTagMetrics(pairs, depth);
      const auto o = testing::BruteForceScores(gold, system, depth);
      ASSERT_EQ(r.per_tag.size(), o.tp.size());
      for (const auto& [tag, m] : r.per_tag) {
        ASSERT_EQ(m.tp, o.tp.at(tag));
        ASSERT_EQ(m.fp, o.fp.at(tag));
        ASSERT_EQ(m.fn, o.fn.at(tag));
        ASSERT_EQ(m.precision, o.precision.at(tag));
        ASSERT_EQ(m.recall, o.recall.at(tag));
        ASSERT_EQ(m.f1, o.f1.at(tag));
      }
      ASSERT_EQ(r.counted_tags, o.counted);
      ASSERT_EQ(r.macro.precision, o.macro_p);
      ASSERT_EQ(r.macro.recall, o.macro_r);
      ASSERT_EQ(r.macro.f1, o.macro_f);

      const EvalReport s = PerTagMetrics(swapped, depth);
      for (const auto& [tag, m] : r.per_tag) {
        ASSERT_EQ(s.per_tag.at(tag).precision, m.recall);
        ASSERT_EQ(s.per_tag.at(tag).recall, m.precision);
        ASSERT_DOUBLE_EQ(s.per_tag.at(tag).f1, m.f1);
      }
    }
  }
}

TEST(MetricsProperty, CollapseNeverLosesTruePositives) {
  testing::Rng rng(607);
  for (int iter = 0; iter < 2000; ++iter) {
    const auto labels = LabelPool(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    const auto gold = testing::RandomTagSequence(rng, n, labels);
    const auto system = testing::RandomTagSequence(rng, n, labels);
    const auto pairs = Pairs(gold, system);
    const EvalReport full = PerTagMetrics(pairs);
    for (std::size_t depth : {1u, 2u, 3u}) {
      const EvalReport coarse = PerTagMetrics(pairs, depth);
      std::map<std::string, std::size_t> descendant_tp;
      for (const auto& [tag, m] : full.per_tag) {
        descendant_tp[CollapseTag(IobTag::Parse(tag), depth)] += m.tp;
      }
      for (const auto& [tag, tp] : descendant_tp) {
        ASSERT_GE(coarse.per_tag.at(tag).tp, tp);
      }
    }
  }
}

TEST(MetricsProperty, IdenticalInputIsPerfect) {
  testing::Rng rng(608);
  for (int iter = 0; iter < 500; ++iter) {
    const auto labels = LabelPool(rng);
    auto tags = testing::RandomTagSequence(rng, 30, labels);
    tags.push_back("B-" + labels.front());
    const EvalReport r = PerTagMetrics(Pairs(tags, tags));
    ASSERT_EQ(r.macro.precision, 100.0);
    ASSERT_EQ(r.macro.recall, 100.0);
    ASSERT_EQ(r.macro.f1, 100.0);
  }
}

}  // namespace
}  // namespace uner
