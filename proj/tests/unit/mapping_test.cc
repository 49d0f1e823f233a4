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

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "test_support.h"
#include "uner/mapping.h"

namespace uner {
namespace {

const UnerMapper& ShippedMapper() {
  static const UnerMapper mapper =
      UnerMapper::Load(testing::DataDir() / "uner_dbpedia_equivalence.tsv",
                       testing::DataDir() / "dbpedia_priority.tsv");
  return mapper;
}

PriorityMap Priorities(const std::vector<std::pair<std::string, int>>& entries) {
  PriorityMap map;
  for (const auto& [cls, p] : entries) map.Set(cls, p);
  return map;
}

TEST(UnerLabelTest, ParsesHierarchy) {
  const UnerLabel label = UnerLabel::Parse("Name-Event-Natural_Phenomenon-Earthquake");
  EXPECT_EQ(label.levels(),
            (std::vector<std::string>{"Name", "Event", "Natural_Phenomenon", "Earthquake"}));
  EXPECT_EQ(label.depth(), 4u);
  EXPECT_EQ(UnerLabel::Parse("Name").depth(), 1u);
  EXPECT_EQ(UnerLabel::Parse("Numerical_Expression-Money").depth(), 2u);
}

TEST(UnerLabelTest, RejectsWithPosition) {
  try {
    UnerLabel::Parse("Name--Event");
    FAIL();
  } catch (const LabelParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  try {
    UnerLabel::Parse("Name-A-B-C-D");
    FAIL();
  } catch (const LabelParseError& e) {
    EXPECT_EQ(e.position(), 11u);
  }
  EXPECT_THROW(UnerLabel::Parse(""), LabelParseError);
  EXPECT_THROW(UnerLabel::Parse("Thing-Event"), LabelParseError);
  EXPECT_THROW(UnerLabel::Parse("Name-"), LabelParseError);
  EXPECT_THROW(UnerLabel::Parse("-Name"), LabelParseError);
  EXPECT_THROW(UnerLabel::Parse("Name-Foo Bar"), LabelParseError);
  EXPECT_THROW(UnerLabel::Parse("name"), LabelParseError);
}

TEST(UnerLabelTest, TruncateAndPrefix) {
  const UnerLabel label = UnerLabel::Parse("Name-Location-GPE-City");
  EXPECT_EQ(label.Truncate(2).str(), "Name-Location");
  EXPECT_EQ(label.Truncate(4), label);
  EXPECT_EQ(label.Truncate(9), label);
  EXPECT_TRUE(label.HasPrefix({"Name", "Location"}));
  EXPECT_FALSE(label.HasPrefix({"Name", "Person"}));
  EXPECT_FALSE(label.Truncate(1).HasPrefix({"Name", "Location"}));
}

TEST(EquivalenceMapTest, ParseAndLookup) {
  std::istringstream in(
      "# comment\n"
      "dbo:SoccerTournament\tName-Event-Occasion-Game\n"
      "owl:Thing\tNULL\n");
  const EquivalenceMap map = EquivalenceMap::Parse(in, "eq");
  ASSERT_NE(map.Find("dbo:SoccerTournament"), nullptr);
  EXPECT_EQ(map.Find("dbo:SoccerTournament")->value().str(), "Name-Event-Occasion-Game");
  ASSERT_NE(map.Find("owl:Thing"), nullptr);
  EXPECT_FALSE(map.Find("owl:Thing")->has_value());
  EXPECT_EQ(map.Find("dbo:Nope"), nullptr);
}

TEST(EquivalenceMapTest, DuplicateAndBadLabelRejected) {
  std::istringstream dup("dbo:Event\tName-Event\ndbo:Event\tName-Event\n");
  EXPECT_THROW(EquivalenceMap::Parse(dup, "eq"), DataError);
  std::istringstream bad("dbo:Event\tEvent-Name\n");
  EXPECT_THROW(EquivalenceMap::Parse(bad, "eq"), DataError);
  std::istringstream missing("dbo:Event\n");
  EXPECT_THROW(EquivalenceMap::Parse(missing, "eq"), DataError);
}

TEST(PriorityMapTest, ParseRejectsBadValues) {
  std::istringstream ok("dbo:Event\t2\nowl:Thing\t1\n");
  EXPECT_EQ(PriorityMap::Parse(ok, "p").Find("dbo:Event"), 2);
  for (const char* text : {"dbo:Event\t0\n", "dbo:Event\tx\n", "dbo:Event\t2\ndbo:Event\t3\n",
                           "dbo:Event\t-1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(PriorityMap::Parse(in, "p"), DataError) << text;
  }
}

TEST(CrossValidateTest, NamesMissingClass) {
  std::istringstream eq("dbo:A\tName\n");
  try {
    CrossValidate(EquivalenceMap::Parse(eq, "eq"), Priorities({{"dbo:B", 1}}));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("dbo:A"), std::string::npos);
  }
}

TEST(ShippedTablesTest, ExactLabelCountAndLevels) {
  const EquivalenceMap& eq = ShippedMapper().equivalences();
  EXPECT_EQ(eq.Labels().size(), 124u);
  EXPECT_EQ(eq.size(), ShippedMapper().priorities().size());
  const auto levels = LevelNodeCounts(eq);
  EXPECT_EQ(levels[0], 3u);
  EXPECT_GT(levels[1], 0u);
}

TEST(SelectClassTest, SoccerTournamentExample) {
  const std::vector<std::string> classes = {"dbo:Event", "dbo:SoccerTournament",
                                            "dbo:SocietalEvent", "dbo:SportsEvent",
                                            "owl:Thing"};
  const auto& mapper = ShippedMapper();
  EXPECT_EQ(SelectClass(classes, mapper.priorities()), "dbo:SoccerTournament");
  EXPECT_EQ(mapper.Resolve(classes)->str(), "Name-Event-Occasion-Game");
}

TEST(SelectClassTest, TieGoesToEarliest) {
  const auto& p = ShippedMapper().priorities();
  EXPECT_EQ(SelectClass(std::vector<std::string>{"dbo:SocietalEvent", "dbo:Event"}, p),
            "dbo:SocietalEvent");
  EXPECT_EQ(SelectClass(std::vector<std::string>{"dbo:Event", "dbo:SocietalEvent"}, p),
            "dbo:Event");
}

TEST(SelectClassTest, EmptyAndUnknown) {
  const auto& p = ShippedMapper().priorities();
  EXPECT_EQ(SelectClass(std::vector<std::string>{}, p), std::nullopt);
  MappingCounters counters;
  EXPECT_EQ(SelectClass(std::vector<std::string>{"x:A", "x:B"}, p, &counters), std::nullopt);
  EXPECT_EQ(counters.classes_without_priority, 2u);
  EXPECT_EQ(SelectClass(std::vector<std::string>{"x:A", "owl:Thing"}, p, &counters),
            "owl:Thing");
  EXPECT_EQ(counters.classes_without_priority, 3u);
}

TEST(MapToUnerTest, Examples) {
  const auto& eq = ShippedMapper().equivalences();
  MappingCounters counters;
  EXPECT_EQ(MapToUner("dbo:SportsEvent", eq, &counters)->str(), "Name-Event-Occasion-Game");
  EXPECT_EQ(MapToUner("owl:Thing", eq, &counters), std::nullopt);
  EXPECT_EQ(MapToUner("unknown:Foo", eq, &counters), std::nullopt);
  EXPECT_EQ(counters.null_mapped, 1u);
  EXPECT_EQ(counters.unknown_classes, 1u);
}

// Reference: first index holding the maximum priority.
std::optional<std::string> ReferenceSelect(const std::vector<std::string>& xs,
                                           const PriorityMap& p) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto v = p.Find(xs[i]);
    if (!v) continue;
    if (!best || *v > *p.Find(xs[*best])) best = i;
  }
  if (!best) return std::nullopt;
  return xs[*best];
}

TEST(SelectClassProperty, MatchesReferenceAndPermutationInvariance) {
  const PriorityMap p = Priorities({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 3}, {"e", 1}});
  std::mt19937_64 rng(7);
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "zz"};
  for (int iter = 0; iter < 5000; ++iter) {
    std::vector<std::string> xs;
    const int n = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int i = 0; i < n; ++i) {
      xs.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    }
    const auto got = SelectClass(xs, p);
    ASSERT_EQ(got, ReferenceSelect(xs, p));
    if (got) {
      ASSERT_NE(std::find(xs.begin(), xs.end(), *got), xs.end());
    }

    // Shuffling only the non-maximal elements keeps the answer.
    if (!got) continue;
    const int top = *p.Find(*got);
    std::vector<std::size_t> slots;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (p.Find(xs[i]) != top) {
        slots.push_back(i);
        rest.push_back(xs[i]);
      }
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    std::vector<std::string> shuffled = xs;
    for (std::size_t k = 0; k < slots.size(); ++k) shuffled[slots[k]] = rest[k];
    ASSERT_EQ(SelectClass(shuffled, p), got);
  }
}

TEST(MapperProperty, ResolvedLabelsAlwaysReparse) {
  const auto& mapper = ShippedMapper();
  std::vector<std::string> classes;
  for (const auto& [cls, label] : mapper.equivalences().entries()) classes.push_back(cls);
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 2000; ++iter) {
    std::vector<std::string> xs;
    for (int i = 0; i < 5; ++i) {
      xs.push_back(classes[std::uniform_int_distribution<std::size_t>(0, classes.size() - 1)(rng)]);
    }
    if (auto label = mapper.Resolve(xs)) {
      ASSERT_EQ(UnerLabel::Parse(label->str()), *label);
    }
  }
}

}  // namespace
}  // namespace uner
