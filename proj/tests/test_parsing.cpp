// Copyright 2026 The Authors.
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

#include "support.hpp"

namespace idss {
namespace {

class RuleParser : public ::testing::Test {
 protected:
  ParsedTurn parse(std::string_view text, std::vector<TurnRecord> history = {}) const {
    return parser_.parse(text, testing::car_engine()->schema_summary(), history);
  }
  static TurnRecord asked(const std::string& dim) { return TurnRecord{"agent", "question?", {}, dim}; }

  RuleBasedParser parser_;
};

TEST_F(RuleParser, UsedSuvUnderBudget) {
  const ParsedTurn p = parse("Looking for a used SUV under $30k");
  FilterSet want;
  want.set("body", Equals{"SUV"});
  want.set("condition", Equals{"used"});
  want.set("price", Range{std::nullopt, 30000.0});
  EXPECT_EQ(p.filter_delta, want);
  EXPECT_EQ(p.patience, Patience::kPatient);
}

TEST_F(RuleParser, LikedAndDislikedPhrases) {
  const ParsedTurn p = parse("I want an SUV with good fuel economy, but I hate road noise.");
  EXPECT_EQ(p.liked, std::vector<std::string>{"good fuel economy"});
  EXPECT_EQ(p.disliked, std::vector<std::string>{"road noise"});
  EXPECT_TRUE(p.filter_delta.contains("body"));
}

TEST_F(RuleParser, DisjunctionBecomesOneOf) {
  const ParsedTurn p = parse("A hybrid or electric sedan please");
  ASSERT_TRUE(p.filter_delta.contains("fuel"));
  EXPECT_EQ(std::get<OneOf>(p.filter_delta.entries.at("fuel")), (OneOf{{"electric", "hybrid"}}));
}

TEST_F(RuleParser, RangesAndComparators) {
  const ParsedTurn between = parse("Something between $15,000 and $20,000");
  EXPECT_EQ(std::get<Range>(between.filter_delta.entries.at("price")), (Range{15000.0, 20000.0}));
  const ParsedTurn newer = parse("Something 2015 or newer.");
  EXPECT_EQ(std::get<Range>(newer.filter_delta.entries.at("year")), (Range{2015.0, std::nullopt}));
  const ParsedTurn miles = parse("Less than 60,000 miles on it");
  EXPECT_EQ(std::get<Range>(miles.filter_delta.entries.at("mileage")), (Range{std::nullopt, 60000.0}));
}

TEST_F(RuleParser, SynonymsMapToCanonicalValues) {
  const ParsedTurn p = parse("A chevy crossover that runs on gas");
  EXPECT_EQ(std::get<Equals>(p.filter_delta.entries.at("make")).value, "Chevrolet");
  EXPECT_EQ(std::get<Equals>(p.filter_delta.entries.at("body")).value, "SUV");
  EXPECT_EQ(std::get<Equals>(p.filter_delta.entries.at("fuel")).value, "gasoline");
}

TEST_F(RuleParser, PendingQuestionResolvesBareNumbersAndColors) {
  const ParsedTurn budget = parse("25000", {asked("price")});
  EXPECT_EQ(std::get<Range>(budget.filter_delta.entries.at("price")), (Range{std::nullopt, 25000.0}));
  const ParsedTurn inside = parse("Black, please.", {asked("interior_color")});
  EXPECT_TRUE(inside.filter_delta.contains("interior_color"));
  EXPECT_FALSE(inside.filter_delta.contains("exterior_color"));
}

TEST_F(RuleParser, ImpatienceSignals) {
  EXPECT_EQ(parse("An SUV. Just show me what you have.").patience, Patience::kImpatient);
  EXPECT_EQ(parse("ok", {asked("fuel")}).patience, Patience::kImpatient);
  const ParsedTurn fallback = parse("No strong preference on that.", {asked("fuel")});
  EXPECT_EQ(fallback.patience, Patience::kPatient);
  EXPECT_TRUE(fallback.filter_delta.empty());
  EXPECT_TRUE(fallback.liked.empty());
}

TEST_F(RuleParser, EveryPersonaQueryParsesToValidFilters) {
  const auto& schema = testing::cars()->schema();
  for (const auto& persona : testing::personas()) {
    const ParsedTurn p = parse(persona.initial_query);
    EXPECT_NO_THROW(validate_filters(schema, p.filter_delta)) << persona.persona_id;
    for (const auto& [dim, answers] : persona.answer_script) {
      if (dim == "*") continue;
      for (const auto& a : answers) {
        const ParsedTurn ans = parse(a, {asked(dim)});
        EXPECT_NO_THROW(validate_filters(schema, ans.filter_delta));
        EXPECT_TRUE(ans.filter_delta.contains(dim)) << persona.persona_id << ": " << a;
      }
    }
  }
}

TEST(ParsedTurnJson, RoundTripAndValidation) {
  ParsedTurn p;
  p.filter_delta.set("body", Equals{"SUV"});
  p.liked = {"quiet cabin"};
  p.patience = Patience::kImpatient;
  const json j = to_json(p);
  EXPECT_EQ(j["patience"], "impatient");
  EXPECT_EQ(parsed_turn_from_json(j), p);
  EXPECT_THROW(parsed_turn_from_json(json{{"liked", {""}}}), ContractError);
  EXPECT_THROW(parsed_turn_from_json(json{{"patience", "sleepy"}}), ContractError);
}

TEST(Merge, DeltaWinsAndPhrasesDedupe) {
  FilterSet a, d;
  a.set("body", Equals{"SUV"});
  a.set("price", Range{std::nullopt, 30000.0});
  d.set("price", Range{std::nullopt, 20000.0});
  const FilterSet m = merge_filters(a, d);
  EXPECT_EQ(std::get<Range>(m.entries.at("price")).hi, 20000.0);
  EXPECT_TRUE(m.contains("body"));

  std::vector<std::string> liked{"quiet cabin"};
  merge_phrases(liked, {"quiet cabin", "long range"});
  EXPECT_EQ(liked, (std::vector<std::string>{"quiet cabin", "long range"}));
}

TEST(History, PendingDimensionIsTheLastAgentQuestion) {
  std::vector<TurnRecord> h{{"user", "hi", {}, std::nullopt}};
  EXPECT_FALSE(pending_dimension(h));
  h.push_back({"agent", "fuel?", {}, "fuel"});
  EXPECT_EQ(pending_dimension(h), "fuel");
  h.push_back({"user", "gas", {}, std::nullopt});
  EXPECT_FALSE(pending_dimension(h));
  const TurnRecord t{"agent", "q", {}, "fuel"};
  EXPECT_EQ(turn_from_json(to_json(t)), t);
}

TEST(Summary, CarriesVocabularyAndSynonyms) {
  const SchemaSummary& s = testing::car_engine()->schema_summary();
  const auto* fuel = s.find("fuel");
  ASSERT_NE(fuel, nullptr);
  EXPECT_FALSE(fuel->values.empty());
  EXPECT_EQ(fuel->synonyms.at("ev"), "electric");
  EXPECT_EQ(to_json(s)["dimensions"].size(), 11u);
}

}  // namespace
}  // namespace idss
