// Copyright 2026 The reqplan Authors
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

#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "reqplan/project_io.hpp"
#include "test_oracles.hpp"

namespace reqplan {
namespace {

const char* const kFixtures[] = {"early_re.json", "sparse_fixture.json", "mvp_fixture.json",
                                 "release_fixture.json", "keyword_fixture.json"};

json FixtureJson(const std::string& name) {
  return json::parse(ReadFile(testing::FixturePath(name)));
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::string MessageOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(LoadProjectTest, EveryFixtureLoadsClean) {
  for (const char* name : kFixtures) {
    const auto doc = LoadProject(testing::FixturePath(name));
    EXPECT_TRUE(ValidateProject(doc.model).empty()) << name;
  }
}

TEST(LoadProjectTest, EarlyRequirementsFixtureShape) {
  const auto doc = LoadProject(testing::FixturePath("early_re.json"));
  EXPECT_EQ(doc.model.requirements.size(), 5u);
  EXPECT_EQ(doc.model.stakeholders.size(), 4u);
  EXPECT_EQ(doc.model.dimensions.size(), 2u);
  EXPECT_EQ(doc.model.evaluations.size(), 40u);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t u = 0; u < 4; ++u) {
      const std::string req = "req" + std::to_string(r + 1);
      const std::string user = "user" + std::to_string(u + 1);
      EXPECT_EQ(*doc.model.evaluations.Get(user, req, "relevance"), testing::kRelevance[r][u]);
      EXPECT_EQ(*doc.model.evaluations.Get(user, req, "risk"), testing::kRisk[r][u]);
    }
}

TEST(LoadProjectTest, SparseFixtureHasSevenRatings) {
  const auto doc = LoadProject(testing::FixturePath("sparse_fixture.json"));
  EXPECT_EQ(doc.model.evaluations.size(), 7u);
}

TEST(ParseProjectTest, MalformedDocumentNamesTheLocation) {
  EXPECT_EQ(CodeOf([] { ParseProject("{\"requirements\": [}"); }), ErrorCode::kParseError);
  const std::string where =
      MessageOf([] { ParseProject(R"({"requirements": [{"id": 3}]})"); });
  EXPECT_NE(where.find("/requirements/0/id"), std::string::npos) << where;
  const std::string unknown = MessageOf([] { ParseProject(R"({"extra": 1})"); });
  EXPECT_NE(unknown.find("/extra"), std::string::npos) << unknown;
  const std::string kind = MessageOf([] {
    ParseProject(R"({"hard_constraints": [{"kind": "SOON", "req": "a"}]})");
  });
  EXPECT_NE(kind.find("/hard_constraints/0/kind"), std::string::npos) << kind;
}

TEST(ParseProjectTest, OutOfRangeRatingIsAValidationError) {
  json j = FixtureJson("early_re.json");
  j["evaluations"]["relevance"]["req1"]["user1"] = 12;
  try {
    ParseProject(j.dump());
    FAIL();
  } catch (const ValidationFailure& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidationError);
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].rule, "rating out of range");
  }
}

TEST(ParseProjectTest, ConfigEnumsAndDefaults) {
  json j = FixtureJson("early_re.json");
  auto doc = ParseProject(j.dump());
  EXPECT_EQ(doc.config.utility.normalization, NormalizationMode::kDivideByDims);
  EXPECT_EQ(doc.config.utility.missing, MissingValuePolicy::kSkip);
  EXPECT_EQ(doc.config.factorization, TrainConfig{});
  EXPECT_EQ(doc.config.consensus, ConsensusConfig{});
  j["config"] = json::parse(R"({
    "utility": {"normalization": "WEIGHTED_SUM", "missing_values": "ERROR"},
    "consensus": {"change_metric": "DISTANCE", "fairness_form": "CHAIN",
                  "objective": "PRODUCT_EQ8"},
    "factorization": {"k": 2, "seed": 9},
    "matching": {"stopwords": ["the"]}})");
  doc = ParseProject(j.dump());
  EXPECT_EQ(doc.config.utility.normalization, NormalizationMode::kWeightedSum);
  EXPECT_EQ(doc.config.utility.missing, MissingValuePolicy::kError);
  EXPECT_EQ(doc.config.consensus.change_metric, ChangeMetric::kDistance);
  EXPECT_EQ(doc.config.consensus.fairness_form, FairnessForm::kChain);
  EXPECT_EQ(doc.config.consensus.objective, ConsensusObjective::kProduct);
  EXPECT_EQ(doc.config.factorization.k, 2);
  EXPECT_EQ(doc.config.factorization.seed, 9u);
  EXPECT_EQ(doc.config.matching.stopwords, std::vector<std::string>{"the"});
  j["config"] = {{"utility", {{"normalization", "MEDIAN"}}}};
  EXPECT_EQ(CodeOf([&] { ParseProject(j.dump()); }), ErrorCode::kParseError);
  j["config"] = {{"factorization", {{"k", 0}}}};
  EXPECT_EQ(CodeOf([&] { ParseProject(j.dump()); }), ErrorCode::kParseError);
}

TEST(ParseProjectTest, PreferenceOperatorsAndKinds) {
  json j = FixtureJson("release_fixture.json");
  j["preferences"]["constraints"] = json::parse(R"([
    {"owner": "user1", "req": "req1", "op": "<", "value": 3},
    {"owner": "user2", "kind": "AT_LEAST", "req": "req2", "value": 2},
    {"owner": "user3", "req": "req3", "op": "=", "value": 3, "hardness": "HARD"}])");
  const auto doc = ParseProject(j.dump());
  const auto& c = doc.model.preferences.constraints;
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].kind, ConstraintKind::kAtMost);
  EXPECT_EQ(c[0].value, 2);
  EXPECT_EQ(c[0].hardness, Hardness::kSoft);
  EXPECT_EQ(c[1].kind, ConstraintKind::kAtLeast);
  EXPECT_EQ(*c[1].owner, "user2");
  EXPECT_EQ(c[2].hardness, Hardness::kHard);
  j["preferences"]["constraints"] = json::parse(R"([{"req": "req1", "op": "~", "value": 1}])");
  EXPECT_EQ(CodeOf([&] { ParseProject(j.dump()); }), ErrorCode::kParseError);
}

TEST(RoundTripTest, SaveThenLoadIsIdentical) {
  const auto dir = std::filesystem::temp_directory_path();
  for (const char* name : kFixtures) {
    const auto doc = LoadProject(testing::FixturePath(name));
    const auto path = (dir / (std::string("reqplan_rt_") + name)).string();
    SaveProject(doc, path);
    const auto again = LoadProject(path);
    EXPECT_EQ(again.model, doc.model) << name;
    EXPECT_EQ(again.mvp_maxtime, doc.mvp_maxtime);
    EXPECT_EQ(again.config.utility, doc.config.utility);
    EXPECT_EQ(again.config.factorization, doc.config.factorization);
    EXPECT_EQ(again.config.consensus, doc.config.consensus);
    EXPECT_EQ(again.config.matching, doc.config.matching);
    std::remove(path.c_str());
  }
}

TEST(RoundTripTest, SerializationIsAFixedPoint) {
  for (const char* name : kFixtures) {
    const json once = ProjectToJson(LoadProject(testing::FixturePath(name)));
    EXPECT_EQ(ProjectToJson(ParseProject(once.dump())), once) << name;
  }
  // The canonical form of a preference written with an operator is its kind.
  const json pref = ProjectToJson(LoadProject(testing::FixturePath("release_fixture.json")));
  EXPECT_EQ(pref["preferences"]["constraints"][2]["kind"], "AT_MOST");
}

TEST(ImportCsvTest, ReplacesOneDimension) {
  auto doc = LoadProject(testing::FixturePath("early_re.json"));
  ImportCsv(doc, "risk",
            "risk,user1,user2,user3,user4\n"
            "req1,1,?,3,\n"
            "req2,10,0,?,?\n");
  EXPECT_EQ(*doc.model.evaluations.Get("user1", "req1", "risk"), 1.0);
  EXPECT_FALSE(doc.model.evaluations.Get("user2", "req1", "risk").has_value());
  EXPECT_FALSE(doc.model.evaluations.Get("user4", "req1", "risk").has_value());
  EXPECT_FALSE(doc.model.evaluations.Get("user1", "req3", "risk").has_value());
  EXPECT_EQ(*doc.model.evaluations.Get("user1", "req3", "relevance"), 2.0);
  EXPECT_EQ(doc.model.evaluations.size(), 20u + 4u);
}

TEST(ImportCsvTest, RejectsBadInput) {
  auto doc = LoadProject(testing::FixturePath("early_re.json"));
  const auto before = doc.model;
  EXPECT_EQ(CodeOf([&] { ImportCsv(doc, "speed", "x,user1\nreq1,1\n"); }),
            ErrorCode::kUnknownDimension);
  EXPECT_EQ(CodeOf([&] { ImportCsv(doc, "risk", "x,user1\nreq1,abc\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ImportCsv(doc, "risk", "x,user1\nreq1,1,2\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ImportCsv(doc, "risk", "x,user1\nreq1,42\n"); }),
            ErrorCode::kValidationError);
  EXPECT_EQ(doc.model, before);
}

}  // namespace
}  // namespace reqplan
