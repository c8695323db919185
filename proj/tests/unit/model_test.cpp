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

#include <gtest/gtest.h>

#include "reqplan/model.hpp"
#include "reqplan/project_io.hpp"
#include "test_oracles.hpp"

namespace reqplan {
namespace {

ProjectModel EarlyRe() {
  return LoadProject(testing::FixturePath("early_re.json")).model;
}

bool HasIssue(const std::vector<ValidationIssue>& issues, const std::string& rule) {
  for (const auto& i : issues)
    if (i.rule == rule) return true;
  return false;
}

TEST(ValidateProjectTest, WellFormedProjectHasNoIssues) {
  EXPECT_TRUE(ValidateProject(EarlyRe()).empty());
}

TEST(ValidateProjectTest, RatingAboveScaleIsOneIssue) {
  ProjectModel p = EarlyRe();
  p.evaluations.Set("user1", "req1", "relevance", 11);
  const auto issues = ValidateProject(p);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].rule, "rating out of range");
  EXPECT_NE(issues[0].entity.find("user1"), std::string::npos);
}

TEST(ValidateProjectTest, PreferenceOnUnknownRequirementIsOneIssue) {
  ProjectModel p = EarlyRe();
  auto c = constraints::AtMost("req9", 2);
  c.hardness = Hardness::kSoft;
  c.owner = "user1";
  p.preferences.constraints.push_back(c);
  const auto issues = ValidateProject(p);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].rule, "unknown requirement id");
}

TEST(ValidateProjectTest, ReportsEachBrokenInvariant) {
  ProjectModel p = EarlyRe();
  p.requirements.push_back(p.requirements[0]);
  p.requirements[1].time_estimate = -1;
  p.requirements[2].keywords = {"Payment", "card", "card"};
  p.stakeholders[0].id = "";
  p.dimensions[0].weight = 1.5;
  p.dimensions.push_back(p.dimensions[1]);
  p.evaluations.Set("ghost", "req1", "risk", 3);
  p.evaluations.Set("user2", "req1", "speed", 3);
  p.horizon.release_count = 0;
  auto hard = constraints::Before("req1", "req2");
  hard.hardness = Hardness::kSoft;
  p.hard_constraints.push_back(hard);
  p.preferences.assignments["user2"]["req1"] = 5;
  const auto issues = ValidateProject(p);
  for (const char* rule :
       {"duplicate id", "negative time estimate", "keyword 'Payment' not normalized",
        "duplicate keyword 'card'", "empty id", "weight out of range",
        "duplicate name", "unknown stakeholder id", "unknown dimension",
        "release count must be positive", "hard constraint marked soft",
        "release outside horizon"})
    EXPECT_TRUE(HasIssue(issues, rule)) << rule;
}

TEST(ValidateProjectTest, IsPure) {
  ProjectModel p = EarlyRe();
  p.evaluations.Set("user1", "req1", "relevance", -1);
  p.evaluations.Set("user9", "req2", "risk", 4);
  EXPECT_EQ(ValidateProject(p), ValidateProject(p));
}

TEST(ValidateProjectTest, RatingBoundsAreInclusive) {
  ProjectModel p = EarlyRe();
  p.evaluations.Set("user1", "req1", "relevance", 0);
  p.evaluations.Set("user1", "req2", "relevance", 10);
  EXPECT_TRUE(ValidateProject(p).empty());
}

TEST(EvaluationMatrixTest, MissingEntriesAreAbsentNotZero) {
  EvaluationMatrix m;
  m.Set("u", "r", "d", 0.0);
  EXPECT_EQ(m.Get("u", "r", "d"), 0.0);
  EXPECT_FALSE(m.Get("u", "r", "x").has_value());
  EXPECT_TRUE(m.Erase("u", "r", "d"));
  EXPECT_FALSE(m.Erase("u", "r", "d"));
  EXPECT_TRUE(m.empty());
}

TEST(EvaluationMatrixTest, ClearDimensionKeepsOtherDimensions) {
  EvaluationMatrix m;
  m.Set("u", "r", "a", 1);
  m.Set("u", "r", "b", 2);
  m.ClearDimension("a");
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.Get("u", "r", "b"), 2.0);
}

TEST(ReleaseHorizonTest, UnplannedFollowsLastRelease) {
  EXPECT_EQ(ReleaseHorizon{3}.unplanned(), 4);
}

TEST(PreferenceTest, OperatorsMapToKinds) {
  EXPECT_EQ(MakePreference("u", "r", "=", 2, Hardness::kSoft).kind, ConstraintKind::kAssign);
  EXPECT_EQ(MakePreference("u", "r", "<=", 2, Hardness::kSoft).kind, ConstraintKind::kAtMost);
  EXPECT_EQ(MakePreference("u", "r", ">=", 2, Hardness::kSoft).kind, ConstraintKind::kAtLeast);
  const auto lt = MakePreference("u", "r", "<", 2, Hardness::kSoft);
  EXPECT_EQ(lt.kind, ConstraintKind::kAtMost);
  EXPECT_EQ(lt.value, 1);
  const auto gt = MakePreference("u", "r", ">", 2, Hardness::kSoft);
  EXPECT_EQ(gt.kind, ConstraintKind::kAtLeast);
  EXPECT_EQ(gt.value, 3);
  EXPECT_EQ(*gt.owner, "u");
  EXPECT_THROW(MakePreference("u", "r", "!=", 2, Hardness::kSoft), Error);
}

TEST(PreferenceTest, RendersWithOwner) {
  const auto c = MakePreference("user1", "req3", "<=", 2, Hardness::kSoft);
  EXPECT_EQ(ToString(c), "user1: req3 <= 2");
  EXPECT_EQ(ToString(c, false), "req3 <= 2");
}

TEST(ConstraintKindTest, NamesRoundTrip) {
  for (auto kind : {ConstraintKind::kAssign, ConstraintKind::kBefore,
                    ConstraintKind::kNotBefore, ConstraintKind::kDifferent,
                    ConstraintKind::kAtMost, ConstraintKind::kAtLeast,
                    ConstraintKind::kExcludesOne, ConstraintKind::kTimely,
                    ConstraintKind::kCapacity, ConstraintKind::kEffort})
    EXPECT_EQ(ParseKind(KindName(kind)), kind);
  EXPECT_FALSE(ParseKind("SOMETIMES").has_value());
}

TEST(ErrorTest, CarriesCodeAndDetail) {
  const Error e(ErrorCode::kNoRatings, "req1/risk");
  EXPECT_EQ(e.code(), ErrorCode::kNoRatings);
  EXPECT_EQ(e.detail(), "req1/risk");
  EXPECT_NE(std::string(e.what()).find("req1/risk"), std::string::npos);
}

}  // namespace
}  // namespace reqplan
