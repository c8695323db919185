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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "reqplan/consensus_plan.hpp"
#include "reqplan/project_io.hpp"
#include "test_oracles.hpp"

namespace reqplan {
namespace {

AssignmentPreferences Table() {
  return MakeAssignmentPreferences(
      LoadProject(testing::FixturePath("mvp_fixture.json")).model);
}

ConsensusConfig Config(ChangeMetric metric, FairnessForm form, ConsensusObjective obj) {
  ConsensusConfig c;
  c.change_metric = metric;
  c.fairness_form = form;
  c.objective = obj;
  return c;
}

AssignmentPreferences Custom(std::vector<std::vector<int>> releases, int horizon) {
  AssignmentPreferences p;
  p.horizon = horizon;
  for (std::size_t s = 0; s < releases.size(); ++s)
    p.stakeholders.push_back("s" + std::to_string(s));
  for (std::size_t r = 0; r < releases.at(0).size(); ++r)
    p.requirements.push_back("r" + std::to_string(r));
  p.releases = std::move(releases);
  return p;
}

TEST(AssignmentPreferencesTest, BuiltFromTheProject) {
  const auto p = Table();
  EXPECT_EQ(p.horizon, 4);
  EXPECT_EQ(p.stakeholders, (std::vector<std::string>{"user1", "user2", "user3", "user4"}));
  EXPECT_EQ(p.releases[0], (std::vector<int>{1, 2, 3, 1, 4}));
  EXPECT_EQ(p.releases[2], (std::vector<int>{2, 3, 3, 2, 1}));
}

TEST(AssignmentPreferencesTest, IncompletePreferencesAreRejected) {
  ProjectModel m = LoadProject(testing::FixturePath("mvp_fixture.json")).model;
  m.preferences.assignments["user2"].erase("req4");
  try {
    MakeAssignmentPreferences(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompletePreferences);
  }
}

TEST(ChangeCountsTest, HandComparisons) {
  const auto p = Table();
  const std::vector<int> plan = {1, 2, 3, 1, 4};
  const auto counts = ChangeCounts(p, plan);
  EXPECT_EQ(counts, (std::vector<long long>{0, 2, 4, 3}));
  const auto dist = ChangeCounts(p, plan, Config(ChangeMetric::kDistance, {}, {}));
  // user3 (2,3,3,2,1): |2-1| + |3-2| + 0 + |2-1| + |1-4|.
  EXPECT_EQ(dist[2], 6);
  EXPECT_EQ(dist[0], 0);
}

TEST(ChangeCountsTest, OwnPreferencesCostNothing) {
  const auto p = Table();
  for (std::size_t s = 0; s < p.stakeholders.size(); ++s)
    for (auto metric : {ChangeMetric::kIndicator, ChangeMetric::kDistance})
      EXPECT_EQ(ChangeCounts(p, p.releases[s], Config(metric, {}, {}))[s], 0);
}

TEST(ChangeCountsTest, IncompletePlan) {
  try {
    ChangeCounts(Table(), {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompletePlan);
  }
  EXPECT_THROW(ChangeCounts(Table(), {1, 2, 3, 4, 5}), Error);
}

TEST(EvaluateObjectiveTest, UnanimousPlanScoresZero) {
  const auto p = Custom({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}, 3);
  for (auto obj : {ConsensusObjective::kLexTotalThenFairness,
                   ConsensusObjective::kFairnessOnly, ConsensusObjective::kProduct})
    EXPECT_EQ(EvaluateObjective(p, {1, 2, 3}, Config({}, {}, obj)), 0.0);
}

TEST(EvaluateObjectiveTest, EqualCountsAreDegenerateForLiteralForms) {
  // Each stakeholder disagrees with the plan on both requirements.
  const auto p = Custom({{2, 2}, {3, 3}, {2, 3}, {3, 2}}, 3);
  const std::vector<int> plan = {1, 1};
  EXPECT_EQ(ChangeCounts(p, plan), (std::vector<long long>{2, 2, 2, 2}));
  EXPECT_EQ(EvaluateObjective(p, plan, Config({}, {}, ConsensusObjective::kFairnessOnly)), 0.0);
  EXPECT_EQ(EvaluateObjective(p, plan, Config({}, {}, ConsensusObjective::kProduct)), 0.0);
  EXPECT_GT(EvaluateObjective(p, plan), 0.0);
}

TEST(EvaluateObjectiveTest, FairnessForms) {
  // Counts (0, 1, 2, 3).
  const auto p = Custom({{1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {2, 2, 2}}, 2);
  const std::vector<int> plan = {1, 1, 1};
  EXPECT_EQ(ChangeCounts(p, plan), (std::vector<long long>{0, 1, 2, 3}));
  EXPECT_EQ(EvaluateObjective(p, plan, Config({}, FairnessForm::kAllPairs,
                                              ConsensusObjective::kFairnessOnly)),
            10.0);
  EXPECT_EQ(EvaluateObjective(p, plan, Config({}, FairnessForm::kChain,
                                              ConsensusObjective::kFairnessOnly)),
            3.0);
  EXPECT_EQ(EvaluateObjective(p, plan, Config({}, FairnessForm::kAllPairs,
                                              ConsensusObjective::kProduct)),
            60.0);
}

TEST(PlanConsensusTest, WorkedExample) {
  const auto p = Table();
  const auto result = PlanConsensus(p);
  // req3 is unanimous; elsewhere the plurality choice, ties to the earlier
  // release.
  EXPECT_EQ(result.releases, (std::vector<int>{1, 2, 3, 2, 1}));
  EXPECT_EQ(result.plan.at("req3"), 3);
  EXPECT_EQ(result.total_changes, 6);
  EXPECT_TRUE(testing::BrutePlanIsOptimal(p.releases, 4, result.releases, 0, false, false));
  const auto oracle = ConsensusOracle(p);
  EXPECT_EQ(result.releases, oracle.releases);
  EXPECT_EQ(result.objective_value, oracle.objective_value);
  EXPECT_EQ(result.objective_value, EvaluateObjective(p, result.releases));
}

TEST(PlanConsensusTest, SingleStakeholderKeepsPreferences) {
  const auto p = Custom({{3, 1, 2, 2}}, 3);
  const auto r = PlanConsensus(p);
  EXPECT_EQ(r.releases, p.releases[0]);
  EXPECT_EQ(r.objective_value, 0.0);
  // Fairness is always 0 with one stakeholder, so every plan is optimal under
  // the product and the smallest plan is kept.
  const auto product = PlanConsensus(p, Config({}, {}, ConsensusObjective::kProduct));
  EXPECT_EQ(product.releases, (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(product.objective_value, 0.0);
}

TEST(PlanConsensusTest, UnanimousPreferences) {
  const auto p = Custom({{2, 3, 1}, {2, 3, 1}}, 3);
  const auto r = PlanConsensus(p);
  EXPECT_EQ(r.releases, (std::vector<int>{2, 3, 1}));
  EXPECT_EQ(r.objective_value, 0.0);
}

TEST(ConsensusOracleTest, SmallCases) {
  auto r = ConsensusOracle(Custom({{1}, {1}, {2}}, 2));
  EXPECT_EQ(r.releases, std::vector<int>{1});
  EXPECT_EQ(r.total_changes, 1);
  r = ConsensusOracle(Custom({{1}, {2}}, 2));
  EXPECT_EQ(r.releases, std::vector<int>{1});
  EXPECT_EQ(r.total_changes, 1);
  try {
    ConsensusOracle(Custom({std::vector<int>(9, 1)}, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(PlanConsensusPropertyTest, MatchesEnumerationOnRandomInstances) {
  std::mt19937_64 rng(17);
  const ConsensusObjective objectives[] = {ConsensusObjective::kLexTotalThenFairness,
                                           ConsensusObjective::kFairnessOnly,
                                           ConsensusObjective::kProduct};
  for (int trial = 0; trial < 500; ++trial) {
    const int m = std::uniform_int_distribution<int>(2, 4)(rng);
    const int reqs = std::uniform_int_distribution<int>(3, 6)(rng);
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    std::vector<std::vector<int>> rel(m, std::vector<int>(reqs));
    for (auto& row : rel)
      for (auto& v : row) v = std::uniform_int_distribution<int>(1, n)(rng);
    const auto p = Custom(rel, n);
    const bool distance = trial % 3 == 1;
    const bool chain = trial % 4 == 3;
    for (int o = 0; o < 3; ++o) {
      const auto cfg = Config(distance ? ChangeMetric::kDistance : ChangeMetric::kIndicator,
                              chain ? FairnessForm::kChain : FairnessForm::kAllPairs,
                              objectives[o]);
      const auto fast = PlanConsensus(p, cfg);
      const auto slow = ConsensusOracle(p, cfg);
      ASSERT_EQ(fast.releases, slow.releases) << "trial " << trial << " objective " << o;
      EXPECT_EQ(fast.objective_value, slow.objective_value);
      EXPECT_EQ(fast.objective_value, EvaluateObjective(p, fast.releases, cfg));
      EXPECT_TRUE(testing::BrutePlanIsOptimal(rel, n, fast.releases, o, distance, chain));
    }
  }
}

TEST(PlanConsensusPropertyTest, UnanimityPreservedAndStakeholderOrderIrrelevant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 3, reqs = 5, n = 3;
    std::vector<std::vector<int>> rel(m, std::vector<int>(reqs));
    for (auto& row : rel)
      for (auto& v : row) v = std::uniform_int_distribution<int>(1, n)(rng);
    for (int s = 1; s < m; ++s) rel[s][0] = rel[0][0];  // requirement 0 unanimous
    const auto p = Custom(rel, n);
    const auto r = PlanConsensus(p);
    EXPECT_EQ(r.releases[0], rel[0][0]);
    auto shuffled = rel;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(PlanConsensus(Custom(shuffled, n)).objective_value, r.objective_value);
  }
}

}  // namespace
}  // namespace reqplan
