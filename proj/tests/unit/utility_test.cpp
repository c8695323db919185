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

#include "reqplan/project_io.hpp"
#include "reqplan/utility_rank.hpp"
#include "test_oracles.hpp"

namespace reqplan {
namespace {

using testing::HandUtility;

const std::vector<std::string> kReqs = {"req1", "req2", "req3", "req4", "req5"};

ProjectModel EarlyRe() {
  return LoadProject(testing::FixturePath("early_re.json")).model;
}

UtilityConfig Mode(NormalizationMode mode) {
  UtilityConfig cfg;
  cfg.normalization = mode;
  return cfg;
}

std::vector<std::string> OrderOf(const UtilityReport& report) { return report.order; }

// Requirement ids sorted by descending hand-computed utility, ties by id.
std::vector<std::string> HandOrder() {
  std::vector<std::size_t> idx = {0, 1, 2, 3, 4};
  std::stable_sort(idx.begin(), idx.end(), [](std::size_t a, std::size_t b) {
    return HandUtility(a, false) > HandUtility(b, false);
  });
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(kReqs[i]);
  return out;
}

TEST(DimensionUtilityTest, MeansOfTheWorkedExample) {
  const auto p = EarlyRe();
  EXPECT_DOUBLE_EQ(DimensionUtility(p, "req2", "relevance"), 6.0);
  EXPECT_DOUBLE_EQ(DimensionUtility(p, "req2", "risk"), 6.5);
  for (std::size_t r = 0; r < kReqs.size(); ++r) {
    EXPECT_DOUBLE_EQ(DimensionUtility(p, kReqs[r], "relevance"),
                     testing::RowMean(testing::kRelevance[r]));
    EXPECT_DOUBLE_EQ(DimensionUtility(p, kReqs[r], "risk"),
                     testing::RowMean(testing::kRisk[r]));
  }
}

TEST(DimensionUtilityTest, ConstantRatingsGiveThatConstant) {
  ProjectModel p = EarlyRe();
  for (const auto& s : p.stakeholders) p.evaluations.Set(s.id, "req1", "risk", 7);
  EXPECT_DOUBLE_EQ(DimensionUtility(p, "req1", "risk"), 7.0);
}

TEST(DimensionUtilityTest, MissingValuePolicies) {
  ProjectModel p = EarlyRe();
  p.evaluations.Erase("user2", "req1", "relevance");
  // (1 + 5 + 2) / 3 over the stakeholders who rated.
  EXPECT_DOUBLE_EQ(DimensionUtility(p, "req1", "relevance"), 8.0 / 3.0);
  UtilityConfig strict;
  strict.missing = MissingValuePolicy::kError;
  try {
    DimensionUtility(p, "req1", "relevance", strict);
    FAIL() << "expected MissingEvaluations";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingEvaluations);
  }
  for (const auto& s : p.stakeholders) p.evaluations.Erase(s.id, "req1", "relevance");
  try {
    DimensionUtility(p, "req1", "relevance");
    FAIL() << "expected NoRatings";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoRatings);
  }
}

TEST(DimensionUtilityTest, UnknownIdsAreRejected) {
  const auto p = EarlyRe();
  EXPECT_THROW(DimensionUtility(p, "req9", "risk"), Error);
  EXPECT_THROW(DimensionUtility(p, "req1", "speed"), Error);
}

TEST(OverallUtilityTest, WeightedSumMatchesHandArithmetic) {
  const auto p = EarlyRe();
  const auto ws = Mode(NormalizationMode::kWeightedSum);
  EXPECT_DOUBLE_EQ(OverallUtility(p, "req4", ws), 2.9375);
  EXPECT_NEAR(OverallUtility(p, "req4", ws), 2.94, 0.005);
  for (std::size_t r = 0; r < kReqs.size(); ++r)
    EXPECT_DOUBLE_EQ(OverallUtility(p, kReqs[r], ws), HandUtility(r, false));
  EXPECT_DOUBLE_EQ(OverallUtility(p, "req1", ws), 3.125);
  EXPECT_DOUBLE_EQ(OverallUtility(p, "req2", ws), 6.125);
  EXPECT_DOUBLE_EQ(OverallUtility(p, "req3", ws), 3.875);
  EXPECT_DOUBLE_EQ(OverallUtility(p, "req5", ws), 5.6875);
}

TEST(OverallUtilityTest, DivideByDimsHalvesTwoDimensions) {
  const auto p = EarlyRe();
  EXPECT_DOUBLE_EQ(OverallUtility(p, "req4"), 1.46875);
  for (std::size_t r = 0; r < kReqs.size(); ++r)
    EXPECT_DOUBLE_EQ(OverallUtility(p, kReqs[r]), HandUtility(r, true));
}

TEST(OverallUtilityTest, SingleUnitDimensionIsIdentity) {
  ProjectModel p = EarlyRe();
  p.dimensions = {{"relevance", 1.0, ""}};
  p.evaluations.ClearDimension("risk");
  const auto ws = Mode(NormalizationMode::kWeightedSum);
  for (const auto& r : kReqs)
    EXPECT_DOUBLE_EQ(OverallUtility(p, r, ws), DimensionUtility(p, r, "relevance"));
}

TEST(RankTest, OrderFollowsRecomputedUtilities) {
  const auto p = EarlyRe();
  const auto expected = HandOrder();
  ASSERT_EQ(expected, (std::vector<std::string>{"req2", "req5", "req3", "req1", "req4"}));
  for (auto mode : {NormalizationMode::kDivideByDims, NormalizationMode::kWeightedSum}) {
    const auto report = Rank(p, Mode(mode));
    EXPECT_EQ(OrderOf(report), expected);
    for (std::size_t i = 0; i < expected.size(); ++i)
      EXPECT_EQ(report.priority.at(expected[i]), static_cast<int>(i) + 1);
  }
}

TEST(RankTest, IdenticalRatingsRankById) {
  const ProjectModel base_model = EarlyRe();
  ProjectModel p = base_model;
  for (const auto& [key, value] : base_model.evaluations.entries())
    p.evaluations.Set(key.stakeholder, key.requirement, key.dimension, 4);
  const auto report = Rank(p);
  EXPECT_EQ(report.order, kReqs);
}

TEST(RankTest, TwoRequirements) {
  ProjectModel p;
  p.requirements = {{"a", "", "", {}, 0}, {"b", "", "", {}, 0}};
  p.stakeholders = {{"u", "", {}}};
  p.dimensions = {{"d", 1.0, ""}};
  p.evaluations.Set("u", "a", "d", 3);
  p.evaluations.Set("u", "b", "d", 5);
  const auto report = Rank(p, Mode(NormalizationMode::kWeightedSum));
  EXPECT_EQ(report.priority.at("b"), 1);
  EXPECT_EQ(report.priority.at("a"), 2);
}

TEST(RankPropertyTest, ScaleModeAndMonotonicity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rating(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ProjectModel base_model = EarlyRe();
    ProjectModel p = base_model;
    for (const auto& [key, value] : base_model.evaluations.entries())
      p.evaluations.Set(key.stakeholder, key.requirement, key.dimension, rating(rng));
    const auto base = Rank(p);

    // Mode invariance.
    EXPECT_EQ(Rank(p, Mode(NormalizationMode::kWeightedSum)).order, base.order);

    // Scale invariance: ratings times c stay in range for c <= 1.
    const double c = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    ProjectModel scaled = p;
    for (const auto& [key, value] : p.evaluations.entries())
      scaled.evaluations.Set(key.stakeholder, key.requirement, key.dimension, value * c);
    const auto scaled_report = Rank(scaled);
    for (const auto& r : kReqs) {
      EXPECT_NEAR(scaled_report.overall.at(r), base.overall.at(r) * c, 1e-12);
    }
    // Exact ties can legitimately flip under floating-point scaling, so the
    // order is compared on utilities that differ by more than rounding.
    for (const auto& a : kReqs)
      for (const auto& b : kReqs)
        if (base.overall.at(a) > base.overall.at(b) + 1e-9) {
          EXPECT_LT(scaled_report.priority.at(a), scaled_report.priority.at(b));
        }

    // Monotonicity: raising one rating never worsens that requirement.
    const auto& target = kReqs[trial % kReqs.size()];
    ProjectModel raised = p;
    const auto old = *p.evaluations.Get("user3", target, "risk");
    raised.evaluations.Set("user3", target, "risk", std::min(10.0, old + 2.0));
    EXPECT_LE(Rank(raised).priority.at(target), base.priority.at(target));

    // Dimension utility bounded by the contributing ratings.
    for (const auto& r : kReqs) {
      double lo = 10, hi = 0;
      for (const auto& s : p.stakeholders) {
        const double v = *p.evaluations.Get(s.id, r, "relevance");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double u = base.per_dimension.at({r, "relevance"});
      EXPECT_GE(u, lo - 1e-12);
      EXPECT_LE(u, hi + 1e-12);
    }

    // Priority is a permutation consistent with utilities.
    std::vector<int> prios;
    for (const auto& [id, pr] : base.priority) prios.push_back(pr);
    std::sort(prios.begin(), prios.end());
    EXPECT_EQ(prios, (std::vector<int>{1, 2, 3, 4, 5}));
  }
}

}  // namespace
}  // namespace reqplan
