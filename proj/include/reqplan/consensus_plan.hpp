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

#pragma once

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "reqplan/error.hpp"
#include "reqplan/model.hpp"

namespace reqplan {

enum class ChangeMetric {
  kIndicator,  // one change per requirement whose release moves
  kDistance,   // |preferred release - planned release|
};

enum class FairnessForm {
  kAllPairs,  // sum over all stakeholder pairs |chn_i - chn_j|
  kChain,     // sum over consecutive stakeholders |chn_i - chn_{i+1}|
};

enum class ConsensusObjective {
  kLexTotalThenFairness,  // minimize total changes, then the fairness term
  kFairnessOnly,          // the fairness term alone
  kProduct,               // fairness term times total changes
};

struct ConsensusConfig {
  ChangeMetric change_metric = ChangeMetric::kIndicator;
  FairnessForm fairness_form = FairnessForm::kAllPairs;
  ConsensusObjective objective = ConsensusObjective::kLexTotalThenFairness;

  bool operator==(const ConsensusConfig&) const = default;
};

// Dense release preferences: releases[s][r] is the release stakeholder s
// wants for requirement r, in 1..horizon.
struct AssignmentPreferences {
  std::vector<std::string> stakeholders;
  std::vector<std::string> requirements;
  std::vector<std::vector<int>> releases;
  int horizon = 1;
};

struct ConsensusResult {
  std::vector<int> releases;  // per requirement, same order as preferences
  std::map<std::string, int> plan;
  std::map<std::string, long long> change_counts;
  long long total_changes = 0;
  long long fairness = 0;
  double objective_value = 0.0;
};

namespace internal {

inline long long ChangeCost(int preferred, int planned, ChangeMetric metric) {
  if (metric == ChangeMetric::kIndicator) return preferred != planned ? 1 : 0;
  return std::llabs(static_cast<long long>(preferred) - planned);
}

inline std::vector<std::pair<int, int>> FairnessPairs(int stakeholders,
                                                      FairnessForm form) {
  std::vector<std::pair<int, int>> pairs;
  if (form == FairnessForm::kChain) {
    for (int i = 0; i + 1 < stakeholders; ++i) pairs.emplace_back(i, i + 1);
  } else {
    for (int i = 0; i < stakeholders; ++i)
      for (int j = i + 1; j < stakeholders; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

// Strictly greater than any reachable fairness term, so total * weight +
// fairness orders (total, fairness) lexicographically.
inline long long LexWeight(const AssignmentPreferences& prefs,
                           const ConsensusConfig& config) {
  const long long reqs = static_cast<long long>(prefs.requirements.size());
  const long long per_stakeholder =
      config.change_metric == ChangeMetric::kIndicator
          ? reqs
          : reqs * std::max(0, prefs.horizon - 1);
  const long long pairs = static_cast<long long>(
      FairnessPairs(static_cast<int>(prefs.stakeholders.size()),
                    config.fairness_form)
          .size());
  return pairs * per_stakeholder + 1;
}

inline long long Fairness(const std::vector<long long>& counts,
                          FairnessForm form) {
  long long f = 0;
  for (const auto& [a, b] : FairnessPairs(static_cast<int>(counts.size()), form))
    f += std::llabs(counts[a] - counts[b]);
  return f;
}

inline long long CombineObjective(long long total, long long fairness,
                                  ConsensusObjective objective,
                                  long long lex_weight) {
  switch (objective) {
    case ConsensusObjective::kLexTotalThenFairness:
      return total * lex_weight + fairness;
    case ConsensusObjective::kFairnessOnly:
      return fairness;
    case ConsensusObjective::kProduct:
      return fairness * total;
  }
  return 0;
}

inline void CheckPreferences(const AssignmentPreferences& prefs) {
  if (prefs.horizon < 1)
    throw Error(ErrorCode::kInvalidArgument, "horizon must be positive");
  if (prefs.releases.size() != prefs.stakeholders.size())
    throw Error(ErrorCode::kIncompletePreferences,
                "one preference row per stakeholder expected");
  for (const auto& row : prefs.releases) {
    if (row.size() != prefs.requirements.size())
      throw Error(ErrorCode::kIncompletePreferences,
                  "every stakeholder must state every requirement");
    for (int r : row)
      if (r < 1 || r > prefs.horizon)
        throw Error(ErrorCode::kInvalidArgument,
                    "preferred release outside horizon");
  }
}

inline ConsensusResult MakeResult(const AssignmentPreferences& prefs,
                                  std::vector<int> releases,
                                  const ConsensusConfig& config);

}  // namespace internal

inline std::vector<long long> ChangeCounts(const AssignmentPreferences& prefs,
                                           const std::vector<int>& plan,
                                           const ConsensusConfig& config = {}) {
  if (plan.size() != prefs.requirements.size())
    throw Error(ErrorCode::kIncompletePlan,
                "plan must assign every requirement");
  for (int r : plan)
    if (r < 1 || r > prefs.horizon)
      throw Error(ErrorCode::kIncompletePlan, "planned release outside horizon");
  std::vector<long long> counts(prefs.stakeholders.size(), 0);
  for (std::size_t s = 0; s < prefs.stakeholders.size(); ++s)
    for (std::size_t r = 0; r < plan.size(); ++r)
      counts[s] +=
          internal::ChangeCost(prefs.releases[s][r], plan[r], config.change_metric);
  return counts;
}

inline double EvaluateObjective(const AssignmentPreferences& prefs,
                                const std::vector<int>& plan,
                                const ConsensusConfig& config = {}) {
  const auto counts = ChangeCounts(prefs, plan, config);
  long long total = 0;
  for (long long c : counts) total += c;
  return static_cast<double>(internal::CombineObjective(
      total, internal::Fairness(counts, config.fairness_form), config.objective,
      internal::LexWeight(prefs, config)));
}

// Exact consensus plan by depth-first branch and bound over requirements in
// order, trying releases in ascending order. A subtree is cut when its lower
// bound cannot beat the incumbent strictly, so the first optimum found (the
// lexicographically smallest release vector) is kept.
//
// Bounds: the remaining total is at least the sum of per-requirement minimum
// costs; for each fairness pair the final count difference is confined to an
// interval built from per-requirement min/max contributions.
inline ConsensusResult PlanConsensus(const AssignmentPreferences& prefs,
                                     const ConsensusConfig& config = {}) {
  internal::CheckPreferences(prefs);
  const int m = static_cast<int>(prefs.stakeholders.size());
  const int reqs = static_cast<int>(prefs.requirements.size());
  const int n = prefs.horizon;
  if (m == 0 || reqs == 0)
    throw Error(ErrorCode::kInvalidArgument,
                "need at least one stakeholder and one requirement");

  // cost[r][v - 1][s]
  std::vector<std::vector<std::vector<long long>>> cost(
      reqs, std::vector<std::vector<long long>>(n, std::vector<long long>(m)));
  for (int r = 0; r < reqs; ++r)
    for (int v = 1; v <= n; ++v)
      for (int s = 0; s < m; ++s)
        cost[r][v - 1][s] =
            internal::ChangeCost(prefs.releases[s][r], v, config.change_metric);

  std::vector<long long> min_total_suffix(reqs + 1, 0);
  for (int r = reqs - 1; r >= 0; --r) {
    long long best = std::numeric_limits<long long>::max();
    for (int v = 0; v < n; ++v) {
      long long sum = 0;
      for (int s = 0; s < m; ++s) sum += cost[r][v][s];
      best = std::min(best, sum);
    }
    min_total_suffix[r] = min_total_suffix[r + 1] + best;
  }

  const auto pairs = internal::FairnessPairs(m, config.fairness_form);
  const int p_count = static_cast<int>(pairs.size());
  std::vector<std::vector<long long>> lo_suffix(
      p_count, std::vector<long long>(reqs + 1, 0));
  std::vector<std::vector<long long>> hi_suffix = lo_suffix;
  for (int p = 0; p < p_count; ++p) {
    const auto [a, b] = pairs[p];
    for (int r = reqs - 1; r >= 0; --r) {
      long long lo = std::numeric_limits<long long>::max();
      long long hi = std::numeric_limits<long long>::min();
      for (int v = 0; v < n; ++v) {
        const long long d = cost[r][v][a] - cost[r][v][b];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      lo_suffix[p][r] = lo_suffix[p][r + 1] + lo;
      hi_suffix[p][r] = hi_suffix[p][r + 1] + hi;
    }
  }

  const long long lex_weight = internal::LexWeight(prefs, config);
  std::vector<long long> counts(m, 0);
  std::vector<int> current(reqs, 1);
  std::vector<int> best_plan;
  long long best_value = std::numeric_limits<long long>::max();

  auto lower_bound = [&](int depth) {
    long long total = min_total_suffix[depth];
    for (long long c : counts) total += c;
    long long fairness = 0;
    for (int p = 0; p < p_count; ++p) {
      const long long d = counts[pairs[p].first] - counts[pairs[p].second];
      const long long lo = d + lo_suffix[p][depth];
      const long long hi = d + hi_suffix[p][depth];
      if (lo > 0) fairness += lo;
      else if (hi < 0) fairness += -hi;
    }
    return internal::CombineObjective(total, fairness, config.objective,
                                      lex_weight);
  };

  auto search = [&](auto&& self, int depth) -> void {
    if (!best_plan.empty() && lower_bound(depth) >= best_value) return;
    if (depth == reqs) {
      // At a leaf the bound is exact.
      best_value = lower_bound(depth);
      best_plan = current;
      return;
    }
    for (int v = 1; v <= n; ++v) {
      current[depth] = v;
      for (int s = 0; s < m; ++s) counts[s] += cost[depth][v - 1][s];
      self(self, depth + 1);
      for (int s = 0; s < m; ++s) counts[s] -= cost[depth][v - 1][s];
    }
  };
  search(search, 0);

  return internal::MakeResult(prefs, std::move(best_plan), config);
}

// Exhaustive reference over all horizon^|requirements| plans, keeping the
// lexicographically smallest optimum. Limited to 100000 plans.
inline ConsensusResult ConsensusOracle(const AssignmentPreferences& prefs,
                                       const ConsensusConfig& config = {}) {
  internal::CheckPreferences(prefs);
  const int reqs = static_cast<int>(prefs.requirements.size());
  const int n = prefs.horizon;
  if (prefs.stakeholders.empty() || reqs == 0)
    throw Error(ErrorCode::kInvalidArgument,
                "need at least one stakeholder and one requirement");
  double space = 1.0;
  for (int r = 0; r < reqs; ++r) space *= n;
  if (space > 100000.0)
    throw Error(ErrorCode::kTooLarge, "oracle limited to 100000 plans");

  std::vector<int> plan(reqs, 1);
  std::vector<int> best;
  double best_value = 0.0;
  while (true) {
    const double value = EvaluateObjective(prefs, plan, config);
    if (best.empty() || value < best_value) {
      best = plan;
      best_value = value;
    }
    int pos = reqs - 1;
    while (pos >= 0 && plan[pos] == n) plan[pos--] = 1;
    if (pos < 0) break;
    ++plan[pos];
  }
  return internal::MakeResult(prefs, std::move(best), config);
}

namespace internal {

inline ConsensusResult MakeResult(const AssignmentPreferences& prefs,
                                  std::vector<int> releases,
                                  const ConsensusConfig& config) {
  ConsensusResult result;
  const auto counts = ChangeCounts(prefs, releases, config);
  for (std::size_t r = 0; r < releases.size(); ++r)
    result.plan[prefs.requirements[r]] = releases[r];
  for (std::size_t s = 0; s < counts.size(); ++s) {
    result.change_counts[prefs.stakeholders[s]] = counts[s];
    result.total_changes += counts[s];
  }
  result.fairness = Fairness(counts, config.fairness_form);
  result.objective_value = EvaluateObjective(prefs, releases, config);
  result.releases = std::move(releases);
  return result;
}

}  // namespace internal

// Collects the dense preference matrix from a project. Stakeholders that
// stated any release assignment take part and must cover every requirement.
inline AssignmentPreferences MakeAssignmentPreferences(
    const ProjectModel& project) {
  AssignmentPreferences prefs;
  prefs.horizon = project.horizon.release_count;
  for (const auto& r : project.requirements) prefs.requirements.push_back(r.id);
  for (const auto& s : project.stakeholders) {
    auto it = project.preferences.assignments.find(s.id);
    if (it == project.preferences.assignments.end()) continue;
    std::vector<int> row;
    for (const auto& r : project.requirements) {
      auto rel = it->second.find(r.id);
      if (rel == it->second.end())
        throw Error(ErrorCode::kIncompletePreferences,
                    s.id + " has no release preference for " + r.id);
      row.push_back(rel->second);
    }
    prefs.stakeholders.push_back(s.id);
    prefs.releases.push_back(std::move(row));
  }
  if (prefs.stakeholders.empty())
    throw Error(ErrorCode::kIncompletePreferences,
                "project has no release assignment preferences");
  return prefs;
}

}  // namespace reqplan
