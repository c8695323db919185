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
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "reqplan/error.hpp"
#include "reqplan/model.hpp"
#include "reqplan/utility_rank.hpp"

namespace reqplan {

// Utilities closer than this are treated as equal when breaking ties.
inline constexpr double kUtilityTolerance = 1e-9;

struct MvpItem {
  std::string requirement_id;
  double utility = 0.0;
  int time = 0;
};

struct MvpProblem {
  std::vector<MvpItem> items;
  int maxtime = 0;
};

struct MvpSolution {
  std::vector<std::string> selected;  // ascending id order
  double total_utility = 0.0;
  int total_time = 0;
};

namespace internal {

inline void CheckMvpProblem(const MvpProblem& problem) {
  if (problem.maxtime < 0)
    throw Error(ErrorCode::kInvalidArgument, "maxtime must be non-negative");
  std::set<std::string> ids;
  for (const auto& item : problem.items) {
    if (!ids.insert(item.requirement_id).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate item " + item.requirement_id);
    if (item.time < 0)
      throw Error(ErrorCode::kInvalidArgument,
                  "negative time for " + item.requirement_id);
    if (!std::isfinite(item.utility) || item.utility < 0.0)
      throw Error(ErrorCode::kInvalidArgument,
                  "utility must be finite and non-negative for " +
                      item.requirement_id);
  }
}

inline std::vector<MvpItem> SortedById(const MvpProblem& problem) {
  std::vector<MvpItem> items = problem.items;
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.requirement_id < b.requirement_id;
  });
  return items;
}

}  // namespace internal

// Exact 0/1 selection maximizing total utility within the time budget.
// Among optimal selections the one with the smallest total time wins, then
// the lexicographically smallest sorted id list.
//
// best[j][b] holds the best utility reachable from items j.. with budget b;
// the selection is then rebuilt greedily in id order against that table,
// which yields the lexicographic tie-break directly.
inline MvpSolution SelectMvp(const MvpProblem& problem) {
  internal::CheckMvpProblem(problem);
  const std::vector<MvpItem> items = internal::SortedById(problem);
  const int n = static_cast<int>(items.size());
  long long time_sum = 0;
  for (const auto& item : items) time_sum += item.time;
  const int budget =
      static_cast<int>(std::min<long long>(problem.maxtime, time_sum));

  const int width = budget + 1;
  std::vector<double> best(static_cast<std::size_t>(n + 1) * width, 0.0);
  auto at = [&](int j, int b) -> double& {
    return best[static_cast<std::size_t>(j) * width + b];
  };
  for (int j = n - 1; j >= 0; --j) {
    for (int b = 0; b <= budget; ++b) {
      double value = at(j + 1, b);
      if (items[j].time <= b)
        value = std::max(value, items[j].utility + at(j + 1, b - items[j].time));
      at(j, b) = value;
    }
  }

  const double optimum = at(0, budget);
  const double target = optimum - kUtilityTolerance;
  int min_time = budget;
  for (int b = 0; b <= budget; ++b) {
    if (at(0, b) >= target) {
      min_time = b;
      break;
    }
  }

  MvpSolution solution;
  double gained = 0.0;
  int remaining = min_time;
  int pos = 0;
  while (gained < target) {
    int pick = -1;
    for (int q = pos; q < n; ++q) {
      if (items[q].time > remaining) continue;
      if (gained + items[q].utility + at(q + 1, remaining - items[q].time) >=
          target) {
        pick = q;
        break;
      }
    }
    if (pick < 0) break;  // unreachable unless rounding drifts past target
    solution.selected.push_back(items[pick].requirement_id);
    gained += items[pick].utility;
    remaining -= items[pick].time;
    solution.total_time += items[pick].time;
    pos = pick + 1;
  }
  solution.total_utility = gained;
  return solution;
}

// Brute-force reference: enumerates all 2^n selections. Limited to 20 items.
inline MvpSolution MvpOracle(const MvpProblem& problem) {
  internal::CheckMvpProblem(problem);
  if (problem.items.size() > 20)
    throw Error(ErrorCode::kTooLarge, "oracle limited to 20 items");
  const std::vector<MvpItem> items = internal::SortedById(problem);
  const std::size_t n = items.size();

  MvpSolution best;
  bool have = false;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    MvpSolution candidate;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1ul) {
        candidate.selected.push_back(items[i].requirement_id);
        candidate.total_utility += items[i].utility;
        candidate.total_time += items[i].time;
      }
    }
    if (candidate.total_time > problem.maxtime) continue;
    bool better = !have;
    if (have) {
      const double diff = candidate.total_utility - best.total_utility;
      if (diff > kUtilityTolerance) {
        better = true;
      } else if (diff >= -kUtilityTolerance) {
        better = candidate.total_time < best.total_time ||
                 (candidate.total_time == best.total_time &&
                  candidate.selected < best.selected);
      }
    }
    if (better) {
      best = std::move(candidate);
      have = true;
    }
  }
  return best;
}

// Builds the selection problem from a project: overall utilities under the
// given config and each requirement's time estimate.
inline MvpProblem MakeMvpProblem(const ProjectModel& project, int maxtime,
                                 const UtilityConfig& config = {}) {
  MvpProblem problem;
  problem.maxtime = maxtime;
  const UtilityReport report = Rank(project, config);
  for (const auto& r : project.requirements)
    problem.items.push_back({r.id, report.overall.at(r.id), r.time_estimate});
  return problem;
}

}  // namespace reqplan
