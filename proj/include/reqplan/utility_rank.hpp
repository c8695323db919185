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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "reqplan/error.hpp"
#include "reqplan/model.hpp"

namespace reqplan {

enum class NormalizationMode {
  kDivideByDims,  // sum_d utility(req, d) * weight(d) / |dims|
  kWeightedSum,   // same sum without the division
};

enum class MissingValuePolicy {
  kSkip,   // average over the stakeholders who rated
  kError,  // every stakeholder must have rated
};

struct UtilityConfig {
  NormalizationMode normalization = NormalizationMode::kDivideByDims;
  MissingValuePolicy missing = MissingValuePolicy::kSkip;

  bool operator==(const UtilityConfig&) const = default;
};

struct UtilityReport {
  std::map<std::pair<std::string, std::string>, double> per_dimension;
  std::map<std::string, double> overall;
  std::map<std::string, int> priority;
  // Requirement ids from priority 1 downwards.
  std::vector<std::string> order;
};

// Mean rating of one requirement on one interest dimension across the
// stakeholder group.
inline double DimensionUtility(const ProjectModel& project,
                               const std::string& requirement,
                               const std::string& dimension,
                               const UtilityConfig& config = {}) {
  if (project.FindRequirement(requirement) == nullptr)
    throw Error(ErrorCode::kUnknownRequirement, requirement);
  if (project.FindDimension(dimension) == nullptr)
    throw Error(ErrorCode::kUnknownDimension, dimension);

  double sum = 0.0;
  int count = 0;
  for (const auto& s : project.stakeholders) {
    const auto rating = project.evaluations.Get(s.id, requirement, dimension);
    if (!rating) {
      if (config.missing == MissingValuePolicy::kError)
        throw Error(ErrorCode::kMissingEvaluations,
                    s.id + " has not rated (" + requirement + ", " +
                        dimension + ")");
      continue;
    }
    sum += *rating;
    ++count;
  }
  if (count == 0)
    throw Error(ErrorCode::kNoRatings,
                "nobody rated (" + requirement + ", " + dimension + ")");
  return sum / count;
}

inline double OverallUtility(const ProjectModel& project,
                             const std::string& requirement,
                             const UtilityConfig& config = {}) {
  double total = 0.0;
  for (const auto& d : project.dimensions)
    total += DimensionUtility(project, requirement, d.name, config) * d.weight;
  if (config.normalization == NormalizationMode::kDivideByDims &&
      !project.dimensions.empty())
    total /= static_cast<double>(project.dimensions.size());
  return total;
}

// Ranks requirements by descending overall utility; equal utilities are
// ordered by ascending requirement id.
inline UtilityReport Rank(const ProjectModel& project,
                          const UtilityConfig& config = {}) {
  UtilityReport report;
  for (const auto& r : project.requirements) {
    double total = 0.0;
    for (const auto& d : project.dimensions) {
      const double u = DimensionUtility(project, r.id, d.name, config);
      report.per_dimension[{r.id, d.name}] = u;
      total += u * d.weight;
    }
    if (config.normalization == NormalizationMode::kDivideByDims &&
        !project.dimensions.empty())
      total /= static_cast<double>(project.dimensions.size());
    report.overall[r.id] = total;
    report.order.push_back(r.id);
  }
  std::sort(report.order.begin(), report.order.end(),
            [&](const std::string& a, const std::string& b) {
              const double ua = report.overall.at(a);
              const double ub = report.overall.at(b);
              if (ua != ub) return ua > ub;
              return a < b;
            });
  for (std::size_t i = 0; i < report.order.size(); ++i)
    report.priority[report.order[i]] = static_cast<int>(i) + 1;
  return report;
}

}  // namespace reqplan
