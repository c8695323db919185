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
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "reqplan/release_constraint.hpp"

namespace reqplan {

inline constexpr double kMinRating = 0.0;
inline constexpr double kMaxRating = 10.0;

struct Requirement {
  std::string id;
  std::string title;
  std::string description;
  std::vector<std::string> keywords;
  int time_estimate = 0;

  bool operator==(const Requirement&) const = default;
};

struct Stakeholder {
  std::string id;
  std::string name;
  std::vector<std::string> expertise_keywords;

  bool operator==(const Stakeholder&) const = default;
};

// Polarity is documentation only: every dimension is read as "higher rating
// contributes more utility".
struct InterestDimension {
  std::string name;
  double weight = 1.0;
  std::string polarity_note;

  bool operator==(const InterestDimension&) const = default;
};

struct EvaluationKey {
  std::string stakeholder;
  std::string requirement;
  std::string dimension;

  auto operator<=>(const EvaluationKey&) const = default;
};

// Sparse stakeholder x requirement x dimension ratings. Absent entries are
// unknown, not zero.
class EvaluationMatrix {
 public:
  using Map = std::map<EvaluationKey, double>;

  void Set(const std::string& stakeholder, const std::string& requirement,
           const std::string& dimension, double rating) {
    entries_[{stakeholder, requirement, dimension}] = rating;
  }

  bool Erase(const std::string& stakeholder, const std::string& requirement,
             const std::string& dimension) {
    return entries_.erase({stakeholder, requirement, dimension}) > 0;
  }

  std::optional<double> Get(const std::string& stakeholder,
                            const std::string& requirement,
                            const std::string& dimension) const {
    auto it = entries_.find({stakeholder, requirement, dimension});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  // Drops every entry of one dimension.
  void ClearDimension(const std::string& dimension) {
    std::erase_if(entries_,
                  [&](const auto& kv) { return kv.first.dimension == dimension; });
  }

  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const EvaluationMatrix&) const = default;

 private:
  Map entries_;
};

struct ReleaseHorizon {
  int release_count = 1;

  // Extra release value used for "not in the release plan".
  int unplanned() const { return release_count + 1; }

  bool operator==(const ReleaseHorizon&) const = default;
};

// Release preferences of stakeholders: either a dense release assignment per
// (stakeholder, requirement), or typed release constraints carrying their
// owner.
struct PreferenceSet {
  std::map<std::string, std::map<std::string, int>> assignments;
  std::vector<ReleaseConstraint> constraints;

  bool operator==(const PreferenceSet&) const = default;
};

struct ProjectModel {
  std::vector<Requirement> requirements;
  std::vector<Stakeholder> stakeholders;
  std::vector<InterestDimension> dimensions;
  EvaluationMatrix evaluations;
  ReleaseHorizon horizon;
  std::vector<ReleaseConstraint> hard_constraints;
  PreferenceSet preferences;

  const Requirement* FindRequirement(const std::string& id) const {
    for (const auto& r : requirements)
      if (r.id == id) return &r;
    return nullptr;
  }
  const Stakeholder* FindStakeholder(const std::string& id) const {
    for (const auto& s : stakeholders)
      if (s.id == id) return &s;
    return nullptr;
  }
  const InterestDimension* FindDimension(const std::string& name) const {
    for (const auto& d : dimensions)
      if (d.name == name) return &d;
    return nullptr;
  }

  bool operator==(const ProjectModel&) const = default;
};

struct ValidationIssue {
  std::string entity;
  std::string rule;

  std::string ToString() const { return entity + ": " + rule; }
  bool operator==(const ValidationIssue&) const = default;
};

namespace internal {

inline bool IsNormalizedToken(const std::string& token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](unsigned char ch) {
    return std::isupper(ch) || std::isspace(ch);
  });
}

inline void CheckKeywords(const std::vector<std::string>& keywords,
                          const std::string& entity,
                          std::vector<ValidationIssue>& issues) {
  std::set<std::string> seen;
  for (const auto& k : keywords) {
    if (!IsNormalizedToken(k))
      issues.push_back({entity, "keyword '" + k + "' not normalized"});
    if (!seen.insert(k).second)
      issues.push_back({entity, "duplicate keyword '" + k + "'"});
  }
}

inline void CheckConstraint(const ProjectModel& project,
                            const ReleaseConstraint& c,
                            const std::string& entity,
                            std::vector<ValidationIssue>& issues) {
  const int n = project.horizon.release_count;
  if (c.owner && project.FindStakeholder(*c.owner) == nullptr)
    issues.push_back({entity, "unknown stakeholder id"});
  if (!IsReleaseWide(c.kind) && project.FindRequirement(c.req) == nullptr)
    issues.push_back({entity, "unknown requirement id"});
  if (IsBinary(c.kind) && project.FindRequirement(c.other) == nullptr)
    issues.push_back({entity, "unknown requirement id"});
  switch (c.kind) {
    case ConstraintKind::kAssign:
    case ConstraintKind::kAtMost:
    case ConstraintKind::kAtLeast:
      if (c.value < 1 || c.value > n)
        issues.push_back({entity, "release outside horizon"});
      break;
    case ConstraintKind::kTimely:
      if (c.value < 0) issues.push_back({entity, "negative slack"});
      break;
    case ConstraintKind::kCapacity:
    case ConstraintKind::kEffort:
      if (c.release < 1 || c.release > n)
        issues.push_back({entity, "release outside horizon"});
      if (c.value < 0) issues.push_back({entity, "negative bound"});
      break;
    default:
      break;
  }
}

}  // namespace internal

// Checks every structural invariant of the project. Issues are returned as
// data in a deterministic order; an empty list means the model is valid.
inline std::vector<ValidationIssue> ValidateProject(const ProjectModel& project) {
  std::vector<ValidationIssue> issues;

  std::set<std::string> ids;
  for (const auto& r : project.requirements) {
    const std::string entity = "requirement '" + r.id + "'";
    if (r.id.empty()) issues.push_back({entity, "empty id"});
    if (!ids.insert(r.id).second) issues.push_back({entity, "duplicate id"});
    if (r.time_estimate < 0)
      issues.push_back({entity, "negative time estimate"});
    internal::CheckKeywords(r.keywords, entity, issues);
  }

  ids.clear();
  for (const auto& s : project.stakeholders) {
    const std::string entity = "stakeholder '" + s.id + "'";
    if (s.id.empty()) issues.push_back({entity, "empty id"});
    if (!ids.insert(s.id).second) issues.push_back({entity, "duplicate id"});
    internal::CheckKeywords(s.expertise_keywords, entity, issues);
  }

  ids.clear();
  for (const auto& d : project.dimensions) {
    const std::string entity = "dimension '" + d.name + "'";
    if (d.name.empty()) issues.push_back({entity, "empty name"});
    if (!ids.insert(d.name).second)
      issues.push_back({entity, "duplicate name"});
    if (!(d.weight >= 0.0 && d.weight <= 1.0))
      issues.push_back({entity, "weight out of range"});
  }

  for (const auto& [key, rating] : project.evaluations.entries()) {
    const std::string entity = "evaluation(" + key.stakeholder + ", " +
                               key.requirement + ", " + key.dimension + ")";
    if (project.FindStakeholder(key.stakeholder) == nullptr)
      issues.push_back({entity, "unknown stakeholder id"});
    if (project.FindRequirement(key.requirement) == nullptr)
      issues.push_back({entity, "unknown requirement id"});
    if (project.FindDimension(key.dimension) == nullptr)
      issues.push_back({entity, "unknown dimension"});
    if (!(rating >= kMinRating && rating <= kMaxRating))
      issues.push_back({entity, "rating out of range"});
  }

  if (project.horizon.release_count < 1)
    issues.push_back({"release_horizon", "release count must be positive"});

  for (std::size_t i = 0; i < project.hard_constraints.size(); ++i) {
    const auto& c = project.hard_constraints[i];
    const std::string entity = "hard constraint #" + std::to_string(i + 1) +
                               " (" + ToString(c) + ")";
    if (c.hardness != Hardness::kHard)
      issues.push_back({entity, "hard constraint marked soft"});
    internal::CheckConstraint(project, c, entity, issues);
  }

  const int n = project.horizon.release_count;
  for (const auto& [stakeholder, row] : project.preferences.assignments) {
    for (const auto& [req, release] : row) {
      const std::string entity =
          "preference(" + stakeholder + ", " + req + ")";
      if (project.FindStakeholder(stakeholder) == nullptr)
        issues.push_back({entity, "unknown stakeholder id"});
      if (project.FindRequirement(req) == nullptr)
        issues.push_back({entity, "unknown requirement id"});
      if (release < 1 || release > n)
        issues.push_back({entity, "release outside horizon"});
    }
  }
  for (std::size_t i = 0; i < project.preferences.constraints.size(); ++i) {
    const auto& c = project.preferences.constraints[i];
    const std::string entity = "preference #" + std::to_string(i + 1) + " (" +
                               ToString(c) + ")";
    internal::CheckConstraint(project, c, entity, issues);
  }

  return issues;
}

}  // namespace reqplan
