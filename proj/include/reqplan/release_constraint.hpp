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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "reqplan/error.hpp"

namespace reqplan {

// Constraint catalog for release planning. Each kind constrains the release
// variable of one or two requirements, or the set of requirements that land
// in a given release.
enum class ConstraintKind {
  kAssign,       // rel(req) = value
  kBefore,       // rel(req) < rel(other)
  kNotBefore,    // rel(req) <= rel(other)
  kDifferent,    // rel(req) != rel(other)
  kAtMost,       // rel(req) <= value
  kAtLeast,      // rel(req) >= value
  kExcludesOne,  // rel(req) = unplanned or rel(other) = unplanned
  kTimely,       // |rel(req) - rel(other)| <= value
  kCapacity,     // |{r : rel(r) = release}| <= value
  kEffort,       // sum of durations in release <= value
};

enum class Hardness { kHard, kSoft };

struct ReleaseConstraint {
  ConstraintKind kind = ConstraintKind::kAssign;
  std::string req;
  std::string other;
  int value = 0;
  int release = 0;
  Hardness hardness = Hardness::kHard;
  std::optional<std::string> owner;

  bool operator==(const ReleaseConstraint&) const = default;
};

inline bool IsUnary(ConstraintKind kind) {
  return kind == ConstraintKind::kAssign || kind == ConstraintKind::kAtMost ||
         kind == ConstraintKind::kAtLeast;
}

inline bool IsBinary(ConstraintKind kind) {
  return kind == ConstraintKind::kBefore ||
         kind == ConstraintKind::kNotBefore ||
         kind == ConstraintKind::kDifferent ||
         kind == ConstraintKind::kExcludesOne ||
         kind == ConstraintKind::kTimely;
}

inline bool IsReleaseWide(ConstraintKind kind) {
  return kind == ConstraintKind::kCapacity || kind == ConstraintKind::kEffort;
}

inline std::string_view KindName(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kAssign: return "ASSIGN";
    case ConstraintKind::kBefore: return "BEFORE";
    case ConstraintKind::kNotBefore: return "NOT_BEFORE";
    case ConstraintKind::kDifferent: return "DIFFERENT";
    case ConstraintKind::kAtMost: return "AT_MOST";
    case ConstraintKind::kAtLeast: return "AT_LEAST";
    case ConstraintKind::kExcludesOne: return "EXCLUDES_ONE";
    case ConstraintKind::kTimely: return "TIMELY";
    case ConstraintKind::kCapacity: return "CAPACITY";
    case ConstraintKind::kEffort: return "EFFORT";
  }
  return "?";
}

inline std::optional<ConstraintKind> ParseKind(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(ConstraintKind::kEffort); ++k) {
    const auto kind = static_cast<ConstraintKind>(k);
    if (KindName(kind) == name) return kind;
  }
  return std::nullopt;
}

// Convenience constructors. All produce hard constraints without an owner.
namespace constraints {

inline ReleaseConstraint Make(ConstraintKind kind, std::string req = {},
                              std::string other = {}, int value = 0,
                              int release = 0) {
  ReleaseConstraint c;
  c.kind = kind;
  c.req = std::move(req);
  c.other = std::move(other);
  c.value = value;
  c.release = release;
  return c;
}

inline ReleaseConstraint Assign(std::string req, int release) {
  return Make(ConstraintKind::kAssign, std::move(req), {}, release);
}
inline ReleaseConstraint Before(std::string req, std::string other) {
  return Make(ConstraintKind::kBefore, std::move(req), std::move(other));
}
inline ReleaseConstraint NotBefore(std::string req, std::string other) {
  return Make(ConstraintKind::kNotBefore, std::move(req), std::move(other));
}
inline ReleaseConstraint Different(std::string req, std::string other) {
  return Make(ConstraintKind::kDifferent, std::move(req), std::move(other));
}
inline ReleaseConstraint AtMost(std::string req, int release) {
  return Make(ConstraintKind::kAtMost, std::move(req), {}, release);
}
inline ReleaseConstraint AtLeast(std::string req, int release) {
  return Make(ConstraintKind::kAtLeast, std::move(req), {}, release);
}
inline ReleaseConstraint ExcludesOne(std::string req, std::string other) {
  return Make(ConstraintKind::kExcludesOne, std::move(req), std::move(other));
}
inline ReleaseConstraint Timely(std::string req, std::string other, int k) {
  return Make(ConstraintKind::kTimely, std::move(req), std::move(other), k);
}
inline ReleaseConstraint Capacity(int release, int max_count) {
  return Make(ConstraintKind::kCapacity, {}, {}, max_count, release);
}
inline ReleaseConstraint Effort(int release, int max_effort) {
  return Make(ConstraintKind::kEffort, {}, {}, max_effort, release);
}

inline ReleaseConstraint Soft(ReleaseConstraint c,
                              std::optional<std::string> owner = {}) {
  c.hardness = Hardness::kSoft;
  c.owner = std::move(owner);
  return c;
}

}  // namespace constraints

// Builds a stakeholder preference from the restricted preference grammar
// (=, <, >, <=, >= against a constant). Strict bounds are stored as the
// equivalent non-strict bound on the integer release scale.
inline ReleaseConstraint MakePreference(std::string owner, std::string req,
                                        std::string_view op, int value,
                                        Hardness hardness = Hardness::kSoft) {
  ReleaseConstraint c;
  c.req = std::move(req);
  c.owner = std::move(owner);
  c.hardness = hardness;
  if (op == "=" || op == "==") {
    c.kind = ConstraintKind::kAssign;
    c.value = value;
  } else if (op == "<=" || op == "≤") {
    c.kind = ConstraintKind::kAtMost;
    c.value = value;
  } else if (op == ">=" || op == "≥") {
    c.kind = ConstraintKind::kAtLeast;
    c.value = value;
  } else if (op == "<") {
    c.kind = ConstraintKind::kAtMost;
    c.value = value - 1;
  } else if (op == ">") {
    c.kind = ConstraintKind::kAtLeast;
    c.value = value + 1;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported preference operator '" + std::string(op) + "'");
  }
  return c;
}

// Human-readable rendering, e.g. "req3 <= 2" or "user1: req3 <= 2".
inline std::string ToString(const ReleaseConstraint& c, bool with_owner = true) {
  std::string body;
  const std::string v = std::to_string(c.value);
  switch (c.kind) {
    case ConstraintKind::kAssign: body = c.req + " = " + v; break;
    case ConstraintKind::kBefore: body = c.req + " < " + c.other; break;
    case ConstraintKind::kNotBefore: body = c.req + " <= " + c.other; break;
    case ConstraintKind::kDifferent: body = c.req + " != " + c.other; break;
    case ConstraintKind::kAtMost: body = c.req + " <= " + v; break;
    case ConstraintKind::kAtLeast: body = c.req + " >= " + v; break;
    case ConstraintKind::kExcludesOne:
      body = c.req + " or " + c.other + " unplanned";
      break;
    case ConstraintKind::kTimely:
      body = "|" + c.req + " - " + c.other + "| <= " + v;
      break;
    case ConstraintKind::kCapacity:
      body = "count(release " + std::to_string(c.release) + ") <= " + v;
      break;
    case ConstraintKind::kEffort:
      body = "effort(release " + std::to_string(c.release) + ") <= " + v;
      break;
  }
  if (with_owner && c.owner) return *c.owner + ": " + body;
  return body;
}

using Assignment = std::map<std::string, int>;

// Evaluates a constraint against a complete assignment. `unplanned` is the
// sentinel release value meaning "not in the release plan".
inline bool IsSatisfied(const ReleaseConstraint& c, const Assignment& assignment,
                        const std::map<std::string, int>& durations,
                        int unplanned) {
  auto rel = [&](const std::string& id) { return assignment.at(id); };
  switch (c.kind) {
    case ConstraintKind::kAssign: return rel(c.req) == c.value;
    case ConstraintKind::kBefore: return rel(c.req) < rel(c.other);
    case ConstraintKind::kNotBefore: return rel(c.req) <= rel(c.other);
    case ConstraintKind::kDifferent: return rel(c.req) != rel(c.other);
    case ConstraintKind::kAtMost: return rel(c.req) <= c.value;
    case ConstraintKind::kAtLeast: return rel(c.req) >= c.value;
    case ConstraintKind::kExcludesOne:
      return rel(c.req) == unplanned || rel(c.other) == unplanned;
    case ConstraintKind::kTimely: {
      const int diff = rel(c.req) - rel(c.other);
      return (diff < 0 ? -diff : diff) <= c.value;
    }
    case ConstraintKind::kCapacity: {
      int count = 0;
      for (const auto& [id, r] : assignment) count += (r == c.release);
      return count <= c.value;
    }
    case ConstraintKind::kEffort: {
      long long total = 0;
      for (const auto& [id, r] : assignment) {
        if (r != c.release) continue;
        auto it = durations.find(id);
        if (it != durations.end()) total += it->second;
      }
      return total <= c.value;
    }
  }
  return false;
}

}  // namespace reqplan
