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
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "reqplan/constraint_solver.hpp"
#include "reqplan/error.hpp"
#include "reqplan/release_constraint.hpp"

namespace reqplan {

// Positions into the ordered soft constraint list, ascending.
using SoftSubset = std::vector<std::size_t>;

// A minimal set of soft constraints that cannot hold together with the
// background.
struct ConflictSet {
  SoftSubset members;
  bool operator==(const ConflictSet&) const = default;
  auto operator<=>(const ConflictSet&) const = default;
};

// A minimal set of soft constraints whose removal restores consistency.
struct Diagnosis {
  SoftSubset members;
  bool operator==(const Diagnosis&) const = default;
};

// Answers "is background + these soft constraints satisfiable?" with a
// memo, since the divide-and-conquer searches revisit subsets.
class ConsistencyChecker {
 public:
  ConsistencyChecker(const ReleaseVars& variables,
                     const std::vector<ReleaseConstraint>& background,
                     const std::vector<ReleaseConstraint>& soft)
      : variables_(variables), background_(background), soft_(soft) {}

  bool Consistent(const SoftSubset& subset) {
    std::vector<bool> key(soft_.size(), false);
    for (std::size_t i : subset) key[i] = true;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<const ReleaseConstraint*> refs;
    for (const auto& c : background_) refs.push_back(&c);
    for (std::size_t i = 0; i < soft_.size(); ++i)
      if (key[i]) refs.push_back(&soft_[i]);
    ++solver_calls_;
    const bool ok = SolveConstraints(variables_, refs).has_value();
    memo_.emplace(std::move(key), ok);
    return ok;
  }

  std::size_t soft_size() const { return soft_.size(); }
  std::uint64_t solver_calls() const { return solver_calls_; }

 private:
  const ReleaseVars& variables_;
  const std::vector<ReleaseConstraint>& background_;
  const std::vector<ReleaseConstraint>& soft_;
  std::map<std::vector<bool>, bool> memo_;
  std::uint64_t solver_calls_ = 0;
};

namespace internal {

inline SoftSubset Union(const SoftSubset& a, const SoftSubset& b) {
  SoftSubset out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline SoftSubset Difference(const SoftSubset& a, const SoftSubset& b) {
  SoftSubset out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline bool Disjoint(const SoftSubset& a, const SoftSubset& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i;
    else ++j;
  }
  return true;
}

// Divide-and-conquer conflict extraction. `extra` are soft constraints
// currently treated as background; `candidates` is the range still being
// split. Earlier candidates are preferred as conflict members.
inline SoftSubset QuickXplain(ConsistencyChecker& checker, const SoftSubset& extra,
                              bool added, const SoftSubset& candidates) {
  if (added && !checker.Consistent(extra)) return {};
  if (candidates.size() == 1) return candidates;
  const auto half = candidates.begin() + candidates.size() / 2;
  const SoftSubset first(candidates.begin(), half);
  const SoftSubset second(half, candidates.end());
  const SoftSubset d2 = QuickXplain(checker, Union(extra, first), true, second);
  const SoftSubset d1 = QuickXplain(checker, Union(extra, d2), !d2.empty(), first);
  return Union(d1, d2);
}

// Divide-and-conquer diagnosis: `pending` is the soft set still assumed,
// `candidates` the range being split.
inline SoftSubset FastDiag(ConsistencyChecker& checker, bool removed,
                           const SoftSubset& candidates,
                           const SoftSubset& pending) {
  if (removed && checker.Consistent(pending)) return {};
  if (candidates.size() == 1) return candidates;
  const auto half = candidates.begin() + candidates.size() / 2;
  const SoftSubset first(candidates.begin(), half);
  const SoftSubset second(half, candidates.end());
  const SoftSubset d1 =
      FastDiag(checker, !first.empty(), second, Difference(pending, first));
  const SoftSubset d2 =
      FastDiag(checker, !d1.empty(), first, Difference(pending, d1));
  return Union(d1, d2);
}

inline SoftSubset Everything(std::size_t n) {
  SoftSubset all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return all;
}

// One conflict among `available`, or nullopt when they are consistent.
inline std::optional<SoftSubset> ConflictAmong(ConsistencyChecker& checker,
                                               const SoftSubset& available) {
  if (available.empty() || checker.Consistent(available)) return std::nullopt;
  return QuickXplain(checker, {}, false, available);
}

inline void RequireConsistentBackground(ConsistencyChecker& checker) {
  if (!checker.Consistent({}))
    throw Error(ErrorCode::kInconsistentBackground,
                "background constraints have no solution");
}

}  // namespace internal

// One minimal conflict, or nullopt when background + soft is satisfiable.
// Which conflict is returned depends on the order of `soft`.
inline std::optional<ConflictSet> MinConflict(
    const std::vector<ReleaseConstraint>& background,
    const std::vector<ReleaseConstraint>& soft, const ReleaseVars& variables) {
  ConsistencyChecker checker(variables, background, soft);
  internal::RequireConsistentBackground(checker);
  auto found = internal::ConflictAmong(checker, internal::Everything(soft.size()));
  if (!found) return std::nullopt;
  return ConflictSet{std::move(*found)};
}

struct ConflictEnumeration {
  std::vector<ConflictSet> conflicts;
  bool exhaustive = true;  // false when `limit` cut the search short
};

// Enumerates minimal conflicts with a breadth-first hitting-set tree: each
// node removes a set of soft constraints hitting the conflicts on its path
// and asks for a conflict among the rest. Every minimal conflict is reached
// on some path that avoids it, so the enumeration is complete when it runs
// to the end.
inline ConflictEnumeration EnumerateMinConflicts(
    const std::vector<ReleaseConstraint>& background,
    const std::vector<ReleaseConstraint>& soft, const ReleaseVars& variables,
    std::size_t limit) {
  if (limit == 0)
    throw Error(ErrorCode::kInvalidArgument, "limit must be positive");
  ConsistencyChecker checker(variables, background, soft);
  internal::RequireConsistentBackground(checker);
  const SoftSubset all = internal::Everything(soft.size());

  ConflictEnumeration out;
  std::set<SoftSubset> visited;
  std::vector<SoftSubset> closed;  // paths already restoring consistency
  std::deque<SoftSubset> queue;
  queue.push_back({});
  visited.insert({});

  while (!queue.empty()) {
    const SoftSubset path = queue.front();
    queue.pop_front();

    const SoftSubset* conflict = nullptr;
    for (const auto& known : out.conflicts) {
      if (internal::Disjoint(known.members, path)) {
        conflict = &known.members;
        break;
      }
    }
    if (conflict == nullptr) {
      auto fresh =
          internal::ConflictAmong(checker, internal::Difference(all, path));
      if (!fresh) {
        closed.push_back(path);
        continue;
      }
      if (out.conflicts.size() >= limit) {
        out.exhaustive = false;
        break;
      }
      out.conflicts.push_back({std::move(*fresh)});
      conflict = &out.conflicts.back().members;
    }

    const SoftSubset branch_on = *conflict;
    for (std::size_t c : branch_on) {
      SoftSubset next = internal::Union(path, {c});
      if (visited.count(next)) continue;
      const bool covered = std::any_of(
          closed.begin(), closed.end(), [&](const SoftSubset& d) {
            return std::includes(next.begin(), next.end(), d.begin(), d.end());
          });
      visited.insert(next);
      if (!covered) queue.push_back(std::move(next));
    }
  }
  return out;
}

inline std::vector<ConflictSet> AllMinConflicts(
    const std::vector<ReleaseConstraint>& background,
    const std::vector<ReleaseConstraint>& soft, const ReleaseVars& variables,
    std::size_t limit = 100) {
  return EnumerateMinConflicts(background, soft, variables, limit).conflicts;
}

// One minimal diagnosis, or nullopt when no soft constraint has to go.
inline std::optional<Diagnosis> MinDiagnosis(
    const std::vector<ReleaseConstraint>& background,
    const std::vector<ReleaseConstraint>& soft, const ReleaseVars& variables) {
  ConsistencyChecker checker(variables, background, soft);
  internal::RequireConsistentBackground(checker);
  const SoftSubset all = internal::Everything(soft.size());
  if (soft.empty() || checker.Consistent(all)) return std::nullopt;
  return Diagnosis{internal::FastDiag(checker, false, all, all)};
}

// Brute-force reference: enumerates every complete assignment and every
// subset of at most 12 soft constraints, returning the inclusion-minimal
// inconsistent subsets ordered by size, then by members.
inline std::vector<ConflictSet> ConflictOracle(
    const std::vector<ReleaseConstraint>& background,
    const std::vector<ReleaseConstraint>& soft, const ReleaseVars& variables) {
  constexpr std::size_t kMaxSoft = 12;
  constexpr double kMaxAssignments = 4e6;
  if (soft.size() > kMaxSoft)
    throw Error(ErrorCode::kTooLarge, "oracle limited to 12 soft constraints");
  double space = 1.0;
  for (const auto& v : variables.vars) space *= std::max<std::size_t>(1, v.domain.size());
  if (space > kMaxAssignments)
    throw Error(ErrorCode::kTooLarge, "oracle assignment space too large");

  const auto durations = variables.Durations();
  const std::size_t n = variables.vars.size();
  for (const auto& v : variables.vars)
    if (v.domain.empty())
      throw Error(ErrorCode::kInconsistentBackground,
                  "empty domain for " + v.requirement_id);

  // Soft masks satisfied by some background-consistent assignment.
  std::set<std::uint32_t> satisfiable;
  std::vector<std::size_t> pos(n, 0);
  Assignment a;
  bool background_ok = false;
  while (true) {
    for (std::size_t i = 0; i < n; ++i)
      a[variables.vars[i].requirement_id] = variables.vars[i].domain[pos[i]];
    bool ok = true;
    for (const auto& c : background)
      if (!IsSatisfied(c, a, durations, variables.unplanned)) {
        ok = false;
        break;
      }
    if (ok) {
      background_ok = true;
      std::uint32_t mask = 0;
      for (std::size_t s = 0; s < soft.size(); ++s)
        if (IsSatisfied(soft[s], a, durations, variables.unplanned))
          mask |= 1u << s;
      satisfiable.insert(mask);
    }
    std::size_t i = 0;
    while (i < n && ++pos[i] == variables.vars[i].domain.size()) pos[i++] = 0;
    if (i == n) break;
  }
  if (!background_ok)
    throw Error(ErrorCode::kInconsistentBackground,
                "background constraints have no solution");

  const std::uint32_t full = (1u << soft.size());
  std::vector<char> consistent(full, 0);
  for (std::uint32_t s = 0; s < full; ++s)
    for (std::uint32_t m : satisfiable)
      if ((s & m) == s) {
        consistent[s] = 1;
        break;
      }

  std::vector<ConflictSet> out;
  for (std::uint32_t s = 0; s < full; ++s) {
    if (consistent[s]) continue;
    bool minimal = true;
    for (std::size_t b = 0; b < soft.size() && minimal; ++b)
      if (((s >> b) & 1u) && !consistent[s & ~(1u << b)]) minimal = false;
    if (!minimal) continue;
    ConflictSet c;
    for (std::size_t b = 0; b < soft.size(); ++b)
      if ((s >> b) & 1u) c.members.push_back(b);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.members.size() != y.members.size())
      return x.members.size() < y.members.size();
    return x.members < y.members;
  });
  return out;
}

inline std::vector<ReleaseConstraint> Materialize(
    const SoftSubset& subset, const std::vector<ReleaseConstraint>& soft) {
  std::vector<ReleaseConstraint> out;
  for (std::size_t i : subset) out.push_back(soft.at(i));
  return out;
}

}  // namespace reqplan
