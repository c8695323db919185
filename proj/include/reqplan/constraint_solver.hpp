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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reqplan/error.hpp"
#include "reqplan/model.hpp"
#include "reqplan/release_constraint.hpp"

namespace reqplan {

struct ReleaseVar {
  std::string requirement_id;
  std::vector<int> domain;  // ascending, non-empty
  int duration = 0;         // effort counted by EFFORT constraints
};

// The variables of a release planning problem plus the release value that
// stands for "not planned".
struct ReleaseVars {
  std::vector<ReleaseVar> vars;
  int unplanned = 0;

  std::map<std::string, int> Durations() const {
    std::map<std::string, int> d;
    for (const auto& v : vars) d[v.requirement_id] = v.duration;
    return d;
  }
};

struct Csp {
  ReleaseVars variables;
  std::vector<ReleaseConstraint> hard;
  std::vector<ReleaseConstraint> soft;  // order matters for conflict search
};

struct SolveStats {
  std::uint64_t nodes = 0;
};

namespace internal {

inline bool BinaryHolds(const ReleaseConstraint& c, int a, int b, int unplanned) {
  switch (c.kind) {
    case ConstraintKind::kBefore: return a < b;
    case ConstraintKind::kNotBefore: return a <= b;
    case ConstraintKind::kDifferent: return a != b;
    case ConstraintKind::kExcludesOne: return a == unplanned || b == unplanned;
    case ConstraintKind::kTimely: return (a > b ? a - b : b - a) <= c.value;
    default: return true;
  }
}

inline bool UnaryHolds(const ReleaseConstraint& c, int a) {
  switch (c.kind) {
    case ConstraintKind::kAssign: return a == c.value;
    case ConstraintKind::kAtMost: return a <= c.value;
    case ConstraintKind::kAtLeast: return a >= c.value;
    default: return true;
  }
}

// Chronological backtracking with forward checking. Domains are dense
// boolean rows over 0..max_value; removals are trailed and undone on
// backtrack.
class ForwardCheckingSolver {
 public:
  ForwardCheckingSolver(const ReleaseVars& variables,
                        const std::vector<const ReleaseConstraint*>& cons)
      : variables_(variables), constraints_(cons) {
    const int n = static_cast<int>(variables.vars.size());
    for (int i = 0; i < n; ++i) {
      index_[variables.vars[i].requirement_id] = i;
      for (int v : variables.vars[i].domain) max_value_ = std::max(max_value_, v);
    }
    // Variable tie-break order: ascending requirement id.
    id_rank_.resize(n);
    std::vector<int> by_id(n);
    for (int i = 0; i < n; ++i) by_id[i] = i;
    std::sort(by_id.begin(), by_id.end(), [&](int a, int b) {
      return variables.vars[a].requirement_id < variables.vars[b].requirement_id;
    });
    for (int r = 0; r < n; ++r) id_rank_[by_id[r]] = r;

    alive_.assign(n, std::vector<char>(max_value_ + 1, 0));
    size_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      for (int v : variables.vars[i].domain) {
        if (v < 0) throw Error(ErrorCode::kInvalidArgument, "negative release");
        if (!alive_[i][v]) {
          alive_[i][v] = 1;
          ++size_[i];
        }
      }
    }
    value_.assign(n, 0);
    adjacency_.assign(n, {});
  }

  std::optional<Assignment> Run(SolveStats* stats) {
    if (!Compile()) return std::nullopt;
    const bool found = Search();
    if (stats != nullptr) stats->nodes += nodes_;
    if (!found) return std::nullopt;
    Assignment out;
    for (std::size_t i = 0; i < variables_.vars.size(); ++i)
      out[variables_.vars[i].requirement_id] = value_[i];
    return out;
  }

 private:
  struct Binary {
    const ReleaseConstraint* c;
    int x;
    int y;
  };

  int IndexOf(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::kUnknownRequirement, id);
    return it->second;
  }

  void Remove(int var, int value) {
    alive_[var][value] = 0;
    --size_[var];
    trail_.push_back({var, value});
  }

  void Undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto [var, value] = trail_.back();
      trail_.pop_back();
      alive_[var][value] = 1;
      ++size_[var];
    }
  }

  // Node consistency for unary constraints and self-referencing binary
  // ones, then root pruning for the release-wide limits.
  bool Compile() {
    for (const ReleaseConstraint* c : constraints_) {
      if (IsUnary(c->kind)) {
        const int x = IndexOf(c->req);
        for (int v = 0; v <= max_value_; ++v)
          if (alive_[x][v] && !UnaryHolds(*c, v)) Remove(x, v);
        if (size_[x] == 0) return false;
      } else if (IsBinary(c->kind)) {
        const int x = IndexOf(c->req);
        const int y = IndexOf(c->other);
        if (x == y) {
          for (int v = 0; v <= max_value_; ++v)
            if (alive_[x][v] && !BinaryHolds(*c, v, v, variables_.unplanned))
              Remove(x, v);
          if (size_[x] == 0) return false;
          continue;
        }
        const int id = static_cast<int>(binaries_.size());
        binaries_.push_back({c, x, y});
        adjacency_[x].push_back(id);
        adjacency_[y].push_back(id);
      } else {
        globals_.push_back(c);
      }
    }
    return PruneGlobals();
  }

  // Removes release r from an unassigned variable when placing it there
  // would exceed a count or effort limit given the current assignment.
  bool PruneGlobals() {
    const int n = static_cast<int>(variables_.vars.size());
    for (const ReleaseConstraint* c : globals_) {
      const int r = c->release;
      if (r < 0 || r > max_value_) continue;
      long long load = 0;
      for (int i = 0; i < n; ++i) {
        if (value_[i] != r) continue;
        load += c->kind == ConstraintKind::kCapacity ? 1
                                                     : variables_.vars[i].duration;
      }
      if (load > c->value) return false;
      for (int i = 0; i < n; ++i) {
        if (value_[i] != 0 || !alive_[i][r]) continue;
        const long long add = c->kind == ConstraintKind::kCapacity
                                  ? 1
                                  : variables_.vars[i].duration;
        if (load + add > c->value) {
          Remove(i, r);
          if (size_[i] == 0) return false;
        }
      }
    }
    return true;
  }

  bool ForwardCheck(int x) {
    const int a = value_[x];
    for (int id : adjacency_[x]) {
      const Binary& b = binaries_[id];
      const int y = b.x == x ? b.y : b.x;
      if (value_[y] != 0) continue;
      for (int w = 0; w <= max_value_; ++w) {
        if (!alive_[y][w]) continue;
        const bool ok = b.x == x ? BinaryHolds(*b.c, a, w, variables_.unplanned)
                                 : BinaryHolds(*b.c, w, a, variables_.unplanned);
        if (!ok) Remove(y, w);
      }
      if (size_[y] == 0) return false;
    }
    return PruneGlobals();
  }

  int SelectVariable() const {
    int best = -1;
    for (int i = 0; i < static_cast<int>(value_.size()); ++i) {
      if (value_[i] != 0) continue;
      if (best < 0 || size_[i] < size_[best] ||
          (size_[i] == size_[best] && id_rank_[i] < id_rank_[best]))
        best = i;
    }
    return best;
  }

  bool Search() {
    ++nodes_;
    const int x = SelectVariable();
    if (x < 0) return true;
    for (int v = 0; v <= max_value_; ++v) {
      if (!alive_[x][v]) continue;
      const std::size_t mark = trail_.size();
      value_[x] = v;
      if (ForwardCheck(x) && Search()) return true;
      value_[x] = 0;
      Undo(mark);
    }
    return false;
  }

  const ReleaseVars& variables_;
  const std::vector<const ReleaseConstraint*>& constraints_;
  std::map<std::string, int> index_;
  std::vector<int> id_rank_;
  int max_value_ = 0;
  std::vector<std::vector<char>> alive_;
  std::vector<int> size_;
  std::vector<int> value_;  // 0 = unassigned; releases start at 1
  std::vector<Binary> binaries_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<const ReleaseConstraint*> globals_;
  std::vector<std::pair<int, int>> trail_;
  std::uint64_t nodes_ = 0;
};

}  // namespace internal

// Finds an assignment satisfying every given constraint, or nullopt when
// none exists. Variables are chosen by smallest remaining domain (ties by
// requirement id) and values are tried in ascending order.
inline std::optional<Assignment> SolveConstraints(
    const ReleaseVars& variables,
    const std::vector<const ReleaseConstraint*>& constraints,
    SolveStats* stats = nullptr) {
  for (const auto& v : variables.vars) {
    if (v.domain.empty()) return std::nullopt;
    for (int value : v.domain)
      if (value < 1)
        throw Error(ErrorCode::kInvalidArgument,
                    "release values start at 1 for " + v.requirement_id);
  }
  internal::ForwardCheckingSolver solver(variables, constraints);
  return solver.Run(stats);
}

inline std::optional<Assignment> SolveConstraints(
    const ReleaseVars& variables, const std::vector<ReleaseConstraint>& constraints,
    SolveStats* stats = nullptr) {
  std::vector<const ReleaseConstraint*> refs;
  refs.reserve(constraints.size());
  for (const auto& c : constraints) refs.push_back(&c);
  return SolveConstraints(variables, refs, stats);
}

inline std::optional<Assignment> Solve(const Csp& csp, bool include_soft,
                                       SolveStats* stats = nullptr) {
  std::vector<const ReleaseConstraint*> refs;
  for (const auto& c : csp.hard) refs.push_back(&c);
  if (include_soft)
    for (const auto& c : csp.soft) refs.push_back(&c);
  return SolveConstraints(csp.variables, refs, stats);
}

inline bool CheckConsistency(const std::vector<ReleaseConstraint>& background,
                             const std::vector<ReleaseConstraint>& candidate,
                             const ReleaseVars& variables) {
  std::vector<const ReleaseConstraint*> refs;
  for (const auto& c : background) refs.push_back(&c);
  for (const auto& c : candidate) refs.push_back(&c);
  return SolveConstraints(variables, refs).has_value();
}

// Release variables for every requirement of a project: domain 1..n, plus
// the unplanned value for requirements named in an EXCLUDES_ONE constraint.
inline ReleaseVars MakeReleaseVars(
    const ProjectModel& project,
    const std::vector<ReleaseConstraint>& constraints) {
  ReleaseVars vars;
  const int n = project.horizon.release_count;
  vars.unplanned = project.horizon.unplanned();
  std::map<std::string, bool> excludable;
  for (const auto& c : constraints) {
    if (c.kind != ConstraintKind::kExcludesOne) continue;
    excludable[c.req] = true;
    excludable[c.other] = true;
  }
  for (const auto& r : project.requirements) {
    ReleaseVar v;
    v.requirement_id = r.id;
    v.duration = r.time_estimate;
    for (int rel = 1; rel <= n; ++rel) v.domain.push_back(rel);
    if (excludable.count(r.id)) v.domain.push_back(vars.unplanned);
    vars.vars.push_back(std::move(v));
  }
  return vars;
}

// Project constraints split into background and preferences: hard
// dependencies and hard-marked preferences form the background; soft
// preferences keep their input order.
inline Csp BuildCsp(const ProjectModel& project) {
  Csp csp;
  csp.hard = project.hard_constraints;
  for (const auto& c : project.preferences.constraints) {
    if (c.hardness == Hardness::kHard) csp.hard.push_back(c);
    else csp.soft.push_back(c);
  }
  std::vector<ReleaseConstraint> all = csp.hard;
  all.insert(all.end(), csp.soft.begin(), csp.soft.end());
  csp.variables = MakeReleaseVars(project, all);
  return csp;
}

}  // namespace reqplan
