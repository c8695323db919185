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

// Walks through the engine on the bundled example projects: ranking,
// MVP selection, consensus planning, conflict analysis and validator matching.

#include <iostream>

#include <fmt/core.h>

#include "reqplan/reqplan.hpp"

namespace {

std::string Fixture(const char* name) {
  return std::string(REQPLAN_FIXTURE_DIR) + "/" + name;
}

}  // namespace

int main() {
  using namespace reqplan;

  const ProjectDocument mvp = LoadProject(Fixture("mvp_fixture.json"));
  const UtilityReport report = Rank(mvp.model, mvp.config.utility);
  fmt::print("Ranking\n");
  for (const auto& id : report.order)
    fmt::print("  {} {:<6} {:.4f}\n", report.priority.at(id), id, report.overall.at(id));

  const MvpSolution chosen = SelectMvp(MakeMvpProblem(mvp.model, *mvp.mvp_maxtime, mvp.config.utility));
  fmt::print("\nMVP within {} time units:", *mvp.mvp_maxtime);
  for (const auto& id : chosen.selected) fmt::print(" {}", id);
  fmt::print(" (utility {:.4f}, time {})\n", chosen.total_utility, chosen.total_time);

  const ConsensusResult plan =
      PlanConsensus(MakeAssignmentPreferences(mvp.model), mvp.config.consensus);
  fmt::print("\nConsensus plan:");
  for (const auto& [id, release] : plan.plan) fmt::print(" {}->{}", id, release);
  fmt::print(" ({} changes, fairness {})\n", plan.total_changes, plan.fairness);

  const ProjectDocument release = LoadProject(Fixture("release_fixture.json"));
  const Csp csp = BuildCsp(release.model);
  fmt::print("\nMinimal conflicts with the dependencies as background:\n");
  for (const auto& conflict : AllMinConflicts(csp.hard, csp.soft, csp.variables))
    for (std::size_t i : conflict.members) fmt::print("  {}\n", ToString(csp.soft[i]));

  const ProjectDocument keywords = LoadProject(Fixture("keyword_fixture.json"));
  fmt::print("\nSuggested validators\n");
  for (const auto& r : keywords.model.requirements) {
    fmt::print("  {}:", r.id);
    for (const auto& [user, score] : RecommendValidators(keywords.model, r.id, 2))
      fmt::print(" {} ({:.2f})", user, score);
    fmt::print("\n");
  }
  return 0;
}
