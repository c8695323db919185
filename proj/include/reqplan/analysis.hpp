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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "reqplan/consensus_plan.hpp"
#include "reqplan/constraint_solver.hpp"
#include "reqplan/diagnosis.hpp"
#include "reqplan/factorization.hpp"
#include "reqplan/mvp_select.hpp"
#include "reqplan/project_io.hpp"
#include "reqplan/stakeholder_match.hpp"
#include "reqplan/utility_rank.hpp"

namespace reqplan {

inline constexpr std::string_view kEngineVersion = "0.1.0";

enum class Command {
  kPrioritize,
  kComplete,
  kMvp,
  kConsensus,
  kPlan,
  kConflicts,
  kDiagnose,
  kAssign,
};

inline constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::kPrioritize, "prioritize"}, {Command::kComplete, "complete"},
    {Command::kMvp, "mvp"},               {Command::kConsensus, "consensus"},
    {Command::kPlan, "plan"},             {Command::kConflicts, "conflicts"},
    {Command::kDiagnose, "diagnose"},     {Command::kAssign, "assign"}};

inline std::optional<Command> ParseCommand(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames)
    if (name == n) return cmd;
  return std::nullopt;
}

// Per-run knobs shared by the CLI flags and the HTTP request bodies.
struct AnalysisOptions {
  std::optional<std::string> dimension;
  std::optional<std::uint64_t> seed;
  std::optional<int> maxtime;
  std::optional<std::string> requirement;
  int k = 2;
  bool ignore_hard = false;
  std::size_t limit = 100;
  std::optional<json> config_patch;  // JSON merge patch over "config"
};

struct AnalysisOutcome {
  json result;
  std::string table;
  int exit_code = 0;  // 1 when the problem has no solution and no repair
};

namespace internal {

inline json SoftListJson(const SoftSubset& subset,
                         const std::vector<ReleaseConstraint>& soft) {
  json out = json::array();
  for (std::size_t i : subset) {
    json c = io::ConstraintToJson(soft[i], true);
    c["index"] = i;
    c["text"] = ToString(soft[i], false);
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string SoftListText(const SoftSubset& subset,
                                const std::vector<ReleaseConstraint>& soft) {
  std::string s = "{";
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (k) s += ", ";
    s += ToString(soft[subset[k]]);
  }
  return s + "}";
}

inline std::string AssignmentTable(const Assignment& a, int unplanned) {
  std::string t = fmt::format("{:<14}{}\n", "requirement", "release");
  for (const auto& [req, rel] : a)
    t += fmt::format("{:<14}{}\n", req,
                     rel == unplanned ? std::string("unplanned") : std::to_string(rel));
  return t;
}

inline AnalysisOutcome RunPrioritize(const ProjectDocument& doc) {
  const auto& model = doc.model;
  const UtilityReport report = Rank(model, doc.config.utility);
  AnalysisOutcome out;
  out.result["normalization"] =
      io::EnumName(doc.config.utility.normalization, io::kNormalizationNames);
  out.result["ranking"] = json::array();
  std::string header = fmt::format("{:<6}{:<14}", "rank", "requirement");
  for (const auto& d : model.dimensions) header += fmt::format("{:>12}", d.name);
  out.table = header + fmt::format("{:>12}\n", "utility");
  for (const auto& id : report.order) {
    json entry;
    entry["requirement"] = id;
    entry["priority"] = report.priority.at(id);
    entry["utility"] = report.overall.at(id);
    std::string line = fmt::format("{:<6}{:<14}", report.priority.at(id), id);
    for (const auto& d : model.dimensions) {
      const double u = report.per_dimension.at({id, d.name});
      entry["per_dimension"][d.name] = u;
      line += fmt::format("{:>12.4f}", u);
    }
    out.table += line + fmt::format("{:>12.4f}\n", report.overall.at(id));
    out.result["ranking"].push_back(std::move(entry));
  }
  return out;
}

inline AnalysisOutcome RunComplete(const ProjectDocument& doc,
                                   const AnalysisOptions& options) {
  const auto& model = doc.model;
  if (model.dimensions.empty())
    throw Error(ErrorCode::kUnknownDimension, "project has no dimensions");
  const std::string dim = options.dimension.value_or(model.dimensions.front().name);
  const RatingMatrix ratings = ExtractRatings(model, dim);
  TrainingSummary summary;
  const FactorModel trained = Factorize(ratings, doc.config.factorization, &summary);
  const EvaluationMatrix dense = CompleteWith(model, dim, trained);

  AnalysisOutcome out;
  out.result["dimension"] = dim;
  out.result["seed"] = doc.config.factorization.seed;
  out.result["training"] = {{"initial_loss", summary.initial_loss},
                            {"final_loss", summary.final_loss},
                            {"epochs", summary.epochs},
                            {"observed_rmse", ObservedRmse(trained, ratings)}};
  out.result["matrix"] = json::object();
  out.result["predicted"] = json::array();
  std::string header = fmt::format("{:<14}", dim);
  for (const auto& s : model.stakeholders) header += fmt::format("{:>12}", s.id);
  out.table = header + "\n";
  for (const auto& r : model.requirements) {
    std::string line = fmt::format("{:<14}", r.id);
    for (const auto& s : model.stakeholders) {
      const double v = *dense.Get(s.id, r.id, dim);
      const bool observed = model.evaluations.Get(s.id, r.id, dim).has_value();
      out.result["matrix"][r.id][s.id] = v;
      if (!observed) out.result["predicted"].push_back({r.id, s.id});
      line += fmt::format("{:>11.2f}{}", v, observed ? ' ' : '*');
    }
    out.table += line + "\n";
  }
  out.table += "(* = predicted)\n";
  return out;
}

inline AnalysisOutcome RunMvp(const ProjectDocument& doc,
                              const AnalysisOptions& options) {
  const auto maxtime = options.maxtime ? options.maxtime : doc.mvp_maxtime;
  if (!maxtime)
    throw Error(ErrorCode::kInvalidArgument,
                "no time budget: set mvp.maxtime or pass --maxtime");
  const MvpProblem problem = MakeMvpProblem(doc.model, *maxtime, doc.config.utility);
  const MvpSolution solution = SelectMvp(problem);
  AnalysisOutcome out;
  out.result["maxtime"] = *maxtime;
  out.result["selected"] = solution.selected;
  out.result["total_utility"] = solution.total_utility;
  out.result["total_time"] = solution.total_time;
  out.result["items"] = json::array();
  out.table = fmt::format("{:<14}{:>10}{:>6}{:>10}\n", "requirement", "utility",
                          "time", "selected");
  for (const auto& item : problem.items) {
    const bool chosen =
        std::find(solution.selected.begin(), solution.selected.end(),
                  item.requirement_id) != solution.selected.end();
    out.result["items"].push_back({{"requirement", item.requirement_id},
                                   {"utility", item.utility},
                                   {"time", item.time},
                                   {"selected", chosen}});
    out.table += fmt::format("{:<14}{:>10.4f}{:>6}{:>10}\n", item.requirement_id,
                             item.utility, item.time, chosen ? 1 : 0);
  }
  out.table += fmt::format("total utility {:.4f}, total time {} of {}\n",
                           solution.total_utility, solution.total_time, *maxtime);
  return out;
}

inline AnalysisOutcome RunConsensus(const ProjectDocument& doc) {
  const AssignmentPreferences prefs = MakeAssignmentPreferences(doc.model);
  const ConsensusConfig& config = doc.config.consensus;
  const ConsensusResult result = PlanConsensus(prefs, config);
  AnalysisOutcome out;
  out.result["plan"] = result.plan;
  out.result["change_counts"] = result.change_counts;
  out.result["total_changes"] = result.total_changes;
  out.result["fairness"] = result.fairness;
  out.result["objective_value"] = result.objective_value;
  out.result["config"] = io::ConfigToJson(doc.config)["consensus"];
  out.table = fmt::format("{:<14}{}\n", "requirement", "release");
  for (const auto& id : prefs.requirements)
    out.table += fmt::format("{:<14}{}\n", id, result.plan.at(id));
  out.table += "\n";
  out.table += fmt::format("{:<14}{}\n", "stakeholder", "changes");
  for (const auto& id : prefs.stakeholders)
    out.table += fmt::format("{:<14}{}\n", id, result.change_counts.at(id));
  out.table += fmt::format("total changes {}, fairness {}, objective {}\n",
                           result.total_changes, result.fairness,
                           result.objective_value);
  return out;
}

inline AnalysisOutcome RunPlan(const ProjectDocument& doc) {
  const Csp csp = BuildCsp(doc.model);
  AnalysisOutcome out;
  if (!Solve(csp, false)) {
    out.result["status"] = "UNSAT";
    out.table = "UNSAT: hard constraints have no solution\n";
    out.exit_code = 1;
    return out;
  }
  if (auto full = Solve(csp, true)) {
    out.result["status"] = "SAT";
    out.result["assignment"] = *full;
    out.result["removed"] = json::array();
    out.table = "SAT\n" + AssignmentTable(*full, csp.variables.unplanned);
    return out;
  }
  const auto diagnosis = MinDiagnosis(csp.hard, csp.soft, csp.variables);
  std::vector<ReleaseConstraint> kept;
  for (std::size_t i = 0; i < csp.soft.size(); ++i)
    if (!std::binary_search(diagnosis->members.begin(), diagnosis->members.end(), i))
      kept.push_back(csp.soft[i]);
  std::vector<ReleaseConstraint> all = csp.hard;
  all.insert(all.end(), kept.begin(), kept.end());
  const auto repaired = SolveConstraints(csp.variables, all);
  out.result["status"] = "REPAIRED";
  out.result["assignment"] = *repaired;
  out.result["removed"] = SoftListJson(diagnosis->members, csp.soft);
  out.table = "REPAIRED by dropping " + SoftListText(diagnosis->members, csp.soft) +
              "\n" + AssignmentTable(*repaired, csp.variables.unplanned);
  return out;
}

inline AnalysisOutcome InconsistentBackground() {
  AnalysisOutcome out;
  out.result["status"] = "INCONSISTENT_BACKGROUND";
  out.table = "hard constraints have no solution\n";
  out.exit_code = 1;
  return out;
}

inline AnalysisOutcome RunConflicts(const ProjectDocument& doc,
                                    const AnalysisOptions& options) {
  const Csp csp = BuildCsp(doc.model);
  const std::vector<ReleaseConstraint> background =
      options.ignore_hard ? std::vector<ReleaseConstraint>{} : csp.hard;
  ConflictEnumeration found;
  try {
    found = EnumerateMinConflicts(background, csp.soft, csp.variables, options.limit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInconsistentBackground) throw;
    return InconsistentBackground();
  }
  AnalysisOutcome out;
  out.result["status"] = found.conflicts.empty() ? "CONSISTENT" : "CONFLICTS";
  out.result["background"] = options.ignore_hard ? "none" : "hard";
  out.result["exhaustive"] = found.exhaustive;
  out.result["conflicts"] = json::array();
  if (found.conflicts.empty()) out.table = "no conflicts\n";
  for (std::size_t i = 0; i < found.conflicts.size(); ++i) {
    out.result["conflicts"].push_back(
        SoftListJson(found.conflicts[i].members, csp.soft));
    out.table += fmt::format("conflict {}: {}\n", i + 1,
                             SoftListText(found.conflicts[i].members, csp.soft));
  }
  return out;
}

inline AnalysisOutcome RunDiagnose(const ProjectDocument& doc,
                                   const AnalysisOptions& options) {
  const Csp csp = BuildCsp(doc.model);
  const std::vector<ReleaseConstraint> background =
      options.ignore_hard ? std::vector<ReleaseConstraint>{} : csp.hard;
  std::optional<Diagnosis> diagnosis;
  try {
    diagnosis = MinDiagnosis(background, csp.soft, csp.variables);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInconsistentBackground) throw;
    return InconsistentBackground();
  }
  AnalysisOutcome out;
  out.result["status"] = diagnosis ? "DIAGNOSED" : "CONSISTENT";
  out.result["diagnosis"] =
      diagnosis ? SoftListJson(diagnosis->members, csp.soft) : json::array();
  if (diagnosis)
    out.table = "diagnosis: " + SoftListText(diagnosis->members, csp.soft) + "\n";
  else
    out.table = "no diagnosis needed\n";
  return out;
}

inline AnalysisOutcome RunAssign(const ProjectDocument& doc,
                                 const AnalysisOptions& options) {
  const auto& model = doc.model;
  if (options.requirement && !model.FindRequirement(*options.requirement))
    throw Error(ErrorCode::kUnknownRequirement, *options.requirement);
  const SimilarityMatrix sim = ComputeSimilarityMatrix(model, doc.config.matching);
  AnalysisOutcome out;
  out.result["matrix"] = json::object();
  out.result["recommendations"] = json::object();
  std::string header = fmt::format("{:<14}", "");
  for (const auto& s : sim.stakeholders) header += fmt::format("{:>10}", s);
  out.table = header + "\n";
  for (std::size_t r = 0; r < sim.requirements.size(); ++r) {
    const auto& req = sim.requirements[r];
    if (options.requirement && *options.requirement != req) continue;
    std::string line = fmt::format("{:<14}", req);
    for (std::size_t s = 0; s < sim.stakeholders.size(); ++s) {
      out.result["matrix"][req][sim.stakeholders[s]] = sim.values[r][s];
      line += fmt::format("{:>10.2f}", sim.values[r][s]);
    }
    out.table += line + "\n";
    json recs = json::array();
    for (const auto& [id, score] :
         RecommendValidators(model, req, options.k, doc.config.matching))
      recs.push_back({{"stakeholder", id}, {"score", score}});
    out.result["recommendations"][req] = std::move(recs);
  }
  return out;
}

}  // namespace internal

// Runs one engine operation on a validated project document.
inline AnalysisOutcome RunAnalysis(Command command, ProjectDocument doc,
                                   const AnalysisOptions& options = {}) {
  if (options.config_patch) {
    json config = io::ConfigToJson(doc.config);
    config.merge_patch(*options.config_patch);
    doc.config = io::ConfigFromJson(config, "/config");
  }
  if (options.seed) doc.config.factorization.seed = *options.seed;
  switch (command) {
    case Command::kPrioritize: return internal::RunPrioritize(doc);
    case Command::kComplete: return internal::RunComplete(doc, options);
    case Command::kMvp: return internal::RunMvp(doc, options);
    case Command::kConsensus: return internal::RunConsensus(doc);
    case Command::kPlan: return internal::RunPlan(doc);
    case Command::kConflicts: return internal::RunConflicts(doc, options);
    case Command::kDiagnose: return internal::RunDiagnose(doc, options);
    case Command::kAssign: return internal::RunAssign(doc, options);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown command");
}

}  // namespace reqplan
