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

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqplan/consensus_plan.hpp"
#include "reqplan/error.hpp"
#include "reqplan/factorization.hpp"
#include "reqplan/model.hpp"
#include "reqplan/release_constraint.hpp"
#include "reqplan/stakeholder_match.hpp"
#include "reqplan/utility_rank.hpp"

namespace reqplan {

using json = nlohmann::json;

struct EngineConfig {
  UtilityConfig utility;
  TrainConfig factorization;
  ConsensusConfig consensus;
  MatchConfig matching;

  bool operator==(const EngineConfig&) const = default;
};

// Everything a project file carries: the model plus the MVP budget and the
// per-module configuration.
struct ProjectDocument {
  ProjectModel model;
  std::optional<int> mvp_maxtime;
  EngineConfig config;

  bool operator==(const ProjectDocument&) const = default;
};

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<ValidationIssue> issues)
      : Error(ErrorCode::kValidationError, Summarize(issues)),
        issues_(std::move(issues)) {}

  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  static std::string Summarize(const std::vector<ValidationIssue>& issues) {
    std::string s;
    for (const auto& i : issues) {
      if (!s.empty()) s += "; ";
      s += i.ToString();
    }
    return s;
  }

  std::vector<ValidationIssue> issues_;
};

namespace io {

[[noreturn]] inline void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParseError, (where.empty() ? "/" : where) + ": " + what);
}

inline void RejectUnknownKeys(const json& obj, const std::string& where,
                              std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) Fail(where, "expected object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) Fail(where + "/" + key, "unknown key");
  }
}

inline std::string GetString(const json& obj, const char* key,
                             const std::string& where, bool required = false,
                             std::string fallback = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) Fail(where + "/" + key, "missing");
    return fallback;
  }
  if (!it->is_string()) Fail(where + "/" + key, "expected string");
  return it->get<std::string>();
}

inline long long GetInteger(const json& obj, const char* key,
                            const std::string& where, bool required = false,
                            long long fallback = 0) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) Fail(where + "/" + key, "missing");
    return fallback;
  }
  if (!it->is_number_integer()) Fail(where + "/" + key, "expected integer");
  return it->get<long long>();
}

inline int GetInt(const json& obj, const char* key, const std::string& where,
                  bool required = false, int fallback = 0) {
  const long long v = GetInteger(obj, key, where, required, fallback);
  if (v < INT32_MIN || v > INT32_MAX) Fail(where + "/" + key, "integer out of range");
  return static_cast<int>(v);
}

inline double GetNumber(const json& obj, const char* key,
                        const std::string& where, bool required = false,
                        double fallback = 0.0) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) Fail(where + "/" + key, "missing");
    return fallback;
  }
  if (!it->is_number()) Fail(where + "/" + key, "expected number");
  return it->get<double>();
}

inline std::vector<std::string> GetStrings(const json& obj, const char* key,
                                           const std::string& where) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) Fail(where + "/" + key, "expected array of strings");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& v = (*it)[i];
    if (!v.is_string())
      Fail(where + "/" + key + "/" + std::to_string(i), "expected string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

template <typename Enum, std::size_t N>
Enum ParseEnum(const json& obj, const char* key, const std::string& where,
               const std::pair<Enum, const char*> (&names)[N], Enum fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) Fail(where + "/" + key, "expected string");
  const auto text = it->get<std::string>();
  for (const auto& [value, name] : names)
    if (text == name) return value;
  Fail(where + "/" + key, "unknown value '" + text + "'");
}

template <typename Enum, std::size_t N>
const char* EnumName(Enum value, const std::pair<Enum, const char*> (&names)[N]) {
  for (const auto& [v, name] : names)
    if (v == value) return name;
  return "?";
}

inline constexpr std::pair<NormalizationMode, const char*> kNormalizationNames[] = {
    {NormalizationMode::kDivideByDims, "DIVIDE_BY_DIMS"},
    {NormalizationMode::kWeightedSum, "WEIGHTED_SUM"}};
inline constexpr std::pair<MissingValuePolicy, const char*> kMissingNames[] = {
    {MissingValuePolicy::kSkip, "SKIP"}, {MissingValuePolicy::kError, "ERROR"}};
inline constexpr std::pair<ChangeMetric, const char*> kMetricNames[] = {
    {ChangeMetric::kIndicator, "INDICATOR"}, {ChangeMetric::kDistance, "DISTANCE"}};
inline constexpr std::pair<FairnessForm, const char*> kFairnessNames[] = {
    {FairnessForm::kAllPairs, "ALL_PAIRS"}, {FairnessForm::kChain, "CHAIN"}};
inline constexpr std::pair<ConsensusObjective, const char*> kObjectiveNames[] = {
    {ConsensusObjective::kLexTotalThenFairness, "LEX_TOTAL_THEN_FAIRNESS"},
    {ConsensusObjective::kFairnessOnly, "FAIRNESS_ONLY_EQ7"},
    {ConsensusObjective::kProduct, "PRODUCT_EQ8"}};
inline constexpr std::pair<Hardness, const char*> kHardnessNames[] = {
    {Hardness::kHard, "HARD"}, {Hardness::kSoft, "SOFT"}};

inline ReleaseConstraint ConstraintFromJson(const json& j, const std::string& where,
                                            Hardness default_hardness) {
  RejectUnknownKeys(j, where,
                    {"kind", "op", "req", "other", "value", "release",
                     "hardness", "owner"});
  ReleaseConstraint c;
  c.hardness = ParseEnum(j, "hardness", where, kHardnessNames, default_hardness);
  if (j.contains("owner")) c.owner = GetString(j, "owner", where);

  if (j.contains("op")) {
    if (j.contains("kind")) Fail(where, "give either 'kind' or 'op', not both");
    const std::string req = GetString(j, "req", where, true);
    const std::string op = GetString(j, "op", where, true);
    const int value = GetInt(j, "value", where, true);
    try {
      auto pref = MakePreference(c.owner.value_or(""), req, op, value, c.hardness);
      pref.owner = c.owner;
      return pref;
    } catch (const Error& e) {
      Fail(where + "/op", e.detail());
    }
  }

  const std::string kind_name = GetString(j, "kind", where, true);
  const auto kind = ParseKind(kind_name);
  if (!kind) Fail(where + "/kind", "unknown constraint kind '" + kind_name + "'");
  c.kind = *kind;
  if (IsUnary(c.kind)) {
    c.req = GetString(j, "req", where, true);
    c.value = GetInt(j, "value", where, true);
  } else if (IsBinary(c.kind)) {
    c.req = GetString(j, "req", where, true);
    c.other = GetString(j, "other", where, true);
    if (c.kind == ConstraintKind::kTimely) c.value = GetInt(j, "value", where, true);
  } else {
    c.release = GetInt(j, "release", where, true);
    c.value = GetInt(j, "value", where, true);
  }
  return c;
}

inline json ConstraintToJson(const ReleaseConstraint& c, bool with_hardness) {
  json j;
  j["kind"] = std::string(KindName(c.kind));
  if (IsUnary(c.kind)) {
    j["req"] = c.req;
    j["value"] = c.value;
  } else if (IsBinary(c.kind)) {
    j["req"] = c.req;
    j["other"] = c.other;
    if (c.kind == ConstraintKind::kTimely) j["value"] = c.value;
  } else {
    j["release"] = c.release;
    j["value"] = c.value;
  }
  if (with_hardness) j["hardness"] = EnumName(c.hardness, kHardnessNames);
  if (c.owner) j["owner"] = *c.owner;
  return j;
}

inline EngineConfig ConfigFromJson(const json& j, const std::string& where) {
  EngineConfig config;
  RejectUnknownKeys(j, where, {"utility", "factorization", "consensus", "matching"});
  if (auto it = j.find("utility"); it != j.end()) {
    const std::string w = where + "/utility";
    RejectUnknownKeys(*it, w, {"normalization", "missing_values"});
    config.utility.normalization =
        ParseEnum(*it, "normalization", w, kNormalizationNames,
                  config.utility.normalization);
    config.utility.missing =
        ParseEnum(*it, "missing_values", w, kMissingNames, config.utility.missing);
  }
  if (auto it = j.find("factorization"); it != j.end()) {
    const std::string w = where + "/factorization";
    auto& f = config.factorization;
    RejectUnknownKeys(*it, w,
                      {"k", "learning_rate", "regularization", "max_epochs",
                       "seed", "convergence_tolerance"});
    f.k = GetInt(*it, "k", w, false, f.k);
    f.learning_rate = GetNumber(*it, "learning_rate", w, false, f.learning_rate);
    f.regularization = GetNumber(*it, "regularization", w, false, f.regularization);
    f.max_epochs = GetInt(*it, "max_epochs", w, false, f.max_epochs);
    f.seed = static_cast<std::uint64_t>(
        GetInteger(*it, "seed", w, false, static_cast<long long>(f.seed)));
    f.convergence_tolerance = GetNumber(*it, "convergence_tolerance", w, false,
                                        f.convergence_tolerance);
    try {
      ValidateTrainConfig(f);
    } catch (const Error& e) {
      Fail(w, e.detail());
    }
  }
  if (auto it = j.find("consensus"); it != j.end()) {
    const std::string w = where + "/consensus";
    auto& c = config.consensus;
    RejectUnknownKeys(*it, w, {"change_metric", "fairness_form", "objective"});
    c.change_metric = ParseEnum(*it, "change_metric", w, kMetricNames, c.change_metric);
    c.fairness_form =
        ParseEnum(*it, "fairness_form", w, kFairnessNames, c.fairness_form);
    c.objective = ParseEnum(*it, "objective", w, kObjectiveNames, c.objective);
  }
  if (auto it = j.find("matching"); it != j.end()) {
    const std::string w = where + "/matching";
    RejectUnknownKeys(*it, w, {"stopwords"});
    config.matching.stopwords = GetStrings(*it, "stopwords", w);
  }
  return config;
}

inline json ConfigToJson(const EngineConfig& config) {
  json j;
  j["utility"] = {
      {"normalization", EnumName(config.utility.normalization, kNormalizationNames)},
      {"missing_values", EnumName(config.utility.missing, kMissingNames)}};
  const auto& f = config.factorization;
  j["factorization"] = {{"k", f.k},
                        {"learning_rate", f.learning_rate},
                        {"regularization", f.regularization},
                        {"max_epochs", f.max_epochs},
                        {"seed", f.seed},
                        {"convergence_tolerance", f.convergence_tolerance}};
  j["consensus"] = {
      {"change_metric", EnumName(config.consensus.change_metric, kMetricNames)},
      {"fairness_form", EnumName(config.consensus.fairness_form, kFairnessNames)},
      {"objective", EnumName(config.consensus.objective, kObjectiveNames)}};
  j["matching"] = {{"stopwords", config.matching.stopwords}};
  return j;
}

}  // namespace io

// Parses a project document without validating cross references. Throws
// Error(kParseError) naming the JSON location of the first problem.
inline ProjectDocument ProjectFromJson(const json& root) {
  using namespace io;
  ProjectDocument doc;
  ProjectModel& model = doc.model;
  RejectUnknownKeys(root, "",
                    {"requirements", "stakeholders", "dimensions", "evaluations",
                     "release_horizon", "hard_constraints", "preferences", "mvp",
                     "config"});

  auto array_at = [&](const char* key) -> const json* {
    auto it = root.find(key);
    if (it == root.end()) return nullptr;
    if (!it->is_array()) Fail(std::string("/") + key, "expected array");
    return &*it;
  };

  if (const json* reqs = array_at("requirements")) {
    for (std::size_t i = 0; i < reqs->size(); ++i) {
      const std::string w = "/requirements/" + std::to_string(i);
      const json& r = (*reqs)[i];
      RejectUnknownKeys(r, w,
                        {"id", "title", "description", "keywords", "time_estimate"});
      Requirement req;
      req.id = GetString(r, "id", w, true);
      req.title = GetString(r, "title", w);
      req.description = GetString(r, "description", w);
      req.keywords = GetStrings(r, "keywords", w);
      req.time_estimate = GetInt(r, "time_estimate", w);
      model.requirements.push_back(std::move(req));
    }
  }
  if (const json* users = array_at("stakeholders")) {
    for (std::size_t i = 0; i < users->size(); ++i) {
      const std::string w = "/stakeholders/" + std::to_string(i);
      const json& s = (*users)[i];
      RejectUnknownKeys(s, w, {"id", "name", "expertise_keywords"});
      Stakeholder st;
      st.id = GetString(s, "id", w, true);
      st.name = GetString(s, "name", w);
      st.expertise_keywords = GetStrings(s, "expertise_keywords", w);
      model.stakeholders.push_back(std::move(st));
    }
  }
  if (const json* dims = array_at("dimensions")) {
    for (std::size_t i = 0; i < dims->size(); ++i) {
      const std::string w = "/dimensions/" + std::to_string(i);
      const json& d = (*dims)[i];
      RejectUnknownKeys(d, w, {"name", "weight", "polarity_note"});
      InterestDimension dim;
      dim.name = GetString(d, "name", w, true);
      dim.weight = GetNumber(d, "weight", w, false, 1.0);
      dim.polarity_note = GetString(d, "polarity_note", w);
      model.dimensions.push_back(std::move(dim));
    }
  }
  if (auto it = root.find("evaluations"); it != root.end()) {
    if (!it->is_object()) Fail("/evaluations", "expected object");
    for (const auto& [dim, rows] : it->items()) {
      const std::string wd = "/evaluations/" + dim;
      if (!rows.is_object()) Fail(wd, "expected object");
      for (const auto& [req, cells] : rows.items()) {
        const std::string wr = wd + "/" + req;
        if (!cells.is_object()) Fail(wr, "expected object");
        for (const auto& [user, rating] : cells.items()) {
          if (rating.is_null()) continue;
          if (!rating.is_number()) Fail(wr + "/" + user, "expected number");
          model.evaluations.Set(user, req, dim, rating.get<double>());
        }
      }
    }
  }
  if (root.contains("release_horizon"))
    model.horizon.release_count = GetInt(root, "release_horizon", "");
  if (const json* hard = array_at("hard_constraints")) {
    for (std::size_t i = 0; i < hard->size(); ++i)
      model.hard_constraints.push_back(ConstraintFromJson(
          (*hard)[i], "/hard_constraints/" + std::to_string(i), Hardness::kHard));
  }
  if (auto it = root.find("preferences"); it != root.end()) {
    RejectUnknownKeys(*it, "/preferences", {"assignments", "constraints"});
    if (auto a = it->find("assignments"); a != it->end()) {
      if (!a->is_object()) Fail("/preferences/assignments", "expected object");
      for (const auto& [user, row] : a->items()) {
        const std::string w = "/preferences/assignments/" + user;
        if (!row.is_object()) Fail(w, "expected object");
        for (const auto& [req, rel] : row.items()) {
          if (!rel.is_number_integer()) Fail(w + "/" + req, "expected integer");
          model.preferences.assignments[user][req] = rel.get<int>();
        }
      }
    }
    if (auto c = it->find("constraints"); c != it->end()) {
      if (!c->is_array()) Fail("/preferences/constraints", "expected array");
      for (std::size_t i = 0; i < c->size(); ++i)
        model.preferences.constraints.push_back(ConstraintFromJson(
            (*c)[i], "/preferences/constraints/" + std::to_string(i),
            Hardness::kSoft));
    }
  }
  if (auto it = root.find("mvp"); it != root.end()) {
    RejectUnknownKeys(*it, "/mvp", {"maxtime"});
    if (it->contains("maxtime")) doc.mvp_maxtime = GetInt(*it, "maxtime", "/mvp");
  }
  if (auto it = root.find("config"); it != root.end())
    doc.config = ConfigFromJson(*it, "/config");
  return doc;
}

inline json ProjectToJson(const ProjectDocument& doc) {
  using namespace io;
  const ProjectModel& model = doc.model;
  json root;
  root["requirements"] = json::array();
  for (const auto& r : model.requirements)
    root["requirements"].push_back({{"id", r.id},
                                    {"title", r.title},
                                    {"description", r.description},
                                    {"keywords", r.keywords},
                                    {"time_estimate", r.time_estimate}});
  root["stakeholders"] = json::array();
  for (const auto& s : model.stakeholders)
    root["stakeholders"].push_back({{"id", s.id},
                                    {"name", s.name},
                                    {"expertise_keywords", s.expertise_keywords}});
  root["dimensions"] = json::array();
  for (const auto& d : model.dimensions)
    root["dimensions"].push_back({{"name", d.name},
                                  {"weight", d.weight},
                                  {"polarity_note", d.polarity_note}});
  root["evaluations"] = json::object();
  for (const auto& [key, rating] : model.evaluations.entries())
    root["evaluations"][key.dimension][key.requirement][key.stakeholder] = rating;
  root["release_horizon"] = model.horizon.release_count;
  root["hard_constraints"] = json::array();
  for (const auto& c : model.hard_constraints)
    root["hard_constraints"].push_back(ConstraintToJson(c, c.hardness != Hardness::kHard));
  json prefs;
  prefs["assignments"] = json::object();
  for (const auto& [user, row] : model.preferences.assignments)
    for (const auto& [req, rel] : row) prefs["assignments"][user][req] = rel;
  prefs["constraints"] = json::array();
  for (const auto& c : model.preferences.constraints)
    prefs["constraints"].push_back(ConstraintToJson(c, true));
  root["preferences"] = std::move(prefs);
  root["mvp"] = json::object();
  if (doc.mvp_maxtime) root["mvp"]["maxtime"] = *doc.mvp_maxtime;
  root["config"] = ConfigToJson(doc.config);
  return root;
}

inline void RequireValid(const ProjectDocument& doc) {
  auto issues = ValidateProject(doc.model);
  if (doc.mvp_maxtime && *doc.mvp_maxtime < 0)
    issues.push_back({"mvp", "maxtime must be non-negative"});
  if (!issues.empty()) throw ValidationFailure(std::move(issues));
}

// Parses and validates a project document from text.
inline ProjectDocument ParseProject(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  ProjectDocument doc = ProjectFromJson(root);
  RequireValid(doc);
  return doc;
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProjectDocument LoadProject(const std::string& path) {
  try {
    return ParseProject(ReadFile(path));
  } catch (const ValidationFailure&) {
    throw;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError)
      throw Error(ErrorCode::kParseError, path + ": " + e.detail());
    throw;
  }
}

inline void SaveProject(const ProjectDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << ProjectToJson(doc).dump(2) << "\n";
}

// Replaces one dimension's ratings from a CSV grid: the header row lists
// stakeholder ids after a leading label cell, each further row starts with a
// requirement id, and "?" (or an empty cell) marks a missing rating.
inline void ImportCsv(ProjectDocument& doc, const std::string& dimension,
                      const std::string& csv) {
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    const auto e = s.find_last_not_of(" \t\r\"");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  auto split = [&](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };

  if (doc.model.FindDimension(dimension) == nullptr)
    throw Error(ErrorCode::kUnknownDimension, dimension);
  std::stringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  int line_no = 0;
  EvaluationMatrix updated = doc.model.evaluations;
  updated.ClearDimension(dimension);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (header.empty()) {
      header = std::move(cells);
      if (header.size() < 2)
        throw Error(ErrorCode::kParseError, "line 1: expected stakeholder columns");
      continue;
    }
    if (cells.size() != header.size())
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells");
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty() || cells[c] == "?") continue;
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[c].size())
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ", column " +
                        std::to_string(c + 1) + ": not a number");
      updated.Set(header[c], cells[0], dimension, value);
    }
  }
  ProjectDocument candidate = doc;
  candidate.model.evaluations = std::move(updated);
  RequireValid(candidate);
  doc = std::move(candidate);
}

}  // namespace reqplan
