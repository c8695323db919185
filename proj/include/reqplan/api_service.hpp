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
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "reqplan/analysis.hpp"
#include "reqplan/project_io.hpp"

namespace reqplan {

struct ProjectSnapshot {
  ProjectDocument project;
  long long version = 0;
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  std::optional<std::string> if_match;
};

struct ApiResponse {
  int status = 200;
  json body;
};

// In-memory single-project store behind the HTTP routes. Mutations swap in
// a new immutable snapshot under a lock; analyses take a snapshot pointer and
// run without holding it.
class ApiService {
 public:
  ApiResponse Handle(const ApiRequest& request) {
    try {
      if (request.path == "/project") {
        if (request.method == "GET") return GetProject();
        if (request.method == "PUT") return PutProject(request);
        return Status(405, "method not allowed");
      }
      if (request.path == "/project/preferences") {
        if (request.method == "PATCH") return PatchPreferences(request);
        return Status(405, "method not allowed");
      }
      constexpr std::string_view kAnalyze = "/analyze/";
      if (request.path.rfind(kAnalyze, 0) == 0) {
        const auto command = ParseCommand(request.path.substr(kAnalyze.size()));
        if (!command) return Status(404, "unknown route " + request.path);
        if (request.method != "POST") return Status(405, "method not allowed");
        return Analyze(*command, request);
      }
      return Status(404, "unknown route " + request.path);
    } catch (const ValidationFailure& e) {
      return Issues(e.issues());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParseError) return Status(400, e.what());
      return Status(422, e.what());
    }
  }

  std::shared_ptr<const ProjectSnapshot> Snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return current_;
  }

  // Installs a project directly, e.g. one loaded at startup.
  long long Load(ProjectDocument doc) {
    RequireValid(doc);
    std::lock_guard<std::mutex> lock(mu_);
    const long long next = current_ ? current_->version + 1 : 1;
    current_ = std::make_shared<const ProjectSnapshot>(
        ProjectSnapshot{std::move(doc), next});
    return next;
  }

 private:
  static ApiResponse Status(int status, const std::string& message) {
    return {status, {{"error", message}}};
  }

  static ApiResponse Issues(const std::vector<ValidationIssue>& issues) {
    json list = json::array();
    for (const auto& i : issues)
      list.push_back({{"entity", i.entity}, {"rule", i.rule}});
    return {422, {{"error", "validation failed"}, {"issues", list}}};
  }

  static json ParseBody(const std::string& body, bool allow_empty) {
    if (body.empty() && allow_empty) return json::object();
    try {
      json j = json::parse(body);
      if (!j.is_object()) throw Error(ErrorCode::kParseError, "body must be an object");
      return j;
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParseError, e.what());
    }
  }

  static std::optional<long long> ParseVersion(const std::string& tag) {
    std::string t = tag;
    t.erase(std::remove(t.begin(), t.end(), '"'), t.end());
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    return std::nullopt;
  }

  // Caller holds mu_.
  bool VersionMatches(const ApiRequest& request) const {
    if (!request.if_match) return true;
    if (*request.if_match == "*") return current_ != nullptr;
    const auto v = ParseVersion(*request.if_match);
    const long long have = current_ ? current_->version : 0;
    return v && *v == have;
  }

  ApiResponse GetProject() const {
    auto snap = Snapshot();
    if (!snap) return Status(404, "no project loaded");
    return {200, {{"version", snap->version}, {"project", ProjectToJson(snap->project)}}};
  }

  ApiResponse PutProject(const ApiRequest& request) {
    ProjectDocument doc = ProjectFromJson(ParseBody(request.body, false));
    RequireValid(doc);
    std::lock_guard<std::mutex> lock(mu_);
    if (!VersionMatches(request)) return Conflict();
    const long long next = current_ ? current_->version + 1 : 1;
    current_ = std::make_shared<const ProjectSnapshot>(
        ProjectSnapshot{std::move(doc), next});
    return {200, {{"version", next}}};
  }

  ApiResponse Conflict() const {
    return {409, {{"error", "version conflict"},
                  {"version", current_ ? current_->version : 0}}};
  }

  // Upserts one stakeholder's release assignments, one stakeholder's typed
  // preferences on the named requirements, or one evaluation cell.
  ApiResponse PatchPreferences(const ApiRequest& request) {
    const json body = ParseBody(request.body, false);
    io::RejectUnknownKeys(body, "", {"stakeholder", "assignments", "constraints",
                                     "evaluation"});
    std::lock_guard<std::mutex> lock(mu_);
    if (!current_) return Status(404, "no project loaded");
    if (!VersionMatches(request)) return Conflict();

    ProjectDocument doc = current_->project;
    ProjectModel& model = doc.model;
    bool touched = false;
    if (auto it = body.find("evaluation"); it != body.end()) {
      const std::string w = "/evaluation";
      io::RejectUnknownKeys(*it, w, {"stakeholder", "requirement", "dimension", "rating"});
      const auto user = io::GetString(*it, "stakeholder", w, true);
      const auto req = io::GetString(*it, "requirement", w, true);
      const auto dim = io::GetString(*it, "dimension", w, true);
      if (!it->contains("rating")) io::Fail(w + "/rating", "missing");
      if ((*it)["rating"].is_null()) model.evaluations.Erase(user, req, dim);
      else model.evaluations.Set(user, req, dim, io::GetNumber(*it, "rating", w, true));
      touched = true;
    }
    if (body.contains("assignments") || body.contains("constraints")) {
      const auto user = io::GetString(body, "stakeholder", "", true);
      if (auto it = body.find("assignments"); it != body.end()) {
        if (!it->is_object()) io::Fail("/assignments", "expected object");
        for (const auto& [req, rel] : it->items()) {
          if (!rel.is_number_integer()) io::Fail("/assignments/" + req, "expected integer");
          model.preferences.assignments[user][req] = rel.get<int>();
        }
      }
      if (auto it = body.find("constraints"); it != body.end()) {
        if (!it->is_array()) io::Fail("/constraints", "expected array");
        std::vector<ReleaseConstraint> incoming;
        for (std::size_t i = 0; i < it->size(); ++i) {
          json c = (*it)[i];
          if (c.is_object() && !c.contains("owner")) c["owner"] = user;
          incoming.push_back(io::ConstraintFromJson(
              c, "/constraints/" + std::to_string(i), Hardness::kSoft));
        }
        UpsertPreferences(model.preferences.constraints, user, incoming);
      }
      touched = true;
    }
    if (!touched) io::Fail("", "nothing to update");
    RequireValid(doc);
    const long long next = current_->version + 1;
    current_ = std::make_shared<const ProjectSnapshot>(
        ProjectSnapshot{std::move(doc), next});
    return {200, {{"version", next}}};
  }

  // Unary preferences replace the stakeholder's unary preferences on the same
  // requirement in place; anything else goes after the stakeholder's last
  // entry unless already present. The list stays stakeholder-major.
  static void UpsertPreferences(std::vector<ReleaseConstraint>& list,
                                const std::string& owner,
                                const std::vector<ReleaseConstraint>& incoming) {
    auto after_owner = [&] {
      for (std::size_t i = list.size(); i-- > 0;)
        if (list[i].owner == owner) return i + 1;
      return list.size();
    };
    std::map<std::string, std::vector<ReleaseConstraint>> by_req;
    for (const auto& c : incoming) {
      if (IsUnary(c.kind)) {
        by_req[c.req].push_back(c);
      } else if (std::find(list.begin(), list.end(), c) == list.end()) {
        list.insert(list.begin() + static_cast<std::ptrdiff_t>(after_owner()), c);
      }
    }
    for (const auto& [req, replacement] : by_req) {
      auto mine = [&](const ReleaseConstraint& c) {
        return c.owner == owner && c.req == req && IsUnary(c.kind);
      };
      auto first = std::find_if(list.begin(), list.end(), mine);
      std::size_t at;
      if (first != list.end()) {
        at = static_cast<std::size_t>(first - list.begin());
        std::erase_if(list, mine);
      } else {
        at = after_owner();
      }
      list.insert(list.begin() + static_cast<std::ptrdiff_t>(at),
                  replacement.begin(), replacement.end());
    }
  }

  ApiResponse Analyze(Command command, const ApiRequest& request) {
    const json body = ParseBody(request.body, true);
    io::RejectUnknownKeys(body, "", {"config", "dimension", "seed", "maxtime",
                                     "requirement", "k", "ignore_hard", "limit"});
    AnalysisOptions options;
    if (body.contains("config")) options.config_patch = body["config"];
    if (body.contains("dimension")) options.dimension = io::GetString(body, "dimension", "");
    if (body.contains("seed"))
      options.seed = static_cast<std::uint64_t>(io::GetInteger(body, "seed", ""));
    if (body.contains("maxtime")) options.maxtime = io::GetInt(body, "maxtime", "");
    if (body.contains("requirement"))
      options.requirement = io::GetString(body, "requirement", "");
    options.k = io::GetInt(body, "k", "", false, options.k);
    if (body.contains("ignore_hard")) {
      if (!body["ignore_hard"].is_boolean()) io::Fail("/ignore_hard", "expected boolean");
      options.ignore_hard = body["ignore_hard"].get<bool>();
    }
    options.limit = static_cast<std::size_t>(
        io::GetInteger(body, "limit", "", false, static_cast<long long>(options.limit)));

    auto snap = Snapshot();
    if (!snap) return Status(404, "no project loaded");
    const auto start = std::chrono::steady_clock::now();
    AnalysisOutcome outcome = RunAnalysis(command, snap->project, options);
    const double elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    json response = {{"result", outcome.result},
                     {"engine_version", std::string(kEngineVersion)},
                     {"project_version", snap->version},
                     {"elapsed_ms", elapsed}};
    if (outcome.result.contains("status")) response["status"] = outcome.result["status"];
    return {200, std::move(response)};
  }

  mutable std::mutex mu_;
  std::shared_ptr<const ProjectSnapshot> current_;
};

}  // namespace reqplan
