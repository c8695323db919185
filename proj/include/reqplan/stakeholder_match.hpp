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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reqplan/error.hpp"
#include "reqplan/model.hpp"

namespace reqplan {

using KeywordSet = std::set<std::string>;

struct KeywordProfile {
  std::string owner;
  KeywordSet tokens;
};

struct MatchConfig {
  std::vector<std::string> stopwords;

  bool operator==(const MatchConfig&) const = default;
};

// Splits on whitespace and ASCII punctuation, lowercases ASCII letters and
// drops duplicates. Bytes outside ASCII are kept as part of tokens.
inline KeywordSet NormalizeKeywords(std::string_view text,
                                    const MatchConfig& config = {}) {
  KeywordSet tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.insert(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto ch = static_cast<unsigned char>(raw);
    if (std::isspace(ch) || (ch < 0x80 && std::ispunct(ch))) {
      flush();
    } else {
      current.push_back(static_cast<char>(std::tolower(ch)));
    }
  }
  flush();
  for (const auto& stop : config.stopwords) tokens.erase(stop);
  return tokens;
}

inline KeywordSet ToKeywordSet(const std::vector<std::string>& keywords) {
  return KeywordSet(keywords.begin(), keywords.end());
}

// 2 |a ∩ b| / |a ∪ b|. The union in the denominator gives a range of [0, 2];
// two empty profiles score 0.
inline double Similarity(const KeywordSet& a, const KeywordSet& b) {
  std::size_t common = 0;
  for (const auto& token : a) common += b.count(token);
  const std::size_t together = a.size() + b.size() - common;
  if (together == 0) return 0.0;
  return 2.0 * static_cast<double>(common) / static_cast<double>(together);
}

inline double Similarity(const KeywordProfile& a, const KeywordProfile& b) {
  return Similarity(a.tokens, b.tokens);
}

struct SimilarityMatrix {
  std::vector<std::string> requirements;
  std::vector<std::string> stakeholders;
  // values[r][s]
  std::vector<std::vector<double>> values;

  double At(const std::string& requirement, const std::string& stakeholder) const {
    const auto r = std::find(requirements.begin(), requirements.end(), requirement);
    const auto s = std::find(stakeholders.begin(), stakeholders.end(), stakeholder);
    if (r == requirements.end())
      throw Error(ErrorCode::kUnknownRequirement, requirement);
    if (s == stakeholders.end())
      throw Error(ErrorCode::kInvalidArgument, "unknown stakeholder " + stakeholder);
    return values[r - requirements.begin()][s - stakeholders.begin()];
  }
};

namespace internal {

inline KeywordSet Filtered(const std::vector<std::string>& keywords,
                           const MatchConfig& config) {
  KeywordSet set = ToKeywordSet(keywords);
  for (const auto& stop : config.stopwords) set.erase(stop);
  return set;
}

}  // namespace internal

inline SimilarityMatrix ComputeSimilarityMatrix(const ProjectModel& project,
                                                const MatchConfig& config = {}) {
  SimilarityMatrix m;
  std::vector<KeywordSet> expertise;
  for (const auto& s : project.stakeholders) {
    m.stakeholders.push_back(s.id);
    expertise.push_back(internal::Filtered(s.expertise_keywords, config));
  }
  for (const auto& r : project.requirements) {
    m.requirements.push_back(r.id);
    const KeywordSet keywords = internal::Filtered(r.keywords, config);
    std::vector<double> row;
    for (const auto& e : expertise) row.push_back(Similarity(keywords, e));
    m.values.push_back(std::move(row));
  }
  return m;
}

// Top-k stakeholders for validating a requirement: descending similarity,
// ties by ascending stakeholder id, zero scores left out.
inline std::vector<std::pair<std::string, double>> RecommendValidators(
    const ProjectModel& project, const std::string& requirement, int k,
    const MatchConfig& config = {}) {
  const Requirement* req = project.FindRequirement(requirement);
  if (req == nullptr) throw Error(ErrorCode::kUnknownRequirement, requirement);
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  const KeywordSet keywords = internal::Filtered(req->keywords, config);
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& s : project.stakeholders) {
    const double score =
        Similarity(keywords, internal::Filtered(s.expertise_keywords, config));
    if (score > 0.0) scored.emplace_back(s.id, score);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(k);
  return scored;
}

}  // namespace reqplan
