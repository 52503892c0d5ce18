// Copyright 2026 The EcoDigger Authors.
//
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

#include "core/activity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/error.hpp"

namespace ecodigger {

double BehaviorWeights::operator[](Behavior b) const {
  switch (b) {
    case Behavior::kComment: return comment;
    case Behavior::kOpenIssue: return open_issue;
    case Behavior::kOpenPR: return open_pr;
    case Behavior::kReviewPR: return review_pr;
    case Behavior::kPRMerged: return pr_merged;
  }
  return 0.0;
}

BehaviorWeights BehaviorWeights::scaled(double k) const {
  return {comment * k, open_issue * k, open_pr * k, review_pr * k, pr_merged * k};
}

void BehaviorWeights::validate() const {
  for (Behavior b : kAllBehaviors) {
    double w = (*this)[b];
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weight '" + std::string(to_string(b)) +
                      "' must be a finite non-negative number");
    }
  }
}

BehaviorWeights BehaviorWeights::from_json(const nlohmann::json &j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "weights must be a JSON object");
  }
  BehaviorWeights w;
  for (const auto &[key, value] : j.items()) {
    if (!value.is_number()) {
      throw Error(ErrorCode::kInvalidArgument, "weight '" + key + "' is not a number");
    }
    double v = value.get<double>();
    if (key == "comment") w.comment = v;
    else if (key == "open_issue") w.open_issue = v;
    else if (key == "open_pr") w.open_pr = v;
    else if (key == "review_pr") w.review_pr = v;
    else if (key == "pr_merged") w.pr_merged = v;
    else throw Error(ErrorCode::kInvalidArgument, "unknown weight '" + key + "'");
  }
  w.validate();
  return w;
}

nlohmann::json BehaviorWeights::to_json() const {
  return {{"comment", comment},
          {"open_issue", open_issue},
          {"open_pr", open_pr},
          {"review_pr", review_pr},
          {"pr_merged", pr_merged}};
}

bool BehaviorCounts::empty() const {
  return std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; });
}

BehaviorCounts &BehaviorCounts::operator+=(const BehaviorCounts &other) {
  for (std::size_t i = 0; i < kBehaviorCount; ++i) counts[i] += other.counts[i];
  return *this;
}

nlohmann::json BehaviorCounts::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (Behavior b : kAllBehaviors) j[std::string(to_string(b))] = (*this)[b];
  return j;
}

double activity(const BehaviorCounts &counts, const BehaviorWeights &weights) {
  double score = 0.0;
  for (Behavior b : kAllBehaviors) {
    score += weights[b] * static_cast<double>(counts[b]);
  }
  return score;
}

CountsMap count_behaviors(std::span<const CollabEvent> events,
                          const Window &window, CountScope scope) {
  CountsMap out;
  for (const CollabEvent &e : events) {
    if (!window.contains(e.created_at)) continue;
    auto behavior = classify_behavior(e);
    if (!behavior) continue;
    ActivityKey key;
    if (scope != CountScope::kRepo) key.developer_id = e.actor_id;
    if (scope != CountScope::kDeveloper) key.repo_id = e.repo_id;
    ++out[key][*behavior];
  }
  return out;
}

std::vector<ActivityRecord> activity_records(std::span<const CollabEvent> events,
                                             const Window &window,
                                             const BehaviorWeights &weights) {
  std::vector<ActivityRecord> records;
  for (const auto &[key, counts] :
       count_behaviors(events, window, CountScope::kDeveloperRepo)) {
    records.push_back({key.developer_id, key.repo_id, window, counts,
                       activity(counts, weights)});
  }
  return records;
}

std::vector<DeveloperRank> rank_developers(std::span<const ActivityRecord> records,
                                           const Window &window,
                                           std::size_t limit) {
  std::unordered_map<std::int64_t, std::size_t> index;
  std::vector<DeveloperRank> ranks;
  for (const ActivityRecord &r : records) {
    if (!window.covers(r.window)) continue;
    auto [it, inserted] = index.try_emplace(r.developer_id, ranks.size());
    if (inserted) ranks.push_back({r.developer_id, 0.0, {}});
    DeveloperRank &dr = ranks[it->second];
    dr.score += r.score;
    dr.totals += r.counts;
  }
  std::sort(ranks.begin(), ranks.end(), [](const auto &a, const auto &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.developer_id < b.developer_id;
  });
  if (limit != 0 && ranks.size() > limit) ranks.resize(limit);
  return ranks;
}

double project_activity(std::span<const ActivityRecord> records,
                        std::int64_t repo_id, const Window &window) {
  double total = 0.0;
  for (const ActivityRecord &r : records) {
    if (r.repo_id == repo_id && window.covers(r.window)) total += r.score;
  }
  return total;
}

}  // namespace ecodigger
