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

#ifndef ECODIGGER_CORE_ACTIVITY_HPP_
#define ECODIGGER_CORE_ACTIVITY_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "core/event.hpp"
#include "core/time.hpp"

namespace ecodigger {

// Per-behavior weights of the activity score. Defaults: comment 1,
// open issue 2, open PR 3, review PR 4, PR merged 2.
struct BehaviorWeights {
  double comment = 1.0;
  double open_issue = 2.0;
  double open_pr = 3.0;
  double review_pr = 4.0;
  double pr_merged = 2.0;

  double operator[](Behavior b) const;
  BehaviorWeights scaled(double k) const;

  // Throws Error(kInvalidArgument) on a negative or non-finite weight.
  void validate() const;

  // Missing keys keep their default; unknown keys are rejected.
  static BehaviorWeights from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

struct BehaviorCounts {
  std::array<std::uint64_t, kBehaviorCount> counts{};

  std::uint64_t &operator[](Behavior b) { return counts[static_cast<std::size_t>(b)]; }
  std::uint64_t operator[](Behavior b) const { return counts[static_cast<std::size_t>(b)]; }

  bool empty() const;
  BehaviorCounts &operator+=(const BehaviorCounts &other);
  friend BehaviorCounts operator+(BehaviorCounts a, const BehaviorCounts &b) { return a += b; }
  bool operator==(const BehaviorCounts &) const = default;

  nlohmann::json to_json() const;
};

// Weighted sum of behavior counts.
double activity(const BehaviorCounts &counts, const BehaviorWeights &weights);

enum class CountScope { kDeveloperRepo, kDeveloper, kRepo };

// Aggregation key. The axis not covered by the scope is 0.
struct ActivityKey {
  std::int64_t developer_id = 0;
  std::int64_t repo_id = 0;
  auto operator<=>(const ActivityKey &) const = default;
};

using CountsMap = std::map<ActivityKey, BehaviorCounts>;

// Counts classified events with created_at in `window`. Keys without any
// counted event are absent.
CountsMap count_behaviors(std::span<const CollabEvent> events,
                          const Window &window, CountScope scope);

struct ActivityRecord {
  std::int64_t developer_id = 0;
  std::int64_t repo_id = 0;
  Window window;
  BehaviorCounts counts;
  double score = 0.0;
};

// One record per (developer, repo) in the window.
std::vector<ActivityRecord> activity_records(std::span<const CollabEvent> events,
                                             const Window &window,
                                             const BehaviorWeights &weights);

struct DeveloperRank {
  std::int64_t developer_id = 0;
  double score = 0.0;
  BehaviorCounts totals;
};

// Developers by descending total score over records inside `window`,
// ties by ascending id. limit 0 means unlimited.
std::vector<DeveloperRank> rank_developers(std::span<const ActivityRecord> records,
                                           const Window &window,
                                           std::size_t limit);

// Sum of the repo's developer scores in the window.
double project_activity(std::span<const ActivityRecord> records,
                        std::int64_t repo_id, const Window &window);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_ACTIVITY_HPP_
