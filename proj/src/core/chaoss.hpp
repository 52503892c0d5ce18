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

#ifndef ECODIGGER_CORE_CHAOSS_HPP_
#define ECODIGGER_CORE_CHAOSS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/activity.hpp"
#include "core/event.hpp"
#include "core/time.hpp"

namespace ecodigger {

// Close (true) / reopen (false) transitions of a thread, in time order.
using StateChanges = std::vector<std::pair<Timestamp, bool>>;

struct IssueThread {
  std::int64_t repo_id = 0;
  std::int64_t issue_number = 0;
  std::optional<Timestamp> opened_at;  // absent for partial threads
  std::optional<std::int64_t> opened_by;
  std::optional<Timestamp> closed_at;  // latest close, cleared by a reopen
  std::optional<Timestamp> first_response_at;
  bool is_pr = false;
  StateChanges state_changes;
  std::size_t event_count = 0;

  bool partial() const { return !opened_at.has_value(); }
  bool open_at(Timestamp t) const;
};

struct ChangeRequest {
  std::int64_t repo_id = 0;
  std::int64_t pr_number = 0;
  std::optional<Timestamp> opened_at;
  std::optional<std::int64_t> opened_by;
  std::optional<Timestamp> closed_at;
  bool merged = false;
  std::optional<Timestamp> merged_at;
  std::vector<Timestamp> review_times;  // review comments
  std::optional<Timestamp> first_response_at;
  std::optional<std::int64_t> additions;
  std::optional<std::int64_t> deletions;
  StateChanges state_changes;
  std::size_t event_count = 0;

  std::size_t review_count() const { return review_times.size(); }
  bool partial() const { return !opened_at.has_value(); }
  bool open_at(Timestamp t) const;
};

struct ThreadSet {
  std::vector<IssueThread> issues;  // by (repo, number)
  std::vector<ChangeRequest> change_requests;
  std::size_t partial_issues = 0;
  std::size_t partial_change_requests = 0;
  // Issue-scoped events without a thread number.
  std::size_t unattributed_events = 0;
};

// Rebuilds issue and PR threads from their events. Input order does not
// matter; events are processed by (created_at, event_id). A response is
// the earliest comment or review by someone other than the opener.
ThreadSet assemble_threads(std::span<const CollabEvent> events);

struct DurationStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;  // mean of the two middle samples for even counts
  double p90 = 0.0;     // nearest-rank
  nlohmann::json to_json() const;
};

// Seconds. nullopt for an empty sample.
std::optional<DurationStats> summarize_durations(std::vector<std::int64_t> samples);

struct IssueMetrics {
  std::size_t new_count = 0;
  std::size_t closed_count = 0;
  std::optional<DurationStats> response_time;
  std::optional<DurationStats> resolution_duration;
  std::optional<DurationStats> age;
};

IssueMetrics issue_metrics(std::span<const IssueThread> threads, const Window &window);

struct ChangeRequestMetrics {
  std::size_t opened = 0;
  std::size_t accepted = 0;
  std::size_t reviews = 0;
  std::optional<DurationStats> response_time;
  std::optional<DurationStats> resolution_duration;
  std::optional<DurationStats> age;
};

ChangeRequestMetrics change_request_metrics(std::span<const ChangeRequest> crs,
                                            const Window &window);

struct CodeChangeLines {
  std::int64_t added = 0;
  std::int64_t removed = 0;
  std::int64_t sum = 0;
  std::size_t skipped = 0;  // merged PRs without line counts
};

// Over PRs merged inside the window.
CodeChangeLines code_change_lines(std::span<const ChangeRequest> crs,
                                  const Window &window);

struct ContributorConfig {
  Timestamp inactivity_gap = 180 * kSecondsPerDay;
  double bus_factor_share = 0.5;
  BehaviorWeights weights;

  static ContributorConfig from_options(const nlohmann::json &options);
};

using Heatmap = std::array<std::array<std::uint64_t, 24>, 7>;  // [weekday][hour]

struct ContributorMetrics {
  std::vector<std::int64_t> new_contributors;  // ascending ids
  std::size_t inactive_count = 0;
  std::size_t bus_factor = 0;  // 0 only when nobody was active
  Heatmap heatmap{};
  // False when the data does not reach back before the window; "new" then
  // means "first seen in the corpus".
  bool history_complete = true;
};

// `events` may include everything before the window (history). Contributor
// events are the five activity behaviors. `coverage_start` is the earliest
// instant the underlying data covers.
ContributorMetrics contributor_metrics(std::span<const CollabEvent> events,
                                       const Window &window,
                                       const ContributorConfig &cfg,
                                       Timestamp coverage_start);

// Smallest k whose top-k activities exceed `share` of the total.
std::size_t bus_factor(std::vector<double> activities, double share = 0.5);

std::size_t technical_fork(std::span<const CollabEvent> events, const Window &window);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_CHAOSS_HPP_
