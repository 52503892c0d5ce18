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

#ifndef ECODIGGER_CORE_EVENT_HPP_
#define ECODIGGER_CORE_EVENT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "core/time.hpp"

namespace ecodigger {

// GitHub public event types consumed downstream. Every other type is kept
// as kOther so it still counts as a successfully parsed line.
enum class EventType : std::uint8_t {
  kIssues = 0,
  kIssueComment = 1,
  kPullRequest = 2,
  kPullRequestReviewComment = 3,
  kFork = 4,
  kWatch = 5,
  kPush = 6,
  kOther = 7,
};

std::string_view to_string(EventType type);
EventType event_type_from_string(std::string_view name);

// The five collaboration behaviors that carry activity weight.
enum class Behavior : std::uint8_t {
  kComment = 0,
  kOpenIssue = 1,
  kOpenPR = 2,
  kReviewPR = 3,
  kPRMerged = 4,
};

inline constexpr std::size_t kBehaviorCount = 5;
inline constexpr std::array<Behavior, kBehaviorCount> kAllBehaviors = {
    Behavior::kComment, Behavior::kOpenIssue, Behavior::kOpenPR,
    Behavior::kReviewPR, Behavior::kPRMerged};

std::string_view to_string(Behavior behavior);

// One normalized GitHub event.
struct CollabEvent {
  std::string event_id;
  EventType event_type = EventType::kOther;
  std::optional<std::string> action;
  std::int64_t actor_id = 0;
  std::string actor_login;
  std::int64_t repo_id = 0;
  std::string repo_name;  // owner/name
  std::optional<std::int64_t> org_id;
  std::optional<std::string> org_login;
  Timestamp created_at = 0;
  std::optional<std::int64_t> issue_number;
  // True when an issue-scoped event refers to a pull request thread.
  std::optional<bool> issue_is_pr;
  // Present only for PullRequestEvent with action "closed".
  std::optional<bool> pr_merged;
  std::optional<std::int64_t> pr_additions;
  std::optional<std::int64_t> pr_deletions;
  std::optional<std::string> comment_author_association;

  bool actor_is_bot() const;
  bool has_action(std::string_view a) const { return action && *action == a; }
};

// Pure function of (event_type, action, pr_merged).
std::optional<Behavior> classify_behavior(const CollabEvent &e);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_EVENT_HPP_
