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

#include "core/event.hpp"

namespace ecodigger {

namespace {
constexpr std::array<std::string_view, 8> kTypeNames = {
    "IssuesEvent",
    "IssueCommentEvent",
    "PullRequestEvent",
    "PullRequestReviewCommentEvent",
    "ForkEvent",
    "WatchEvent",
    "PushEvent",
    "Other",
};

constexpr std::array<std::string_view, kBehaviorCount> kBehaviorNames = {
    "comment", "open_issue", "open_pr", "review_pr", "pr_merged"};
}  // namespace

std::string_view to_string(EventType type) {
  return kTypeNames[static_cast<std::size_t>(type)];
}

EventType event_type_from_string(std::string_view name) {
  for (std::size_t i = 0; i + 1 < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<EventType>(i);
  }
  return EventType::kOther;
}

std::string_view to_string(Behavior behavior) {
  return kBehaviorNames[static_cast<std::size_t>(behavior)];
}

bool CollabEvent::actor_is_bot() const {
  return actor_login.ends_with("[bot]");
}

std::optional<Behavior> classify_behavior(const CollabEvent &e) {
  switch (e.event_type) {
    case EventType::kIssueComment:
      return Behavior::kComment;
    case EventType::kIssues:
      if (e.has_action("opened")) return Behavior::kOpenIssue;
      return std::nullopt;
    case EventType::kPullRequest:
      if (e.has_action("opened")) return Behavior::kOpenPR;
      if (e.has_action("closed") && e.pr_merged.value_or(false)) {
        return Behavior::kPRMerged;
      }
      return std::nullopt;
    case EventType::kPullRequestReviewComment:
      return Behavior::kReviewPR;
    default:
      return std::nullopt;
  }
}

}  // namespace ecodigger
