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

#include "core/chaoss.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "core/error.hpp"

namespace ecodigger {
namespace {

bool open_at_impl(const std::optional<Timestamp> &opened_at,
                  const StateChanges &changes, Timestamp t) {
  if (!opened_at || *opened_at >= t) return false;
  bool open = true;
  for (const auto &[when, closed] : changes) {
    if (when >= t) break;
    open = !closed;
  }
  return open;
}

template <typename Thread>
void note_response(Thread &thread, const CollabEvent &e) {
  if (thread.first_response_at || !thread.opened_by || !thread.opened_at) return;
  if (e.actor_id == *thread.opened_by || e.created_at < *thread.opened_at) return;
  thread.first_response_at = e.created_at;
}

template <typename Thread>
void apply_state(Thread &thread, const CollabEvent &e) {
  if (e.has_action("opened")) {
    if (!thread.opened_at) {
      thread.opened_at = e.created_at;
      thread.opened_by = e.actor_id;
    }
  } else if (e.has_action("closed")) {
    thread.closed_at = e.created_at;
    thread.state_changes.emplace_back(e.created_at, true);
  } else if (e.has_action("reopened")) {
    thread.closed_at.reset();
    thread.state_changes.emplace_back(e.created_at, false);
  }
}

void add_samples(std::vector<std::int64_t> &samples, Timestamp from, Timestamp to) {
  samples.push_back(to - from);
}

}  // namespace

bool IssueThread::open_at(Timestamp t) const { return open_at_impl(opened_at, state_changes, t); }
bool ChangeRequest::open_at(Timestamp t) const { return open_at_impl(opened_at, state_changes, t); }

ThreadSet assemble_threads(std::span<const CollabEvent> events) {
  std::vector<const CollabEvent *> ordered;
  for (const CollabEvent &e : events) {
    switch (e.event_type) {
      case EventType::kIssues:
      case EventType::kIssueComment:
      case EventType::kPullRequest:
      case EventType::kPullRequestReviewComment:
        ordered.push_back(&e);
        break;
      default:
        break;
    }
  }
  std::sort(ordered.begin(), ordered.end(), [](const auto *x, const auto *y) {
    if (x->created_at != y->created_at) return x->created_at < y->created_at;
    return x->event_id < y->event_id;
  });

  ThreadSet out;
  std::map<std::pair<std::int64_t, std::int64_t>, IssueThread> issues;
  std::map<std::pair<std::int64_t, std::int64_t>, ChangeRequest> prs;
  for (const CollabEvent *e : ordered) {
    if (!e->issue_number) {
      ++out.unattributed_events;
      continue;
    }
    const auto key = std::make_pair(e->repo_id, *e->issue_number);
    const bool on_pr = e->event_type == EventType::kPullRequest ||
                       e->event_type == EventType::kPullRequestReviewComment ||
                       e->issue_is_pr.value_or(false);
    if (on_pr) {
      auto [it, inserted] = prs.try_emplace(key);
      ChangeRequest &cr = it->second;
      if (inserted) {
        cr.repo_id = key.first;
        cr.pr_number = key.second;
      }
      ++cr.event_count;
      switch (e->event_type) {
        case EventType::kPullRequest:
          apply_state(cr, *e);
          if (e->has_action("closed") && e->pr_merged.value_or(false)) {
            cr.merged = true;
            cr.merged_at = e->created_at;
          }
          if (e->pr_additions) cr.additions = e->pr_additions;
          if (e->pr_deletions) cr.deletions = e->pr_deletions;
          break;
        case EventType::kPullRequestReviewComment:
          cr.review_times.push_back(e->created_at);
          note_response(cr, *e);
          break;
        default:
          note_response(cr, *e);
          break;
      }
    } else {
      auto [it, inserted] = issues.try_emplace(key);
      IssueThread &thread = it->second;
      if (inserted) {
        thread.repo_id = key.first;
        thread.issue_number = key.second;
      }
      ++thread.event_count;
      if (e->event_type == EventType::kIssues) {
        apply_state(thread, *e);
      } else {
        note_response(thread, *e);
      }
    }
  }
  for (auto &[key, t] : issues) {
    if (t.partial()) ++out.partial_issues;
    out.issues.push_back(std::move(t));
  }
  for (auto &[key, cr] : prs) {
    if (cr.partial()) ++out.partial_change_requests;
    out.change_requests.push_back(std::move(cr));
  }
  return out;
}

nlohmann::json DurationStats::to_json() const {
  return {{"count", count}, {"mean", mean}, {"median", median}, {"p90", p90}};
}

std::optional<DurationStats> summarize_durations(std::vector<std::int64_t> samples) {
  if (samples.empty()) return std::nullopt;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  DurationStats s;
  s.count = n;
  long double sum = 0;
  for (auto v : samples) sum += static_cast<long double>(v);
  s.mean = static_cast<double>(sum / static_cast<long double>(n));
  if (n % 2 == 1) {
    s.median = static_cast<double>(samples[n / 2]);
  } else {
    s.median = (static_cast<double>(samples[n / 2 - 1]) +
                static_cast<double>(samples[n / 2])) / 2.0;
  }
  const std::size_t rank = (9 * n + 9) / 10;  // ceil(0.9 n)
  s.p90 = static_cast<double>(samples[rank - 1]);
  return s;
}

IssueMetrics issue_metrics(std::span<const IssueThread> threads, const Window &window) {
  IssueMetrics m;
  std::vector<std::int64_t> response, resolution, age;
  for (const IssueThread &t : threads) {
    for (const auto &[when, closed] : t.state_changes) {
      if (!closed || !window.contains(when)) continue;
      ++m.closed_count;
      if (t.opened_at) add_samples(resolution, *t.opened_at, when);
    }
    if (t.partial()) continue;
    if (window.contains(*t.opened_at)) {
      ++m.new_count;
      if (t.first_response_at) add_samples(response, *t.opened_at, *t.first_response_at);
    }
    if (t.open_at(window.stop())) add_samples(age, *t.opened_at, window.stop());
  }
  m.response_time = summarize_durations(std::move(response));
  m.resolution_duration = summarize_durations(std::move(resolution));
  m.age = summarize_durations(std::move(age));
  return m;
}

ChangeRequestMetrics change_request_metrics(std::span<const ChangeRequest> crs,
                                            const Window &window) {
  ChangeRequestMetrics m;
  std::vector<std::int64_t> response, resolution, age;
  for (const ChangeRequest &cr : crs) {
    for (Timestamp r : cr.review_times) {
      if (window.contains(r)) ++m.reviews;
    }
    if (cr.merged_at && window.contains(*cr.merged_at)) ++m.accepted;
    for (const auto &[when, closed] : cr.state_changes) {
      if (closed && window.contains(when) && cr.opened_at) {
        add_samples(resolution, *cr.opened_at, when);
      }
    }
    if (cr.partial()) continue;
    if (window.contains(*cr.opened_at)) {
      ++m.opened;
      if (cr.first_response_at) add_samples(response, *cr.opened_at, *cr.first_response_at);
    }
    if (cr.open_at(window.stop())) add_samples(age, *cr.opened_at, window.stop());
  }
  m.response_time = summarize_durations(std::move(response));
  m.resolution_duration = summarize_durations(std::move(resolution));
  m.age = summarize_durations(std::move(age));
  return m;
}

CodeChangeLines code_change_lines(std::span<const ChangeRequest> crs,
                                  const Window &window) {
  CodeChangeLines lines;
  for (const ChangeRequest &cr : crs) {
    if (!cr.merged_at || !window.contains(*cr.merged_at)) continue;
    if (!cr.additions || !cr.deletions) {
      ++lines.skipped;
      continue;
    }
    lines.added += *cr.additions;
    lines.removed += *cr.deletions;
  }
  lines.sum = lines.added + lines.removed;
  return lines;
}

ContributorConfig ContributorConfig::from_options(const nlohmann::json &options) {
  ContributorConfig cfg;
  if (options.is_null()) return cfg;
  if (!options.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "options must be a JSON object");
  }
  if (auto it = options.find("inactivity_gap_days"); it != options.end()) {
    if (!it->is_number() || it->get<double>() < 0) {
      throw Error(ErrorCode::kInvalidArgument, "inactivity_gap_days must be >= 0");
    }
    cfg.inactivity_gap = static_cast<Timestamp>(
        std::llround(it->get<double>() * static_cast<double>(kSecondsPerDay)));
  }
  if (auto it = options.find("bus_factor_share"); it != options.end()) {
    if (!it->is_number() || it->get<double>() <= 0 || it->get<double>() >= 1) {
      throw Error(ErrorCode::kInvalidArgument, "bus_factor_share must lie in (0, 1)");
    }
    cfg.bus_factor_share = it->get<double>();
  }
  if (auto it = options.find("weights"); it != options.end()) {
    cfg.weights = BehaviorWeights::from_json(*it);
  }
  return cfg;
}

std::size_t bus_factor(std::vector<double> activities, double share) {
  std::sort(activities.begin(), activities.end(), std::greater<>());
  const double total = std::accumulate(activities.begin(), activities.end(), 0.0);
  if (!(total > 0.0)) return 0;
  double running = 0.0;
  for (std::size_t k = 0; k < activities.size(); ++k) {
    running += activities[k];
    if (running > share * total) return k + 1;
  }
  return activities.size();
}

ContributorMetrics contributor_metrics(std::span<const CollabEvent> events,
                                       const Window &window,
                                       const ContributorConfig &cfg,
                                       Timestamp coverage_start) {
  ContributorMetrics m;
  m.history_complete = coverage_start < window.start();
  std::map<std::int64_t, Timestamp> first_seen;
  std::set<std::int64_t> recent, active;
  std::map<std::int64_t, BehaviorCounts> counts;
  const Timestamp lookback = window.start() - cfg.inactivity_gap;
  for (const CollabEvent &e : events) {
    auto behavior = classify_behavior(e);
    if (!behavior) continue;
    auto [it, inserted] = first_seen.try_emplace(e.actor_id, e.created_at);
    if (!inserted) it->second = std::min(it->second, e.created_at);
    if (e.created_at >= lookback && e.created_at < window.start()) recent.insert(e.actor_id);
    if (!window.contains(e.created_at)) continue;
    active.insert(e.actor_id);
    ++counts[e.actor_id][*behavior];
    auto [day, hour] = weekday_hour(e.created_at);
    ++m.heatmap[day][hour];
  }
  for (const auto &[actor, first] : first_seen) {
    if (window.contains(first)) m.new_contributors.push_back(actor);
  }
  for (std::int64_t actor : recent) {
    if (!active.contains(actor)) ++m.inactive_count;
  }
  std::vector<double> scores;
  for (const auto &[actor, c] : counts) scores.push_back(activity(c, cfg.weights));
  m.bus_factor = bus_factor(std::move(scores), cfg.bus_factor_share);
  return m;
}

std::size_t technical_fork(std::span<const CollabEvent> events, const Window &window) {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const auto &e) {
    return e.event_type == EventType::kFork && window.contains(e.created_at);
  }));
}

}  // namespace ecodigger
