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

#include "core/metrics.hpp"

#include <array>
#include <string>

#include "core/error.hpp"

namespace ecodigger {
namespace {

constexpr std::array<MetricInfo, 18> kRegistry = {{
    {"active_dates_and_times", "contributor events by UTC weekday and hour", MetricKind::kHeatmap, true},
    {"technical_fork", "forks created", MetricKind::kCount, true},
    {"new_contributors", "contributors whose first contribution falls in the window", MetricKind::kContributors, false},
    {"inactive_contributors", "contributors active in the lookback gap but not in the window", MetricKind::kCount, false},
    {"bus_factor", "fewest top contributors holding more than half of the activity", MetricKind::kCount, false},
    {"issues_new", "issues opened", MetricKind::kCount, true},
    {"issues_closed", "issue close events", MetricKind::kCount, true},
    {"issue_response_time", "first non-author response on issues opened in the window", MetricKind::kDuration, false},
    {"issue_resolution_duration", "open-to-close time of issues closed in the window", MetricKind::kDuration, false},
    {"issue_age", "age of issues still open at the end of the window", MetricKind::kDuration, false},
    {"code_change_lines", "lines added plus removed by PRs merged in the window", MetricKind::kLines, true},
    {"change_requests", "pull requests opened", MetricKind::kCount, true},
    {"change_requests_accepted", "pull requests merged", MetricKind::kCount, true},
    {"change_request_reviews", "review comments on pull requests", MetricKind::kCount, true},
    {"change_request_response_time", "first non-author response on PRs opened in the window", MetricKind::kDuration, false},
    {"change_request_resolution_duration", "open-to-close-or-merge time of PRs resolved in the window", MetricKind::kDuration, false},
    {"change_request_age", "age of pull requests still open at the end of the window", MetricKind::kDuration, false},
    {"activity", "sum of developer activity scores", MetricKind::kScore, true},
}};

std::string option_string(const nlohmann::json &options, const char *key,
                          const char *fallback) {
  auto it = options.find(key);
  if (it == options.end()) return fallback;
  if (!it->is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("option '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

nlohmann::json stats_json(const std::optional<DurationStats> &s) {
  return s ? s->to_json() : nlohmann::json(nullptr);
}

}  // namespace

std::span<const MetricInfo> metric_registry() { return kRegistry; }

const MetricInfo *find_metric(std::string_view name) {
  for (const MetricInfo &m : kRegistry) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const MetricInfo &require_metric(std::string_view name) {
  if (const MetricInfo *m = find_metric(name)) return *m;
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + std::string(name) + "'");
}

MetricEvaluator::MetricEvaluator(std::span<const CollabEvent> events,
                                 Timestamp coverage_start,
                                 const nlohmann::json &options)
    : events_(events),
      coverage_start_(coverage_start),
      options_(options.is_null() ? nlohmann::json::object() : options),
      contributor_(ContributorConfig::from_options(options_)) {
  const std::string stat = option_string(options_, "stat", "mean");
  if (stat != "mean" && stat != "median" && stat != "p90" && stat != "count") {
    throw Error(ErrorCode::kInvalidArgument, "option 'stat' must be mean, median, p90 or count");
  }
  const std::string lines = option_string(options_, "lines", "sum");
  if (lines != "sum" && lines != "added" && lines != "removed") {
    throw Error(ErrorCode::kInvalidArgument, "option 'lines' must be sum, added or removed");
  }
}

const ThreadSet &MetricEvaluator::threads() {
  if (!threads_) threads_ = assemble_threads(events_);
  return *threads_;
}

nlohmann::json MetricEvaluator::evaluate(std::string_view metric, const Window &w) {
  const std::string name(require_metric(metric).name);
  if (name == "technical_fork") return technical_fork(events_, w);
  if (name == "activity") {
    auto records = activity_records(events_, w, contributor_.weights);
    double total = 0.0;
    for (const auto &r : records) total += r.score;
    return total;
  }
  if (name == "active_dates_and_times" || name == "new_contributors" ||
      name == "inactive_contributors" || name == "bus_factor") {
    auto c = contributor_metrics(events_, w, contributor_, coverage_start_);
    if (name == "inactive_contributors") return c.inactive_count;
    if (name == "bus_factor") return c.bus_factor;
    if (name == "new_contributors") {
      return {{"count", c.new_contributors.size()},
              {"ids", c.new_contributors},
              {"history_complete", c.history_complete}};
    }
    std::uint64_t total = 0;
    for (const auto &row : c.heatmap) {
      for (auto v : row) total += v;
    }
    return {{"weekday_hour", c.heatmap}, {"total", total}};
  }
  const ThreadSet &t = threads();
  if (name.starts_with("issue")) {
    auto m = issue_metrics(t.issues, w);
    if (name == "issues_new") return m.new_count;
    if (name == "issues_closed") return m.closed_count;
    if (name == "issue_response_time") return stats_json(m.response_time);
    if (name == "issue_resolution_duration") return stats_json(m.resolution_duration);
    return stats_json(m.age);
  }
  if (name == "code_change_lines") {
    auto l = code_change_lines(t.change_requests, w);
    return {{"added", l.added}, {"removed", l.removed}, {"sum", l.sum}, {"skipped", l.skipped}};
  }
  auto m = change_request_metrics(t.change_requests, w);
  if (name == "change_requests") return m.opened;
  if (name == "change_requests_accepted") return m.accepted;
  if (name == "change_request_reviews") return m.reviews;
  if (name == "change_request_response_time") return stats_json(m.response_time);
  if (name == "change_request_resolution_duration") return stats_json(m.resolution_duration);
  return stats_json(m.age);
}

double MetricEvaluator::duration_scalar(const std::optional<DurationStats> &stats) const {
  if (!stats) return 0.0;
  const std::string stat = option_string(options_, "stat", "mean");
  if (stat == "median") return stats->median;
  if (stat == "p90") return stats->p90;
  if (stat == "count") return static_cast<double>(stats->count);
  return stats->mean;
}

double MetricEvaluator::scalar(std::string_view metric, const Window &w) {
  const MetricInfo &info = require_metric(metric);
  nlohmann::json v = evaluate(metric, w);
  switch (info.kind) {
    case MetricKind::kCount:
    case MetricKind::kScore:
      return v.get<double>();
    case MetricKind::kDuration:
      if (v.is_null()) return 0.0;
      return duration_scalar(DurationStats{v["count"].get<std::size_t>(), v["mean"].get<double>(),
                                           v["median"].get<double>(), v["p90"].get<double>()});
    case MetricKind::kLines:
      return v[option_string(options_, "lines", "sum")].get<double>();
    case MetricKind::kContributors:
      return v["count"].get<double>();
    case MetricKind::kHeatmap:
      return v["total"].get<double>();
  }
  return 0.0;
}

}  // namespace ecodigger
