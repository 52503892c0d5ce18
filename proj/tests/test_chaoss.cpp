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

#include <set>

#include <doctest.h>

#include "core/chaoss.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"
#include "support.hpp"

using namespace ecodigger;
using namespace ecodigger::testing;

namespace {

const Timestamp kMar = make_timestamp(2019, 3, 1);
const Window kMarch = Window::month({2019, 3});

CollabEvent close_issue(std::int64_t actor, std::int64_t repo, Timestamp at, std::int64_t n) {
  return EventBuilder(EventType::kIssues, actor, repo, at).action("closed").issue(n);
}

}  // namespace

TEST_SUITE("chaoss-metrics") {

TEST_CASE("duration summaries") {
  CHECK_FALSE(summarize_durations({}).has_value());
  auto one = summarize_durations({5});
  CHECK(one->count == 1);
  CHECK(one->mean == 5);
  CHECK(one->median == 5);
  CHECK(one->p90 == 5);
  auto even = summarize_durations({4, 1, 3, 2});
  CHECK(even->median == 2.5);
  CHECK(even->mean == 2.5);
  CHECK(even->p90 == 4);
  std::vector<std::int64_t> ten;
  for (int i = 10; i >= 1; --i) ten.push_back(i * 100);
  CHECK(summarize_durations(ten)->p90 == 900);  // rank ceil(0.9 * 10) = 9
  std::vector<std::int64_t> eleven(ten);
  eleven.push_back(1100);
  CHECK(summarize_durations(eleven)->p90 == 1000);  // rank 10
}

TEST_CASE("bus factor") {
  CHECK(bus_factor({}) == 0);
  CHECK(bus_factor({0, 0}) == 0);
  CHECK(bus_factor({10}) == 1);
  CHECK(bus_factor({5, 5}) == 2);  // exactly half is not more than half
  CHECK(bus_factor({6, 5}) == 1);
  CHECK(bus_factor({1, 1, 1, 1}) == 3);
  CHECK(bus_factor({1, 1, 1, 1}, 0.8) == 4);
  CHECK(bus_factor({3, 1, 1, 1, 1, 1}, 0.25) == 1);
}

TEST_CASE("threads are rebuilt from their events") {
  std::vector<CollabEvent> events = {
      open_issue(1, 9, kMar, 1), comment(1, 9, kMar + 10, 1), comment(2, 9, kMar + 60, 1),
      close_issue(1, 9, kMar + 100, 1),
      EventBuilder(EventType::kIssues, 1, 9, kMar + 200).action("reopened").issue(1),
      comment(3, 9, kMar + 5, 7),  // thread opened before the data starts
      EventBuilder(EventType::kIssueComment, 3, 9, kMar).action("created"),  // no number
      open_pr(4, 9, kMar, 2), review_pr(4, 9, kMar + 1, 2), comment(5, 9, kMar + 2, 2)};
  events.back().issue_is_pr = true;
  auto t = assemble_threads(events);
  REQUIRE(t.issues.size() == 2);
  CHECK(t.partial_issues == 1);
  CHECK(t.unattributed_events == 1);
  const IssueThread &i1 = t.issues[0];
  CHECK(i1.opened_by == 1);
  CHECK(i1.first_response_at == kMar + 60);
  CHECK_FALSE(i1.closed_at.has_value());
  CHECK(i1.open_at(kMar + 50));
  CHECK_FALSE(i1.open_at(kMar + 150));
  CHECK(i1.open_at(kMar + 300));
  REQUIRE(t.change_requests.size() == 1);
  CHECK(t.change_requests[0].review_count() == 1);
  CHECK(t.change_requests[0].first_response_at == kMar + 2);  // own review is not a response
  // Input order does not matter.
  std::reverse(events.begin(), events.end());
  auto r = assemble_threads(events);
  CHECK(r.issues[0].first_response_at == i1.first_response_at);
  CHECK(r.issues[0].state_changes == i1.state_changes);
}

TEST_CASE("issue metrics across window edges") {
  const Timestamp feb = make_timestamp(2019, 2, 20);
  std::vector<CollabEvent> events = {
      open_issue(1, 9, feb, 1), close_issue(2, 9, kMar + 3600, 1),
      open_issue(1, 9, kMar + 7200, 2),
      open_issue(1, 9, make_timestamp(2019, 3, 31, 23), 3), close_issue(1, 9, make_timestamp(2019, 4, 1), 3)};
  auto m = issue_metrics(assemble_threads(events).issues, kMarch);
  CHECK(m.new_count == 2);
  CHECK(m.closed_count == 1);
  CHECK(m.resolution_duration->mean == double(kMar + 3600 - feb));
  REQUIRE(m.age.has_value());
  CHECK(m.age->count == 2);  // issue 3 closes exactly at the window end
  CHECK_FALSE(m.response_time.has_value());
}

TEST_CASE("change request metrics and lines") {
  std::vector<CollabEvent> events = {
      open_pr(1, 9, kMar, 1),
      EventBuilder(EventType::kPullRequest, 2, 9, kMar + 50).action("closed").issue(1).merged(true).lines(10, 4),
      open_pr(1, 9, kMar, 2),
      EventBuilder(EventType::kPullRequest, 2, 9, kMar + 70).action("closed").issue(2).merged(true),
      open_pr(1, 9, kMar, 3),
      EventBuilder(EventType::kPullRequest, 2, 9, kMar + 90).action("closed").issue(3).merged(false).lines(99, 99)};
  auto t = assemble_threads(events);
  auto m = change_request_metrics(t.change_requests, kMarch);
  CHECK(m.opened == 3);
  CHECK(m.accepted == 2);
  CHECK(m.resolution_duration->count == 3);
  CHECK_FALSE(m.age.has_value());
  auto lines = code_change_lines(t.change_requests, kMarch);
  CHECK(lines.added == 10);
  CHECK(lines.removed == 4);
  CHECK(lines.sum == 14);
  CHECK(lines.skipped == 1);
}

TEST_CASE("contributors") {
  const Timestamp oct = make_timestamp(2018, 10, 1);
  std::vector<CollabEvent> events = {
      comment(1, 9, oct), comment(2, 9, oct), comment(2, 9, kMar + 10), open_pr(3, 9, kMar + 20),
      EventBuilder(EventType::kWatch, 4, 9, kMar), comment(5, 9, make_timestamp(2018, 1, 1))};
  auto m = contributor_metrics(events, kMarch, ContributorConfig{}, make_timestamp(2018, 1, 1));
  CHECK(m.new_contributors == std::vector<std::int64_t>{3});
  CHECK(m.inactive_count == 1);  // 5 is older than the gap
  CHECK(m.bus_factor == 1);
  CHECK(m.history_complete);
  auto [day, hour] = weekday_hour(kMar + 10);
  CHECK(m.heatmap[day][hour] == 2);
  auto cut = contributor_metrics(events, kMarch, ContributorConfig{}, kMar);
  CHECK_FALSE(cut.history_complete);
  ContributorConfig wide;
  wide.inactivity_gap = 450 * kSecondsPerDay;
  CHECK(contributor_metrics(events, kMarch, wide, 0).inactive_count == 2);
}

TEST_CASE("contributor options") {
  auto cfg = ContributorConfig::from_options(
      nlohmann::json::parse(R"({"inactivity_gap_days": 30, "bus_factor_share": 0.8, "weights": {"comment": 0}})"));
  CHECK(cfg.inactivity_gap == 30 * kSecondsPerDay);
  CHECK(cfg.bus_factor_share == 0.8);
  CHECK(cfg.weights.comment == 0);
  CHECK_THROWS_AS(ContributorConfig::from_options(nlohmann::json::parse(R"({"bus_factor_share": 1.5})")), Error);
  CHECK_THROWS_AS(ContributorConfig::from_options(nlohmann::json::parse("[1]")), Error);
}

TEST_CASE("registry") {
  CHECK(metric_registry().size() == 18);
  std::set<std::string_view> names;
  for (const auto &m : metric_registry()) names.insert(m.name);
  CHECK(names.size() == 18);
  for (const char *n : {"technical_fork", "bus_factor", "issue_age", "code_change_lines", "activity",
                        "active_dates_and_times", "change_request_reviews"}) {
    CHECK(names.contains(n));
  }
  CHECK(find_metric("stars") == nullptr);
  CHECK_THROWS_AS(require_metric("stars"), Error);
}

TEST_CASE("evaluator scalars and options") {
  std::vector<CollabEvent> events = {open_issue(1, 9, kMar, 1), comment(2, 9, kMar + 100, 1),
                                     open_issue(1, 9, kMar, 2), comment(2, 9, kMar + 300, 2),
                                     open_issue(1, 9, kMar, 3), comment(2, 9, kMar + 1000, 3)};
  MetricEvaluator mean(events, 0);
  CHECK(mean.scalar("issue_response_time", kMarch) == doctest::Approx(1400.0 / 3));
  MetricEvaluator median(events, 0, nlohmann::json{{"stat", "median"}});
  CHECK(median.scalar("issue_response_time", kMarch) == 300);
  MetricEvaluator p90(events, 0, nlohmann::json{{"stat", "p90"}});
  CHECK(p90.scalar("issue_response_time", kMarch) == 1000);
  CHECK(mean.scalar("issue_response_time", Window::month({2019, 4})) == 0);
  CHECK(mean.evaluate("issue_response_time", Window::month({2019, 4})).is_null());
  CHECK(mean.scalar("issues_new", kMarch) == 3);
  CHECK(mean.scalar("activity", kMarch) == 9);
  CHECK(mean.scalar("active_dates_and_times", kMarch) == 6);
  CHECK(mean.scalar("new_contributors", kMarch) == 2);
}

}
