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

#include <doctest.h>

#include <random>

#include "core/activity.hpp"
#include "core/error.hpp"
#include "support.hpp"

using namespace ecodigger;
using namespace ecodigger::testing;

TEST_SUITE("activity-model") {

TEST_CASE("default weights") {
  BehaviorWeights w;
  CHECK(w[Behavior::kComment] == 1);
  CHECK(w[Behavior::kOpenIssue] == 2);
  CHECK(w[Behavior::kOpenPR] == 3);
  CHECK(w[Behavior::kReviewPR] == 4);
  CHECK(w[Behavior::kPRMerged] == 2);
  CHECK(BehaviorWeights::from_json(w.to_json()).to_json() == w.to_json());
}

TEST_CASE("weights from json") {
  auto w = BehaviorWeights::from_json(nlohmann::json::parse(R"({"comment":0.5,"pr_merged":5})"));
  CHECK(w.comment == 0.5);
  CHECK(w.open_issue == 2);
  CHECK(w.pr_merged == 5);
  CHECK_THROWS_AS(BehaviorWeights::from_json(nlohmann::json::parse(R"({"star":1})")), Error);
  CHECK_THROWS_AS(BehaviorWeights::from_json(nlohmann::json::parse(R"({"comment":"1"})")), Error);
  BehaviorWeights bad;
  bad.review_pr = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("score is the weighted sum of counts") {
  BehaviorCounts c;
  c[Behavior::kComment] = 3;
  c[Behavior::kOpenIssue] = 1;
  c[Behavior::kOpenPR] = 2;
  c[Behavior::kReviewPR] = 1;
  c[Behavior::kPRMerged] = 1;
  CHECK(activity(c, BehaviorWeights{}) == 3 + 2 + 6 + 4 + 2);
  CHECK(activity(BehaviorCounts{}, BehaviorWeights{}) == 0);
}

TEST_CASE("score is linear in counts and in weights") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    BehaviorCounts a, b;
    BehaviorWeights w{double(rng() % 9), double(rng() % 9), double(rng() % 9),
                      double(rng() % 9), double(rng() % 9)};
    for (auto beh : kAllBehaviors) {
      a[beh] = rng() % 20;
      b[beh] = rng() % 20;
    }
    CHECK(activity(a + b, w) == activity(a, w) + activity(b, w));
    CHECK(activity(a, w.scaled(4)) == 4 * activity(a, w));
    CHECK(activity(a, w) >= 0);
  }
}

TEST_CASE("counting by scope and window") {
  const Timestamp jan = make_timestamp(2019, 1, 10);
  const Timestamp feb = make_timestamp(2019, 2, 10);
  std::vector<CollabEvent> events = {
      comment(1, 10, jan), comment(1, 10, jan), open_issue(1, 11, jan), open_pr(2, 10, jan),
      review_pr(2, 10, feb), merge_pr(2, 10, feb),
      EventBuilder(EventType::kWatch, 3, 10, jan)};
  auto by_pair = count_behaviors(events, Window::month({2019, 1}), CountScope::kDeveloperRepo);
  CHECK(by_pair.size() == 3);
  CHECK(by_pair.at({1, 10})[Behavior::kComment] == 2);
  CHECK(by_pair.at({1, 11})[Behavior::kOpenIssue] == 1);
  CHECK(by_pair.at({2, 10})[Behavior::kOpenPR] == 1);
  auto by_dev = count_behaviors(events, Window::year(2019), CountScope::kDeveloper);
  CHECK(by_dev.size() == 2);
  CHECK(by_dev.at({2, 0})[Behavior::kReviewPR] == 1);
  CHECK(by_dev.at({2, 0})[Behavior::kPRMerged] == 1);
  auto by_repo = count_behaviors(events, Window::year(2019), CountScope::kRepo);
  CHECK(by_repo.at({0, 10})[Behavior::kComment] == 2);
  CHECK_FALSE(by_repo.contains({0, 12}));
}

TEST_CASE("developer ranking") {
  const Timestamp t = make_timestamp(2019, 3, 1);
  std::vector<CollabEvent> events = {comment(5, 1, t), open_issue(4, 1, t), open_issue(3, 2, t),
                                     comment(3, 3, t), review_pr(9, 1, t)};
  auto records = activity_records(events, Window::month({2019, 3}), BehaviorWeights{});
  auto ranked = rank_developers(records, Window::year(2019), 0);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].developer_id == 9);
  CHECK(ranked[1].developer_id == 3);  // 3 beats 4 on score
  CHECK(ranked[1].score == 3);
  CHECK(ranked[2].developer_id == 4);
  CHECK(ranked[3].developer_id == 5);
  CHECK(rank_developers(records, Window::year(2019), 2).size() == 2);
  // Records outside the window are ignored.
  CHECK(rank_developers(records, Window::year(2018), 0).empty());
  CHECK(project_activity(records, 1, Window::year(2019)) == 1 + 2 + 4);
}

}
