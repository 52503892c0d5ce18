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

#include "core/error.hpp"
#include "core/store.hpp"
#include "support.hpp"

using namespace ecodigger;
using namespace ecodigger::testing;

namespace {

bool same_event(const CollabEvent &a, const CollabEvent &b) {
  return a.event_id == b.event_id && a.event_type == b.event_type && a.action == b.action &&
         a.actor_id == b.actor_id && a.repo_id == b.repo_id && a.org_id == b.org_id &&
         a.created_at == b.created_at && a.issue_number == b.issue_number &&
         a.issue_is_pr == b.issue_is_pr && a.pr_merged == b.pr_merged &&
         a.pr_additions == b.pr_additions && a.pr_deletions == b.pr_deletions &&
         a.comment_author_association == b.comment_author_association;
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("month file round trip keeps every optional field") {
  TempDir dir;
  const Timestamp t = make_timestamp(2019, 5, 2, 3);
  std::vector<CollabEvent> events = {
      comment(1, 2, t), open_pr(3, 4, t + 1, 9),
      EventBuilder(EventType::kPullRequest, 5, 6, t + 2).action("closed").issue(7).merged(true).lines(100, 0).org(77),
      EventBuilder(EventType::kWatch, 8, 9, t + 3),
      EventBuilder(EventType::kIssueComment, 1, 2, t + 4).action("created").issue(3).on_pr(false)};
  events[0].comment_author_association = "OWNER";
  events[1].issue_is_pr = true;
  events[3].pr_additions = -1;  // negative values survive too
  write_month_file(dir / "m.edc", events);
  auto back = read_month_file(dir / "m.edc");
  REQUIRE(back.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    CAPTURE(i);
    CHECK(same_event(back[i], events[i]));
  }
  write_month_file(dir / "empty.edc", {});
  CHECK(read_month_file(dir / "empty.edc").empty());
}

TEST_CASE("damaged month files are rejected") {
  TempDir dir;
  const Timestamp t = make_timestamp(2019, 5, 2, 3);
  std::vector<CollabEvent> events = {comment(1, 2, t), open_pr(3, 4, t + 1)};
  write_month_file(dir / "m.edc", events);
  const std::string bytes = read_file(dir / "m.edc");
  auto code_for = [&](const std::string &body) {
    write_file(dir / "x.edc", body);
    try {
      read_month_file(dir / "x.edc");
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  CHECK(code_for(bytes.substr(0, bytes.size() - 3)) == ErrorCode::kParse);
  CHECK(code_for(bytes + "x") == ErrorCode::kParse);
  CHECK(code_for("EDCOLv2\n" + bytes.substr(8)) == ErrorCode::kParse);
  CHECK(code_for("") == ErrorCode::kParse);
  for (std::size_t cut = 0; cut < bytes.size(); cut += 7) {
    CHECK(code_for(bytes.substr(0, cut)) == ErrorCode::kParse);
  }
}

TEST_CASE("store layout and idempotent ingest") {
  TempDir dir;
  const auto root = dir / "store";
  auto archive = dir / "2019-01-15-7.json.gz";
  write_gzip(archive,
             archive_line(1, "IssuesEvent", 5, 50, "2019-01-15T07:00:00Z", R"({"action":"opened","issue":{"number":1}})", 500) + "\n" +
             archive_line(2, "WatchEvent", 6, 50, "2019-01-15T07:01:00Z", R"({"action":"started"})") + "\n" +
             archive_line(3, "GollumEvent", 6, 50, "2019-01-15T07:02:00Z", "{}") + "\n" +
             archive_line(4, "ForkEvent", 6, 51, "2019-02-01T00:00:00Z", "{}") + "\n");
  auto store = EventStore::open(root);
  CHECK(read_file(root / "FORMAT") == "ecodigger-store 1\n");
  std::vector<std::filesystem::path> paths = {archive};
  auto report = store.ingest(paths);
  CHECK(report.events_emitted == 4);
  CHECK(report.events_stored == 3);  // the wiki event is not kept
  CHECK(store.months() == std::vector<YearMonth>{{2019, 1}, {2019, 2}});
  CHECK(store.coverage_start() == make_timestamp(2019, 1, 1));
  auto again = store.ingest(paths);
  CHECK(again.events_emitted == 4);
  CHECK(again.events_stored == 0);
  CHECK(store.load().size() == 3);
  CHECK(store.load(Window::month({2019, 2})).size() == 1);
  CHECK(store.catalog().repo(50)->org_id == 500);
  CHECK(store.catalog().repo_id("owner/repo50") == 50);
  CHECK(store.catalog().org_id("org500") == 500);
  CHECK(store.catalog().user_id("user5") == 5);

  // Reopening sees the same data.
  auto reopened = EventStore::open(root);
  CHECK(reopened.load().size() == 3);
  CHECK(reopened.catalog().repo_id("owner/repo50") == 50);
}

TEST_CASE("latest name wins") {
  TempDir dir;
  auto store = EventStore::open(dir / "s");
  CollabEvent old = comment(1, 10, make_timestamp(2019, 1, 1));
  old.repo_name = "a/old";
  CollabEvent renamed = comment(1, 10, make_timestamp(2019, 6, 1));
  renamed.repo_name = "a/new";
  CollabEvent squatter = comment(1, 11, make_timestamp(2019, 7, 1));
  squatter.repo_name = "a/old";
  store.add_events({renamed, old});
  CHECK(store.catalog().repo(10)->name == "a/new");
  CHECK(store.catalog().repo_id("a/old") == 10);
  store.add_events({squatter});
  CHECK(store.catalog().repo_id("a/old") == 11);
  CHECK(store.catalog().repo_id("a/new") == 10);
  for (const auto &e : store.load()) {
    if (e.repo_id == 10) CHECK(e.repo_name == "a/new");
  }
}

TEST_CASE("open refuses foreign directories") {
  TempDir dir;
  write_file(dir / "busy/file.txt", "hello");
  CHECK_THROWS_AS(EventStore::open(dir / "busy"), Error);
  write_file(dir / "future/FORMAT", "ecodigger-store 9\n");
  CHECK_THROWS_AS(EventStore::open(dir / "future"), Error);
}

}
