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

// Helpers shared by the test binaries: event builders, scratch dirs and
// gzip fixtures.

#ifndef ECODIGGER_TESTS_SUPPORT_HPP_
#define ECODIGGER_TESTS_SUPPORT_HPP_

#include <unistd.h>
#include <zlib.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/event.hpp"
#include "core/time.hpp"

namespace ecodigger::testing {

// Removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ecodigger-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path &p, const std::string &body) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << body;
}

inline std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_gzip(const std::filesystem::path &p, const std::string &body) {
  gzFile f = gzopen(p.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("gzopen failed");
  if (!body.empty()) gzwrite(f, body.data(), static_cast<unsigned>(body.size()));
  gzclose(f);
}

inline std::string gzip_bytes(const std::string &body) {
  z_stream zs{};
  deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY);
  std::string out(deflateBound(&zs, body.size()) + 64, '\0');
  zs.next_in = reinterpret_cast<Bytef *>(const_cast<char *>(body.data()));
  zs.avail_in = static_cast<uInt>(body.size());
  zs.next_out = reinterpret_cast<Bytef *>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

// In-memory event with just enough fields for the analytics.
struct EventBuilder {
  CollabEvent e;

  EventBuilder(EventType type, std::int64_t actor, std::int64_t repo, Timestamp at) {
    static std::atomic<std::uint64_t> next_id{1};
    e.event_id = std::to_string(next_id++);
    e.event_type = type;
    e.actor_id = actor;
    e.actor_login = "user" + std::to_string(actor);
    e.repo_id = repo;
    e.repo_name = "owner/repo" + std::to_string(repo);
    e.created_at = at;
  }
  EventBuilder &id(std::string v) { e.event_id = std::move(v); return *this; }
  EventBuilder &action(std::string v) { e.action = std::move(v); return *this; }
  EventBuilder &issue(std::int64_t n) { e.issue_number = n; return *this; }
  EventBuilder &on_pr(bool v = true) { e.issue_is_pr = v; return *this; }
  EventBuilder &merged(bool v) { e.pr_merged = v; return *this; }
  EventBuilder &lines(std::int64_t add, std::int64_t del) {
    e.pr_additions = add;
    e.pr_deletions = del;
    return *this;
  }
  EventBuilder &org(std::int64_t id) {
    e.org_id = id;
    e.org_login = "org" + std::to_string(id);
    return *this;
  }
  operator CollabEvent() const { return e; }
};

inline CollabEvent comment(std::int64_t actor, std::int64_t repo, Timestamp at, std::int64_t issue = 1) {
  return EventBuilder(EventType::kIssueComment, actor, repo, at).action("created").issue(issue);
}
inline CollabEvent open_issue(std::int64_t actor, std::int64_t repo, Timestamp at, std::int64_t issue = 1) {
  return EventBuilder(EventType::kIssues, actor, repo, at).action("opened").issue(issue);
}
inline CollabEvent open_pr(std::int64_t actor, std::int64_t repo, Timestamp at, std::int64_t pr = 1) {
  return EventBuilder(EventType::kPullRequest, actor, repo, at).action("opened").issue(pr).merged(false);
}
inline CollabEvent review_pr(std::int64_t actor, std::int64_t repo, Timestamp at, std::int64_t pr = 1) {
  return EventBuilder(EventType::kPullRequestReviewComment, actor, repo, at).action("created").issue(pr);
}
inline CollabEvent merge_pr(std::int64_t actor, std::int64_t repo, Timestamp at, std::int64_t pr = 1) {
  return EventBuilder(EventType::kPullRequest, actor, repo, at).action("closed").issue(pr).merged(true);
}

// One GHArchive-shaped JSON line.
inline std::string archive_line(std::uint64_t id, const std::string &type, std::int64_t actor,
                                std::int64_t repo, const std::string &created_at,
                                const std::string &payload, std::optional<std::int64_t> org = {}) {
  std::string s = "{\"id\":\"" + std::to_string(id) + "\",\"type\":\"" + type +
                  "\",\"actor\":{\"id\":" + std::to_string(actor) + ",\"login\":\"user" +
                  std::to_string(actor) + "\",\"display_login\":\"user" + std::to_string(actor) +
                  "\",\"url\":\"https://api.github.com/users/user" + std::to_string(actor) +
                  "\"},\"repo\":{\"id\":" + std::to_string(repo) + ",\"name\":\"owner/repo" +
                  std::to_string(repo) + "\",\"url\":\"https://api.github.com/repos/owner/repo" +
                  std::to_string(repo) + "\"},\"payload\":" + payload + ",\"public\":true,\"created_at\":\"" +
                  created_at + "\"";
  if (org) {
    s += ",\"org\":{\"id\":" + std::to_string(*org) + ",\"login\":\"org" + std::to_string(*org) + "\"}";
  }
  return s + "}";
}

// A mixed hour of synthetic traffic; about one line in `bad_every` is junk.
inline std::string synthetic_hour(std::size_t lines, std::uint64_t seed, std::size_t bad_every = 0,
                                  const std::string &hour = "2019-01-15T07") {
  std::mt19937_64 rng(seed);
  std::string out;
  const char *types[] = {"PushEvent", "WatchEvent", "IssueCommentEvent", "IssuesEvent",
                         "PullRequestEvent", "PullRequestReviewCommentEvent", "ForkEvent",
                         "CreateEvent"};
  for (std::size_t i = 0; i < lines; ++i) {
    if (bad_every != 0 && i % bad_every == bad_every - 1) {
      out += "{\"id\":\"broken\",\"type\":\n";
      continue;
    }
    const std::string type = types[rng() % 8];
    const std::int64_t actor = 1 + static_cast<std::int64_t>(rng() % 50000);
    const std::int64_t repo = 1 + static_cast<std::int64_t>(rng() % 20000);
    char ts[32];
    std::snprintf(ts, sizeof ts, "%s:%02d:%02dZ", hour.c_str(), static_cast<int>(rng() % 60),
                  static_cast<int>(rng() % 60));
    std::string payload;
    const std::string number = std::to_string(1 + rng() % 500);
    if (type == "IssueCommentEvent") {
      payload = "{\"action\":\"created\",\"issue\":{\"number\":" + number +
                ",\"title\":\"some issue title that is long enough\",\"body\":\"" +
                std::string(200, 'x') + "\"},\"comment\":{\"body\":\"" + std::string(300, 'c') +
                "\",\"author_association\":\"CONTRIBUTOR\"}}";
    } else if (type == "IssuesEvent") {
      payload = "{\"action\":\"opened\",\"issue\":{\"number\":" + number + ",\"body\":\"" +
                std::string(400, 'b') + "\"}}";
    } else if (type == "PullRequestEvent") {
      payload = "{\"action\":\"closed\",\"number\":" + number + ",\"pull_request\":{\"number\":" +
                number + ",\"merged\":true,\"additions\":12,\"deletions\":3,\"body\":\"" +
                std::string(500, 'p') + "\"}}";
    } else if (type == "PullRequestReviewCommentEvent") {
      payload = "{\"action\":\"created\",\"pull_request\":{\"number\":" + number +
                "},\"comment\":{\"body\":\"" + std::string(150, 'r') + "\"}}";
    } else if (type == "PushEvent") {
      payload = "{\"push_id\":1,\"size\":1,\"commits\":[{\"sha\":\"" + std::string(40, 'a') +
                "\",\"message\":\"" + std::string(120, 'm') + "\"}]}";
    } else {
      payload = "{\"action\":\"started\"}";
    }
    out += archive_line(1000000 + i, type, actor, repo, ts, payload,
                        rng() % 3 == 0 ? std::optional<std::int64_t>(repo % 97 + 1) : std::nullopt);
    out += '\n';
  }
  return out;
}


// A year of issue traffic for the repos named in the label fixture tree.
// Repo r opens issues_in(r, m) issues in month m of 2019.
struct QueryFixtureRepo {
  std::int64_t id;
  std::optional<std::int64_t> org;
};

inline const std::vector<QueryFixtureRepo> &query_fixture_repos() {
  static const std::vector<QueryFixtureRepo> repos = {
      {2001, 1001}, {2002, 1002}, {2003, 1001}, {2004, 1003}, {2005, std::nullopt},
      {2101, 1101}, {2102, 1101}, {2103, std::nullopt}};
  return repos;
}

inline int issues_in(std::int64_t repo, int month) {
  return static_cast<int>((repo % 7 + month * (repo % 3 + 1)) % 5);
}

inline std::vector<CollabEvent> query_fixture_events() {
  std::vector<CollabEvent> out;
  for (const auto &r : query_fixture_repos()) {
    std::int64_t number = 0;
    for (int m = 1; m <= 12; ++m) {
      for (int k = 0; k < issues_in(r.id, m); ++k) {
        EventBuilder b(EventType::kIssues, 500 + k, r.id, make_timestamp(2019, m, 3 + k, 12));
        b.action("opened").issue(++number);
        b.e.event_id = std::to_string(r.id) + "-" + std::to_string(number);
        if (r.org) b.org(*r.org);
        out.push_back(b);
      }
    }
  }
  return out;
}

}  // namespace ecodigger::testing

#endif  // ECODIGGER_TESTS_SUPPORT_HPP_
