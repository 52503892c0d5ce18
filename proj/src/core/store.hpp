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

#ifndef ECODIGGER_CORE_STORE_HPP_
#define ECODIGGER_CORE_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/event.hpp"
#include "core/ingest.hpp"
#include "core/time.hpp"

namespace ecodigger {

struct RepoInfo {
  std::string name;
  std::optional<std::int64_t> org_id;
  Timestamp last_seen = 0;
};

struct NameInfo {
  std::string name;
  Timestamp last_seen = 0;
};

// Latest observed names of repos, orgs and users. Ids are authoritative;
// a name resolves to the id that most recently carried it.
class Catalog {
 public:
  void observe(const CollabEvent &e);
  void merge(const Catalog &other);

  const RepoInfo *repo(std::int64_t id) const;
  const NameInfo *org(std::int64_t id) const;
  const NameInfo *user(std::int64_t id) const;

  std::optional<std::int64_t> repo_id(std::string_view name) const;
  std::optional<std::int64_t> org_id(std::string_view name) const;
  std::optional<std::int64_t> user_id(std::string_view name) const;

  const std::map<std::int64_t, RepoInfo> &repos() const { return repos_; }

  // name -> (id, last time that id carried the name)
  using NameIndex = std::map<std::string, std::pair<std::int64_t, Timestamp>, std::less<>>;

  void write(const std::filesystem::path &file) const;
  static Catalog read(const std::filesystem::path &file);

 private:
  std::map<std::int64_t, RepoInfo> repos_;
  std::map<std::int64_t, NameInfo> orgs_;
  std::map<std::int64_t, NameInfo> users_;
  NameIndex repo_names_;
  NameIndex org_names_;
  NameIndex user_names_;
};

// Columnar month file, format version 1. See README "Store layout".
void write_month_file(const std::filesystem::path &file, std::span<const CollabEvent> events);
std::vector<CollabEvent> read_month_file(const std::filesystem::path &file);

// On-disk event store:
//   <dir>/FORMAT              "ecodigger-store 1"
//   <dir>/catalog.tsv         latest names
//   <dir>/events/YYYY-MM.edc  one columnar file per month
// Only the event types used downstream are persisted. Ingest is
// idempotent: events are de-duplicated by event id.
class EventStore {
 public:
  static constexpr int kFormatVersion = 1;

  // Creates the layout when `dir` is missing or empty.
  static EventStore open(const std::filesystem::path &dir);

  const std::filesystem::path &dir() const { return dir_; }

  IngestReport ingest(std::span<const std::filesystem::path> archives, unsigned threads = 1);
  // Returns how many events were new.
  std::size_t add_events(std::vector<CollabEvent> events);

  std::vector<YearMonth> months() const;
  // Sorted by (created_at, event_id). Names are filled from the catalog.
  std::vector<CollabEvent> load(std::optional<Window> range = std::nullopt) const;
  const Catalog &catalog() const { return catalog_; }
  std::optional<Timestamp> coverage_start() const;

 private:
  std::filesystem::path month_path(YearMonth m) const;

  std::filesystem::path dir_;
  Catalog catalog_;
};

bool persisted_type(EventType type);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_STORE_HPP_
