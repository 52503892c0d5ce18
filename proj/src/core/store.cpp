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

#include "core/store.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "core/error.hpp"

namespace ecodigger {
namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'E', 'D', 'C', 'O', 'L', 'v', '1', '\n'};
constexpr std::string_view kFormatLine = "ecodigger-store 1";

enum class ColumnType : std::uint8_t { kInt64 = 1, kUInt8 = 2, kString = 3 };

// Flag bits of the "flags" column.
constexpr std::uint8_t kIsPrKnown = 1 << 0;
constexpr std::uint8_t kIsPr = 1 << 1;
constexpr std::uint8_t kMergedKnown = 1 << 2;
constexpr std::uint8_t kMerged = 1 << 3;
constexpr std::uint8_t kHasAdditions = 1 << 4;
constexpr std::uint8_t kHasDeletions = 1 << 5;
constexpr std::uint8_t kHasIssueNumber = 1 << 6;
constexpr std::uint8_t kHasOrg = 1 << 7;

template <typename T>
void put(std::string &out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

class Cursor {
 public:
  Cursor(std::string_view data, const fs::path &file) : data_(data), file_(file) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view bytes(std::size_t n) {
    need(n);
    auto v = data_.substr(pos_, n);
    pos_ += n;
    return v;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      throw Error(ErrorCode::kParse, "truncated month file " + file_.string());
    }
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  const fs::path &file_;
};

void write_column(std::string &out, std::string_view name, ColumnType type,
                  const std::string &payload) {
  put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
  out.append(name);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(type));
  put<std::uint64_t>(out, payload.size());
  out.append(payload);
}

template <typename T, typename F>
std::string encode_fixed(std::span<const CollabEvent> events, F field) {
  std::string payload;
  payload.reserve(events.size() * sizeof(T));
  for (const auto &e : events) put<T>(payload, static_cast<T>(field(e)));
  return payload;
}

template <typename F>
std::string encode_strings(std::span<const CollabEvent> events, F field) {
  std::string offsets, bytes;
  put<std::uint64_t>(offsets, 0);
  for (const auto &e : events) {
    bytes.append(field(e));
    put<std::uint64_t>(offsets, bytes.size());
  }
  return offsets + bytes;
}

std::string read_file(const fs::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path &file, const std::string &content) {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  fs::rename(tmp, file);
}

template <typename T>
bool parse_number(std::string_view s, T &out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void observe_name(std::map<std::int64_t, NameInfo> &names, std::int64_t id,
                  const std::string &name, Timestamp when) {
  if (name.empty()) return;
  auto [it, inserted] = names.try_emplace(id, NameInfo{name, when});
  if (!inserted && when > it->second.last_seen) it->second = {name, when};
}

// Ties go to the larger id so the result does not depend on input order.
void index_name(Catalog::NameIndex &index, const std::string &name, std::int64_t id, Timestamp when) {
  if (name.empty()) return;
  auto [it, inserted] = index.try_emplace(name, id, when);
  if (!inserted && std::pair(when, id) > std::pair(it->second.second, it->second.first)) {
    it->second = {id, when};
  }
}

std::optional<std::int64_t> lookup_name(const Catalog::NameIndex &index, std::string_view name) {
  auto it = index.find(name);
  if (it == index.end()) return std::nullopt;
  return it->second.first;
}

}  // namespace

void Catalog::observe(const CollabEvent &e) {
  if (!e.repo_name.empty()) {
    auto [it, inserted] = repos_.try_emplace(e.repo_id, RepoInfo{e.repo_name, e.org_id, e.created_at});
    if (!inserted && e.created_at > it->second.last_seen) {
      it->second = {e.repo_name, e.org_id ? e.org_id : it->second.org_id, e.created_at};
    }
  }
  if (e.org_id && e.org_login) observe_name(orgs_, *e.org_id, *e.org_login, e.created_at);
  observe_name(users_, e.actor_id, e.actor_login, e.created_at);
  index_name(repo_names_, e.repo_name, e.repo_id, e.created_at);
  if (e.org_id && e.org_login) index_name(org_names_, *e.org_login, *e.org_id, e.created_at);
  index_name(user_names_, e.actor_login, e.actor_id, e.created_at);
}

void Catalog::merge(const Catalog &other) {
  for (const auto &[id, info] : other.repos_) {
    auto [it, inserted] = repos_.try_emplace(id, info);
    if (!inserted && info.last_seen > it->second.last_seen) it->second = info;
  }
  for (const auto &[id, info] : other.orgs_) observe_name(orgs_, id, info.name, info.last_seen);
  for (const auto &[id, info] : other.users_) observe_name(users_, id, info.name, info.last_seen);
  for (const auto &[name, v] : other.repo_names_) index_name(repo_names_, name, v.first, v.second);
  for (const auto &[name, v] : other.org_names_) index_name(org_names_, name, v.first, v.second);
  for (const auto &[name, v] : other.user_names_) index_name(user_names_, name, v.first, v.second);
}

const RepoInfo *Catalog::repo(std::int64_t id) const {
  auto it = repos_.find(id);
  return it == repos_.end() ? nullptr : &it->second;
}

const NameInfo *Catalog::org(std::int64_t id) const {
  auto it = orgs_.find(id);
  return it == orgs_.end() ? nullptr : &it->second;
}

const NameInfo *Catalog::user(std::int64_t id) const {
  auto it = users_.find(id);
  return it == users_.end() ? nullptr : &it->second;
}

std::optional<std::int64_t> Catalog::repo_id(std::string_view name) const { return lookup_name(repo_names_, name); }
std::optional<std::int64_t> Catalog::org_id(std::string_view name) const { return lookup_name(org_names_, name); }
std::optional<std::int64_t> Catalog::user_id(std::string_view name) const { return lookup_name(user_names_, name); }

void Catalog::write(const fs::path &file) const {
  std::ostringstream out;
  for (const auto &[id, r] : repos_) {
    out << "repo\t" << id << '\t' << r.last_seen << '\t';
    if (r.org_id) out << *r.org_id; else out << '-';
    out << '\t' << r.name << '\n';
  }
  for (const auto &[id, o] : orgs_) out << "org\t" << id << '\t' << o.last_seen << '\t' << o.name << '\n';
  for (const auto &[id, u] : users_) out << "user\t" << id << '\t' << u.last_seen << '\t' << u.name << '\n';
  // Name history, so that former names keep resolving.
  auto history = [&](const char *kind, const NameIndex &index) {
    for (const auto &[name, v] : index) out << kind << '\t' << v.first << '\t' << v.second << '\t' << name << '\n';
  };
  history("repo_name", repo_names_);
  history("org_name", org_names_);
  history("user_name", user_names_);
  write_file_atomic(file, out.str());
}

Catalog Catalog::read(const fs::path &file) {
  Catalog c;
  std::ifstream in(file);
  if (!in) return c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_tabs(line);
    std::int64_t id = 0;
    Timestamp seen = 0;
    bool ok = f.size() >= 4 && parse_number(f[1], id) && parse_number(f[2], seen);
    if (ok && f[0] == "repo" && f.size() == 5) {
      RepoInfo info{std::string(f[4]), std::nullopt, seen};
      std::int64_t org = 0;
      if (f[3] != "-") {
        ok = parse_number(f[3], org);
        info.org_id = org;
      }
      if (ok) {
        index_name(c.repo_names_, info.name, id, seen);
        c.repos_[id] = info;
      }
    } else if (ok && f[0] == "org" && f.size() == 4) {
      c.orgs_[id] = {std::string(f[3]), seen};
      index_name(c.org_names_, std::string(f[3]), id, seen);
    } else if (ok && f[0] == "user" && f.size() == 4) {
      c.users_[id] = {std::string(f[3]), seen};
      index_name(c.user_names_, std::string(f[3]), id, seen);
    } else if (ok && f.size() == 4 && (f[0] == "repo_name" || f[0] == "org_name" || f[0] == "user_name")) {
      NameIndex &index = f[0] == "repo_name" ? c.repo_names_ : f[0] == "org_name" ? c.org_names_ : c.user_names_;
      index_name(index, std::string(f[3]), id, seen);
    } else {
      ok = false;
    }
    if (!ok) {
      throw Error(ErrorCode::kParse, file.string() + ":" + std::to_string(lineno) + ": bad catalog line");
    }
  }
  return c;
}

void write_month_file(const fs::path &file, std::span<const CollabEvent> events) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, events.size());
  put<std::uint32_t>(out, 11);  // column count
  write_column(out, "event_id", ColumnType::kString,
               encode_strings(events, [](const auto &e) -> const std::string & { return e.event_id; }));
  write_column(out, "created_at", ColumnType::kInt64,
               encode_fixed<std::int64_t>(events, [](const auto &e) { return e.created_at; }));
  write_column(out, "type", ColumnType::kUInt8,
               encode_fixed<std::uint8_t>(events, [](const auto &e) { return e.event_type; }));
  write_column(out, "action", ColumnType::kString,
               encode_strings(events, [](const auto &e) { return e.action.value_or(""); }));
  write_column(out, "actor_id", ColumnType::kInt64,
               encode_fixed<std::int64_t>(events, [](const auto &e) { return e.actor_id; }));
  write_column(out, "repo_id", ColumnType::kInt64,
               encode_fixed<std::int64_t>(events, [](const auto &e) { return e.repo_id; }));
  write_column(out, "org_id", ColumnType::kInt64,
               encode_fixed<std::int64_t>(events, [](const auto &e) { return e.org_id.value_or(0); }));
  write_column(out, "issue_number", ColumnType::kInt64,
               encode_fixed<std::int64_t>(events, [](const auto &e) { return e.issue_number.value_or(0); }));
  write_column(out, "flags", ColumnType::kUInt8, encode_fixed<std::uint8_t>(events, [](const auto &e) {
                 std::uint8_t f = 0;
                 if (e.issue_is_pr) f |= kIsPrKnown | (*e.issue_is_pr ? kIsPr : 0);
                 if (e.pr_merged) f |= kMergedKnown | (*e.pr_merged ? kMerged : 0);
                 if (e.pr_additions) f |= kHasAdditions;
                 if (e.pr_deletions) f |= kHasDeletions;
                 if (e.issue_number) f |= kHasIssueNumber;
                 if (e.org_id) f |= kHasOrg;
                 return f;
               }));
  write_column(out, "lines", ColumnType::kInt64, [&] {
    std::string payload;
    for (const auto &e : events) {
      put<std::int64_t>(payload, e.pr_additions.value_or(0));
      put<std::int64_t>(payload, e.pr_deletions.value_or(0));
    }
    return payload;
  }());
  write_column(out, "author_association", ColumnType::kString,
               encode_strings(events, [](const auto &e) { return e.comment_author_association.value_or(""); }));
  write_file_atomic(file, out);
}

std::vector<CollabEvent> read_month_file(const fs::path &file) {
  const std::string data = read_file(file);
  Cursor cur(data, file);
  if (cur.bytes(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw Error(ErrorCode::kParse, "not an ecodigger month file (or unsupported version): " + file.string());
  }
  const auto rows = cur.get<std::uint64_t>();
  const auto ncols = cur.get<std::uint32_t>();
  std::map<std::string, std::pair<ColumnType, std::string_view>, std::less<>> cols;
  for (std::uint32_t i = 0; i < ncols; ++i) {
    auto name = cur.bytes(cur.get<std::uint16_t>());
    auto type = static_cast<ColumnType>(cur.get<std::uint8_t>());
    auto payload = cur.bytes(cur.get<std::uint64_t>());
    cols[std::string(name)] = {type, payload};
  }
  if (!cur.done()) throw Error(ErrorCode::kParse, "trailing bytes in " + file.string());

  auto column = [&](std::string_view name, ColumnType type, std::size_t width) {
    auto it = cols.find(name);
    if (it == cols.end() || it->second.first != type ||
        (width != 0 && it->second.second.size() != rows * width)) {
      throw Error(ErrorCode::kParse, "bad column '" + std::string(name) + "' in " + file.string());
    }
    return it->second.second;
  };
  auto i64_at = [](std::string_view col, std::size_t i) {
    std::int64_t v;
    std::memcpy(&v, col.data() + i * 8, 8);
    return v;
  };
  struct Strings {
    std::string_view offsets, bytes;
    std::string_view at(std::size_t i) const {
      std::uint64_t a, b;
      std::memcpy(&a, offsets.data() + i * 8, 8);
      std::memcpy(&b, offsets.data() + (i + 1) * 8, 8);
      return bytes.substr(a, b - a);
    }
  };
  auto strings = [&](std::string_view name) {
    auto payload = column(name, ColumnType::kString, 0);
    const std::size_t off_size = (rows + 1) * 8;
    if (payload.size() < off_size) throw Error(ErrorCode::kParse, "bad string column in " + file.string());
    Strings s{payload.substr(0, off_size), payload.substr(off_size)};
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i <= rows; ++i) {
      std::uint64_t o;
      std::memcpy(&o, s.offsets.data() + i * 8, 8);
      if (o < prev || o > s.bytes.size() || (i == 0 && o != 0)) {
        throw Error(ErrorCode::kParse, "bad string offsets in " + file.string());
      }
      prev = o;
    }
    return s;
  };
  const Strings ids = strings("event_id"), actions = strings("action"),
                assoc = strings("author_association");
  const auto created = column("created_at", ColumnType::kInt64, 8);
  const auto types = column("type", ColumnType::kUInt8, 1);
  const auto actors = column("actor_id", ColumnType::kInt64, 8);
  const auto repos = column("repo_id", ColumnType::kInt64, 8);
  const auto orgs = column("org_id", ColumnType::kInt64, 8);
  const auto numbers = column("issue_number", ColumnType::kInt64, 8);
  const auto flag_col = column("flags", ColumnType::kUInt8, 1);
  const auto lines = column("lines", ColumnType::kInt64, 16);

  std::vector<CollabEvent> events(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    CollabEvent &e = events[i];
    e.event_id = ids.at(i);
    e.created_at = i64_at(created, i);
    const auto type = static_cast<std::uint8_t>(types[i]);
    if (type > static_cast<std::uint8_t>(EventType::kOther)) {
      throw Error(ErrorCode::kParse, "bad event type in " + file.string());
    }
    e.event_type = static_cast<EventType>(type);
    if (auto a = actions.at(i); !a.empty()) e.action = std::string(a);
    e.actor_id = i64_at(actors, i);
    e.repo_id = i64_at(repos, i);
    const auto flags = static_cast<std::uint8_t>(flag_col[i]);
    if (flags & kHasOrg) e.org_id = i64_at(orgs, i);
    if (flags & kHasIssueNumber) e.issue_number = i64_at(numbers, i);
    if (flags & kIsPrKnown) e.issue_is_pr = (flags & kIsPr) != 0;
    if (flags & kMergedKnown) e.pr_merged = (flags & kMerged) != 0;
    if (flags & kHasAdditions) e.pr_additions = i64_at(lines, 2 * i);
    if (flags & kHasDeletions) e.pr_deletions = i64_at(lines, 2 * i + 1);
    if (auto a = assoc.at(i); !a.empty()) e.comment_author_association = std::string(a);
  }
  return events;
}

bool persisted_type(EventType type) { return type != EventType::kOther; }

EventStore EventStore::open(const fs::path &dir) {
  EventStore store;
  store.dir_ = dir;
  std::error_code ec;
  const fs::path format = dir / "FORMAT";
  if (fs::exists(format, ec)) {
    std::string line = read_file(format);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (line != kFormatLine) {
      throw Error(ErrorCode::kParse, "unsupported store format in " + dir.string() + ": '" + line + "'");
    }
  } else {
    if (fs::exists(dir, ec) && !fs::is_empty(dir, ec)) {
      throw Error(ErrorCode::kIo, dir.string() + " exists but is not an ecodigger store");
    }
    fs::create_directories(dir / "events", ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
    write_file_atomic(format, std::string(kFormatLine) + "\n");
  }
  fs::create_directories(dir / "events", ec);
  store.catalog_ = Catalog::read(dir / "catalog.tsv");
  return store;
}

fs::path EventStore::month_path(YearMonth m) const {
  return dir_ / "events" / (m.str() + ".edc");
}

std::vector<YearMonth> EventStore::months() const {
  std::vector<YearMonth> out;
  std::error_code ec;
  for (const auto &entry : fs::directory_iterator(dir_ / "events", ec)) {
    if (entry.path().extension() != ".edc") continue;
    if (auto m = YearMonth::parse(entry.path().stem().string())) out.push_back(*m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Timestamp> EventStore::coverage_start() const {
  auto m = months();
  if (m.empty()) return std::nullopt;
  return m.front().start();
}

std::size_t EventStore::add_events(std::vector<CollabEvent> events) {
  std::map<YearMonth, std::vector<CollabEvent>> by_month;
  for (auto &e : events) {
    if (!persisted_type(e.event_type)) continue;
    catalog_.observe(e);
    by_month[YearMonth::of(e.created_at)].push_back(std::move(e));
  }
  std::size_t added = 0;
  for (auto &[month, fresh] : by_month) {
    std::vector<CollabEvent> merged;
    const fs::path file = month_path(month);
    if (fs::exists(file)) merged = read_month_file(file);
    std::unordered_set<std::string> seen;
    for (const auto &e : merged) seen.insert(e.event_id);
    for (auto &e : fresh) {
      if (seen.insert(e.event_id).second) {
        merged.push_back(std::move(e));
        ++added;
      }
    }
    std::sort(merged.begin(), merged.end(), [](const auto &a, const auto &b) {
      if (a.created_at != b.created_at) return a.created_at < b.created_at;
      return a.event_id < b.event_id;
    });
    write_month_file(file, merged);
  }
  catalog_.write(dir_ / "catalog.tsv");
  return added;
}

IngestReport EventStore::ingest(std::span<const fs::path> archives, unsigned threads) {
  std::vector<CollabEvent> events;
  IngestReport report = read_archives(
      archives, [&](CollabEvent &&e) { events.push_back(std::move(e)); }, threads);
  report.events_stored = add_events(std::move(events));
  return report;
}

std::vector<CollabEvent> EventStore::load(std::optional<Window> range) const {
  std::vector<CollabEvent> out;
  for (YearMonth m : months()) {
    if (range && (m < range->begin || !(m < range->end))) continue;
    auto events = read_month_file(month_path(m));
    for (auto &e : events) {
      if (const RepoInfo *r = catalog_.repo(e.repo_id)) e.repo_name = r->name;
      if (const NameInfo *u = catalog_.user(e.actor_id)) e.actor_login = u->name;
      if (e.org_id) {
        if (const NameInfo *o = catalog_.org(*e.org_id)) e.org_login = o->name;
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace ecodigger
