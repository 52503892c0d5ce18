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

#include "core/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstring>
#include <limits>
#include <mutex>
#include <thread>

#include <rapidjson/document.h>

#include "core/error.hpp"

namespace ecodigger {
namespace {

constexpr std::size_t kChunkSize = 256 * 1024;

using JsonValue = rapidjson::Value;

const JsonValue *member(const JsonValue *v, const char *name) {
  if (v == nullptr || !v->IsObject()) return nullptr;
  auto it = v->FindMember(name);
  return it == v->MemberEnd() ? nullptr : &it->value;
}

std::optional<std::int64_t> as_int(const JsonValue *v) {
  if (v == nullptr) return std::nullopt;
  if (v->IsInt64()) return v->GetInt64();
  if (v->IsUint64()) {
    auto u = v->GetUint64();
    if (u <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      return static_cast<std::int64_t>(u);
    }
  }
  return std::nullopt;
}

std::optional<std::string> as_string(const JsonValue *v) {
  if (v == nullptr || !v->IsString()) return std::nullopt;
  return std::string(v->GetString(), v->GetStringLength());
}

std::optional<bool> as_bool(const JsonValue *v) {
  if (v == nullptr || !v->IsBool()) return std::nullopt;
  return v->GetBool();
}

bool parse_int(std::string_view s, int &out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::optional<ArchiveHour> parse_archive_name(std::string_view filename) {
  constexpr std::string_view kSuffix = ".json.gz";
  if (auto slash = filename.find_last_of('/'); slash != std::string_view::npos) {
    filename.remove_prefix(slash + 1);
  }
  if (!filename.ends_with(kSuffix)) return std::nullopt;
  filename.remove_suffix(kSuffix.size());
  // YYYY-MM-DD-H
  if (filename.size() < 12 || filename[4] != '-' || filename[7] != '-' ||
      filename[10] != '-') {
    return std::nullopt;
  }
  ArchiveHour h;
  if (!parse_int(filename.substr(0, 4), h.year) ||
      !parse_int(filename.substr(5, 2), h.month) ||
      !parse_int(filename.substr(8, 2), h.day) ||
      !parse_int(filename.substr(11), h.hour)) {
    return std::nullopt;
  }
  if (filename.size() > 13 || h.month < 1 || h.month > 12 || h.day < 1 ||
      h.day > 31 || h.hour < 0 || h.hour > 23) {
    return std::nullopt;
  }
  return h;
}

std::optional<CollabEvent> parse_event_line(std::string_view line) {
  rapidjson::Document doc;
  doc.Parse(line.data(), line.size());
  if (doc.HasParseError() || !doc.IsObject()) return std::nullopt;

  const JsonValue *id = member(&doc, "id");
  const JsonValue *type = member(&doc, "type");
  const JsonValue *actor = member(&doc, "actor");
  const JsonValue *repo = member(&doc, "repo");
  const JsonValue *created = member(&doc, "created_at");
  if (id == nullptr || type == nullptr || !type->IsString() ||
      actor == nullptr || repo == nullptr || created == nullptr ||
      !created->IsString()) {
    return std::nullopt;
  }

  CollabEvent e;
  if (id->IsString()) {
    e.event_id.assign(id->GetString(), id->GetStringLength());
  } else if (auto n = as_int(id)) {
    e.event_id = std::to_string(*n);
  } else {
    return std::nullopt;
  }
  if (e.event_id.empty()) return std::nullopt;

  auto actor_id = as_int(member(actor, "id"));
  auto repo_id = as_int(member(repo, "id"));
  auto ts = parse_timestamp({created->GetString(), created->GetStringLength()});
  if (!actor_id || *actor_id <= 0 || !repo_id || *repo_id <= 0 || !ts) {
    return std::nullopt;
  }
  e.event_type = event_type_from_string({type->GetString(), type->GetStringLength()});
  e.actor_id = *actor_id;
  e.actor_login = as_string(member(actor, "login")).value_or("");
  e.repo_id = *repo_id;
  e.repo_name = as_string(member(repo, "name")).value_or("");
  e.created_at = *ts;

  if (const JsonValue *org = member(&doc, "org")) {
    if (auto org_id = as_int(member(org, "id")); org_id && *org_id > 0) {
      e.org_id = org_id;
      e.org_login = as_string(member(org, "login"));
    }
  }

  const JsonValue *payload = member(&doc, "payload");
  e.action = as_string(member(payload, "action"));

  switch (e.event_type) {
    case EventType::kIssues:
    case EventType::kIssueComment: {
      const JsonValue *issue = member(payload, "issue");
      e.issue_number = as_int(member(issue, "number"));
      if (issue != nullptr) {
        const JsonValue *pr = member(issue, "pull_request");
        e.issue_is_pr = pr != nullptr && !pr->IsNull();
      }
      if (e.event_type == EventType::kIssueComment) {
        e.comment_author_association =
            as_string(member(member(payload, "comment"), "author_association"));
      }
      break;
    }
    case EventType::kPullRequest: {
      const JsonValue *pr = member(payload, "pull_request");
      e.issue_number = as_int(member(payload, "number"));
      if (!e.issue_number) e.issue_number = as_int(member(pr, "number"));
      e.issue_is_pr = true;
      if (e.has_action("closed")) e.pr_merged = as_bool(member(pr, "merged"));
      e.pr_additions = as_int(member(pr, "additions"));
      e.pr_deletions = as_int(member(pr, "deletions"));
      break;
    }
    case EventType::kPullRequestReviewComment:
      e.issue_number =
          as_int(member(member(payload, "pull_request"), "number"));
      e.issue_is_pr = true;
      e.comment_author_association =
          as_string(member(member(payload, "comment"), "author_association"));
      break;
    default:
      break;
  }
  return e;
}

IngestReport &IngestReport::merge(const IngestReport &other) {
  files_read += other.files_read;
  lines_read += other.lines_read;
  events_emitted += other.events_emitted;
  lines_skipped += other.lines_skipped;
  bytes_decompressed += other.bytes_decompressed;
  hour_mismatches += other.hour_mismatches;
  bot_events += other.bot_events;
  events_stored += other.events_stored;
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  return *this;
}

nlohmann::json IngestReport::to_json() const {
  nlohmann::json errs = nlohmann::json::array();
  for (const auto &e : errors) {
    errs.push_back({{"path", e.path}, {"message", e.message}});
  }
  return {{"files_read", files_read},
          {"lines_read", lines_read},
          {"events_emitted", events_emitted},
          {"lines_skipped", lines_skipped},
          {"bytes_decompressed", bytes_decompressed},
          {"hour_mismatches", hour_mismatches},
          {"bot_events", bot_events},
          {"events_stored", events_stored},
          {"errors", errs}};
}

GzipLineReader::GzipLineReader(const std::filesystem::path &path)
    : in_(kChunkSize), out_(kChunkSize) {
  file_.reset(std::fopen(path.c_str(), "rb"));
  if (!file_) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() + ": " +
                                    std::strerror(errno));
  }
  // 15 + 32: zlib or gzip header, auto-detected.
  if (inflateInit2(&zs_, 15 + 32) != Z_OK) {
    throw Error(ErrorCode::kIo, "zlib initialization failed");
  }
  zs_ready_ = true;
}

GzipLineReader::~GzipLineReader() {
  if (zs_ready_) inflateEnd(&zs_);
}

bool GzipLineReader::fill() {
  if (finished_) return false;
  while (true) {
    if (zs_.avail_in == 0) {
      std::size_t n = std::fread(in_.data(), 1, in_.size(), file_.get());
      if (n == 0) {
        if (std::ferror(file_.get())) {
          error_ = "read error";
        } else if (saw_input_ && !stream_done_) {
          error_ = "unexpected end of gzip stream";
        }
        finished_ = true;
        return false;
      }
      saw_input_ = true;
      zs_.next_in = in_.data();
      zs_.avail_in = static_cast<uInt>(n);
    }
    zs_.next_out = reinterpret_cast<Bytef *>(out_.data());
    zs_.avail_out = static_cast<uInt>(out_.size());
    int rc = inflate(&zs_, Z_NO_FLUSH);
    std::size_t produced = out_.size() - zs_.avail_out;
    if (rc == Z_STREAM_END) {
      // Concatenated gzip members are legal; keep going if input remains.
      inflateReset(&zs_);
      stream_done_ = true;
    } else if (rc == Z_OK) {
      stream_done_ = false;
    } else if (rc != Z_BUF_ERROR) {
      error_ = std::string("corrupt gzip stream: ") +
               (zs_.msg != nullptr ? zs_.msg : "inflate error");
      finished_ = true;
      return false;
    }
    if (produced > 0) {
      buffer_.append(out_.data(), produced);
      bytes_out_ += produced;
      return true;
    }
  }
}

bool GzipLineReader::next_line(std::string_view &line) {
  while (true) {
    auto nl = buffer_.find('\n', pos_);
    if (nl != std::string::npos) {
      std::size_t end = nl;
      if (end > pos_ && buffer_[end - 1] == '\r') --end;
      line = std::string_view(buffer_).substr(pos_, end - pos_);
      pos_ = nl + 1;
      return true;
    }
    if (pos_ > 0) {
      buffer_.erase(0, pos_);
      pos_ = 0;
    }
    if (!fill()) {
      if (error_ || buffer_.empty()) {
        buffer_.clear();
        return false;
      }
      // Final line without a trailing newline.
      line = buffer_;
      pos_ = buffer_.size();
      return true;
    }
  }
}

IngestReport read_archive(const std::filesystem::path &path,
                          const EventSink &sink) {
  IngestReport report;
  const auto hour = parse_archive_name(path.filename().string());
  std::optional<GzipLineReader> reader;
  try {
    reader.emplace(path);
  } catch (const Error &e) {
    report.errors.push_back({path.string(), e.what()});
    return report;
  }
  report.files_read = 1;
  std::string_view line;
  while (reader->next_line(line)) {
    ++report.lines_read;
    auto event = parse_event_line(line);
    if (!event) {
      ++report.lines_skipped;
      continue;
    }
    ++report.events_emitted;
    if (hour && (event->created_at < hour->start() ||
                 event->created_at >= hour->start() + 3600)) {
      ++report.hour_mismatches;
    }
    if (event->actor_is_bot()) ++report.bot_events;
    sink(std::move(*event));
  }
  report.bytes_decompressed = reader->bytes_decompressed();
  if (reader->error()) report.errors.push_back({path.string(), *reader->error()});
  return report;
}

IngestReport read_archives(std::span<const std::filesystem::path> paths,
                           const EventSink &sink, unsigned threads) {
  std::vector<IngestReport> reports(paths.size());
  threads = std::max(1u, std::min<unsigned>(threads, paths.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      reports[i] = read_archive(paths[i], sink);
    }
  } else {
    std::mutex sink_mutex;
    const EventSink locked = [&](CollabEvent &&e) {
      std::lock_guard lock(sink_mutex);
      sink(std::move(e));
    };
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < paths.size(); i = next++) {
          reports[i] = read_archive(paths[i], locked);
        }
      });
    }
  }
  IngestReport total;
  for (const auto &r : reports) total.merge(r);
  return total;
}

}  // namespace ecodigger
