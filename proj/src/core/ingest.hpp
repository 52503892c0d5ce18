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

#ifndef ECODIGGER_CORE_INGEST_HPP_
#define ECODIGGER_CORE_INGEST_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>
#include <zlib.h>

#include "core/event.hpp"

namespace ecodigger {

// Hour encoded in a GHArchive file name, e.g. "2019-01-15-7.json.gz".
struct ArchiveHour {
  int year = 0;
  int month = 0;
  int day = 0;
  int hour = 0;

  Timestamp start() const { return make_timestamp(year, month, day, hour); }
};

std::optional<ArchiveHour> parse_archive_name(std::string_view filename);

// Parses one GHArchive JSON line. Never throws; returns nullopt for anything
// that is not a JSON object carrying id, type, actor, repo and created_at.
std::optional<CollabEvent> parse_event_line(std::string_view line);

struct FileError {
  std::string path;
  std::string message;
};

struct IngestReport {
  std::uint64_t files_read = 0;
  std::uint64_t lines_read = 0;
  std::uint64_t events_emitted = 0;
  std::uint64_t lines_skipped = 0;
  std::uint64_t bytes_decompressed = 0;
  // Events whose created_at falls outside the hour named by the file.
  std::uint64_t hour_mismatches = 0;
  std::uint64_t bot_events = 0;
  // Filled in by the event store; events of types it does not persist are
  // emitted but not stored.
  std::uint64_t events_stored = 0;
  std::vector<FileError> errors;

  // Associative; used to fold per-file reports.
  IngestReport &merge(const IngestReport &other);
  nlohmann::json to_json() const;
};

// Streams newline-delimited text out of a gzip file (multi-member aware)
// with memory bounded by the longest line.
class GzipLineReader {
 public:
  explicit GzipLineReader(const std::filesystem::path &path);
  ~GzipLineReader();
  GzipLineReader(const GzipLineReader &) = delete;
  GzipLineReader &operator=(const GzipLineReader &) = delete;

  // The view stays valid until the next call. Returns false at end of
  // stream or after an error; a trailing partial line is dropped on error.
  bool next_line(std::string_view &line);

  const std::optional<std::string> &error() const { return error_; }
  std::uint64_t bytes_decompressed() const { return bytes_out_; }

 private:
  bool fill();

  struct FileCloser {
    void operator()(std::FILE *f) const { std::fclose(f); }
  };
  std::unique_ptr<std::FILE, FileCloser> file_;
  z_stream zs_{};
  bool zs_ready_ = false;
  std::vector<unsigned char> in_;
  std::vector<char> out_;
  std::string buffer_;
  std::size_t pos_ = 0;
  bool finished_ = false;
  bool saw_input_ = false;
  bool stream_done_ = false;
  std::uint64_t bytes_out_ = 0;
  std::optional<std::string> error_;
};

using EventSink = std::function<void(CollabEvent &&)>;

// Streams one archive into `sink`. Unreadable or corrupt files are reported
// in the returned report, never thrown.
IngestReport read_archive(const std::filesystem::path &path,
                          const EventSink &sink);

// Files are split across `threads` workers; sink calls are serialized, so
// events from different files may interleave. The merged report is
// independent of the thread count.
IngestReport read_archives(std::span<const std::filesystem::path> paths,
                           const EventSink &sink, unsigned threads = 1);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_INGEST_HPP_
