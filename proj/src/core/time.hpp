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

#ifndef ECODIGGER_CORE_TIME_HPP_
#define ECODIGGER_CORE_TIME_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace ecodigger {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

constexpr Timestamp kSecondsPerDay = 86400;

// A UTC calendar month. Months are the finest time granularity of windows.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  auto operator<=>(const YearMonth &) const = default;

  // Months since year 0; handy for arithmetic.
  int index() const { return year * 12 + (month - 1); }
  static YearMonth from_index(int index) { return {index / 12, index % 12 + 1}; }

  YearMonth next() const { return from_index(index() + 1); }
  Timestamp start() const;
  std::string str() const;  // "2019-03"

  static std::optional<YearMonth> parse(std::string_view text);
  static YearMonth of(Timestamp ts);
  static YearMonth now();
};

// Half-open, month-aligned [begin, end).
struct Window {
  YearMonth begin;
  YearMonth end;

  bool operator==(const Window &) const = default;

  Timestamp start() const { return begin.start(); }
  Timestamp stop() const { return end.start(); }
  bool contains(Timestamp ts) const { return ts >= start() && ts < stop(); }
  bool covers(const Window &other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool empty() const { return end <= begin; }

  static Window year(int y) { return {{y, 1}, {y + 1, 1}}; }
  static Window month(YearMonth m) { return {m, m.next()}; }

  // Accepts "2019", "2019-03", or an inclusive month range "2019-01:2019-06".
  static std::optional<Window> parse(std::string_view text);
  std::string str() const;  // "2019-01:2019-12" (inclusive last month)
};

Timestamp make_timestamp(int year, int month, int day, int hour = 0,
                         int minute = 0, int second = 0);

// Parses "YYYY-MM-DDTHH:MM:SSZ" (also accepts a "+00:00" suffix).
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// ISO weekday (0 = Monday .. 6 = Sunday) and hour of day, both UTC.
std::pair<int, int> weekday_hour(Timestamp ts);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_TIME_HPP_
