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

#include "core/time.hpp"

#include <chrono>
#include <cstdio>

namespace ecodigger {
namespace {

bool parse_digits(std::string_view text, std::size_t pos, std::size_t len,
                  int &out) {
  if (pos + len > text.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

}  // namespace

Timestamp make_timestamp(int year, int month, int day, int hour, int minute,
                         int second) {
  using namespace std::chrono;
  const sys_days days{std::chrono::year{year} / month / day};
  return static_cast<Timestamp>(days.time_since_epoch().count()) *
             kSecondsPerDay +
         hour * 3600 + minute * 60 + second;
}

Timestamp YearMonth::start() const { return make_timestamp(year, month, 1); }

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
  int y = 0, m = 0;
  if (text.size() != 7 || text[4] != '-' || !parse_digits(text, 0, 4, y) ||
      !parse_digits(text, 5, 2, m) || m < 1 || m > 12) {
    return std::nullopt;
  }
  return YearMonth{y, m};
}

YearMonth YearMonth::of(Timestamp ts) {
  using namespace std::chrono;
  Timestamp days = ts / kSecondsPerDay;
  if (ts % kSecondsPerDay < 0) --days;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return {static_cast<int>(ymd.year()),
          static_cast<int>(static_cast<unsigned>(ymd.month()))};
}

YearMonth YearMonth::now() {
  using namespace std::chrono;
  return of(duration_cast<seconds>(system_clock::now().time_since_epoch())
                .count());
}

std::optional<Window> Window::parse(std::string_view text) {
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    auto first = YearMonth::parse(text.substr(0, colon));
    auto last = YearMonth::parse(text.substr(colon + 1));
    if (!first || !last || *last < *first) return std::nullopt;
    return Window{*first, last->next()};
  }
  if (text.size() == 4) {
    int y = 0;
    if (!parse_digits(text, 0, 4, y)) return std::nullopt;
    return Window::year(y);
  }
  if (auto m = YearMonth::parse(text)) return Window::month(*m);
  return std::nullopt;
}

std::string Window::str() const {
  return begin.str() + ":" + YearMonth::from_index(end.index() - 1).str();
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  int y, mo, d, h, mi, s;
  if (text.size() < 20 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
      text[16] != ':') {
    return std::nullopt;
  }
  if (!parse_digits(text, 0, 4, y) || !parse_digits(text, 5, 2, mo) ||
      !parse_digits(text, 8, 2, d) || !parse_digits(text, 11, 2, h) ||
      !parse_digits(text, 14, 2, mi) || !parse_digits(text, 17, 2, s)) {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) {
    return std::nullopt;
  }
  {
    using namespace std::chrono;
    if (!year_month_day{std::chrono::year{y} / mo / d}.ok()) return std::nullopt;
  }
  std::size_t pos = 19;
  // Optional fractional seconds.
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  Timestamp offset = 0;
  std::string_view zone = text.substr(pos);
  if (zone == "Z") {
    offset = 0;
  } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') &&
             zone[3] == ':') {
    int oh, om;
    if (!parse_digits(zone, 1, 2, oh) || !parse_digits(zone, 4, 2, om)) {
      return std::nullopt;
    }
    offset = (zone[0] == '+' ? 1 : -1) * (oh * 3600 + om * 60);
  } else {
    return std::nullopt;
  }
  return make_timestamp(y, mo, d, h, mi, s) - offset;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  Timestamp days = ts / kSecondsPerDay;
  Timestamp rem = ts % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

std::pair<int, int> weekday_hour(Timestamp ts) {
  using namespace std::chrono;
  Timestamp days = ts / kSecondsPerDay;
  Timestamp rem = ts % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  const weekday wd{sys_days{std::chrono::days{days}}};
  return {static_cast<int>(wd.iso_encoding()) - 1, static_cast<int>(rem / 3600)};
}

}  // namespace ecodigger
