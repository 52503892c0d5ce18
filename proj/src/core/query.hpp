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

#ifndef ECODIGGER_CORE_QUERY_HPP_
#define ECODIGGER_CORE_QUERY_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/labels.hpp"
#include "core/metrics.hpp"
#include "core/store.hpp"
#include "core/time.hpp"

namespace ecodigger {

enum class SortOrder { kAsc, kDesc };
enum class OrderOption { kLatest, kAll };
enum class LimitOption { kAll, kEach };
enum class TimeGrouping { kYear, kQuarter, kMonth };

// Metric query envelope. Field names in JSON match the interface
// parameters verbatim (startYear, orderOption, injectLabelData, ...).
struct QueryRequest {
  int start_year = 2015;
  int end_year;    // defaults to the current year
  int start_month = 1;
  int end_month;   // defaults to the current month
  std::optional<std::vector<std::int64_t>> repo_ids;
  std::optional<std::vector<std::string>> repo_names;
  std::optional<std::vector<std::int64_t>> org_ids;
  std::optional<std::vector<std::string>> org_names;
  std::optional<std::vector<std::int64_t>> user_ids;
  std::optional<std::vector<std::string>> user_names;
  std::optional<std::vector<std::string>> label_union;
  std::optional<std::vector<std::string>> label_intersect;
  SortOrder order = SortOrder::kAsc;
  OrderOption order_option = OrderOption::kLatest;
  std::size_t limit = 10;
  LimitOption limit_option = LimitOption::kAll;
  std::optional<std::string> group_by;  // "org" or a label type
  std::optional<TimeGrouping> group_time_range;  // absent: one bucket
  int precision = 2;
  std::vector<Label> inject_label_data;
  nlohmann::json options = nlohmann::json::object();
  std::string metric;

  explicit QueryRequest(YearMonth now = YearMonth::now());

  // Unknown keys are rejected (kInvalidArgument).
  static QueryRequest from_json(const nlohmann::json &j, YearMonth now = YearMonth::now());
  nlohmann::json to_json() const;
  void validate() const;
};

struct Bucket {
  YearMonth first;
  YearMonth last;  // inclusive
  std::string label;
  Window window() const { return {first, last.next()}; }
};

// Calendar years and quarters are clipped to the range.
std::vector<Bucket> split_buckets(YearMonth first, YearMonth last,
                                  std::optional<TimeGrouping> grouping);

// One conjunct of the scope. A clause restricts repos when it comes from an
// explicit repo/org list or names any org or repo (or nothing at all); it
// restricts users when it names users. A repo matches when its id, or its
// org's id, is in the clause.
struct ScopeClause {
  std::string source;  // "repoIds", "labelIntersect", ...
  EntitySet entities;
  bool restricts_repos = false;
  bool restricts_users = false;
};

struct QueryPlan {
  QueryRequest request;
  const MetricInfo *metric = nullptr;
  std::vector<Bucket> buckets;
  LabelStore labels;  // after injection
  std::vector<ScopeClause> clauses;
  std::optional<std::set<std::int64_t>> repos;  // nullopt: all repos
  std::optional<std::set<std::int64_t>> users;  // nullopt: all users
  bool empty_scope = false;
  std::vector<std::string> warnings;

  Window range() const { return {buckets.front().first, buckets.back().last.next()}; }
};

// Throws for invalid requests, unknown metrics, unknown label refs and
// unknown groupBy label types. An empty scope is not an error.
QueryPlan plan(const QueryRequest &q, const LabelStore &labels, const Catalog &catalog);

struct QueryData {
  std::span<const CollabEvent> events;
  const Catalog &catalog;
  Timestamp coverage_start = 0;
};

struct ResultRow {
  std::string id;  // repo / org id, or a label id
  std::int64_t numeric_id = 0;  // 0 for label rows
  std::string name;
  std::vector<double> values;  // one per bucket
  std::optional<double> total;  // additive metrics only
};

struct ResultTable {
  std::string metric;
  std::vector<std::string> buckets;
  std::optional<std::string> group_by;
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;
};

ResultTable execute(const QueryPlan &plan, const QueryData &data);

enum class OutputFormat { kJson, kCsv };

// Values are rounded half away from zero at serialization time only.
std::string render(const ResultTable &table, OutputFormat format, int precision);

// Rounds the shortest round-trip decimal form of `value`, e.g. 0.875 at
// precision 2 gives "0.88".
std::string format_decimal(double value, int precision);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_QUERY_HPP_
