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

#include "core/query.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace ecodigger {
namespace {

[[noreturn]] void bad_request(const std::string &why) {
  throw Error(ErrorCode::kInvalidArgument, "query: " + why);
}

template <typename T>
std::optional<std::vector<T>> optional_list(const nlohmann::json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) bad_request(std::string(key) + " must be an array");
  std::vector<T> out;
  for (const auto &v : *it) {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) bad_request(std::string(key) + " must hold strings");
    } else {
      if (!v.is_number_integer()) bad_request(std::string(key) + " must hold integers");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

int get_int(const nlohmann::json &j, const char *key, int fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number_integer()) bad_request(std::string(key) + " must be an integer");
  return it->get<int>();
}

std::optional<std::string> get_string(const nlohmann::json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad_request(std::string(key) + " must be a string");
  return it->get<std::string>();
}

const char *to_string(TimeGrouping g) {
  switch (g) {
    case TimeGrouping::kYear: return "year";
    case TimeGrouping::kQuarter: return "quarter";
    case TimeGrouping::kMonth: return "month";
  }
  return "";
}

}  // namespace

QueryRequest::QueryRequest(YearMonth now) : end_year(now.year), end_month(now.month) {}

QueryRequest QueryRequest::from_json(const nlohmann::json &j, YearMonth now) {
  if (!j.is_object()) bad_request("request must be a JSON object");
  static const std::set<std::string> kKeys = {
      "startYear", "endYear", "startMonth", "endMonth", "repoIds", "repoNames",
      "orgIds", "orgNames", "userIds", "userNames", "labelUnion", "labelIntersect",
      "order", "orderOption", "limit", "limitOption", "groupBy", "groupTimeRange",
      "precision", "injectLabelData", "options", "metric"};
  for (const auto &[key, value] : j.items()) {
    if (!kKeys.contains(key)) bad_request("unknown parameter '" + key + "'");
  }
  QueryRequest q(now);
  q.start_year = get_int(j, "startYear", q.start_year);
  q.end_year = get_int(j, "endYear", q.end_year);
  q.start_month = get_int(j, "startMonth", q.start_month);
  q.end_month = get_int(j, "endMonth", q.end_month);
  q.repo_ids = optional_list<std::int64_t>(j, "repoIds");
  q.repo_names = optional_list<std::string>(j, "repoNames");
  q.org_ids = optional_list<std::int64_t>(j, "orgIds");
  q.org_names = optional_list<std::string>(j, "orgNames");
  q.user_ids = optional_list<std::int64_t>(j, "userIds");
  q.user_names = optional_list<std::string>(j, "userNames");
  q.label_union = optional_list<std::string>(j, "labelUnion");
  q.label_intersect = optional_list<std::string>(j, "labelIntersect");
  if (auto o = get_string(j, "order")) {
    if (*o == "ASC") q.order = SortOrder::kAsc;
    else if (*o == "DESC") q.order = SortOrder::kDesc;
    else bad_request("order must be \"ASC\" or \"DESC\"");
  }
  if (auto o = get_string(j, "orderOption")) {
    if (*o == "latest") q.order_option = OrderOption::kLatest;
    else if (*o == "all") q.order_option = OrderOption::kAll;
    else bad_request("orderOption must be \"latest\" or \"all\"");
  }
  const int limit = get_int(j, "limit", static_cast<int>(q.limit));
  if (limit < 1) bad_request("limit must be >= 1");
  q.limit = static_cast<std::size_t>(limit);
  if (auto o = get_string(j, "limitOption")) {
    if (*o == "all") q.limit_option = LimitOption::kAll;
    else if (*o == "each") q.limit_option = LimitOption::kEach;
    else bad_request("limitOption must be \"all\" or \"each\"");
  }
  q.group_by = get_string(j, "groupBy");
  if (q.group_by && q.group_by->empty()) q.group_by.reset();
  if (auto g = get_string(j, "groupTimeRange"); g && !g->empty()) {
    if (*g == "year") q.group_time_range = TimeGrouping::kYear;
    else if (*g == "quarter") q.group_time_range = TimeGrouping::kQuarter;
    else if (*g == "month") q.group_time_range = TimeGrouping::kMonth;
    else bad_request("groupTimeRange must be year, quarter or month");
  }
  q.precision = get_int(j, "precision", q.precision);
  if (auto it = j.find("injectLabelData"); it != j.end() && !it->is_null()) {
    q.inject_label_data = labels_from_json(*it);
  }
  if (auto it = j.find("options"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) bad_request("options must be an object");
    q.options = *it;
  }
  q.metric = get_string(j, "metric").value_or("");
  q.validate();
  return q;
}

nlohmann::json QueryRequest::to_json() const {
  nlohmann::json j = {
      {"startYear", start_year}, {"endYear", end_year},
      {"startMonth", start_month}, {"endMonth", end_month},
      {"order", order == SortOrder::kAsc ? "ASC" : "DESC"},
      {"orderOption", order_option == OrderOption::kLatest ? "latest" : "all"},
      {"limit", limit},
      {"limitOption", limit_option == LimitOption::kAll ? "all" : "each"},
      {"precision", precision}, {"options", options}, {"metric", metric}};
  auto opt = [&](const char *key, const auto &v) {
    if (v) j[key] = *v;
  };
  opt("repoIds", repo_ids);
  opt("repoNames", repo_names);
  opt("orgIds", org_ids);
  opt("orgNames", org_names);
  opt("userIds", user_ids);
  opt("userNames", user_names);
  opt("labelUnion", label_union);
  opt("labelIntersect", label_intersect);
  opt("groupBy", group_by);
  if (group_time_range) j["groupTimeRange"] = to_string(*group_time_range);
  return j;
}

void QueryRequest::validate() const {
  if (start_month < 1 || start_month > 12 || end_month < 1 || end_month > 12) {
    bad_request("months must lie in 1..12");
  }
  if (YearMonth{end_year, end_month} < YearMonth{start_year, start_month}) {
    bad_request("start must not be after end");
  }
  if (limit < 1) bad_request("limit must be >= 1");
  if (precision < 0 || precision > 15) bad_request("precision must lie in 0..15");
  if (label_union && label_union->empty()) bad_request("labelUnion must not be empty");
  if (label_intersect && label_intersect->empty()) bad_request("labelIntersect must not be empty");
}

std::vector<Bucket> split_buckets(YearMonth first, YearMonth last,
                                  std::optional<TimeGrouping> grouping) {
  std::vector<Bucket> out;
  if (!grouping) {
    out.push_back({first, last, first.str() + ":" + last.str()});
    return out;
  }
  const int span = *grouping == TimeGrouping::kYear ? 12 : *grouping == TimeGrouping::kQuarter ? 3 : 1;
  YearMonth cur = first;
  while (!(last < cur)) {
    // Periods are aligned to calendar boundaries.
    const int period_start = cur.index() - (cur.month - 1) % span;
    YearMonth end = YearMonth::from_index(std::min(period_start + span - 1, last.index()));
    std::string label;
    switch (*grouping) {
      case TimeGrouping::kYear: label = std::to_string(cur.year); break;
      case TimeGrouping::kQuarter:
        label = std::to_string(cur.year) + "Q" + std::to_string((cur.month - 1) / 3 + 1);
        break;
      case TimeGrouping::kMonth: label = cur.str(); break;
    }
    out.push_back({cur, end, label});
    cur = end.next();
  }
  return out;
}

QueryPlan plan(const QueryRequest &q, const LabelStore &labels, const Catalog &catalog) {
  q.validate();
  QueryPlan p;
  p.request = q;
  p.metric = &require_metric(q.metric);
  p.buckets = split_buckets({q.start_year, q.start_month}, {q.end_year, q.end_month},
                            q.group_time_range);
  p.labels = q.inject_label_data.empty() ? labels : labels.inject(q.inject_label_data);

  auto explicit_clause = [&](const char *source, auto member, const auto &ids) {
    ScopeClause c{source, {}, false, false};
    (c.entities.*member).insert(ids.begin(), ids.end());
    if (member == &EntitySet::users) c.restricts_users = true;
    else c.restricts_repos = true;
    p.clauses.push_back(std::move(c));
  };
  auto by_name = [&](const char *source, const std::vector<std::string> &names, auto lookup) {
    std::vector<std::int64_t> ids;
    for (const auto &n : names) {
      if (auto id = (catalog.*lookup)(n)) ids.push_back(*id);
      else p.warnings.push_back(std::string(source) + ": unknown name '" + n + "'");
    }
    return ids;
  };
  if (q.repo_ids) explicit_clause("repoIds", &EntitySet::repos, *q.repo_ids);
  if (q.repo_names) explicit_clause("repoNames", &EntitySet::repos, by_name("repoNames", *q.repo_names, &Catalog::repo_id));
  if (q.org_ids) explicit_clause("orgIds", &EntitySet::orgs, *q.org_ids);
  if (q.org_names) explicit_clause("orgNames", &EntitySet::orgs, by_name("orgNames", *q.org_names, &Catalog::org_id));
  if (q.user_ids) explicit_clause("userIds", &EntitySet::users, *q.user_ids);
  if (q.user_names) explicit_clause("userNames", &EntitySet::users, by_name("userNames", *q.user_names, &Catalog::user_id));
  auto label_clause = [&](const char *source, EntitySet set) {
    ScopeClause c{source, std::move(set), false, false};
    c.restricts_repos = !c.entities.orgs.empty() || !c.entities.repos.empty() || c.entities.empty();
    c.restricts_users = !c.entities.users.empty();
    p.clauses.push_back(std::move(c));
  };
  if (q.label_union) label_clause("labelUnion", p.labels.label_union(*q.label_union));
  if (q.label_intersect) label_clause("labelIntersect", p.labels.label_intersect(*q.label_intersect));

  for (const ScopeClause &c : p.clauses) {
    if (c.restricts_repos) {
      std::set<std::int64_t> matched;
      for (const auto &[id, info] : catalog.repos()) {
        if (c.entities.repos.contains(id) || (info.org_id && c.entities.orgs.contains(*info.org_id))) {
          matched.insert(id);
        }
      }
      // Explicit repo ids the catalog has not seen still count.
      for (std::int64_t id : c.entities.repos) matched.insert(id);
      if (!p.repos) {
        p.repos = std::move(matched);
      } else {
        std::set<std::int64_t> both;
        std::set_intersection(p.repos->begin(), p.repos->end(), matched.begin(), matched.end(),
                              std::inserter(both, both.end()));
        p.repos = std::move(both);
      }
    }
    if (c.restricts_users) {
      if (!p.users) {
        p.users = c.entities.users;
      } else {
        std::set<std::int64_t> both;
        std::set_intersection(p.users->begin(), p.users->end(), c.entities.users.begin(),
                              c.entities.users.end(), std::inserter(both, both.end()));
        p.users = std::move(both);
      }
    }
  }
  if ((p.repos && p.repos->empty()) || (p.users && p.users->empty())) {
    p.empty_scope = true;
    p.warnings.push_back("scope is empty after intersecting all clauses");
  }

  if (q.group_by && *q.group_by != "org" && p.labels.labels_of_type(*q.group_by).empty()) {
    throw Error(ErrorCode::kUnknownLabelType, "groupBy: unknown label type " + *q.group_by);
  }
  return p;
}

namespace {

struct Entity {
  ResultRow row;
  std::vector<CollabEvent> events;
};

}  // namespace

ResultTable execute(const QueryPlan &plan, const QueryData &data) {
  const QueryRequest &q = plan.request;
  ResultTable table;
  table.metric = std::string(plan.metric->name);
  table.group_by = q.group_by;
  table.warnings = plan.warnings;
  for (const Bucket &b : plan.buckets) table.buckets.push_back(b.label);
  if (plan.empty_scope) return table;

  const Window range = plan.range();
  // Per-repo event streams (full history: contributor metrics look back).
  std::map<std::int64_t, std::vector<const CollabEvent *>> by_repo;
  std::set<std::int64_t> active;
  for (const CollabEvent &e : data.events) {
    if (plan.repos && !plan.repos->contains(e.repo_id)) continue;
    if (plan.users && !plan.users->contains(e.actor_id)) continue;
    if (e.created_at >= range.stop()) continue;
    by_repo[e.repo_id].push_back(&e);
    if (range.contains(e.created_at)) active.insert(e.repo_id);
  }
  auto org_of = [&](std::int64_t repo) -> std::optional<std::int64_t> {
    if (const RepoInfo *r = data.catalog.repo(repo)) return r->org_id;
    return std::nullopt;
  };

  std::vector<Entity> entities;
  auto add_members = [&](Entity &ent, std::int64_t repo) {
    for (const CollabEvent *e : by_repo[repo]) ent.events.push_back(*e);
  };
  if (!q.group_by) {
    for (std::int64_t repo : active) {
      Entity ent;
      ent.row.id = std::to_string(repo);
      ent.row.numeric_id = repo;
      if (const RepoInfo *r = data.catalog.repo(repo)) ent.row.name = r->name;
      add_members(ent, repo);
      entities.push_back(std::move(ent));
    }
  } else if (*q.group_by == "org") {
    std::map<std::int64_t, std::vector<std::int64_t>> members;
    for (std::int64_t repo : active) {
      if (auto org = org_of(repo)) members[*org].push_back(repo);
    }
    for (const auto &[org, repos] : members) {
      Entity ent;
      ent.row.id = std::to_string(org);
      ent.row.numeric_id = org;
      if (const NameInfo *o = data.catalog.org(org)) ent.row.name = o->name;
      for (std::int64_t repo : repos) add_members(ent, repo);
      entities.push_back(std::move(ent));
    }
  } else {
    for (const Label *label : plan.labels.labels_of_type(*q.group_by)) {
      const EntitySet &set = plan.labels.resolve_id(label->id);
      Entity ent;
      ent.row.id = label->id;
      ent.row.name = label->name;
      bool any = false;
      for (std::int64_t repo : active) {
        auto org = org_of(repo);
        if (set.repos.contains(repo) || (org && set.orgs.contains(*org))) {
          add_members(ent, repo);
          any = true;
        }
      }
      if (any) entities.push_back(std::move(ent));
    }
  }

  for (Entity &ent : entities) {
    std::sort(ent.events.begin(), ent.events.end(), [](const auto &a, const auto &b) {
      if (a.created_at != b.created_at) return a.created_at < b.created_at;
      return a.event_id < b.event_id;
    });
    MetricEvaluator eval(ent.events, data.coverage_start, q.options);
    for (const Bucket &b : plan.buckets) ent.row.values.push_back(eval.scalar(q.metric, b.window()));
    if (plan.metric->additive) {
      ent.row.total = std::accumulate(ent.row.values.begin(), ent.row.values.end(), 0.0);
    }
  }

  // (key, id) is a strict total order.
  auto id_less = [](const ResultRow &a, const ResultRow &b) {
    if (a.numeric_id != b.numeric_id) return a.numeric_id < b.numeric_id;
    return a.id < b.id;
  };
  auto ordered_by = [&](auto key) {
    return [&, key](const ResultRow &a, const ResultRow &b) {
      const double ka = key(a), kb = key(b);
      if (ka != kb) return q.order == SortOrder::kAsc ? ka < kb : ka > kb;
      return id_less(a, b);
    };
  };
  auto overall_key = [&](const ResultRow &r) {
    if (q.order_option == OrderOption::kLatest) return r.values.back();
    return std::accumulate(r.values.begin(), r.values.end(), 0.0);
  };

  std::vector<ResultRow> rows;
  for (auto &ent : entities) rows.push_back(std::move(ent.row));
  std::sort(rows.begin(), rows.end(), ordered_by(overall_key));
  if (q.limit_option == LimitOption::kAll) {
    if (rows.size() > q.limit) rows.resize(q.limit);
  } else {
    std::vector<bool> keep(rows.size(), false);
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t b = 0; b < plan.buckets.size(); ++b) {
      std::iota(idx.begin(), idx.end(), 0);
      auto cmp = ordered_by([b](const ResultRow &r) { return r.values[b]; });
      std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return cmp(rows[x], rows[y]); });
      for (std::size_t i = 0; i < std::min(q.limit, idx.size()); ++i) keep[idx[i]] = true;
    }
    std::vector<ResultRow> kept;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (keep[i]) kept.push_back(std::move(rows[i]));
    }
    rows = std::move(kept);
  }
  table.rows = std::move(rows);
  return table;
}

std::string format_decimal(double value, int precision) {
  if (!std::isfinite(value)) return "null";
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), std::fabs(value), std::chars_format::fixed);
  std::string digits(buf, res.ptr);
  std::string int_part = digits, frac;
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    int_part = digits.substr(0, dot);
    frac = digits.substr(dot + 1);
  }
  const auto p = static_cast<std::size_t>(precision);
  bool round_up = frac.size() > p && frac[p] >= '5';
  frac.resize(p, '0');
  std::string all = int_part + frac;
  if (round_up) {
    std::size_t i = all.size();
    while (i > 0) {
      --i;
      if (all[i] == '9') {
        all[i] = '0';
      } else {
        ++all[i];
        break;
      }
      if (i == 0) all.insert(all.begin(), '1');
    }
  }
  std::string out = all.substr(0, all.size() - p);
  if (p > 0) out += "." + all.substr(all.size() - p);
  const bool zero = out.find_first_not_of("0.") == std::string::npos;
  if (std::signbit(value) && !zero) out.insert(out.begin(), '-');
  return out;
}

namespace {

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render(const ResultTable &table, OutputFormat format, int precision) {
  std::ostringstream out;
  const bool with_total =
      std::any_of(table.rows.begin(), table.rows.end(), [](const auto &r) { return r.total.has_value(); });
  if (format == OutputFormat::kCsv) {
    out << "id,name";
    for (const auto &b : table.buckets) out << ',' << csv_field(b);
    if (with_total) out << ",total";
    out << '\n';
    for (const ResultRow &r : table.rows) {
      out << csv_field(r.id) << ',' << csv_field(r.name);
      for (double v : r.values) out << ',' << format_decimal(v, precision);
      if (with_total) out << ',' << (r.total ? format_decimal(*r.total, precision) : "");
      out << '\n';
    }
    return out.str();
  }
  out << "{\"metric\":" << nlohmann::json(table.metric).dump()
      << ",\"buckets\":" << nlohmann::json(table.buckets).dump()
      << ",\"group_by\":" << (table.group_by ? nlohmann::json(*table.group_by) : nlohmann::json()).dump()
      << ",\"rows\":[";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const ResultRow &r = table.rows[i];
    if (i) out << ',';
    out << "{\"id\":" << (r.numeric_id != 0 ? r.id : nlohmann::json(r.id).dump())
        << ",\"name\":" << nlohmann::json(r.name).dump() << ",\"values\":[";
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      if (k) out << ',';
      out << format_decimal(r.values[k], precision);
    }
    out << ']';
    if (r.total) out << ",\"total\":" << format_decimal(*r.total, precision);
    out << '}';
  }
  out << "],\"warnings\":" << nlohmann::json(table.warnings).dump() << "}\n";
  return out.str();
}

}  // namespace ecodigger
