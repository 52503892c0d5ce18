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

#include "ecodigger/ecodigger.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/error.hpp"
#include "core/labels.hpp"
#include "core/metrics.hpp"
#include "core/pipeline.hpp"
#include "core/query.hpp"
#include "core/store.hpp"

struct ed_store {
  ecodigger::EventStore store;
};

struct ed_labels {
  ecodigger::LabelStore labels;
};

struct ed_graph {
  ecodigger::ProjectGraph graph;
};

namespace {

using ecodigger::Error;
using ecodigger::ErrorCode;
using nlohmann::json;

thread_local std::string g_last_error;

ed_status fail(ed_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body` and turns exceptions into status codes.
template <typename F>
ed_status guarded(F &&body) {
  g_last_error.clear();
  try {
    body();
    return ED_OK;
  } catch (const Error &e) {
    return fail(static_cast<ed_status>(e.code()), e.what());
  } catch (const json::exception &e) {
    return fail(ED_PARSE, e.what());
  } catch (const std::bad_alloc &) {
    return fail(ED_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(ED_INTERNAL, e.what());
  }
}

char *dup_string(const std::string &s) {
  char *out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char *what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

json parse_args(const char *text) {
  if (text == nullptr || *text == '\0') return json::object();
  json j = json::parse(text);
  require(j.is_object(), "arguments must be a JSON object");
  return j;
}

std::vector<std::string> ref_list(const char *const *refs, size_t count) {
  require(refs != nullptr || count == 0, "refs is null");
  std::vector<std::string> out;
  for (size_t i = 0; i < count; ++i) {
    require(refs[i] != nullptr, "null label ref");
    out.emplace_back(refs[i]);
  }
  return out;
}

// "window" argument, or the months held by the store.
ecodigger::Window window_arg(const json &args, const ecodigger::EventStore &store) {
  if (auto it = args.find("window"); it != args.end() && !it->is_null()) {
    require(it->is_string() || it->is_number_integer(), "window must be a string");
    const std::string text = it->is_string() ? it->get<std::string>() : std::to_string(it->get<int>());
    auto w = ecodigger::Window::parse(text);
    if (!w) throw Error(ErrorCode::kInvalidArgument, "bad window '" + text + "'");
    return *w;
  }
  const auto months = store.months();
  if (months.empty()) throw Error(ErrorCode::kNotFound, "store holds no events");
  return {months.front(), months.back().next()};
}

ecodigger::BehaviorWeights weights_arg(const json &args) {
  auto it = args.find("weights");
  if (it == args.end() || it->is_null()) return {};
  auto w = ecodigger::BehaviorWeights::from_json(*it);
  w.validate();
  return w;
}

std::size_t size_arg(const json &args, const char *key, std::size_t fallback) {
  auto it = args.find(key);
  if (it == args.end() || it->is_null()) return fallback;
  require(it->is_number_unsigned(), "expected a non-negative integer");
  return it->get<std::size_t>();
}

json event_json_of(const ecodigger::CollabEvent &e) {
  json j = {{"id", e.event_id},
            {"type", ecodigger::to_string(e.event_type)},
            {"actor_id", e.actor_id},
            {"actor_login", e.actor_login},
            {"repo_id", e.repo_id},
            {"repo_name", e.repo_name},
            {"created_at", ecodigger::format_timestamp(e.created_at)}};
  auto opt = [&](const char *key, const auto &v) {
    if (v) j[key] = *v;
  };
  opt("action", e.action);
  opt("org_id", e.org_id);
  opt("org_login", e.org_login);
  opt("issue_number", e.issue_number);
  opt("issue_is_pr", e.issue_is_pr);
  opt("pr_merged", e.pr_merged);
  opt("pr_additions", e.pr_additions);
  opt("pr_deletions", e.pr_deletions);
  opt("author_association", e.comment_author_association);
  if (auto b = ecodigger::classify_behavior(e)) j["behavior"] = ecodigger::to_string(*b);
  return j;
}

}  // namespace

extern "C" {

const char *ed_version(void) { return "0.1.0"; }

const char *ed_status_name(ed_status status) {
  switch (status) {
    case ED_OK: return "ok";
    case ED_INVALID_ARGUMENT: return "invalid argument";
    case ED_IO: return "i/o error";
    case ED_PARSE: return "parse error";
    case ED_NOT_FOUND: return "not found";
    case ED_UNKNOWN_LABEL_ID: return "unknown label id";
    case ED_UNKNOWN_LABEL_TYPE: return "unknown label type";
    case ED_CONFLICT: return "conflict";
    case ED_CYCLE: return "label cycle";
    case ED_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *ed_last_error(void) { return g_last_error.c_str(); }

void ed_string_free(char *s) { delete[] s; }

ed_status ed_store_open(const char *dir, ed_store **out) {
  if (dir == nullptr || out == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new ed_store{ecodigger::EventStore::open(dir)}; });
}

void ed_store_close(ed_store *store) { delete store; }

ed_status ed_store_ingest(ed_store *store, const char *const *paths, size_t count,
                          unsigned threads, char **report_json) {
  if (store == nullptr || report_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    require(paths != nullptr || count == 0, "paths is null");
    std::vector<std::filesystem::path> files;
    for (size_t i = 0; i < count; ++i) {
      require(paths[i] != nullptr, "null path");
      files.emplace_back(paths[i]);
    }
    const auto report = store->store.ingest(files, threads == 0 ? 1 : threads);
    *report_json = dup_string(report.to_json().dump());
  });
}

ed_status ed_store_info(const ed_store *store, char **info_json) {
  if (store == nullptr || info_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    json months = json::array();
    for (const auto &m : store->store.months()) months.push_back(m.str());
    json info = {{"months", months}, {"repos", store->store.catalog().repos().size()}};
    if (auto c = store->store.coverage_start()) info["coverage_start"] = ecodigger::format_timestamp(*c);
    *info_json = dup_string(info.dump());
  });
}

ed_status ed_labels_load(const char *root, ed_labels **out) {
  if (out == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ed_labels{root == nullptr ? ecodigger::LabelStore() : ecodigger::LabelStore::load(root)};
  });
}

ed_status ed_labels_inject(const ed_labels *labels, const char *labels_json, ed_labels **out) {
  if (labels == nullptr || labels_json == nullptr || out == nullptr) {
    return fail(ED_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    auto custom = ecodigger::labels_from_json(json::parse(labels_json));
    *out = new ed_labels{labels->labels.inject(std::move(custom))};
  });
}

void ed_labels_free(ed_labels *labels) { delete labels; }

ed_status ed_labels_resolve(const ed_labels *labels, const char *ref, char **set_json) {
  if (labels == nullptr || ref == nullptr || set_json == nullptr) {
    return fail(ED_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { *set_json = dup_string(labels->labels.resolve(ref).to_json().dump()); });
}

ed_status ed_labels_intersect(const ed_labels *labels, const char *const *refs, size_t count,
                              char **set_json) {
  if (labels == nullptr || set_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto list = ref_list(refs, count);
    *set_json = dup_string(labels->labels.label_intersect(list).to_json().dump());
  });
}

ed_status ed_labels_union(const ed_labels *labels, const char *const *refs, size_t count,
                          char **set_json) {
  if (labels == nullptr || set_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto list = ref_list(refs, count);
    *set_json = dup_string(labels->labels.label_union(list).to_json().dump());
  });
}

ed_status ed_activity(const ed_store *store, const char *args_json, char **rows_json) {
  if (store == nullptr || rows_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json args = parse_args(args_json);
    const auto window = window_arg(args, store->store);
    const auto weights = weights_arg(args);
    ecodigger::CountScope scope = ecodigger::CountScope::kDeveloperRepo;
    if (auto it = args.find("scope"); it != args.end() && !it->is_null()) {
      const std::string s = it->get<std::string>();
      if (s == "developer") scope = ecodigger::CountScope::kDeveloper;
      else if (s == "repo") scope = ecodigger::CountScope::kRepo;
      else require(s == "developer_repo", "scope must be developer_repo, developer or repo");
    }
    const auto events = store->store.load(window);
    const auto rows = ecodigger::activity_rows(events, window, weights, scope, size_arg(args, "limit", 0));
    *rows_json = dup_string(rows.dump());
  });
}

ed_status ed_graph_build(const ed_store *store, const char *args_json, ed_graph **out) {
  if (store == nullptr || out == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const json args = parse_args(args_json);
    const auto window = window_arg(args, store->store);
    const auto weights = weights_arg(args);
    const auto events = store->store.load(window);
    auto built = ecodigger::build_network(
        events, window, weights, size_arg(args, "bot_threshold", ecodigger::kDefaultBotThreshold),
        static_cast<unsigned>(std::max<std::size_t>(1, size_arg(args, "threads", 1))));
    *out = new ed_graph{std::move(built.graph)};
  });
}

ed_status ed_graph_read(const char *edge_list, ed_graph **out) {
  if (edge_list == nullptr || out == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::istringstream in{std::string(edge_list)};
    *out = new ed_graph{ecodigger::read_edge_list(in)};
  });
}

ed_status ed_graph_write(const ed_graph *graph, char **edge_list) {
  if (graph == nullptr || edge_list == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *edge_list = dup_string(ecodigger::write_edge_list(graph->graph)); });
}

void ed_graph_free(ed_graph *graph) { delete graph; }

size_t ed_graph_node_count(const ed_graph *graph) {
  return graph == nullptr ? 0 : graph->graph.node_count();
}

size_t ed_graph_edge_count(const ed_graph *graph) {
  return graph == nullptr ? 0 : graph->graph.edge_count();
}

ed_status ed_graph_components(const ed_graph *graph, size_t limit, char **report_json) {
  if (graph == nullptr || report_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto report = ecodigger::connected_components(graph->graph);
    *report_json = dup_string(ecodigger::components_json(report, limit).dump());
  });
}

ed_status ed_graph_related(const ed_graph *graph, int64_t project, size_t k, char **rows_json) {
  if (graph == nullptr || rows_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *rows_json = dup_string(ecodigger::related_json(graph->graph, project, k).dump());
  });
}

ed_status ed_graph_influence(const ed_graph *graph, const char *config_json, char **result_json) {
  if (graph == nullptr || result_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json args = parse_args(config_json);
    ecodigger::WprConfig cfg;
    for (const auto &[key, value] : args.items()) {
      if (key == "damping") {
        cfg.damping = value.get<double>();
      } else if (key == "tol") {
        cfg.tolerance = value.get<double>();
      } else if (key == "max_iter") {
        require(value.is_number_integer(), "max_iter must be an integer");
        cfg.max_iterations = value.get<int>();
      } else if (key == "scale") {
        auto mode = ecodigger::parse_scale_mode(value.get<std::string>());
        require(mode.has_value(), "scale must be raw or times_n");
        cfg.scale = *mode;
      } else {
        require(key == "limit", "unknown influence option");
      }
    }
    cfg.validate();
    const auto scores = ecodigger::weighted_pagerank(graph->graph, cfg);
    *result_json = dup_string(ecodigger::influence_summary(scores, size_arg(args, "limit", 0)).dump());
  });
}

ed_status ed_metric(const ed_store *store, const char *args_json, char **result_json) {
  if (store == nullptr || result_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json args = parse_args(args_json);
    require(args.contains("metric") && args["metric"].is_string(), "metric name required");
    const std::string metric = args["metric"].get<std::string>();
    ecodigger::require_metric(metric);
    std::int64_t repo = 0;
    if (auto it = args.find("repo"); it != args.end() && !it->is_null()) {
      require(it->is_number_integer(), "repo must be an integer id");
      repo = it->get<std::int64_t>();
    } else if (auto nt = args.find("repoName"); nt != args.end() && !nt->is_null()) {
      const std::string name = nt->get<std::string>();
      auto id = store->store.catalog().repo_id(name);
      if (!id) throw Error(ErrorCode::kNotFound, "unknown repo name " + name);
      repo = *id;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "repo or repoName required");
    }
    const auto window = window_arg(args, store->store);
    // History before the window matters to the contributor metrics.
    std::vector<ecodigger::CollabEvent> events;
    for (auto &e : store->store.load(ecodigger::Window{{1970, 1}, window.end})) {
      if (e.repo_id == repo) events.push_back(std::move(e));
    }
    json options = json::object();
    if (auto it = args.find("options"); it != args.end() && !it->is_null()) options = *it;
    const auto result = ecodigger::metric_result(events, repo, store->store.coverage_start().value_or(0),
                                                 metric, window, options);
    *result_json = dup_string(result.dump());
  });
}

ed_status ed_metric_names(char **names_json) {
  if (names_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    json out = json::array();
    for (const auto &m : ecodigger::metric_registry()) {
      out.push_back({{"name", m.name}, {"description", m.description}, {"additive", m.additive}});
    }
    *names_json = dup_string(out.dump());
  });
}

ed_status ed_query(const ed_store *store, const ed_labels *labels, const char *request_json,
                   const char *format, char **output) {
  if (store == nullptr || request_json == nullptr || output == nullptr) {
    return fail(ED_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    ecodigger::OutputFormat fmt = ecodigger::OutputFormat::kJson;
    if (format != nullptr && std::strcmp(format, "csv") == 0) {
      fmt = ecodigger::OutputFormat::kCsv;
    } else {
      require(format == nullptr || std::strcmp(format, "json") == 0, "format must be json or csv");
    }
    const auto request = ecodigger::QueryRequest::from_json(json::parse(request_json));
    static const ecodigger::LabelStore kNoLabels;
    const auto plan = ecodigger::plan(request, labels ? labels->labels : kNoLabels, store->store.catalog());
    const auto events = store->store.load(ecodigger::Window{{1970, 1}, plan.range().end});
    const ecodigger::QueryData data{events, store->store.catalog(),
                                    store->store.coverage_start().value_or(0)};
    const auto table = ecodigger::execute(plan, data);
    *output = dup_string(ecodigger::render(table, fmt, request.precision));
  });
}

ed_status ed_parse_event_line(const char *line, size_t length, char **event_json) {
  if (line == nullptr || event_json == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto e = ecodigger::parse_event_line(std::string_view(line, length));
    if (!e) throw Error(ErrorCode::kNotFound, "line is not an event");
    *event_json = dup_string(event_json_of(*e).dump());
  });
}

ed_status ed_activity_score(const uint64_t counts[5], const double weights[5], double *score) {
  if (counts == nullptr || score == nullptr) return fail(ED_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ecodigger::BehaviorCounts c;
    for (std::size_t i = 0; i < ecodigger::kBehaviorCount; ++i) c.counts[i] = counts[i];
    ecodigger::BehaviorWeights w;
    if (weights != nullptr) {
      w = {weights[0], weights[1], weights[2], weights[3], weights[4]};
      w.validate();
    }
    *score = ecodigger::activity(c, w);
  });
}

}  // extern "C"
