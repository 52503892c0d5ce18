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

// Command-line front end. Talks to the engine only through the C API.

#include <glob.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecodigger/ecodigger.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CliFailure {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string &message) {
  throw CliFailure{kExitUsage, message};
}

void check(ed_status status, const char *what) {
  if (status == ED_OK) return;
  std::string message = std::string(what) + ": " + ed_status_name(status);
  if (*ed_last_error() != '\0') message += ": " + std::string(ed_last_error());
  throw CliFailure{status == ED_INVALID_ARGUMENT ? kExitUsage : kExitData, message};
}

// Owns a string handed out by the library.
struct OwnedString {
  char *ptr = nullptr;
  ~OwnedString() { ed_string_free(ptr); }
  char **out() { return &ptr; }
  std::string str() const { return ptr ? ptr : ""; }
};

template <typename T, void (*Free)(T *)>
struct Handle {
  T *ptr = nullptr;
  ~Handle() { Free(ptr); }
  T **out() { return &ptr; }
};
using Store = Handle<ed_store, ed_store_close>;
using Labels = Handle<ed_labels, ed_labels_free>;
using Graph = Handle<ed_graph, ed_graph_free>;

std::string read_text(const std::string &path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{kExitData, "cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string &path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error &e) {
    throw CliFailure{kExitData, path + ": " + e.what()};
  }
}

void print_json(const std::string &text) {
  std::fwrite(text.data(), 1, text.size(), stdout);
  if (text.empty() || text.back() != '\n') std::fputc('\n', stdout);
}

struct Globals {
  std::string data_dir;
  std::string labels_dir;
  std::string weights_file;
  unsigned threads = 1;
};

void open_store(const Globals &g, Store &store) {
  if (g.data_dir.empty()) usage_error("no data dir: pass --data-dir or set ECODIGGER_DATA_DIR");
  check(ed_store_open(g.data_dir.c_str(), store.out()), "open store");
}

void load_labels(const Globals &g, const std::string &inject, Labels &labels) {
  check(ed_labels_load(g.labels_dir.empty() ? nullptr : g.labels_dir.c_str(), labels.out()),
        "load labels");
  if (!inject.empty()) {
    const std::string text = read_json(inject).dump();
    Labels injected;
    check(ed_labels_inject(labels.ptr, text.c_str(), injected.out()), "inject labels");
    std::swap(labels.ptr, injected.ptr);
  }
}

json base_args(const Globals &g, const std::string &window) {
  json args = json::object();
  if (!window.empty()) args["window"] = window;
  if (!g.weights_file.empty()) args["weights"] = read_json(g.weights_file);
  return args;
}

std::vector<std::string> expand_globs(const std::vector<std::string> &patterns) {
  std::vector<std::string> out;
  for (const auto &pattern : patterns) {
    glob_t found{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &found);
    if (rc == 0) {
      for (std::size_t i = 0; i < found.gl_pathc; ++i) out.emplace_back(found.gl_pathv[i]);
    }
    globfree(&found);
    if (rc == GLOB_NOMATCH) std::cerr << "ecodigger: no files match " << pattern << "\n";
    else if (rc != 0) throw CliFailure{kExitData, "glob failed for " + pattern};
  }
  return out;
}

// Builds or reads the project graph for network/influence commands.
void obtain_graph(const Globals &g, const std::string &edges, const std::string &window,
                  std::size_t bot_threshold, Graph &graph) {
  if (!edges.empty()) {
    if (!window.empty()) usage_error("--edges and --window are exclusive");
    const std::string text = read_text(edges);
    check(ed_graph_read(text.c_str(), graph.out()), "read edge list");
    return;
  }
  Store store;
  open_store(g, store);
  json args = base_args(g, window);
  args["bot_threshold"] = bot_threshold;
  args["threads"] = g.threads;
  check(ed_graph_build(store.ptr, args.dump().c_str(), graph.out()), "build network");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ecodigger: activity, influence and community-health mining over GitHub event archives"};
  app.require_subcommand(1);

  Globals g;
  if (const char *env = std::getenv("ECODIGGER_DATA_DIR")) g.data_dir = env;
  app.add_option("--data-dir", g.data_dir, "Event store directory (default: $ECODIGGER_DATA_DIR)");
  app.add_option("--labels-dir", g.labels_dir, "Directory tree of label JSON files");
  app.add_option("--weights", g.weights_file, "Behavior weight file (JSON)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  // ingest
  auto *ingest = app.add_subcommand("ingest", "Read GHArchive hour files into the event store");
  std::vector<std::string> ingest_globs, ingest_paths;
  ingest->add_option("--glob", ingest_globs, "Shell-style file pattern (repeatable)");
  ingest->add_option("paths", ingest_paths, "Archive files");

  // activity
  auto *act = app.add_subcommand("activity", "Developer activity scores");
  std::string act_window, act_scope = "developer_repo";
  std::size_t act_limit = 0;
  act->add_option("--window", act_window, "2019, 2019-03 or 2019-01:2019-06 (default: whole store)");
  act->add_option("--scope", act_scope, "developer_repo, developer or repo")
      ->check(CLI::IsMember({"developer_repo", "developer", "repo"}));
  act->add_option("--limit", act_limit, "Maximum rows, 0 for all");

  // network
  auto *net = app.add_subcommand("network", "Project network built from shared developers");
  net->require_subcommand(1);
  std::string net_window, net_edges, net_output;
  std::size_t net_bots = 200, net_limit = 10, net_k = 10;
  std::int64_t net_project = 0;
  auto add_source = [&](CLI::App *cmd, bool allow_edges) {
    cmd->add_option("--window", net_window, "Analysis window (default: whole store)");
    cmd->add_option("--bot-threshold", net_bots, "Drop developers active in more projects than this");
    if (allow_edges) cmd->add_option("--edges", net_edges, "Edge list from 'network export' ('-' for stdin)");
  };
  auto *net_export = net->add_subcommand("export", "Write the project graph as an edge list");
  add_source(net_export, false);
  net_export->add_option("-o,--output", net_output, "Output file (default: stdout)");
  auto *net_comp = net->add_subcommand("components", "Connected components");
  add_source(net_comp, true);
  net_comp->add_option("--limit", net_limit, "Largest components to list, 0 for all");
  auto *net_rel = net->add_subcommand("related", "Most related projects");
  add_source(net_rel, true);
  net_rel->add_option("project", net_project, "Project (repo) id")->required();
  net_rel->add_option("-k", net_k, "Number of neighbors");

  // influence
  auto *inf = app.add_subcommand("influence", "Weighted PageRank over the project graph");
  std::string inf_window, inf_edges, inf_scale = "times_n";
  double inf_damping = 0.85, inf_tol = 1e-8;
  int inf_max_iter = 100;
  std::size_t inf_limit = 0, inf_bots = 200;
  inf->add_option("--edges", inf_edges, "Edge list from 'network export' ('-' for stdin)");
  inf->add_option("--window", inf_window, "Analysis window when building from the store");
  inf->add_option("--bot-threshold", inf_bots, "Drop developers active in more projects than this");
  inf->add_option("--damping", inf_damping, "Damping factor in (0, 1)");
  inf->add_option("--tol", inf_tol, "L1 convergence tolerance");
  inf->add_option("--max-iter", inf_max_iter, "Maximum sweeps");
  inf->add_option("--scale", inf_scale, "raw (sums to 1) or times_n (mean 1)")
      ->check(CLI::IsMember({"raw", "times_n"}));
  inf->add_option("--limit", inf_limit, "Maximum rows, 0 for all");

  // metric
  auto *met = app.add_subcommand("metric", "Community-health metric for one repository");
  std::string met_name, met_window, met_repo_name, met_options;
  std::optional<std::int64_t> met_repo;
  std::vector<std::string> met_sets;
  bool met_list = false;
  met->add_option("name", met_name, "Metric name (see --list)");
  met->add_flag("--list", met_list, "List metric names");
  met->add_option("--repo", met_repo, "Repository id");
  met->add_option("--repo-name", met_repo_name, "Repository name owner/name");
  met->add_option("--window", met_window, "Window (default: whole store)");
  met->add_option("--options", met_options, "Metric options as a JSON object");

  // labels
  auto *lab = app.add_subcommand("labels", "Label resolution and set algebra");
  lab->require_subcommand(1);
  std::string lab_inject;
  std::vector<std::string> lab_refs;
  lab->add_option("--inject", lab_inject, "JSON file with extra labels");
  auto *lab_resolve = lab->add_subcommand("resolve", "Entities of a label id or type");
  lab_resolve->add_option("ref", lab_refs, "Label id (':regions/CN') or type ('Company')")
      ->required()->expected(1);
  auto *lab_inter = lab->add_subcommand("intersect", "Per-axis intersection of labels");
  lab_inter->add_option("refs", lab_refs, "Label ids or types")->required();
  auto *lab_union = lab->add_subcommand("union", "Per-axis union of labels");
  lab_union->add_option("refs", lab_refs, "Label ids or types")->required();

  // query
  auto *qry = app.add_subcommand("query", "Scoped, time-split metric query");
  std::string q_request, q_format = "json", q_inject, q_options;
  std::map<std::string, int> q_ints;
  std::map<std::string, std::string> q_strings;
  std::map<std::string, std::vector<std::int64_t>> q_id_lists;
  std::map<std::string, std::vector<std::string>> q_name_lists;
  qry->add_option("--request", q_request, "QueryRequest JSON file ('-' for stdin)");
  qry->add_option("--format", q_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  for (const char *key : {"startYear", "endYear", "startMonth", "endMonth", "limit", "precision"}) {
    qry->add_option(std::string("--") + key, q_ints[key]);
  }
  for (const char *key : {"order", "orderOption", "limitOption", "groupBy", "groupTimeRange", "metric"}) {
    qry->add_option(std::string("--") + key, q_strings[key]);
  }
  for (const char *key : {"repoIds", "orgIds", "userIds"}) {
    qry->add_option(std::string("--") + key, q_id_lists[key], "Comma-separated ids")->delimiter(',');
  }
  for (const char *key : {"repoNames", "orgNames", "userNames", "labelUnion", "labelIntersect"}) {
    qry->add_option(std::string("--") + key, q_name_lists[key], "Comma-separated values")->delimiter(',');
  }
  qry->add_option("--injectLabelData", q_inject, "JSON file holding an array of labels");
  qry->add_option("--options", q_options, "Metric options as a JSON object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::string message = e.what();
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg.empty() || arg[0] == '-') {
        if (app.get_option_no_throw(arg.substr(0, arg.find('='))) != nullptr && arg.find('=') == std::string::npos) ++i;
        continue;
      }
      if (app.get_subcommand_no_throw(arg) == nullptr) message = "unknown subcommand '" + arg + "'";
      break;
    }
    std::cerr << "ecodigger: " << message << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*ingest) {
      std::vector<std::string> files = expand_globs(ingest_globs);
      files.insert(files.end(), ingest_paths.begin(), ingest_paths.end());
      if (files.empty()) usage_error("ingest: no input files");
      Store store;
      open_store(g, store);
      std::vector<const char *> ptrs;
      for (const auto &f : files) ptrs.push_back(f.c_str());
      OwnedString report;
      check(ed_store_ingest(store.ptr, ptrs.data(), ptrs.size(), g.threads, report.out()), "ingest");
      print_json(json::parse(report.str()).dump(2));
      const bool failed = !json::parse(report.str())["errors"].empty();
      return failed ? kExitData : kExitOk;
    }
    if (*act) {
      Store store;
      open_store(g, store);
      json args = base_args(g, act_window);
      args["scope"] = act_scope;
      args["limit"] = act_limit;
      OwnedString rows;
      check(ed_activity(store.ptr, args.dump().c_str(), rows.out()), "activity");
      print_json(rows.str());
      return kExitOk;
    }
    if (*net) {
      Graph graph;
      obtain_graph(g, *net_export ? "" : net_edges, net_window, net_bots, graph);
      OwnedString out;
      if (*net_export) {
        check(ed_graph_write(graph.ptr, out.out()), "export");
        if (net_output.empty()) {
          std::fputs(out.ptr, stdout);
        } else {
          std::ofstream file(net_output, std::ios::binary);
          file << out.str();
          if (!file) throw CliFailure{kExitData, "cannot write " + net_output};
        }
        std::cerr << "ecodigger: " << ed_graph_node_count(graph.ptr) << " nodes, "
                  << ed_graph_edge_count(graph.ptr) << " edges\n";
      } else if (*net_comp) {
        check(ed_graph_components(graph.ptr, net_limit, out.out()), "components");
        print_json(out.str());
      } else {
        check(ed_graph_related(graph.ptr, net_project, net_k, out.out()), "related");
        print_json(out.str());
      }
      return kExitOk;
    }
    if (*inf) {
      Graph graph;
      obtain_graph(g, inf_edges, inf_window, inf_bots, graph);
      const json cfg = {{"damping", inf_damping}, {"tol", inf_tol}, {"max_iter", inf_max_iter},
                        {"scale", inf_scale}, {"limit", inf_limit}};
      OwnedString out;
      check(ed_graph_influence(graph.ptr, cfg.dump().c_str(), out.out()), "influence");
      const json result = json::parse(out.str());
      if (!result["converged"].get<bool>()) {
        std::cerr << "ecodigger: not converged after " << result["iterations"] << " sweeps\n";
      }
      print_json(result["rows"].dump());
      return kExitOk;
    }
    if (*met) {
      OwnedString out;
      if (met_list) {
        check(ed_metric_names(out.out()), "metric");
        print_json(json::parse(out.str()).dump(2));
        return kExitOk;
      }
      if (met_name.empty()) usage_error("metric: name required (see --list)");
      if (met_repo.has_value() == !met_repo_name.empty()) usage_error("metric: pass exactly one of --repo, --repo-name");
      Store store;
      open_store(g, store);
      json args = base_args(g, met_window);
      args["metric"] = met_name;
      if (met_repo) args["repo"] = *met_repo;
      else args["repoName"] = met_repo_name;
      if (!met_options.empty()) {
        try {
          args["options"] = json::parse(met_options);
        } catch (const json::parse_error &e) {
          usage_error(std::string("--options: ") + e.what());
        }
      }
      check(ed_metric(store.ptr, args.dump().c_str(), out.out()), "metric");
      print_json(out.str());
      return kExitOk;
    }
    if (*lab) {
      Labels labels;
      load_labels(g, lab_inject, labels);
      std::vector<const char *> refs;
      for (const auto &r : lab_refs) refs.push_back(r.c_str());
      OwnedString out;
      if (*lab_resolve) {
        check(ed_labels_resolve(labels.ptr, refs.front(), out.out()), "resolve");
      } else if (*lab_inter) {
        check(ed_labels_intersect(labels.ptr, refs.data(), refs.size(), out.out()), "intersect");
      } else {
        check(ed_labels_union(labels.ptr, refs.data(), refs.size(), out.out()), "union");
      }
      print_json(out.str());
      return kExitOk;
    }
    if (*qry) {
      json request = q_request.empty() ? json::object() : read_json(q_request);
      if (!request.is_object()) throw CliFailure{kExitData, "request must be a JSON object"};
      for (const auto &[key, value] : q_ints) {
        if (qry->count("--" + key)) request[key] = value;
      }
      for (const auto &[key, value] : q_strings) {
        if (qry->count("--" + key)) request[key] = value;
      }
      for (const auto &[key, value] : q_id_lists) {
        if (qry->count("--" + key)) request[key] = value;
      }
      for (const auto &[key, value] : q_name_lists) {
        if (qry->count("--" + key)) request[key] = value;
      }
      if (!q_inject.empty()) request["injectLabelData"] = read_json(q_inject);
      if (!q_options.empty()) {
        try {
          request["options"] = json::parse(q_options);
        } catch (const json::parse_error &e) {
          usage_error(std::string("--options: ") + e.what());
        }
      }
      Store store;
      open_store(g, store);
      Labels labels;
      load_labels(g, "", labels);
      OwnedString out;
      check(ed_query(store.ptr, labels.ptr, request.dump().c_str(), q_format.c_str(), out.out()), "query");
      std::fputs(out.ptr, stdout);
      return kExitOk;
    }
  } catch (const CliFailure &f) {
    std::cerr << "ecodigger: " << f.message << "\n";
    return f.code;
  } catch (const json::exception &e) {
    std::cerr << "ecodigger: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
