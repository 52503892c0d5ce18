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

#include "core/pipeline.hpp"

#include <algorithm>

#include "core/metrics.hpp"

namespace ecodigger {

nlohmann::json activity_rows(std::span<const CollabEvent> events, const Window &window,
                             const BehaviorWeights &weights, CountScope scope,
                             std::size_t limit) {
  struct Row {
    ActivityKey key;
    BehaviorCounts counts;
    double score;
  };
  std::vector<Row> rows;
  for (const auto &[key, counts] : count_behaviors(events, window, scope)) {
    rows.push_back({key, counts, activity(counts, weights)});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row &a, const Row &b) { return a.score > b.score; });
  if (limit != 0 && rows.size() > limit) rows.resize(limit);
  nlohmann::json out = nlohmann::json::array();
  for (const Row &r : rows) {
    nlohmann::json entity;
    switch (scope) {
      case CountScope::kDeveloperRepo:
        entity = {{"developer", r.key.developer_id}, {"repo", r.key.repo_id}};
        break;
      case CountScope::kDeveloper: entity = {{"developer", r.key.developer_id}}; break;
      case CountScope::kRepo: entity = {{"repo", r.key.repo_id}}; break;
    }
    out.push_back({{"entity", entity}, {"window", window.str()},
                   {"counts", r.counts.to_json()}, {"score", r.score}});
  }
  return out;
}

NetworkBuild build_network(std::span<const CollabEvent> events, const Window &window,
                           const BehaviorWeights &weights, std::size_t bot_threshold,
                           unsigned threads) {
  const auto records = activity_records(events, window, weights);
  BipartiteGraph bipartite = build_bipartite(records, window);
  NetworkBuild out;
  out.developers = bipartite.developers.size();
  BotFilterResult filtered = filter_bots(bipartite, bot_threshold);
  out.bots = std::move(filtered.removed);
  out.graph = project_graph(filtered.graph, threads);
  return out;
}

nlohmann::json influence_rows(const InfluenceScores &scores, std::size_t limit) {
  nlohmann::json out = nlohmann::json::array();
  std::size_t rank = 0;
  for (const auto &[project, score] : rank_influence(scores, limit)) {
    out.push_back({{"project", project}, {"score", score}, {"rank", ++rank}});
  }
  return out;
}

nlohmann::json influence_summary(const InfluenceScores &scores, std::size_t limit) {
  return {{"iterations", scores.iterations_used},
          {"converged", scores.converged},
          {"nodes", scores.scores.size()},
          {"rows", influence_rows(scores, limit)}};
}

nlohmann::json components_json(const ComponentReport &report, std::size_t limit) {
  nlohmann::json comps = nlohmann::json::array();
  for (const Component &c : report.components) {
    if (limit != 0 && comps.size() >= limit) break;
    comps.push_back({{"size", c.size()}, {"nodes", c.nodes}});
  }
  return {{"nodes", report.node_count},
          {"components", report.components.size()},
          {"giant_share", report.giant_share},
          {"largest", comps}};
}

nlohmann::json related_json(const ProjectGraph &pg, ProjectId p, std::size_t k) {
  nlohmann::json out = nlohmann::json::array();
  for (const Neighbor &n : top_related(pg, p, k)) {
    out.push_back({{"project", n.project}, {"relatedness", n.weight}});
  }
  return out;
}

nlohmann::json metric_result(std::span<const CollabEvent> repo_events, std::int64_t repo,
                             Timestamp coverage_start, std::string_view metric,
                             const Window &window, const nlohmann::json &options) {
  const MetricInfo &info = require_metric(metric);
  MetricEvaluator eval(repo_events, coverage_start, options);
  nlohmann::json out = {{"repo", repo}, {"window", window.str()}, {"metric", info.name}};
  nlohmann::json value = eval.evaluate(metric, window);
  if (info.kind == MetricKind::kDuration) {
    out["stats"] = value;
  } else {
    out["value"] = value;
  }
  return out;
}

}  // namespace ecodigger
