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

#ifndef ECODIGGER_CORE_PIPELINE_HPP_
#define ECODIGGER_CORE_PIPELINE_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <string_view>

#include <json.hpp>

#include "core/activity.hpp"
#include "core/influence.hpp"
#include "core/network.hpp"

namespace ecodigger {

// JSON rows {entity, window, counts, score}, by descending score then
// entity. `limit` 0 keeps every row.
nlohmann::json activity_rows(std::span<const CollabEvent> events, const Window &window,
                             const BehaviorWeights &weights, CountScope scope,
                             std::size_t limit);

struct NetworkBuild {
  ProjectGraph graph;
  std::set<DeveloperId> bots;
  std::size_t developers = 0;  // before the bot filter
};

// events -> activity records -> bipartite graph -> bot filter -> projection.
NetworkBuild build_network(std::span<const CollabEvent> events, const Window &window,
                           const BehaviorWeights &weights,
                           std::size_t bot_threshold = kDefaultBotThreshold,
                           unsigned threads = 1);

// JSON rows {project, score, rank}; rank starts at 1.
nlohmann::json influence_rows(const InfluenceScores &scores, std::size_t limit);
nlohmann::json influence_summary(const InfluenceScores &scores, std::size_t limit);

nlohmann::json components_json(const ComponentReport &report, std::size_t limit);
nlohmann::json related_json(const ProjectGraph &pg, ProjectId p, std::size_t k);

// {repo, window, metric, value} or {repo, window, metric, stats}.
nlohmann::json metric_result(std::span<const CollabEvent> repo_events, std::int64_t repo,
                             Timestamp coverage_start, std::string_view metric,
                             const Window &window, const nlohmann::json &options);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_PIPELINE_HPP_
