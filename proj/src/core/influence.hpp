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

#ifndef ECODIGGER_CORE_INFLUENCE_HPP_
#define ECODIGGER_CORE_INFLUENCE_HPP_

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "core/network.hpp"

namespace ecodigger {

enum class ScaleMode { kRaw, kTimesN };

std::optional<ScaleMode> parse_scale_mode(std::string_view text);

struct WprConfig {
  double damping = 0.85;
  double tolerance = 1e-8;  // on the L1 norm of the per-sweep change
  int max_iterations = 100;
  ScaleMode scale = ScaleMode::kTimesN;

  void validate() const;
};

struct InfluenceScores {
  std::map<ProjectId, double> scores;
  int iterations_used = 0;
  bool converged = false;
  std::vector<double> deltas;  // L1 change of each sweep
};

// Called after every sweep with the raw (sum-to-one) scores, indexed like
// ProjectGraph::nodes().
using SweepObserver = std::function<void(int sweep, std::span<const double> scores)>;

// Weighted PageRank: each node hands its score to its neighbors in
// proportion to edge weight (each undirected edge acts as two directed
// edges of equal weight); dangling nodes spread their score uniformly.
InfluenceScores weighted_pagerank(const ProjectGraph &pg, const WprConfig &cfg,
                                  const SweepObserver &observer = {});

// Descending score, ties by ascending id; limit 0 means unlimited.
std::vector<std::pair<ProjectId, double>> rank_influence(const InfluenceScores &scores,
                                                         std::size_t limit);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_INFLUENCE_HPP_
