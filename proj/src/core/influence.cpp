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

#include "core/influence.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace ecodigger {

std::optional<ScaleMode> parse_scale_mode(std::string_view text) {
  if (text == "raw") return ScaleMode::kRaw;
  if (text == "times_n") return ScaleMode::kTimesN;
  return std::nullopt;
}

void WprConfig::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "damping must lie in (0, 1)");
  }
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  }
}

InfluenceScores weighted_pagerank(const ProjectGraph &pg, const WprConfig &cfg,
                                  const SweepObserver &observer) {
  cfg.validate();
  InfluenceScores out;
  const std::size_t n = pg.node_count();
  if (n == 0) {
    out.converged = true;
    return out;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const double d = cfg.damping;

  std::vector<double> out_weight(n, 0.0);
  std::vector<std::vector<std::size_t>> neighbor_index(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const Neighbor &nb : pg.neighbors_at(v)) {
      out_weight[v] += nb.weight;
      neighbor_index[v].push_back(*pg.index_of(nb.project));
    }
  }

  std::vector<double> score(n, inv_n), next(n), share(n);
  for (int sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (out_weight[v] > 0.0) {
        share[v] = score[v] / out_weight[v];
      } else {
        share[v] = 0.0;
        dangling += score[v];
      }
    }
    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
    double delta = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      double inflow = 0.0;
      auto adj = pg.neighbors_at(u);
      for (std::size_t k = 0; k < adj.size(); ++k) {
        inflow += adj[k].weight * share[neighbor_index[u][k]];
      }
      next[u] = base + d * inflow;
      delta += std::abs(next[u] - score[u]);
    }
    score.swap(next);
    out.deltas.push_back(delta);
    out.iterations_used = sweep;
    if (observer) observer(sweep, score);
    if (delta < cfg.tolerance) {
      out.converged = true;
      break;
    }
  }

  const double factor = cfg.scale == ScaleMode::kTimesN ? static_cast<double>(n) : 1.0;
  for (std::size_t i = 0; i < n; ++i) out.scores.emplace(pg.nodes()[i], score[i] * factor);
  return out;
}

std::vector<std::pair<ProjectId, double>> rank_influence(const InfluenceScores &scores,
                                                         std::size_t limit) {
  std::vector<std::pair<ProjectId, double>> ranked(scores.scores.begin(),
                                                   scores.scores.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto &x, const auto &y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (limit != 0 && ranked.size() > limit) ranked.resize(limit);
  return ranked;
}

}  // namespace ecodigger
