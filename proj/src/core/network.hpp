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

#ifndef ECODIGGER_CORE_NETWORK_HPP_
#define ECODIGGER_CORE_NETWORK_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/activity.hpp"

namespace ecodigger {

using DeveloperId = std::int64_t;
using ProjectId = std::int64_t;

// Developer-project network after relationship-type reduction: every
// (developer, project) pair carries a single positive activity weight.
struct BipartiteGraph {
  std::set<DeveloperId> developers;
  std::set<ProjectId> projects;
  std::map<std::pair<DeveloperId, ProjectId>, double> edges;

  std::size_t degree(DeveloperId d) const;
  // Edges and node sets agree, weights are positive.
  bool well_formed() const;
};

// Sums record scores per (developer, project) over records inside `window`;
// pairs with zero total get no edge.
BipartiteGraph build_bipartite(std::span<const ActivityRecord> records,
                               const Window &window);

struct BotFilterResult {
  BipartiteGraph graph;
  std::set<DeveloperId> removed;
};

inline constexpr std::size_t kDefaultBotThreshold = 200;

// Drops developers active in strictly more than `threshold` projects.
// Projects that lose all their edges stay as isolated nodes.
BotFilterResult filter_bots(const BipartiteGraph &g,
                            std::size_t threshold = kDefaultBotThreshold);

struct ProjectEdge {
  ProjectId a = 0;  // a < b
  ProjectId b = 0;
  double weight = 0.0;
  bool operator==(const ProjectEdge &) const = default;
};

struct Neighbor {
  ProjectId project = 0;
  double weight = 0.0;
  bool operator==(const Neighbor &) const = default;
};

// Homogeneous project network with symmetric relatedness weights. Each
// undirected pair is stored once; adjacency is precomputed in CSR form.
class ProjectGraph {
 public:
  ProjectGraph() = default;
  // Endpoints are added to the node set. Throws Error(kInvalidArgument) on a
  // self-loop, a non-positive or non-finite weight, or a repeated pair.
  ProjectGraph(std::vector<ProjectId> nodes, std::vector<ProjectEdge> edges);

  const std::vector<ProjectId> &nodes() const { return nodes_; }
  const std::vector<ProjectEdge> &edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(ProjectId p) const;
  std::optional<std::size_t> index_of(ProjectId p) const;
  std::optional<double> weight(ProjectId p, ProjectId q) const;
  // Neighbors of the node at `index`, by ascending project id.
  std::span<const Neighbor> neighbors_at(std::size_t index) const;

 private:
  std::vector<ProjectId> nodes_;
  std::vector<ProjectEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

// Node-type reduction: R(p,q) = sum over developers active in both of
// a_p * a_q / (a_p + a_q). Every project of `g` becomes a node. The result
// is bit-identical for any thread count. The input should be bot-filtered
// first; per-developer pair generation is quadratic in degree.
ProjectGraph project_graph(const BipartiteGraph &g, unsigned threads = 1);

struct Component {
  std::vector<ProjectId> nodes;  // ascending
  std::size_t size() const { return nodes.size(); }
};

struct ComponentReport {
  std::vector<Component> components;  // size desc, then smallest id asc
  std::size_t node_count = 0;
  double giant_share = 0.0;
};

// Undirected connected components (union-find). With mutual equal-weight
// directed edges these coincide with strongly connected components.
ComponentReport connected_components(const ProjectGraph &pg);

// At most k neighbors of p by descending R, ties by ascending id.
// Throws Error(kNotFound) if p is not a node.
std::vector<Neighbor> top_related(const ProjectGraph &pg, ProjectId p,
                                  std::size_t k);

// Edge-list text: "a<TAB>b<TAB>R" per edge sorted by (a, b), R printed
// round-trip exact. Isolated nodes are kept as "# node <id>" lines.
std::string write_edge_list(const ProjectGraph &pg);
void write_edge_list(const ProjectGraph &pg, std::ostream &out);
ProjectGraph read_edge_list(std::istream &in);

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_NETWORK_HPP_
