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

#include "core/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "core/error.hpp"

namespace ecodigger {

std::size_t BipartiteGraph::degree(DeveloperId d) const {
  auto lo = edges.lower_bound({d, std::numeric_limits<ProjectId>::min()});
  std::size_t n = 0;
  for (auto it = lo; it != edges.end() && it->first.first == d; ++it) ++n;
  return n;
}

bool BipartiteGraph::well_formed() const {
  std::set<DeveloperId> devs;
  for (const auto &[key, w] : edges) {
    if (!(w > 0.0) || !projects.contains(key.second)) return false;
    devs.insert(key.first);
  }
  return devs == developers;
}

BipartiteGraph build_bipartite(std::span<const ActivityRecord> records,
                               const Window &window) {
  std::map<std::pair<DeveloperId, ProjectId>, double> sums;
  for (const ActivityRecord &r : records) {
    if (!window.covers(r.window)) continue;
    sums[{r.developer_id, r.repo_id}] += r.score;
  }
  BipartiteGraph g;
  for (const auto &[key, w] : sums) {
    if (!(w > 0.0)) continue;
    g.edges.emplace(key, w);
    g.developers.insert(key.first);
    g.projects.insert(key.second);
  }
  return g;
}

BotFilterResult filter_bots(const BipartiteGraph &g, std::size_t threshold) {
  BotFilterResult result;
  result.graph.projects = g.projects;
  auto it = g.edges.begin();
  while (it != g.edges.end()) {
    const DeveloperId dev = it->first.first;
    auto end = it;
    std::size_t degree = 0;
    while (end != g.edges.end() && end->first.first == dev) {
      ++end;
      ++degree;
    }
    if (degree > threshold) {
      result.removed.insert(dev);
    } else {
      result.graph.developers.insert(dev);
      result.graph.edges.insert(it, end);
    }
    it = end;
  }
  return result;
}

ProjectGraph::ProjectGraph(std::vector<ProjectId> nodes,
                           std::vector<ProjectEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (ProjectEdge &e : edges_) {
    if (e.a == e.b) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop on project " + std::to_string(e.a));
    }
    if (!std::isfinite(e.weight) || !(e.weight > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge weight must be positive and finite");
    }
    if (e.a > e.b) std::swap(e.a, e.b);
    nodes_.push_back(e.a);
    nodes_.push_back(e.b);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  std::sort(edges_.begin(), edges_.end(), [](const auto &x, const auto &y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate edge " + std::to_string(edges_[i].a) + "-" +
                      std::to_string(edges_[i].b));
    }
  }

  std::vector<std::size_t> degree(nodes_.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  ends.reserve(edges_.size());
  for (const ProjectEdge &e : edges_) {
    std::size_t ia = *index_of(e.a), ib = *index_of(e.b);
    ++degree[ia];
    ++degree[ib];
    ends.emplace_back(ia, ib);
  }
  offsets_.assign(nodes_.size() + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    auto [ia, ib] = ends[k];
    adjacency_[fill[ia]++] = {edges_[k].b, edges_[k].weight};
    adjacency_[fill[ib]++] = {edges_[k].a, edges_[k].weight};
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
              [](const Neighbor &x, const Neighbor &y) { return x.project < y.project; });
  }
}

std::optional<std::size_t> ProjectGraph::index_of(ProjectId p) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), p);
  if (it == nodes_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool ProjectGraph::contains(ProjectId p) const { return index_of(p).has_value(); }

std::optional<double> ProjectGraph::weight(ProjectId p, ProjectId q) const {
  auto ip = index_of(p);
  if (!ip) return std::nullopt;
  auto adj = neighbors_at(*ip);
  auto it = std::lower_bound(adj.begin(), adj.end(), q,
                             [](const Neighbor &n, ProjectId v) { return n.project < v; });
  if (it == adj.end() || it->project != q) return std::nullopt;
  return it->weight;
}

std::span<const Neighbor> ProjectGraph::neighbors_at(std::size_t index) const {
  if (offsets_.empty()) return {};
  return std::span<const Neighbor>(adjacency_).subspan(
      offsets_[index], offsets_[index + 1] - offsets_[index]);
}

namespace {

struct Contribution {
  ProjectId a;
  ProjectId b;
  double value;
};

// Pairs generated from developers [first, last) of `devs`, in developer order.
void generate_pairs(
    const std::vector<std::span<const std::pair<ProjectId, double>>> &devs,
    std::size_t first, std::size_t last, std::vector<Contribution> &out) {
  for (std::size_t d = first; d < last; ++d) {
    auto projects = devs[d];
    for (std::size_t i = 0; i < projects.size(); ++i) {
      for (std::size_t j = i + 1; j < projects.size(); ++j) {
        const double x = projects[i].second, y = projects[j].second;
        out.push_back({projects[i].first, projects[j].first, x * y / (x + y)});
      }
    }
  }
}

}  // namespace

ProjectGraph project_graph(const BipartiteGraph &g, unsigned threads) {
  // Edges are ordered by (developer, project): each developer's projects are
  // a contiguous ascending run.
  std::vector<std::pair<ProjectId, double>> flat;
  flat.reserve(g.edges.size());
  std::vector<std::size_t> starts;
  DeveloperId current = 0;
  for (const auto &[key, w] : g.edges) {
    if (starts.empty() || key.first != current) {
      starts.push_back(flat.size());
      current = key.first;
    }
    flat.emplace_back(key.second, w);
  }
  starts.push_back(flat.size());
  std::vector<std::span<const std::pair<ProjectId, double>>> devs;
  for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
    devs.push_back(std::span(flat).subspan(starts[i], starts[i + 1] - starts[i]));
  }

  threads = std::max(1u, std::min<unsigned>(threads, devs.size()));
  std::vector<std::vector<Contribution>> parts(threads);
  if (threads == 1) {
    generate_pairs(devs, 0, devs.size(), parts[0]);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t block = (devs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t first = std::min(devs.size(), t * block);
      const std::size_t last = std::min(devs.size(), first + block);
      workers.emplace_back([&, t, first, last] {
        generate_pairs(devs, first, last, parts[t]);
      });
    }
  }

  std::vector<Contribution> all;
  for (auto &p : parts) {
    all.insert(all.end(), p.begin(), p.end());
    std::vector<Contribution>().swap(p);
  }
  // Stable: contributions to one pair stay in developer order, so the
  // summation order never depends on the thread count.
  std::stable_sort(all.begin(), all.end(), [](const auto &x, const auto &y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  std::vector<ProjectEdge> edges;
  for (std::size_t i = 0; i < all.size();) {
    ProjectEdge e{all[i].a, all[i].b, 0.0};
    for (; i < all.size() && all[i].a == e.a && all[i].b == e.b; ++i) {
      e.weight += all[i].value;
    }
    edges.push_back(e);
  }
  return ProjectGraph(std::vector<ProjectId>(g.projects.begin(), g.projects.end()),
                      std::move(edges));
}

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

ComponentReport connected_components(const ProjectGraph &pg) {
  ComponentReport report;
  report.node_count = pg.node_count();
  const auto &nodes = pg.nodes();
  DisjointSet ds(nodes.size());
  for (const ProjectEdge &e : pg.edges()) ds.unite(*pg.index_of(e.a), *pg.index_of(e.b));

  std::map<std::size_t, std::size_t> root_to_component;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [it, inserted] = root_to_component.try_emplace(ds.find(i), report.components.size());
    if (inserted) report.components.emplace_back();
    // Nodes are visited in ascending order, so each component stays sorted.
    report.components[it->second].nodes.push_back(nodes[i]);
  }
  std::sort(report.components.begin(), report.components.end(),
            [](const Component &x, const Component &y) {
              if (x.size() != y.size()) return x.size() > y.size();
              return x.nodes.front() < y.nodes.front();
            });
  if (!report.components.empty()) {
    report.giant_share = static_cast<double>(report.components.front().size()) /
                         static_cast<double>(report.node_count);
  }
  return report;
}

std::vector<Neighbor> top_related(const ProjectGraph &pg, ProjectId p,
                                  std::size_t k) {
  auto index = pg.index_of(p);
  if (!index) {
    throw Error(ErrorCode::kNotFound,
                "project " + std::to_string(p) + " is not in the graph");
  }
  auto adj = pg.neighbors_at(*index);
  std::vector<Neighbor> out(adj.begin(), adj.end());
  std::sort(out.begin(), out.end(), [](const Neighbor &x, const Neighbor &y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    return x.project < y.project;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

void write_edge_list(const ProjectGraph &pg, std::ostream &out) {
  out << "# ecodigger project-graph v1\n";
  for (std::size_t i = 0; i < pg.node_count(); ++i) {
    if (pg.neighbors_at(i).empty()) out << "# node " << pg.nodes()[i] << '\n';
  }
  char buf[64];
  for (const ProjectEdge &e : pg.edges()) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
    out << e.a << '\t' << e.b << '\t' << buf << '\n';
  }
}

std::string write_edge_list(const ProjectGraph &pg) {
  std::ostringstream os;
  write_edge_list(pg, os);
  return os.str();
}

namespace {

template <typename T>
bool parse_number(std::string_view s, T &out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

ProjectGraph read_edge_list(std::istream &in) {
  std::vector<ProjectId> nodes;
  std::vector<ProjectEdge> edges;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string &why) {
    throw Error(ErrorCode::kParse, "edge list line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view v(line);
    if (v.front() == '#') {
      constexpr std::string_view kNode = "# node ";
      if (v.starts_with(kNode)) {
        ProjectId id;
        if (!parse_number(v.substr(kNode.size()), id)) fail("bad node id");
        nodes.push_back(id);
      }
      continue;
    }
    auto t1 = v.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : v.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) fail("expected a<TAB>b<TAB>R");
    ProjectEdge e;
    if (!parse_number(v.substr(0, t1), e.a) ||
        !parse_number(v.substr(t1 + 1, t2 - t1 - 1), e.b) ||
        !parse_number(v.substr(t2 + 1), e.weight)) {
      fail("malformed field");
    }
    edges.push_back(e);
  }
  try {
    return ProjectGraph(std::move(nodes), std::move(edges));
  } catch (const Error &e) {
    throw Error(ErrorCode::kParse, std::string("edge list: ") + e.what());
  }
}

}  // namespace ecodigger
