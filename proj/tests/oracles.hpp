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

// Deliberately naive reference implementations. They share no code with
// the library and favor obviousness over speed.

#ifndef ECODIGGER_TESTS_ORACLES_HPP_
#define ECODIGGER_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <utility>
#include <vector>

namespace ecodigger::oracle {

// activity[dev][project]; zero means inactive.
using ActivityMatrix = std::vector<std::vector<double>>;

// All project pairs p < q, all developers.
inline std::map<std::pair<int, int>, double> projection(const ActivityMatrix &a, int projects) {
  std::map<std::pair<int, int>, double> r;
  for (int p = 0; p < projects; ++p) {
    for (int q = p + 1; q < projects; ++q) {
      double sum = 0.0;
      bool shared = false;
      for (const auto &row : a) {
        if (row[p] > 0 && row[q] > 0) {
          sum += row[p] * row[q] / (row[p] + row[q]);
          shared = true;
        }
      }
      if (shared) r[{p, q}] = sum;
    }
  }
  return r;
}

// Symmetric weighted adjacency, w[i][j] = w[j][i], zero diagonal.
using DenseGraph = std::vector<std::vector<double>>;

// Power iteration with the full column-stochastic matrix: column j spreads
// node j's score over its neighbors by weight, or uniformly if j has none.
inline std::vector<double> dense_pagerank(const DenseGraph &w, double d, int sweeps = 5000,
                                          double tol = 1e-15) {
  const std::size_t n = w.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) out += w[i][j];
    for (std::size_t i = 0; i < n; ++i) {
      m[i][j] = out > 0 ? w[i][j] / out : 1.0 / static_cast<double>(n);
    }
  }
  std::vector<double> s(n, 1.0 / static_cast<double>(n)), next(n);
  for (int it = 0; it < sweeps; ++it) {
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += m[i][j] * s[j];
      next[i] = (1.0 - d) / static_cast<double>(n) + d * acc;
      delta += std::fabs(next[i] - s[i]);
    }
    s.swap(next);
    if (delta < tol) break;
  }
  return s;
}

// Textbook PageRank on an unweighted undirected graph: each node splits its
// score evenly among its neighbors.
inline std::vector<double> classic_pagerank(const std::vector<std::set<int>> &adj, double d,
                                            int sweeps = 5000) {
  const std::size_t n = adj.size();
  std::vector<double> s(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < sweeps; ++it) {
    std::vector<double> next(n, (1.0 - d) / static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      if (adj[j].empty()) {
        for (auto &v : next) v += d * s[j] / static_cast<double>(n);
      } else {
        for (int i : adj[j]) next[i] += d * s[j] / static_cast<double>(adj[j].size());
      }
    }
    s = next;
  }
  return s;
}

// Components as sorted node lists, ordered by their smallest node.
inline std::vector<std::vector<std::int64_t>> bfs_components(
    const std::vector<std::int64_t> &nodes,
    const std::vector<std::pair<std::int64_t, std::int64_t>> &edges) {
  std::map<std::int64_t, std::vector<std::int64_t>> adj;
  for (auto n : nodes) adj[n];
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::int64_t> seen;
  std::vector<std::vector<std::int64_t>> out;
  for (const auto &[start, unused] : adj) {
    if (seen.contains(start)) continue;
    std::vector<std::int64_t> comp;
    std::queue<std::int64_t> todo;
    todo.push(start);
    seen.insert(start);
    while (!todo.empty()) {
      auto u = todo.front();
      todo.pop();
      comp.push_back(u);
      for (auto v : adj[u]) {
        if (seen.insert(v).second) todo.push(v);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

}  // namespace ecodigger::oracle

#endif  // ECODIGGER_TESTS_ORACLES_HPP_
