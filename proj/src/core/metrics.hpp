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

#ifndef ECODIGGER_CORE_METRICS_HPP_
#define ECODIGGER_CORE_METRICS_HPP_

#include <optional>
#include <span>
#include <string_view>

#include <json.hpp>

#include "core/chaoss.hpp"

namespace ecodigger {

enum class MetricKind {
  kCount,
  kDuration,
  kLines,
  kContributors,
  kHeatmap,
  kScore,
};

struct MetricInfo {
  std::string_view name;
  std::string_view description;
  MetricKind kind;
  // Bucket values of an additive metric sum to the value over the union
  // of the buckets.
  bool additive;
};

// The seventeen community-health metrics plus "activity".
std::span<const MetricInfo> metric_registry();
const MetricInfo *find_metric(std::string_view name);
// Throws Error(kInvalidArgument) for an unknown name.
const MetricInfo &require_metric(std::string_view name);

// Evaluates registry metrics over one event stream (one repo, or a pooled
// group of repos). Threads are assembled once and reused across windows.
//
// Recognized options: "stat" (mean|median|p90|count) picks the scalar of a
// duration metric, "lines" (sum|added|removed) that of code_change_lines;
// "inactivity_gap_days", "bus_factor_share" and "weights" configure the
// contributor metrics and activity.
class MetricEvaluator {
 public:
  MetricEvaluator(std::span<const CollabEvent> events, Timestamp coverage_start,
                  const nlohmann::json &options = nlohmann::json::object());

  nlohmann::json evaluate(std::string_view metric, const Window &window);
  double scalar(std::string_view metric, const Window &window);

 private:
  const ThreadSet &threads();
  double duration_scalar(const std::optional<DurationStats> &stats) const;

  std::span<const CollabEvent> events_;
  Timestamp coverage_start_;
  nlohmann::json options_;
  ContributorConfig contributor_;
  std::optional<ThreadSet> threads_;
};

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_METRICS_HPP_
