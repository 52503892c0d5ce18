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

#ifndef ECODIGGER_CORE_LABELS_HPP_
#define ECODIGGER_CORE_LABELS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ecodigger {

struct LabelData {
  std::vector<std::int64_t> github_orgs;
  std::vector<std::int64_t> github_repos;
  std::vector<std::int64_t> github_users;
  std::vector<std::string> labels;  // references to other label ids
};

struct Label {
  std::string id;  // ":regions/CN"
  std::string name;
  std::string type;  // "Company", "Foundation", "Region", ...
  LabelData data;
};

// Orgs, repos and users are independent axes.
struct EntitySet {
  std::set<std::int64_t> orgs;
  std::set<std::int64_t> repos;
  std::set<std::int64_t> users;

  bool empty() const { return orgs.empty() && repos.empty() && users.empty(); }
  bool operator==(const EntitySet &) const = default;
  nlohmann::json to_json() const;
};

EntitySet intersect(const EntitySet &a, const EntitySet &b);
EntitySet unite(const EntitySet &a, const EntitySet &b);

// ":.regions/CN" and ":regions/CN" both become ":regions/CN".
std::string canonical_label_id(std::string_view id);
bool is_label_id(std::string_view ref);

// Label file body: {"name", "type", "data": {"github_orgs", "github_repos",
// "github_users", "labels"}}. `id` is supplied by the caller.
Label label_from_json(const nlohmann::json &j, const std::string &id);
// Injection form: an array of label objects that each carry an "id".
std::vector<Label> labels_from_json(const nlohmann::json &j);

// Immutable after load/inject; closures are computed eagerly so resolution
// is a lookup.
class LabelStore {
 public:
  LabelStore() = default;

  // Every *.json below `root` becomes a label whose id is ":" plus the
  // root-relative path without extension. Throws kParse for malformed
  // files, kConflict for duplicate ids, kNotFound for dangling references
  // and kCycle for reference cycles.
  static LabelStore load(const std::filesystem::path &root);
  static LabelStore from_labels(std::vector<Label> labels);

  // Custom ids may not collide with existing ones (kConflict).
  LabelStore inject(std::vector<Label> custom) const;

  // A ref starting with ':' is a label id (own entities plus everything it
  // references, transitively); anything else is a type name (union of all
  // labels of that type). Throws kUnknownLabelId / kUnknownLabelType.
  const EntitySet &resolve_id(std::string_view id) const;
  EntitySet resolve(std::string_view ref) const;

  // Per-axis intersection / union of the resolved refs; refs must be
  // non-empty.
  EntitySet label_intersect(std::span<const std::string> refs) const;
  EntitySet label_union(std::span<const std::string> refs) const;

  const Label *find(std::string_view id) const;
  std::vector<const Label *> labels_of_type(std::string_view type) const;
  std::size_t size() const { return labels_.size(); }
  const std::map<std::string, Label, std::less<>> &labels() const { return labels_; }

 private:
  void build();

  std::map<std::string, Label, std::less<>> labels_;
  std::map<std::string, EntitySet, std::less<>> closures_;
};

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_LABELS_HPP_
