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

#include "core/labels.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include "core/error.hpp"

namespace ecodigger {
namespace {

std::vector<std::int64_t> id_list(const nlohmann::json &data, const char *key,
                                  const std::string &where) {
  std::vector<std::int64_t> out;
  auto it = data.find(key);
  if (it == data.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw Error(ErrorCode::kParse, where + ": '" + key + "' must be an array");
  }
  for (const auto &v : *it) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kParse, where + ": '" + key + "' must hold integer ids");
    }
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

template <typename Op>
EntitySet combine(const EntitySet &a, const EntitySet &b, Op op) {
  EntitySet out;
  op(a.orgs, b.orgs, out.orgs);
  op(a.repos, b.repos, out.repos);
  op(a.users, b.users, out.users);
  return out;
}

}  // namespace

nlohmann::json EntitySet::to_json() const {
  return {{"orgs", orgs}, {"repos", repos}, {"users", users}};
}

EntitySet intersect(const EntitySet &a, const EntitySet &b) {
  return combine(a, b, [](const auto &x, const auto &y, auto &out) {
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                          std::inserter(out, out.end()));
  });
}

EntitySet unite(const EntitySet &a, const EntitySet &b) {
  return combine(a, b, [](const auto &x, const auto &y, auto &out) {
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::inserter(out, out.end()));
  });
}

bool is_label_id(std::string_view ref) { return !ref.empty() && ref.front() == ':'; }

std::string canonical_label_id(std::string_view id) {
  if (id.starts_with(":.")) id.remove_prefix(2);
  else if (id.starts_with(":")) id.remove_prefix(1);
  while (id.starts_with("/")) id.remove_prefix(1);
  return ":" + std::string(id);
}

Label label_from_json(const nlohmann::json &j, const std::string &id) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, id + ": label must be a JSON object");
  Label label;
  label.id = canonical_label_id(id);
  auto str = [&](const char *key, std::string fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_string()) throw Error(ErrorCode::kParse, id + ": '" + key + "' must be a string");
    return it->get<std::string>();
  };
  label.name = str("name", label.id);
  label.type = str("type", "");
  if (auto it = j.find("data"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw Error(ErrorCode::kParse, id + ": 'data' must be an object");
    label.data.github_orgs = id_list(*it, "github_orgs", id);
    label.data.github_repos = id_list(*it, "github_repos", id);
    label.data.github_users = id_list(*it, "github_users", id);
    if (auto refs = it->find("labels"); refs != it->end() && !refs->is_null()) {
      if (!refs->is_array()) throw Error(ErrorCode::kParse, id + ": 'labels' must be an array");
      for (const auto &r : *refs) {
        if (!r.is_string()) throw Error(ErrorCode::kParse, id + ": label references must be strings");
        label.data.labels.push_back(canonical_label_id(r.get<std::string>()));
      }
    }
  }
  return label;
}

std::vector<Label> labels_from_json(const nlohmann::json &j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "injected labels must be a JSON array");
  std::vector<Label> out;
  for (const auto &item : j) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string()) {
      throw Error(ErrorCode::kParse, "every injected label needs a string 'id'");
    }
    out.push_back(label_from_json(item, item["id"].get<std::string>()));
  }
  return out;
}

LabelStore LabelStore::load(const std::filesystem::path &root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kIo, "label directory not found: " + root.string());
  }
  std::vector<fs::path> files;
  for (const auto &entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  LabelStore store;
  for (const fs::path &file : files) {
    fs::path rel = fs::relative(file, root).replace_extension();
    const std::string id = ":" + rel.generic_string();
    std::ifstream in(file);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kParse, "malformed label file " + file.string());
    Label label;
    try {
      label = label_from_json(j, id);
    } catch (const Error &e) {
      throw Error(ErrorCode::kParse, file.string() + ": " + e.what());
    }
    if (!store.labels_.emplace(label.id, label).second) {
      throw Error(ErrorCode::kConflict, "duplicate label id " + label.id + " (" + file.string() + ")");
    }
  }
  store.build();
  return store;
}

LabelStore LabelStore::from_labels(std::vector<Label> labels) {
  return LabelStore().inject(std::move(labels));
}

LabelStore LabelStore::inject(std::vector<Label> custom) const {
  LabelStore merged;
  merged.labels_ = labels_;
  for (Label &label : custom) {
    label.id = canonical_label_id(label.id);
    for (auto &ref : label.data.labels) ref = canonical_label_id(ref);
    std::string id = label.id;
    if (!merged.labels_.emplace(id, std::move(label)).second) {
      throw Error(ErrorCode::kConflict, "label id " + id + " already exists");
    }
  }
  merged.build();
  return merged;
}

void LabelStore::build() {
  closures_.clear();
  enum class Mark { kNew, kActive, kDone };
  std::map<std::string, Mark, std::less<>> marks;
  std::vector<std::string> path;

  std::function<void(const Label &)> visit = [&](const Label &label) {
    marks[label.id] = Mark::kActive;
    path.push_back(label.id);
    EntitySet set;
    set.orgs.insert(label.data.github_orgs.begin(), label.data.github_orgs.end());
    set.repos.insert(label.data.github_repos.begin(), label.data.github_repos.end());
    set.users.insert(label.data.github_users.begin(), label.data.github_users.end());
    for (const std::string &ref : label.data.labels) {
      auto target = labels_.find(ref);
      if (target == labels_.end()) {
        throw Error(ErrorCode::kNotFound,
                    "label " + label.id + " references unknown label " + ref);
      }
      Mark m = marks.contains(ref) ? marks[ref] : Mark::kNew;
      if (m == Mark::kActive) {
        std::string chain;
        auto start = std::find(path.begin(), path.end(), ref);
        for (auto it = start; it != path.end(); ++it) chain += *it + " -> ";
        throw Error(ErrorCode::kCycle, "label reference cycle: " + chain + ref);
      }
      if (m == Mark::kNew) visit(target->second);
      set = unite(set, closures_.at(ref));
    }
    closures_[label.id] = std::move(set);
    path.pop_back();
    marks[label.id] = Mark::kDone;
  };

  for (const auto &[id, label] : labels_) {
    if (!marks.contains(id)) visit(label);
  }
}

const EntitySet &LabelStore::resolve_id(std::string_view id) const {
  auto it = closures_.find(canonical_label_id(id));
  if (it == closures_.end()) {
    throw Error(ErrorCode::kUnknownLabelId, "unknown label id " + std::string(id));
  }
  return it->second;
}

EntitySet LabelStore::resolve(std::string_view ref) const {
  if (is_label_id(ref)) return resolve_id(ref);
  auto of_type = labels_of_type(ref);
  if (of_type.empty()) {
    throw Error(ErrorCode::kUnknownLabelType, "unknown label type " + std::string(ref));
  }
  EntitySet out;
  for (const Label *l : of_type) out = unite(out, closures_.at(l->id));
  return out;
}

EntitySet LabelStore::label_intersect(std::span<const std::string> refs) const {
  if (refs.empty()) throw Error(ErrorCode::kInvalidArgument, "label intersection needs at least one ref");
  EntitySet out = resolve(refs.front());
  for (std::size_t i = 1; i < refs.size(); ++i) out = intersect(out, resolve(refs[i]));
  return out;
}

EntitySet LabelStore::label_union(std::span<const std::string> refs) const {
  if (refs.empty()) throw Error(ErrorCode::kInvalidArgument, "label union needs at least one ref");
  EntitySet out;
  for (const std::string &ref : refs) out = unite(out, resolve(ref));
  return out;
}

const Label *LabelStore::find(std::string_view id) const {
  auto it = labels_.find(canonical_label_id(id));
  return it == labels_.end() ? nullptr : &it->second;
}

std::vector<const Label *> LabelStore::labels_of_type(std::string_view type) const {
  std::vector<const Label *> out;
  for (const auto &[id, label] : labels_) {
    if (label.type == type) out.push_back(&label);
  }
  return out;
}

}  // namespace ecodigger
