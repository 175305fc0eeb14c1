// Copyright 2026 The endeval Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "endeval/corpus/splits.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/common/rng.hpp"

namespace endeval {

SplitSizes SplitSizes::proportional(std::size_t n) {
  const SplitSizes published;
  if (n == published.total()) return published;
  const std::array<std::size_t, 4> base = {published.mrc_train, published.mrc_valid,
                                           published.mrc_test, published.gen_eval};
  const double total = static_cast<double>(published.total());
  std::array<std::size_t, 4> out{};
  std::array<double, 4> rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    double exact = static_cast<double>(base[i]) * static_cast<double>(n) / total;
    out[i] = static_cast<std::size_t>(exact);
    rem[i] = exact - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::array<std::size_t, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++out[order[k % 4]];
  return {out[0], out[1], out[2], out[3]};
}

namespace {

struct Group {
  std::vector<std::size_t> members;  // indices into the instance list, file order
};

// Picks a subset of `groups` whose member total is as close to `target` as
// possible (exact when reachable; ties prefer the smaller total). 0/1
// subset-sum over group sizes with first-reach parents, so the chosen groups
// lean towards the front of the (already shuffled) list.
std::vector<std::size_t> pick_groups(const std::vector<Group>& groups, std::size_t target) {
  std::size_t cap = target;
  for (const auto& g : groups) cap += g.members.size();
  cap = std::min(cap, target * 2 + 1);
  std::vector<char> reached(cap + 1, 0);
  std::vector<std::size_t> by(cap + 1, 0);
  reached[0] = 1;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::size_t sz = groups[i].members.size();
    if (sz > cap) continue;
    for (std::size_t s = cap; s >= sz; --s) {
      if (!reached[s] && reached[s - sz]) {
        reached[s] = 1;
        by[s] = i;
      }
      if (s == sz) break;
    }
  }
  std::size_t best = 0;
  for (std::size_t d = 0; d <= cap; ++d) {
    if (d <= target && reached[target - d]) {
      best = target - d;
      break;
    }
    if (target + d <= cap && reached[target + d]) {
      best = target + d;
      break;
    }
  }
  std::vector<std::size_t> chosen;
  for (std::size_t s = best; s > 0;) {
    std::size_t i = by[s];
    chosen.push_back(i);
    s -= groups[i].members.size();
  }
  return chosen;
}

}  // namespace

SplitManifest make_splits(const std::vector<StoryInstance>& instances, std::uint64_t seed,
                          const std::optional<SplitSizes>& sizes_opt) {
  if (instances.empty()) throw DomainError("make_splits: no instances");
  const SplitSizes sizes = sizes_opt.value_or(SplitSizes::proportional(instances.size()));
  if (sizes.total() != instances.size())
    throw ValidationError("make_splits: split sizes sum to " + std::to_string(sizes.total()) +
                          " but " + std::to_string(instances.size()) + " instances were given");

  // Group by exact context text; group order follows first appearance so the
  // pre-shuffle state depends only on the file.
  std::vector<Group> groups;
  std::unordered_map<std::string, std::size_t> by_context;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto [it, fresh] = by_context.emplace(instances[i].context_text(), groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].members.push_back(i);
  }
  DeterministicRng rng(seed);
  rng.shuffle(groups);

  SplitManifest m;
  m.seed = seed;
  auto take = [&](std::size_t target, std::vector<std::string>& out) {
    auto chosen = pick_groups(groups, target);
    std::sort(chosen.begin(), chosen.end());
    std::vector<std::size_t> member_idx;
    for (auto gi : chosen)
      for (auto mi : groups[gi].members) member_idx.push_back(mi);
    std::sort(member_idx.begin(), member_idx.end());
    for (auto mi : member_idx) out.push_back(instances[mi].id);
    for (auto it = chosen.rbegin(); it != chosen.rend(); ++it)
      groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(*it));
  };
  take(sizes.gen_eval, m.gen_eval);
  take(sizes.mrc_test, m.mrc_test);
  take(sizes.mrc_valid, m.mrc_valid);
  std::vector<std::size_t> rest;
  for (const auto& g : groups) rest.insert(rest.end(), g.members.begin(), g.members.end());
  std::sort(rest.begin(), rest.end());
  for (auto mi : rest) m.mrc_train.push_back(instances[mi].id);
  return m;
}

json to_json(const SplitManifest& m) {
  return json{{"mrc_train", m.mrc_train},
              {"mrc_valid", m.mrc_valid},
              {"mrc_test", m.mrc_test},
              {"gen_eval", m.gen_eval},
              {"seed", m.seed}};
}

SplitManifest manifest_from_json(const json& j) {
  try {
    SplitManifest m;
    m.mrc_train = j.at("mrc_train").get<std::vector<std::string>>();
    m.mrc_valid = j.at("mrc_valid").get<std::vector<std::string>>();
    m.mrc_test = j.at("mrc_test").get<std::vector<std::string>>();
    m.gen_eval = j.at("gen_eval").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    return m;
  } catch (const json::exception& e) {
    throw LoadError(std::string("split manifest: ") + e.what());
  }
}

void save_manifest(const std::filesystem::path& path, const SplitManifest& m) {
  write_json_file(path, to_json(m));
}

SplitManifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json_file(path));
}

std::string manifest_hash(const SplitManifest& m) { return sha256_hex(canonical_dump(to_json(m))); }

std::vector<StoryInstance> select(const std::vector<StoryInstance>& instances,
                                  const std::vector<std::string>& ids) {
  std::unordered_map<std::string, const StoryInstance*> index;
  for (const auto& s : instances) index.emplace(s.id, &s);
  std::vector<StoryInstance> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) throw NotFoundError("instance id '" + id + "' not in dataset");
    out.push_back(*it->second);
  }
  return out;
}

}  // namespace endeval
