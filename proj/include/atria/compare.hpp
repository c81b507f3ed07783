/*
 * Copyright 2026 The Atria Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metrics.hpp"

namespace atria {

// Two runs are compared node by node. Nodes are matched purely on their
// provenance path, so ids may differ freely between the runs; a node whose
// path exists in only one run is reported as unmatched and drawn dimmed.

struct Matching {
  std::vector<std::pair<NodeId, NodeId>> pairs;  // (a, b), ascending by a
  std::vector<NodeId> only_a;
  std::vector<NodeId> only_b;
};

inline Matching match_nodes(const Run& a, const Run& b) {
  std::map<Provenance, NodeId> in_b;
  for (const auto& n : b.nodes) in_b.emplace(n.provenance, n.id);

  Matching m;
  std::map<NodeId, const Provenance*> sorted_a;
  for (const auto& n : a.nodes) sorted_a.emplace(n.id, &n.provenance);
  for (const auto& [id, path] : sorted_a) {
    auto it = in_b.find(*path);
    if (it == in_b.end()) {
      m.only_a.push_back(id);
      continue;
    }
    m.pairs.emplace_back(id, it->second);
    in_b.erase(it);
  }
  for (const auto& [_, id] : in_b) m.only_b.push_back(id);
  std::sort(m.only_b.begin(), m.only_b.end());
  return m;
}

struct NodeMatch {
  NodeId a{};
  NodeId b{};
  Provenance path;
  Nanos time_a{0};
  Nanos time_b{0};
  Nanos delta{0};            // time_b - time_a under the chosen metric
  Nanos inclusive_delta{0};  // used for collapsed triangles
  ExecutionMode mode_a = ExecutionMode::Sync;
  ExecutionMode mode_b = ExecutionMode::Sync;
  bool mode_changed = false;

  bool operator==(const NodeMatch&) const = default;
};

struct ComparisonResult {
  std::string run_a;
  std::string run_b;
  TimeMetric metric = TimeMetric::Inclusive;
  std::vector<NodeMatch> matches;  // ascending by node id in run A
  std::vector<NodeId> only_a;
  std::vector<NodeId> only_b;
  Nanos total_a{0};
  Nanos total_b{0};

  const NodeMatch* match_for_a(NodeId id) const noexcept {
    auto it = std::lower_bound(matches.begin(), matches.end(), id,
                               [](const NodeMatch& m, NodeId key) { return m.a < key; });
    return it != matches.end() && it->a == id ? &*it : nullptr;
  }
};

inline ComparisonResult diff(const ExpressionTree& a, const ExpressionTree& b, TimeMetric metric) {
  const auto times_a = time_view(a, metric);
  const auto times_b = time_view(b, metric);
  const auto matching = match_nodes(a.run(), b.run());

  ComparisonResult r;
  r.run_a = a.run().run_id;
  r.run_b = b.run().run_id;
  r.metric = metric;
  r.only_a = matching.only_a;
  r.only_b = matching.only_b;
  r.total_a = a.node(a.root()).inclusive_time;
  r.total_b = b.node(b.root()).inclusive_time;
  for (const auto& [ia, ib] : matching.pairs) {
    const auto& na = a.node(ia);
    const auto& nb = b.node(ib);
    NodeMatch m;
    m.a = ia;
    m.b = ib;
    m.path = na.provenance;
    m.time_a = times_a.value(ia);
    m.time_b = times_b.value(ib);
    m.delta = m.time_b - m.time_a;
    m.inclusive_delta = nb.inclusive_time - na.inclusive_time;
    m.mode_a = na.mode;
    m.mode_b = nb.mode;
    m.mode_changed = na.mode != nb.mode;
    r.matches.push_back(std::move(m));
  }
  return r;
}

inline ComparisonResult diff(const Run& a, const Run& b, TimeMetric metric) {
  return diff(build_expression_tree(a), build_expression_tree(b), metric);
}

enum class Slower { RunA, RunB, Tie };

/// Which run took longer, judged by root inclusive time.
inline Slower slower_run(const ComparisonResult& r) noexcept {
  if (r.total_a == r.total_b) return Slower::Tie;
  return r.total_a > r.total_b ? Slower::RunA : Slower::RunB;
}

/// Run id of the slower run, or "tie".
inline std::string slower_run_label(const ComparisonResult& r) {
  switch (slower_run(r)) {
    case Slower::RunA: return r.run_a;
    case Slower::RunB: return r.run_b;
    case Slower::Tie: break;
  }
  return "tie";
}

}  // namespace atria
