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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trace.hpp"

namespace atria {

struct SourcePosition {
  std::int64_t line = 1;
  std::int64_t column = 1;

  auto operator<=>(const SourcePosition&) const = default;
};

/// Both directions of the node <-> source line relation.
struct SourceMap {
  std::map<std::int64_t, std::set<NodeId>> by_line;
  std::map<NodeId, SourcePosition> by_node;
};

inline SourceMap build_source_map(const Run& run) {
  SourceMap map;
  for (const auto& n : run.nodes) {
    map.by_line[n.line].insert(n.id);
    map.by_node.emplace(n.id, SourcePosition{n.line, n.column});
  }
  return map;
}

inline void require_source(const Run& run) {
  if (!run.source) throw Error(Errc::NoSource, "run " + run.run_id + " carries no source text");
}

/// Nodes generated from one source line. Lines without code give an empty set.
inline std::set<NodeId> nodes_for_line(const Run& run, std::int64_t line) {
  require_source(run);
  const auto lines = run.source->line_count();
  if (line < 1 || line > lines)
    throw Error(Errc::LineOutOfRange,
                "line " + std::to_string(line) + " outside 1.." + std::to_string(lines));
  std::set<NodeId> out;
  for (const auto& n : run.nodes)
    if (n.line == line) out.insert(n.id);
  return out;
}

inline SourcePosition line_for_node(const Run& run, NodeId id) {
  const auto* n = find_node(run, id);
  if (!n) throw Error(Errc::UnknownNode, "no node " + to_string(id));
  require_source(run);
  return {n->line, n->column};
}

/// Groups of two or more nodes that share a primitive name and source line,
/// i.e. one code site reached through several provenance paths. Each group
/// is sorted; groups are ordered by (line, name).
inline std::vector<std::vector<NodeId>> repeated_primitives(const Run& run) {
  std::map<std::pair<std::int64_t, std::string>, std::vector<NodeId>> sites;
  for (const auto& n : run.nodes) sites[{n.line, n.name}].push_back(n.id);
  std::vector<std::vector<NodeId>> groups;
  for (auto& [_, ids] : sites) {
    if (ids.size() < 2) continue;
    std::sort(ids.begin(), ids.end());
    groups.push_back(std::move(ids));
  }
  return groups;
}

}  // namespace atria
