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

#include <string_view>
#include <unordered_map>
#include <vector>

#include "graph.hpp"
#include "tidy_tree.hpp"

namespace atria {

enum class Mark { Circle, Triangle };

inline constexpr std::string_view to_string(Mark mark) noexcept {
  return mark == Mark::Circle ? "circle" : "triangle";
}

struct PlacedNode {
  NodeId id{};
  double x = 0.0;  // depth * level_gap
  double y = 0.0;  // breadth * sibling_gap
  std::size_t depth = 0;
  Mark mark = Mark::Circle;
};

/// Horizontal tidy-tree coordinates for the visible part of a view, in
/// abstract units. Nodes are listed in preorder.
struct LayoutResult {
  double level_gap = 1.0;
  double sibling_gap = 1.0;
  std::vector<PlacedNode> nodes;

  const PlacedNode& at(NodeId id) const {
    for (const auto& p : nodes)
      if (p.id == id) return p;
    throw Error(Errc::UnknownNode, to_string(id) + " is not part of the layout");
  }
};

inline LayoutResult layout(const ViewTree& view, double level_gap = 1.0, double sibling_gap = 1.0) {
  if (!(level_gap > 0.0) || !(sibling_gap > 0.0))
    throw Error(Errc::InvalidArgument, "layout gaps must be positive");
  const auto visible = view.visible();
  if (visible.empty()) throw Error(Errc::EmptyView, "nothing to lay out");

  std::unordered_map<NodeId, std::size_t> dense;
  for (std::size_t i = 0; i < visible.size(); ++i) dense.emplace(visible[i], i);
  tidy::ChildLists children(visible.size());
  for (std::size_t i = 0; i < visible.size(); ++i)
    for (auto child : view.visible_children(visible[i])) children[i].push_back(dense.at(child));

  const auto placed = tidy::layout(children, dense.at(view.tree().root()));

  LayoutResult out;
  out.level_gap = level_gap;
  out.sibling_gap = sibling_gap;
  out.nodes.reserve(visible.size());
  for (std::size_t i = 0; i < visible.size(); ++i) {
    PlacedNode p;
    p.id = visible[i];
    p.depth = placed.depth[i];
    p.x = static_cast<double>(p.depth) * level_gap;
    p.y = placed.breadth[i] * sibling_gap;
    p.mark = view.is_collapsed(p.id) ? Mark::Triangle : Mark::Circle;
    out.nodes.push_back(p);
  }
  return out;
}

}  // namespace atria
