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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "compare.hpp"
#include "layout.hpp"
#include "metrics.hpp"

namespace atria {

// ----------------------------------------------------------------------------
// Encodings shared by the SVG export and the HTTP payloads
// ----------------------------------------------------------------------------

namespace encoding {

struct BorderStyle {
  std::string_view name;
  std::string_view dasharray;  // empty for a solid line
};

inline constexpr BorderStyle border_for(ExecutionMode mode) noexcept {
  switch (mode) {
    case ExecutionMode::Sync: return {"solid", ""};
    case ExecutionMode::Async: return {"dashed", "6 3"};
    case ExecutionMode::Undecided: return {"dash-dot", "6 3 1 3"};
  }
  return {"solid", ""};
}

inline constexpr std::string_view kBorderColor = "#333333";
inline constexpr std::string_view kModeChangedColor = "#ff00ff";
inline constexpr std::string_view kElidedEdgeColor = "#ffd700";
inline constexpr double kUnmatchedOpacity = 0.3;

struct Rgb {
  double r, g, b;
};

inline std::string hex(Rgb c) {
  auto channel = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(c.r), channel(c.g), channel(c.b));
  return buf;
}

inline Rgb mix(Rgb from, Rgb to, double t) {
  return {from.r + (to.r - from.r) * t, from.g + (to.g - from.g) * t, from.b + (to.b - from.b) * t};
}

/// Fixed hue and lightness; the encoded value sets the HSL saturation.
inline std::string saturation_fill(double value) {
  constexpr double hue = 24.0 / 360.0, lightness = 0.55;
  const double s = std::clamp(value, 0.0, 1.0);
  const double q = lightness < 0.5 ? lightness * (1 + s) : lightness + s - lightness * s;
  const double p = 2 * lightness - q;
  auto channel = [p, q](double t) {
    if (t < 0) t += 1;
    if (t > 1) t -= 1;
    if (t < 1.0 / 6) return p + (q - p) * 6 * t;
    if (t < 1.0 / 2) return q;
    if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
    return p;
  };
  return hex({channel(hue + 1.0 / 3), channel(hue), channel(hue - 1.0 / 3)});
}

inline constexpr Rgb kNeutral{0.969, 0.969, 0.969};
inline constexpr Rgb kFaster{0.129, 0.400, 0.675};
inline constexpr Rgb kSlower{0.698, 0.094, 0.169};

/// Blue for negative differences, red for positive, neutral grey at zero.
inline std::string diverging_fill(double value) {
  const double v = std::clamp(value, -1.0, 1.0);
  return hex(v < 0 ? mix(kNeutral, kFaster, -v) : mix(kNeutral, kSlower, v));
}

}  // namespace encoding

// ----------------------------------------------------------------------------
// Scene
// ----------------------------------------------------------------------------

struct SceneNode {
  NodeId id{};
  std::string name;
  Mark mark = Mark::Circle;
  double x = 0.0;
  double y = 0.0;
  std::size_t depth = 0;
  double encoded = 0.0;      // saturation in [0,1], or difference in [-1,1]
  Nanos time{0};             // raw value under the requested metric
  Nanos inclusive{0};
  Nanos exclusive{0};
  ExecutionMode mode = ExecutionMode::Sync;
  std::int64_t line = 1;
  std::int64_t column = 1;
  std::int64_t count = 1;
  std::size_t hidden_descendants = 0;  // non-zero only for triangles
  std::optional<Nanos> delta;          // comparison mode, matched nodes only
  std::optional<ExecutionMode> other_mode;
  bool mode_changed = false;
  bool unmatched = false;
  std::string fill;
};

struct SceneEdge {
  NodeId source{};
  NodeId target{};
};

/// Everything needed to draw one view: layout, per-node encodings and
/// tooltip values. The SVG export and the tree endpoint both read from it.
struct Scene {
  std::string run_id;
  std::optional<std::string> compare_run_id;
  TimeMetric metric = TimeMetric::Inclusive;
  std::set<NodeId> collapsed;
  double level_gap = 1.0;
  double sibling_gap = 1.0;
  std::vector<SceneNode> nodes;  // preorder
  std::vector<SceneEdge> edges;
};

/// Builds the scene for `view`. With a comparison, fill switches to the
/// diverging difference encoding, mode changes are flagged and nodes absent
/// from the other run are marked unmatched. Line style always follows the
/// view's own run, i.e. run A of the comparison.
inline Scene build_scene(const ViewTree& view, TimeMetric metric, const ComparisonResult* comparison = nullptr,
                         double level_gap = 1.0, double sibling_gap = 1.0) {
  const auto& tree = view.tree();
  const auto placed = layout(view, level_gap, sibling_gap);
  const auto inclusive = inclusive_times(tree);
  const auto exclusive = exclusive_times(tree);
  const auto& times = metric == TimeMetric::Inclusive ? inclusive : exclusive;

  Scene scene;
  scene.run_id = tree.run().run_id;
  scene.metric = metric;
  scene.collapsed = view.collapsed();
  scene.level_gap = level_gap;
  scene.sibling_gap = sibling_gap;
  if (comparison) scene.compare_run_id = comparison->run_b;

  for (const auto& p : placed.nodes) {
    const auto& n = tree.node(p.id);
    SceneNode s;
    s.id = p.id;
    s.name = n.name;
    s.mark = p.mark;
    s.x = p.x;
    s.y = p.y;
    s.depth = p.depth;
    s.time = times.value(p.id);
    s.inclusive = inclusive.value(p.id);
    s.exclusive = exclusive.value(p.id);
    s.mode = n.mode;
    s.line = n.line;
    s.column = n.column;
    s.count = n.count;
    if (p.mark == Mark::Triangle) s.hidden_descendants = subtree_summary(tree, p.id).descendants;
    if (comparison) {
      if (const auto* m = comparison->match_for_a(p.id)) {
        s.delta = view.is_collapsed(p.id) ? m->inclusive_delta : m->delta;
        s.other_mode = m->mode_b;
        s.mode_changed = m->mode_changed;
      } else {
        s.unmatched = true;
      }
    }
    scene.nodes.push_back(std::move(s));
    for (auto child : view.visible_children(p.id)) scene.edges.push_back({p.id, child});
  }

  if (comparison) {
    std::vector<Nanos> deltas;
    for (const auto& s : scene.nodes)
      if (s.delta) deltas.push_back(*s.delta);
    const auto scaled = deltas.empty() ? std::vector<double>{} : diverging_scale(deltas);
    std::size_t k = 0;
    for (auto& s : scene.nodes) {
      s.encoded = s.delta ? scaled[k++] : 0.0;
      s.fill = encoding::diverging_fill(s.encoded);
    }
  } else {
    std::vector<Nanos> values;
    for (const auto& s : scene.nodes) values.push_back(encoded_time(view, times, s.id));
    const auto scaled = saturation_scale(values);
    for (std::size_t i = 0; i < scene.nodes.size(); ++i) {
      scene.nodes[i].encoded = scaled[i];
      scene.nodes[i].fill = encoding::saturation_fill(scaled[i]);
    }
  }
  return scene;
}

}  // namespace atria
