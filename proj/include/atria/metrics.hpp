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
#include <cstdlib>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "graph.hpp"

namespace atria {

enum class TimeMetric { Inclusive, Exclusive };

inline constexpr std::string_view to_string(TimeMetric metric) noexcept {
  return metric == TimeMetric::Inclusive ? "inclusive" : "exclusive";
}

inline std::optional<TimeMetric> parse_metric(std::string_view text) noexcept {
  if (text == "inclusive") return TimeMetric::Inclusive;
  if (text == "exclusive") return TimeMetric::Exclusive;
  return std::nullopt;
}

/// Per-node time under one metric. `negative_slack` records how far the raw
/// exclusive value fell below zero before clamping; always zero for
/// inclusive views.
struct TimeView {
  TimeMetric metric = TimeMetric::Inclusive;
  std::map<NodeId, Nanos> values;
  std::map<NodeId, Nanos> negative_slack;

  Nanos value(NodeId id) const {
    auto it = values.find(id);
    if (it == values.end()) throw Error(Errc::UnknownNode, "no node " + to_string(id));
    return it->second;
  }
};

/// Inclusive time minus the inclusive time of the direct operand children,
/// clamped at zero. Asynchronous children may overlap their parent, so the
/// raw difference can go negative; the deficit is kept as slack.
inline TimeView exclusive_times(const ExpressionTree& tree) {
  TimeView view;
  view.metric = TimeMetric::Exclusive;
  for (const auto& n : tree.run().nodes) {
    Nanos raw = n.inclusive_time;
    for (auto child : tree.children(n.id)) raw -= tree.node(child).inclusive_time;
    view.values[n.id] = std::max(raw, Nanos{0});
    view.negative_slack[n.id] = std::max(-raw, Nanos{0});
  }
  return view;
}

inline TimeView inclusive_times(const ExpressionTree& tree) {
  TimeView view;
  view.metric = TimeMetric::Inclusive;
  for (const auto& n : tree.run().nodes) {
    view.values[n.id] = n.inclusive_time;
    view.negative_slack[n.id] = Nanos{0};
  }
  return view;
}

inline TimeView time_view(const ExpressionTree& tree, TimeMetric metric) {
  return metric == TimeMetric::Inclusive ? inclusive_times(tree) : exclusive_times(tree);
}

struct Hotspot {
  NodeId id{};
  Nanos value{0};

  bool operator==(const Hotspot&) const = default;
};

/// Top `n` nodes by time, descending; ties go to the smaller name, then the
/// smaller id.
inline std::vector<Hotspot> hotspots(const ExpressionTree& tree, TimeMetric metric, std::size_t n) {
  const auto times = time_view(tree, metric);
  std::vector<Hotspot> ranked;
  ranked.reserve(times.values.size());
  for (const auto& [id, value] : times.values) ranked.push_back({id, value});
  const auto order = [&tree](const Hotspot& a, const Hotspot& b) {
    if (a.value != b.value) return a.value > b.value;
    const auto& na = tree.node(a.id).name;
    const auto& nb = tree.node(b.id).name;
    if (na != nb) return na < nb;
    return a.id < b.id;
  };
  const auto keep = std::min(n, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), order);
  ranked.resize(keep);
  return ranked;
}

inline std::vector<Hotspot> hotspots(const Run& run, TimeMetric metric, std::size_t n) {
  return hotspots(build_expression_tree(run), metric, n);
}

/// Linear normalization onto [0, 1] by the maximum; all-zero input maps to 0.
inline std::vector<double> saturation_scale(std::span<const Nanos> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "saturation scale needs at least one value");
  Nanos max{0};
  for (auto v : values) {
    if (v < Nanos{0}) throw Error(Errc::InvalidArgument, "saturation scale takes non-negative times");
    max = std::max(max, v);
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (auto v : values)
    out.push_back(max == Nanos{0} ? 0.0 : static_cast<double>(v.count()) / static_cast<double>(max.count()));
  return out;
}

/// Signed normalization onto [-1, 1] by the largest magnitude.
inline std::vector<double> diverging_scale(std::span<const Nanos> deltas) {
  if (deltas.empty()) throw Error(Errc::EmptyInput, "diverging scale needs at least one value");
  std::int64_t max = 0;
  for (auto d : deltas) max = std::max(max, std::abs(d.count()));
  std::vector<double> out;
  out.reserve(deltas.size());
  for (auto d : deltas)
    out.push_back(max == 0 ? 0.0 : static_cast<double>(d.count()) / static_cast<double>(max));
  return out;
}

/// Time used to encode a visible node: the metric value, except collapsed
/// triangles, which always stand for the inclusive time of their subtree.
inline Nanos encoded_time(const ViewTree& view, const TimeView& times, NodeId id) {
  if (view.is_collapsed(id)) return view.tree().node(id).inclusive_time;
  return times.value(id);
}

/// Fill saturation for every visible node, normalized over the visible set.
inline std::map<NodeId, double> encode_saturation(const ViewTree& view, TimeMetric metric) {
  const auto times = time_view(view.tree(), metric);
  const auto ids = view.visible();
  std::vector<Nanos> values;
  values.reserve(ids.size());
  for (auto id : ids) values.push_back(encoded_time(view, times, id));
  const auto scaled = saturation_scale(values);
  std::map<NodeId, double> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], scaled[i]);
  return out;
}

}  // namespace atria
