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

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "codelink.hpp"
#include "compare.hpp"
#include "scene.hpp"

// JSON shapes served by the HTTP API and written by the CLI. Every field is a
// direct copy of a core-module output; nothing here computes new numbers.

namespace atria {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const Violation& v) {
  ojson out;
  out["code"] = to_string(v.code);
  out["ids"] = ojson::array();
  for (auto id : v.ids) out["ids"].push_back(raw(id));
  out["message"] = v.message;
  return out;
}

inline ojson to_json(const std::vector<Violation>& violations) {
  ojson out = ojson::array();
  for (const auto& v : violations) out.push_back(to_json(v));
  return out;
}

inline ojson to_json(const DependencyEdge& e) {
  ojson out;
  out["source"] = raw(e.source);
  out["target"] = raw(e.target);
  out["kind"] = to_string(e.kind);
  return out;
}

/// Tree payload: layout, encodings and tooltip values for each visible node.
inline ojson to_json(const Scene& scene) {
  ojson out;
  out["run_id"] = scene.run_id;
  out["compare_run_id"] = scene.compare_run_id ? ojson(*scene.compare_run_id) : ojson(nullptr);
  out["metric"] = to_string(scene.metric);
  out["collapsed"] = ojson::array();
  for (auto id : scene.collapsed) out["collapsed"].push_back(raw(id));
  out["level_gap"] = scene.level_gap;
  out["sibling_gap"] = scene.sibling_gap;
  out["nodes"] = ojson::array();
  for (const auto& n : scene.nodes) {
    ojson node;
    node["id"] = raw(n.id);
    node["name"] = n.name;
    node["mark"] = to_string(n.mark);
    node["x"] = n.x;
    node["y"] = n.y;
    node["depth"] = n.depth;
    node["encoded"] = n.encoded;
    node["fill"] = n.fill;
    node["border"] = encoding::border_for(n.mode).name;
    node["mode"] = to_string(n.mode);
    node["line"] = n.line;
    node["column"] = n.column;
    ojson tip;
    tip["time_ns"] = n.time.count();
    tip["inclusive_ns"] = n.inclusive.count();
    tip["exclusive_ns"] = n.exclusive.count();
    tip["mode"] = to_string(n.mode);
    tip["count"] = n.count;
    if (n.mark == Mark::Triangle) tip["hidden_descendants"] = n.hidden_descendants;
    node["tooltip"] = std::move(tip);
    if (scene.compare_run_id) {
      node["delta_ns"] = n.delta ? ojson(n.delta->count()) : ojson(nullptr);
      node["mode_b"] = n.other_mode ? ojson(to_string(*n.other_mode)) : ojson(nullptr);
      node["mode_changed"] = n.mode_changed;
      node["unmatched"] = n.unmatched;
    }
    out["nodes"].push_back(std::move(node));
  }
  out["edges"] = ojson::array();
  for (const auto& e : scene.edges) out["edges"].push_back({raw(e.source), raw(e.target)});
  return out;
}

inline ojson to_json(const ComparisonResult& r) {
  ojson out;
  out["run_a"] = r.run_a;
  out["run_b"] = r.run_b;
  out["metric"] = to_string(r.metric);
  out["slower"] = slower_run_label(r);
  out["total_a_ns"] = r.total_a.count();
  out["total_b_ns"] = r.total_b.count();
  out["matches"] = ojson::array();
  for (const auto& m : r.matches) {
    ojson match;
    match["a"] = raw(m.a);
    match["b"] = raw(m.b);
    match["path"] = to_json(m.path);
    match["time_a_ns"] = m.time_a.count();
    match["time_b_ns"] = m.time_b.count();
    match["delta_ns"] = m.delta.count();
    match["mode_a"] = to_string(m.mode_a);
    match["mode_b"] = to_string(m.mode_b);
    match["mode_changed"] = m.mode_changed;
    out["matches"].push_back(std::move(match));
  }
  out["only_a"] = ojson::array();
  for (auto id : r.only_a) out["only_a"].push_back(raw(id));
  out["only_b"] = ojson::array();
  for (auto id : r.only_b) out["only_b"].push_back(raw(id));
  return out;
}

/// Matches ordered by |delta| descending, then by path.
inline std::vector<const NodeMatch*> ranked_matches(const ComparisonResult& r) {
  std::vector<const NodeMatch*> ranked;
  for (const auto& m : r.matches) ranked.push_back(&m);
  std::stable_sort(ranked.begin(), ranked.end(), [](const NodeMatch* x, const NodeMatch* y) {
    const auto dx = std::abs(x->delta.count()), dy = std::abs(y->delta.count());
    if (dx != dy) return dx > dy;
    return x->path < y->path;
  });
  return ranked;
}

/// Diff report written by `atria diff --format json`; unmatched nodes are
/// listed by provenance path.
inline ojson diff_report_json(const ComparisonResult& r, const Run& a, const Run& b) {
  ojson out;
  out["run_a"] = r.run_a;
  out["run_b"] = r.run_b;
  out["slower"] = slower_run_label(r);
  out["matches"] = ojson::array();
  for (const auto* m : ranked_matches(r)) {
    ojson match;
    match["path"] = to_json(m->path);
    match["delta_ns"] = m->delta.count();
    match["mode_a"] = to_string(m->mode_a);
    match["mode_b"] = to_string(m->mode_b);
    match["mode_changed"] = m->mode_changed;
    out["matches"].push_back(std::move(match));
  }
  out["only_a"] = ojson::array();
  for (auto id : r.only_a) out["only_a"].push_back(to_json(find_node(a, id)->provenance));
  out["only_b"] = ojson::array();
  for (auto id : r.only_b) out["only_b"].push_back(to_json(find_node(b, id)->provenance));
  return out;
}

inline std::string diff_report_table(const ComparisonResult& r, const Run& a, const Run& b) {
  std::ostringstream out;
  out << "run A: " << r.run_a << "  total " << r.total_a.count() << " ns\n";
  out << "run B: " << r.run_b << "  total " << r.total_b.count() << " ns\n";
  out << "slower: " << slower_run_label(r) << "\n";
  out << "metric: " << to_string(r.metric) << "\n\n";
  char row[64];
  out << "       delta_ns  mode_a     mode_b     path\n";
  for (const auto* m : ranked_matches(r)) {
    std::snprintf(row, sizeof row, "%15lld  ", static_cast<long long>(m->delta.count()));
    out << row;
    std::snprintf(row, sizeof row, "%-10s %-10s ", std::string(to_string(m->mode_a)).c_str(),
                  std::string(to_string(m->mode_b)).c_str());
    out << row << to_string(m->path) << (m->mode_changed ? "  *mode changed*" : "") << "\n";
  }
  for (auto id : r.only_a) out << "only in A: " << to_string(find_node(a, id)->provenance) << "\n";
  for (auto id : r.only_b) out << "only in B: " << to_string(find_node(b, id)->provenance) << "\n";
  return out.str();
}

inline ojson hotspots_json(const ExpressionTree& tree, TimeMetric metric, const std::vector<Hotspot>& ranked) {
  ojson out;
  out["run_id"] = tree.run().run_id;
  out["metric"] = to_string(metric);
  out["hotspots"] = ojson::array();
  for (const auto& h : ranked) {
    ojson row;
    row["id"] = raw(h.id);
    row["name"] = tree.node(h.id).name;
    row["value_ns"] = h.value.count();
    out["hotspots"].push_back(std::move(row));
  }
  return out;
}

inline ojson source_json(const Run& run) {
  require_source(run);
  const auto map = build_source_map(run);
  ojson out;
  out["run_id"] = run.run_id;
  out["language"] = run.source->language;
  out["text"] = run.source->text;
  out["line_count"] = run.source->line_count();
  out["lines"] = ojson::object();
  for (const auto& [line, ids] : map.by_line) {
    auto& entry = out["lines"][std::to_string(line)] = ojson::array();
    for (auto id : ids) entry.push_back(raw(id));
  }
  out["nodes"] = ojson::object();
  for (const auto& [id, pos] : map.by_node) out["nodes"][std::to_string(raw(id))] = {pos.line, pos.column};
  return out;
}

/// Hover details for one node: tooltip values plus its elided edges.
inline ojson node_detail_json(const ExpressionTree& tree, NodeId id, bool include_library) {
  const auto& n = tree.node(id);
  const auto summary = subtree_summary(tree, id);
  const auto exclusive = exclusive_times(tree);
  ojson out;
  out["id"] = raw(id);
  out["name"] = n.name;
  out["provenance"] = to_json(n.provenance);
  out["line"] = n.line;
  out["column"] = n.column;
  out["count"] = n.count;
  out["mode"] = to_string(n.mode);
  out["library"] = n.library;
  out["inclusive_ns"] = n.inclusive_time.count();
  out["exclusive_ns"] = exclusive.value(id).count();
  out["negative_slack_ns"] = exclusive.negative_slack.at(id).count();
  out["descendants"] = summary.descendants;
  out["subtree_executions"] = summary.executions;
  out["elided_edges"] = ojson::array();
  for (const auto& e : elided_edges_for(tree, id, include_library)) out["elided_edges"].push_back(to_json(e));
  return out;
}

}  // namespace atria
