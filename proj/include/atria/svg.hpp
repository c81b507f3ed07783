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
#include <map>
#include <sstream>
#include <string>

#include "scene.hpp"

namespace atria {

struct SvgOptions {
  double pixels_per_level = 140.0;
  double pixels_per_sibling = 34.0;
  double radius = 9.0;
  double margin = 40.0;
};

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string format_ns(Nanos t) { return std::to_string(t.count()) + " ns"; }

}  // namespace svg_detail

/// Static SVG export of a scene. One element with class "node" per visible
/// node (circle, or triangle path for a collapsed subtree) and one element
/// with class "edge" per tree link. Output is byte-stable for equal input.
inline std::string render_svg(const Scene& scene, const SvgOptions& opt = {}) {
  using svg_detail::escape;
  using svg_detail::num;

  double max_x = 0.0, max_y = 0.0;
  for (const auto& n : scene.nodes) {
    max_x = std::max(max_x, n.x / scene.level_gap);
    max_y = std::max(max_y, n.y / scene.sibling_gap);
  }
  auto px = [&](const SceneNode& n) { return opt.margin + n.x / scene.level_gap * opt.pixels_per_level; };
  auto py = [&](const SceneNode& n) { return opt.margin + n.y / scene.sibling_gap * opt.pixels_per_sibling; };
  const double width = 2 * opt.margin + max_x * opt.pixels_per_level + 120.0;
  const double height = 2 * opt.margin + max_y * opt.pixels_per_sibling;

  std::map<NodeId, const SceneNode*> by_id;
  for (const auto& n : scene.nodes) by_id.emplace(n.id, &n);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  out << "<title>" << escape(scene.run_id);
  if (scene.compare_run_id) out << " vs " << escape(*scene.compare_run_id);
  out << " (" << to_string(scene.metric) << ")</title>\n";

  out << "<g class=\"edges\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1.5\">\n";
  for (const auto& e : scene.edges) {
    const auto& s = *by_id.at(e.source);
    const auto& t = *by_id.at(e.target);
    const double x1 = px(s), y1 = py(s), x2 = px(t), y2 = py(t), mx = (x1 + x2) / 2;
    out << "<path class=\"edge\" d=\"M" << num(x1) << "," << num(y1) << " C" << num(mx) << "," << num(y1) << " "
        << num(mx) << "," << num(y2) << " " << num(x2) << "," << num(y2) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g class=\"nodes\">\n";
  for (const auto& n : scene.nodes) {
    const auto border = encoding::border_for(n.mode);
    const double cx = px(n), cy = py(n), r = opt.radius;
    std::ostringstream attrs;
    attrs << " data-id=\"" << raw(n.id) << "\" fill=\"" << n.fill << "\" stroke=\""
          << (n.mode_changed ? encoding::kModeChangedColor : encoding::kBorderColor) << "\" stroke-width=\""
          << (n.mode_changed ? "3" : "1.5") << "\"";
    if (!border.dasharray.empty()) attrs << " stroke-dasharray=\"" << border.dasharray << "\"";
    if (n.unmatched) attrs << " opacity=\"" << num(encoding::kUnmatchedOpacity) << "\"";

    std::ostringstream tip;
    tip << n.name << " | " << to_string(scene.metric) << " " << svg_detail::format_ns(n.time) << " | mode "
        << to_string(n.mode) << " | count " << n.count << " | line " << n.line;
    if (n.mark == Mark::Triangle) tip << " | hidden " << n.hidden_descendants;
    if (n.delta) tip << " | delta " << svg_detail::format_ns(*n.delta);
    if (n.unmatched) tip << " | unmatched";

    if (n.mark == Mark::Circle) {
      out << "<circle class=\"node circle\" cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\""
          << attrs.str() << "><title>" << escape(tip.str()) << "</title></circle>\n";
    } else {
      out << "<path class=\"node triangle\" d=\"M" << num(cx - r) << "," << num(cy) << " L" << num(cx + r) << ","
          << num(cy - r) << " L" << num(cx + r) << "," << num(cy + r) << " Z\"" << attrs.str() << "><title>"
          << escape(tip.str()) << "</title></path>\n";
    }
  }
  out << "</g>\n";

  out << "<g class=\"labels\" font-family=\"monospace\" font-size=\"11\">\n";
  for (const auto& n : scene.nodes)
    out << "<text x=\"" << num(px(n) + opt.radius + 3) << "\" y=\"" << num(py(n) - opt.radius - 2) << "\">"
        << escape(n.name) << "</text>\n";
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace atria
