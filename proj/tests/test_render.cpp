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

// Scene construction and SVG export.

#include <gtest/gtest.h>

#include <regex>

#include "fixtures.hpp"

using namespace atria;
using namespace atria::testing;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
  return n;
}

// One line per element in our output; returns the node element for `id`.
std::string node_element(const std::string& svg, NodeId id) {
  std::istringstream in(svg);
  const auto key = "data-id=\"" + std::to_string(raw(id)) + "\"";
  for (std::string line; std::getline(in, line);)
    if (line.find("class=\"node ") != std::string::npos && line.find(key) != std::string::npos) return line;
  return {};
}

// Minimal well-formedness check: tags nest and close.
bool balanced(const std::string& svg) {
  std::vector<std::string> open;
  static const std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3] == "/") continue;
    if (m[1] == "/") {
      if (open.empty() || open.back() != m[2]) return false;
      open.pop_back();
    } else {
      open.push_back(m[2]);
    }
  }
  return open.empty();
}

}  // namespace

TEST(Encoding, BorderStyles) {
  EXPECT_EQ(encoding::border_for(ExecutionMode::Sync).dasharray, "");
  EXPECT_EQ(encoding::border_for(ExecutionMode::Async).name, "dashed");
  EXPECT_EQ(encoding::border_for(ExecutionMode::Undecided).name, "dash-dot");
}

TEST(Encoding, Fills) {
  EXPECT_EQ(encoding::diverging_fill(0.0), "#f7f7f7");
  EXPECT_EQ(encoding::diverging_fill(-1.0), "#2166ac");
  EXPECT_EQ(encoding::diverging_fill(1.0), "#b2182b");
  EXPECT_EQ(encoding::saturation_fill(0.0), "#8c8c8c");  // grey at lightness 0.55
  EXPECT_EQ(encoding::saturation_fill(1.0), "#ff751a");  // colorsys.hls_to_rgb(24/360, .55, 1)
}

TEST(Scene, Ex1Tooltips) {
  const auto scene = build_scene(ViewTree(build_expression_tree(ex1()), {node_id(2)}), TimeMetric::Exclusive);
  ASSERT_EQ(scene.nodes.size(), 3u);
  const auto& tri = scene.nodes[2];
  EXPECT_EQ(tri.id, node_id(2));
  EXPECT_EQ(tri.mark, Mark::Triangle);
  EXPECT_EQ(tri.hidden_descendants, 3u);
  EXPECT_EQ(tri.time, Nanos{2'000});
  EXPECT_EQ(tri.inclusive, Nanos{7'000});
  EXPECT_DOUBLE_EQ(tri.encoded, 1.0);
  EXPECT_EQ(scene.edges.size(), 2u);
}

TEST(Svg, Ex1ShapesAndEdges) {
  const auto svg = render_svg(build_scene(ViewTree(build_expression_tree(ex1())), TimeMetric::Inclusive));
  EXPECT_EQ(count(svg, "class=\"node "), 6u);
  EXPECT_EQ(count(svg, "class=\"edge\""), 5u);
  EXPECT_EQ(count(svg, "<circle"), 6u);
  EXPECT_TRUE(balanced(svg));
  EXPECT_NE(node_element(svg, node_id(0)).find("stroke-dasharray=\"6 3\""), std::string::npos);
  EXPECT_EQ(node_element(svg, node_id(1)).find("stroke-dasharray"), std::string::npos);
}

TEST(Svg, ByteIdentical) {
  const auto make = [] {
    return render_svg(build_scene(ViewTree(build_expression_tree(ex1()), {node_id(2)}), TimeMetric::Exclusive));
  };
  const auto a = make();
  EXPECT_EQ(a, make());
  EXPECT_EQ(count(a, "class=\"node triangle\""), 1u);
}

TEST(Svg, EscapesNames) {
  auto run = ex1();
  node_of(run, 1).name = "a<b&c";
  const auto svg = render_svg(build_scene(ViewTree(build_expression_tree(run)), TimeMetric::Inclusive));
  EXPECT_NE(svg.find("a&lt;b&amp;c"), std::string::npos);
  EXPECT_TRUE(balanced(svg));
}

TEST(Svg, SelfCompareIsNeutral) {
  const auto tree = build_expression_tree(ex1());
  const auto r = diff(tree, tree, TimeMetric::Inclusive);
  const auto svg = render_svg(build_scene(ViewTree(tree), TimeMetric::Inclusive, &r));
  EXPECT_EQ(count(svg, "#ff00ff"), 0u);
  EXPECT_EQ(count(svg, "fill=\"#f7f7f7\""), 6u);
}

TEST(Svg, BoundaryPoliciesMagentaEveryNonRoot) {
  const auto skeleton = gen::generate_program(5, 5, 3);
  gen::PolicyConfig zero, inf;
  zero.threshold = Nanos{0};
  inf.threshold = gen::PolicyConfig::infinite_threshold();
  const auto [a, b] = gen::make_comparison_pair(skeleton, zero, inf);
  const auto ta = build_expression_tree(a);
  const auto r = diff(ta, build_expression_tree(b), TimeMetric::Inclusive);
  const auto svg = render_svg(build_scene(ViewTree(ta), TimeMetric::Inclusive, &r));
  for (auto id : ta.preorder()) {
    if (id == ta.root()) continue;
    EXPECT_NE(node_element(svg, id).find("stroke=\"#ff00ff\""), std::string::npos) << to_string(id);
  }
}

TEST(Svg, UnmatchedNodesAreDimmed) {
  const auto a = build_expression_tree(ex1());
  const auto r = diff(a, build_expression_tree(renamed(ex1(), 2, "subtract")), TimeMetric::Inclusive);
  const auto scene = build_scene(ViewTree(a), TimeMetric::Inclusive, &r);
  const auto svg = render_svg(scene);
  EXPECT_EQ(count(svg, "opacity=\"0.30\""), 4u);
  EXPECT_EQ(node_element(svg, node_id(0)).find("opacity"), std::string::npos);
  for (const auto& n : scene.nodes) EXPECT_EQ(n.unmatched, !n.delta.has_value());
}

TEST(Svg, ComparisonDeltaEncoding) {
  auto b = ex1();
  node_of(b, 2).inclusive_time = Nanos{9'000};
  node_of(b, 1).inclusive_time = Nanos{0};
  node_of(b, 2).mode = ExecutionMode::Async;
  const auto ta = build_expression_tree(ex1());
  const auto r = diff(ta, build_expression_tree(b), TimeMetric::Inclusive);
  const auto scene = build_scene(ViewTree(ta), TimeMetric::Inclusive, &r);
  // deltas: n1 -1µs, n2 +2µs; scale by 2µs
  EXPECT_DOUBLE_EQ(scene.nodes[1].encoded, -0.5);
  EXPECT_DOUBLE_EQ(scene.nodes[2].encoded, 1.0);
  EXPECT_TRUE(scene.nodes[2].mode_changed);
  EXPECT_EQ(scene.nodes[2].fill, "#b2182b");
  const auto svg = render_svg(scene);
  EXPECT_EQ(count(svg, "stroke=\"#ff00ff\""), 1u);
  // line style keeps run A's mode
  EXPECT_EQ(node_element(svg, node_id(2)).find("stroke-dasharray"), std::string::npos);
}

TEST(Svg, ShapeCountMatchesVisibleCount) {
  const auto tree = build_expression_tree(gen::simulate(gen::generate_program(9, 6, 3), {}));
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    std::set<NodeId> collapsed;
    for (auto id : tree.preorder())
      if (rng() % 6 == 0) collapsed.insert(id);
    const ViewTree view(tree, collapsed);
    const auto svg = render_svg(build_scene(view, i % 2 ? TimeMetric::Inclusive : TimeMetric::Exclusive));
    EXPECT_EQ(count(svg, "class=\"node "), view.visible_count());
    EXPECT_EQ(count(svg, "class=\"node triangle\""), view.triangles().size());
    EXPECT_EQ(count(svg, "class=\"edge\""), view.visible_count() - 1);
  }
}
