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

#include <cstdlib>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "trace.hpp"

namespace atria {

// ----------------------------------------------------------------------------
// class: ExpressionTree
// ----------------------------------------------------------------------------

/**
Spanning tree of the operand edges of a Run. Each node's children are its
operands ordered by arg_index; every other dependency edge is kept aside in
the elided list and is only shown on demand.

ExpressionTree is a cheap handle onto shared immutable state; copies refer to
the same tree and may be handed between threads freely.
*/
class ExpressionTree {
 public:
  explicit ExpressionTree(Run run) : ExpressionTree(std::make_shared<const Run>(std::move(run))) {}

  explicit ExpressionTree(std::shared_ptr<const Run> run) {
    auto d = std::make_shared<Data>();
    d->run = std::move(run);
    const auto& nodes = d->run->nodes;
    const auto n = nodes.size();
    d->index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) d->index.emplace(nodes[i].id, i);
    d->children.resize(n);
    d->parent.assign(n, kNone);
    d->depth.assign(n, 0);

    std::vector<std::vector<std::pair<std::int64_t, NodeId>>> slots(n);
    for (const auto& e : d->run->edges) {
      if (e.kind != EdgeKind::Operand) {
        d->elided.push_back(e);
        continue;
      }
      auto parent = d->index.at(e.source);
      auto child = d->index.at(e.target);
      slots[parent].emplace_back(e.arg_index.value_or(0), e.target);
      d->parent[child] = parent;
      ++d->tree_edges;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(slots[i].begin(), slots[i].end());
      for (const auto& [_, id] : slots[i]) d->children[i].push_back(id);
    }

    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (d->parent[i] == kNone) {
        d->root = nodes[i].id;
        ++roots;
      }
    if (roots != 1)
      throw Error(Errc::InvariantViolation, "expression tree needs exactly one root, found " + std::to_string(roots));

    std::vector<NodeId> stack{d->root};
    while (!stack.empty()) {
      auto id = stack.back();
      stack.pop_back();
      d->preorder.push_back(id);
      const auto i = d->index.at(id);
      const auto& kids = d->children[i];
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        d->depth[d->index.at(*it)] = d->depth[i] + 1;
        stack.push_back(*it);
      }
    }
    if (d->preorder.size() != n)
      throw Error(Errc::InvariantViolation, "operand edges do not reach every node from the root");
    d_ = std::move(d);
  }

  const Run& run() const noexcept { return *d_->run; }
  std::shared_ptr<const Run> shared_run() const noexcept { return d_->run; }

  NodeId root() const noexcept { return d_->root; }
  std::size_t size() const noexcept { return d_->run->nodes.size(); }
  bool contains(NodeId id) const noexcept { return d_->index.count(id) != 0; }

  const PrimitiveNode& node(NodeId id) const { return d_->run->nodes[index_of(id)]; }

  std::span<const NodeId> children(NodeId id) const { return d_->children[index_of(id)]; }

  std::optional<NodeId> parent(NodeId id) const {
    auto p = d_->parent[index_of(id)];
    if (p == kNone) return std::nullopt;
    return d_->run->nodes[p].id;
  }

  std::size_t depth(NodeId id) const { return d_->depth[index_of(id)]; }

  /// Nodes in depth-first order, children visited by ascending arg_index.
  const std::vector<NodeId>& preorder() const noexcept { return d_->preorder; }

  const std::vector<DependencyEdge>& elided() const noexcept { return d_->elided; }
  std::size_t tree_edge_count() const noexcept { return d_->tree_edges; }

  /// True when `ancestor` lies strictly above `id`.
  bool is_proper_ancestor(NodeId ancestor, NodeId id) const {
    for (auto p = parent(id); p; p = parent(*p))
      if (*p == ancestor) return true;
    return false;
  }

  /// Dense position of a node in run().nodes; throws UnknownNode.
  std::size_t index_of(NodeId id) const {
    auto it = d_->index.find(id);
    if (it == d_->index.end()) throw Error(Errc::UnknownNode, "no node " + to_string(id));
    return it->second;
  }

  bool operator==(const ExpressionTree& other) const noexcept { return d_ == other.d_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Data {
    std::shared_ptr<const Run> run;
    std::unordered_map<NodeId, std::size_t> index;
    std::vector<std::vector<NodeId>> children;
    std::vector<std::size_t> parent;
    std::vector<std::size_t> depth;
    std::vector<NodeId> preorder;
    std::vector<DependencyEdge> elided;
    std::size_t tree_edges = 0;
    NodeId root{};
  };

  std::shared_ptr<const Data> d_;
};

inline ExpressionTree build_expression_tree(Run run) { return ExpressionTree(std::move(run)); }

inline ExpressionTree build_expression_tree(std::shared_ptr<const Run> run) {
  return ExpressionTree(std::move(run));
}

/// Elided edges touching `node`. Edges joining two library primitives are
/// dropped unless `include_library` is set.
inline std::vector<DependencyEdge> elided_edges_for(const ExpressionTree& tree, NodeId node, bool include_library) {
  if (!tree.contains(node)) throw Error(Errc::UnknownNode, "no node " + to_string(node));
  std::vector<DependencyEdge> out;
  for (const auto& e : tree.elided()) {
    if (e.source != node && e.target != node) continue;
    if (!include_library && tree.node(e.source).library && tree.node(e.target).library) continue;
    out.push_back(e);
  }
  return out;
}

struct SubtreeSummary {
  std::size_t descendants = 0;
  Nanos inclusive_time{0};
  std::int64_t executions = 0;

  bool operator==(const SubtreeSummary&) const = default;
};

/// `executions` sums the counts of the node and all of its descendants.
inline SubtreeSummary subtree_summary(const ExpressionTree& tree, NodeId node) {
  SubtreeSummary s;
  s.inclusive_time = tree.node(node).inclusive_time;
  std::vector<NodeId> stack{node};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    s.executions += tree.node(id).count;
    for (auto child : tree.children(id)) {
      ++s.descendants;
      stack.push_back(child);
    }
  }
  return s;
}

// ----------------------------------------------------------------------------
// class: ViewTree
// ----------------------------------------------------------------------------

/// An expression tree plus the set of collapsed subtrees. A collapsed node
/// that is itself visible is drawn as a triangle and hides its proper
/// descendants. Collapsed nodes inside another collapsed subtree keep their
/// state, so expanding the outer one restores the inner triangles. Leaves
/// have nothing to hide and are dropped from the set.
class ViewTree {
 public:
  explicit ViewTree(ExpressionTree tree, const std::set<NodeId>& collapsed = {}) : tree_(std::move(tree)) {
    for (auto id : collapsed) {
      if (!tree_.contains(id)) throw Error(Errc::UnknownNode, "no node " + to_string(id));
      if (!tree_.children(id).empty()) collapsed_.insert(id);
    }
    visible_.assign(tree_.size(), false);
    std::vector<bool> under(tree_.size(), false);
    for (auto id : tree_.preorder()) {
      const auto i = tree_.index_of(id);
      auto parent = tree_.parent(id);
      const bool hidden = parent && (under[tree_.index_of(*parent)] || collapsed_.count(*parent));
      under[i] = hidden;
      visible_[i] = !hidden;
      if (!hidden && collapsed_.count(id)) triangles_.insert(id);
    }
  }

  const ExpressionTree& tree() const noexcept { return tree_; }
  const std::set<NodeId>& collapsed() const noexcept { return collapsed_; }
  /// Collapsed nodes that are visible, i.e. drawn as triangles.
  const std::set<NodeId>& triangles() const noexcept { return triangles_; }

  bool is_collapsed(NodeId id) const noexcept { return triangles_.count(id) != 0; }
  bool is_visible(NodeId id) const { return visible_[tree_.index_of(id)]; }

  /// Visible nodes in preorder.
  std::vector<NodeId> visible() const {
    std::vector<NodeId> out;
    for (auto id : tree_.preorder())
      if (visible_[tree_.index_of(id)]) out.push_back(id);
    return out;
  }

  std::vector<NodeId> hidden() const {
    std::vector<NodeId> out;
    for (auto id : tree_.preorder())
      if (!visible_[tree_.index_of(id)]) out.push_back(id);
    return out;
  }

  std::size_t visible_count() const noexcept {
    return static_cast<std::size_t>(std::count(visible_.begin(), visible_.end(), true));
  }

  /// Children drawn below `id`; empty for collapsed nodes.
  std::span<const NodeId> visible_children(NodeId id) const {
    if (collapsed_.count(id)) return {};
    return tree_.children(id);
  }

  bool operator==(const ViewTree& other) const noexcept {
    return tree_ == other.tree_ && collapsed_ == other.collapsed_;
  }

 private:
  ExpressionTree tree_;
  std::set<NodeId> collapsed_;
  std::set<NodeId> triangles_;
  std::vector<bool> visible_;
};

/// Collapses every non-root, non-leaf node whose primitive name is listed.
inline ViewTree collapse_default(const ExpressionTree& tree, const std::set<std::string>& uninteresting) {
  std::set<NodeId> collapsed;
  for (const auto& n : tree.run().nodes)
    if (n.id != tree.root() && uninteresting.count(n.name) && !tree.children(n.id).empty())
      collapsed.insert(n.id);
  return ViewTree(tree, collapsed);
}

/// Flips the collapse state of a visible node.
inline ViewTree toggle(const ViewTree& view, NodeId node) {
  if (!view.tree().contains(node)) throw Error(Errc::UnknownNode, "no node " + to_string(node));
  if (!view.is_visible(node)) throw Error(Errc::HiddenNode, to_string(node) + " lies inside a collapsed subtree");
  auto collapsed = view.collapsed();
  if (!collapsed.erase(node)) collapsed.insert(node);
  return ViewTree(view.tree(), collapsed);
}

// ----------------------------------------------------------------------------
// Uninteresting primitives
// ----------------------------------------------------------------------------

inline constexpr const char* kUninterestingEnv = "ATRIA_UNINTERESTING";

inline std::set<std::string> parse_name_list(std::string_view csv) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto end = csv.find(',', start);
    if (end == std::string_view::npos) end = csv.size();
    auto item = csv.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace(item);
    start = end + 1;
  }
  return out;
}

/// Collapse set used when the caller gives none: the ATRIA_UNINTERESTING
/// environment variable when set, otherwise the variable-access primitives.
inline std::set<std::string> default_uninteresting() {
  if (const char* env = std::getenv(kUninterestingEnv)) return parse_name_list(env);
  return {"access-argument", "access-variable", "define-variable"};
}

}  // namespace atria
