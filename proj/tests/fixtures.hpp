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

// Shared fixtures for the test suites.

#pragma once

#include <atria/atria.hpp>

#include <random>
#include <string>
#include <vector>

namespace atria::testing {

using namespace std::chrono_literals;

inline std::string data_path(const std::string& name) { return std::string(ATRIA_TEST_DATA) + "/" + name; }

inline PrimitiveNode make_node(std::uint64_t id, std::string name, Provenance path, std::int64_t line,
                               std::int64_t column, Nanos time, ExecutionMode mode, bool library) {
  PrimitiveNode n;
  n.id = node_id(id);
  n.name = std::move(name);
  n.provenance = std::move(path);
  n.line = line;
  n.column = column;
  n.count = 1;
  n.inclusive_time = time;
  n.mode = mode;
  n.library = library;
  return n;
}

inline DependencyEdge operand(std::uint64_t source, std::uint64_t target, std::int64_t arg) {
  return {node_id(source), node_id(target), EdgeKind::Operand, arg};
}

inline DependencyEdge elided(std::uint64_t source, std::uint64_t target, EdgeKind kind) {
  return {node_id(source), node_id(target), kind, std::nullopt};
}

/// transx * (pred - y - x) with a variadic sub:
///
///   // weighted residual
///   mul(transx,
///       sub(pred, y, x))
inline Run ex1() {
  using M = ExecutionMode;
  Run run;
  run.run_id = "ex1";
  run.application = "residual";
  run.timestamp = "2019-03-01T12:00:00Z";
  run.policy = {{"threshold_ns", "5000"}};
  run.source = SourceText{"physl", "// weighted residual\nmul(transx,\n    sub(pred, y, x))\n"};
  const Provenance root{{"mul", 0}};
  Provenance sub = root;
  sub.push_back({"sub", 1});
  auto under = [](Provenance base, std::string name, std::int64_t arg) {
    base.push_back({std::move(name), arg});
    return base;
  };
  run.nodes = {
      make_node(0, "mul", root, 2, 1, 10us, M::Async, true),
      make_node(1, "transx", under(root, "transx", 0), 2, 5, 1us, M::Sync, false),
      make_node(2, "sub", sub, 3, 5, 7us, M::Sync, true),
      make_node(3, "pred", under(sub, "pred", 0), 3, 9, 2us, M::Sync, false),
      make_node(4, "y", under(sub, "y", 1), 3, 15, 2us, M::Sync, false),
      make_node(5, "x", under(sub, "x", 2), 3, 18, 1us, M::Sync, false),
  };
  run.edges = {operand(0, 1, 0), operand(0, 2, 1), operand(2, 3, 0), operand(2, 4, 1), operand(2, 5, 2)};
  return run;
}

inline PrimitiveNode& node_of(Run& run, std::uint64_t id) {
  for (auto& n : run.nodes)
    if (n.id == node_id(id)) return n;
  throw std::out_of_range("no node");
}

/// Renames a node and rewrites the provenance of its whole subtree.
inline Run renamed(Run run, std::uint64_t id, const std::string& name) {
  auto& target = node_of(run, id);
  const auto old_path = target.provenance;
  const auto level = old_path.size() - 1;
  target.name = name;
  for (auto& n : run.nodes) {
    if (n.provenance.size() < old_path.size()) continue;
    if (!std::equal(old_path.begin(), old_path.end(), n.provenance.begin())) continue;
    n.provenance[level].name = name;
  }
  return run;
}

/// Drops a leaf and its incoming edges.
inline Run without_leaf(Run run, std::uint64_t id) {
  std::erase_if(run.nodes, [id](const PrimitiveNode& n) { return n.id == node_id(id); });
  std::erase_if(run.edges, [id](const DependencyEdge& e) { return e.target == node_id(id) || e.source == node_id(id); });
  return run;
}

/// A valid run with the given ordered shape; node i gets id i.
inline Run run_from_shape(const tidy::ChildLists& children, std::size_t root = 0, std::string prefix = "op") {
  Run run;
  run.run_id = "shape";
  run.application = "shape";
  run.timestamp = "2026-01-01T00:00:00Z";
  std::vector<Provenance> paths(children.size());
  paths[root] = {{prefix + std::to_string(root), 0}};
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (std::size_t i = 0; i < children[v].size(); ++i) {
      auto c = children[v][i];
      paths[c] = paths[v];
      paths[c].push_back({prefix + std::to_string(c), static_cast<std::int64_t>(i)});
      run.edges.push_back(operand(v, c, static_cast<std::int64_t>(i)));
      stack.push_back(c);
    }
  }
  for (std::size_t v = 0; v < children.size(); ++v)
    run.nodes.push_back(make_node(v, prefix + std::to_string(v), paths[v], 1, 1, Nanos{1000}, ExecutionMode::Sync, false));
  canonicalize(run);
  return run;
}

/// Random ordered tree with `n` nodes: each new node picks a random parent.
inline tidy::ChildLists random_shape(std::size_t n, std::mt19937_64& rng) {
  tidy::ChildLists children(n);
  for (std::size_t v = 1; v < n; ++v) children[rng() % v].push_back(v);
  return children;
}

struct Shape {
  std::vector<Shape> kids;
};

inline std::vector<std::vector<Shape>> all_forests(std::size_t k);

/// Every ordered tree with exactly `n` nodes (Catalan(n - 1) of them).
inline std::vector<Shape> all_trees(std::size_t n) {
  std::vector<Shape> out;
  if (n == 0) return out;
  for (auto& f : all_forests(n - 1)) out.push_back(Shape{std::move(f)});
  return out;
}

inline std::vector<std::vector<Shape>> all_forests(std::size_t k) {
  if (k == 0) return {{}};
  std::vector<std::vector<Shape>> out;
  for (std::size_t first = 1; first <= k; ++first)
    for (const auto& head : all_trees(first))
      for (const auto& rest : all_forests(k - first)) {
        std::vector<Shape> f{head};
        f.insert(f.end(), rest.begin(), rest.end());
        out.push_back(std::move(f));
      }
  return out;
}

/// Child lists in preorder numbering; node 0 is the root.
inline tidy::ChildLists to_child_lists(const Shape& shape) {
  tidy::ChildLists out;
  auto visit = [&out](const Shape& s, auto&& self) -> std::size_t {
    const auto id = out.size();
    out.emplace_back();
    for (const auto& k : s.kids) {
      auto c = self(k, self);
      out[id].push_back(c);
    }
    return id;
  };
  visit(shape, visit);
  return out;
}

inline std::vector<tidy::ChildLists> all_shapes(std::size_t n) {
  std::vector<tidy::ChildLists> out;
  for (const auto& t : all_trees(n)) out.push_back(to_child_lists(t));
  return out;
}

}  // namespace atria::testing
