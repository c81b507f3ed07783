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
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace atria::tidy {

/// Ordered tree given as child lists over dense indices [0, n).
using ChildLists = std::vector<std::vector<std::size_t>>;

struct Placement {
  std::vector<double> breadth;    // sibling units; minimum is 0
  std::vector<std::size_t> depth;
};

namespace detail {

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Linear-time Reingold-Tilford for n-ary trees (Walker's algorithm with the
// Buchheim/Juenger/Leipert fixes). The first walk runs as an explicit
// post-order so deep chains do not exhaust the call stack.
class Walker {
 public:
  Walker(const ChildLists& children, std::size_t root) : kids_(children), root_(root) {
    const auto n = kids_.size();
    prelim_.assign(n, 0.0);
    mod_.assign(n, 0.0);
    shift_.assign(n, 0.0);
    change_.assign(n, 0.0);
    midpoint_.assign(n, 0.0);
    thread_.assign(n, kNone);
    parent_.assign(n, kNone);
    number_.assign(n, 0);
    ancestor_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      ancestor_[v] = v;
      for (std::size_t i = 0; i < kids_[v].size(); ++i) {
        parent_[kids_[v][i]] = v;
        number_[kids_[v][i]] = i;
      }
    }
  }

  std::vector<double> run() {
    for (auto v : postorder()) first_walk(v);
    place(root_);

    std::vector<double> pos(kids_.size(), 0.0);
    std::vector<std::pair<std::size_t, double>> stack{{root_, 0.0}};
    while (!stack.empty()) {
      auto [v, m] = stack.back();
      stack.pop_back();
      pos[v] = prelim_[v] + m;
      for (auto w : kids_[v]) stack.emplace_back(w, m + mod_[v]);
    }
    return pos;
  }

 private:
  std::vector<std::size_t> postorder() const {
    std::vector<std::size_t> order;
    std::vector<std::size_t> stack{root_};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto w : kids_[v]) stack.push_back(w);
    }
    std::reverse(order.begin(), order.end());
    return order;
  }

  bool is_leaf(std::size_t v) const { return kids_[v].empty(); }

  std::size_t left_sibling(std::size_t v) const {
    if (parent_[v] == kNone || number_[v] == 0) return kNone;
    return kids_[parent_[v]][number_[v] - 1];
  }

  std::size_t leftmost_sibling(std::size_t v) const {
    if (parent_[v] == kNone) return v;
    return kids_[parent_[v]].front();
  }

  std::size_t next_left(std::size_t v) const { return is_leaf(v) ? thread_[v] : kids_[v].front(); }
  std::size_t next_right(std::size_t v) const { return is_leaf(v) ? thread_[v] : kids_[v].back(); }

  // Position v against its left sibling once v's own subtree is finished.
  void place(std::size_t v) {
    auto w = left_sibling(v);
    if (w == kNone) {
      prelim_[v] = midpoint_[v];
      return;
    }
    prelim_[v] = prelim_[w] + 1.0;
    if (!is_leaf(v)) mod_[v] = prelim_[v] - midpoint_[v];
  }

  void first_walk(std::size_t v) {
    if (is_leaf(v)) return;
    auto default_ancestor = kids_[v].front();
    for (auto w : kids_[v]) {
      place(w);
      default_ancestor = apportion(w, default_ancestor);
    }
    execute_shifts(v);
    midpoint_[v] = (prelim_[kids_[v].front()] + prelim_[kids_[v].back()]) / 2.0;
  }

  std::size_t apportion(std::size_t v, std::size_t default_ancestor) {
    auto w = left_sibling(v);
    if (w == kNone) return default_ancestor;
    std::size_t vip = v, vop = v, vim = w, vom = leftmost_sibling(vip);
    double sip = mod_[vip], sop = mod_[vop], sim = mod_[vim], som = mod_[vom];
    while (next_right(vim) != kNone && next_left(vip) != kNone) {
      vim = next_right(vim);
      vip = next_left(vip);
      vom = next_left(vom);
      vop = next_right(vop);
      ancestor_[vop] = v;
      double shift = (prelim_[vim] + sim) - (prelim_[vip] + sip) + 1.0;
      if (shift > 0) {
        move_subtree(ancestor_of(vim, v, default_ancestor), v, shift);
        sip += shift;
        sop += shift;
      }
      sim += mod_[vim];
      sip += mod_[vip];
      som += mod_[vom];
      sop += mod_[vop];
    }
    if (next_right(vim) != kNone && next_right(vop) == kNone) {
      thread_[vop] = next_right(vim);
      mod_[vop] += sim - sop;
    }
    if (next_left(vip) != kNone && next_left(vom) == kNone) {
      thread_[vom] = next_left(vip);
      mod_[vom] += sip - som;
      default_ancestor = v;
    }
    return default_ancestor;
  }

  std::size_t ancestor_of(std::size_t vim, std::size_t v, std::size_t default_ancestor) const {
    auto a = ancestor_[vim];
    return parent_[a] == parent_[v] ? a : default_ancestor;
  }

  void move_subtree(std::size_t wl, std::size_t wr, double shift) {
    const double subtrees = static_cast<double>(number_[wr] - number_[wl]);
    change_[wr] -= shift / subtrees;
    shift_[wr] += shift;
    change_[wl] += shift / subtrees;
    prelim_[wr] += shift;
    mod_[wr] += shift;
  }

  void execute_shifts(std::size_t v) {
    double shift = 0.0, change = 0.0;
    const auto& ws = kids_[v];
    for (auto it = ws.rbegin(); it != ws.rend(); ++it) {
      prelim_[*it] += shift;
      mod_[*it] += shift;
      change += change_[*it];
      shift += shift_[*it] + change;
    }
  }

  const ChildLists& kids_;
  std::size_t root_;
  std::vector<double> prelim_, mod_, shift_, change_, midpoint_;
  std::vector<std::size_t> thread_, parent_, number_, ancestor_;
};

}  // namespace detail

/// Tidy layout of an ordered tree: parents centered over their first and
/// last child, adjacent nodes on a level at least one unit apart, subtrees
/// rigid. Walker's left-to-right packing is direction-biased when small
/// subtrees sit between large ones, so the result is the mean of the packing
/// and the mirrored packing, which makes it exactly mirror-symmetric.
inline Placement layout(const ChildLists& children, std::size_t root) {
  const auto n = children.size();
  if (root >= n) throw std::out_of_range("tidy::layout: root outside the tree");

  Placement out;
  out.depth.assign(n, 0);
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : children[v]) {
      out.depth[w] = out.depth[v] + 1;
      stack.push_back(w);
    }
  }

  ChildLists mirrored = children;
  for (auto& ws : mirrored) std::reverse(ws.begin(), ws.end());

  auto forward = detail::Walker(children, root).run();
  auto backward = detail::Walker(mirrored, root).run();

  out.breadth.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.breadth[v] = (forward[v] - backward[v]) / 2.0;

  // Only nodes reachable from root take part.
  std::vector<bool> reached(n, false);
  stack.assign(1, root);
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    reached[v] = true;
    for (auto w : children[v]) stack.push_back(w);
  }
  double low = out.breadth[root];
  for (std::size_t v = 0; v < n; ++v)
    if (reached[v]) low = std::min(low, out.breadth[v]);
  for (std::size_t v = 0; v < n; ++v) out.breadth[v] = reached[v] ? out.breadth[v] - low : 0.0;
  return out;
}

}  // namespace atria::tidy
