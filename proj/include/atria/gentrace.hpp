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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trace.hpp"

namespace atria::gen {

// Synthetic programs and a toy scheduler. The cost model is additive with a
// fractional overlap for asynchronous children; it exists to produce
// self-consistent fixtures, not to predict a real runtime.

struct SkeletonNode {
  std::string name;
  Nanos base_cost{0};
  bool library = false;
  std::int64_t line = 1;
  std::int64_t column = 1;
  std::int64_t count = 1;
  std::vector<std::size_t> children;   // by argument position
  std::optional<std::size_t> reuse_of;  // original node of a replicated code site

  bool operator==(const SkeletonNode&) const = default;
};

/// Expression program in preorder; index 0 is the root.
struct ProgramSkeleton {
  std::uint64_t seed = 0;
  std::vector<SkeletonNode> nodes;
  std::string source;

  bool operator==(const ProgramSkeleton&) const = default;
};

struct GeneratorOptions {
  std::size_t max_nodes = std::numeric_limits<std::size_t>::max();
  /// Chance that an operand slot re-uses an earlier subtree (same code site).
  double reuse_probability = 0.15;
};

struct PolicyConfig {
  Nanos threshold{10'000};  // subtree cost at or above which a node runs async
  Nanos async_overhead{0};
  double overlap_fraction = 0.0;  // share of async children's time hidden
  std::uint64_t seed = 0;         // drives per-node cost jitter
  double cost_scale = 1.0;        // uniform inflation of every base cost
  double jitter = 0.0;            // relative amplitude of per-node noise
  std::set<std::size_t> undecided;  // skeleton indices reported as undecided

  static constexpr Nanos infinite_threshold() noexcept { return Nanos::max(); }

  bool operator==(const PolicyConfig&) const = default;
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // mt19937_64 output is fixed by the standard; the distributions are not,
  // so draws are mapped by hand to stay reproducible across toolchains.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) { return lo + engine_() % (hi - lo + 1); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

inline const std::vector<std::string>& library_ops() {
  static const std::vector<std::string> ops{"add", "sub", "mul", "div", "dot", "exp", "sum", "transpose", "slice", "power"};
  return ops;
}

inline const std::vector<std::string>& control_ops() {
  static const std::vector<std::string> ops{"block", "for_each", "if", "define-variable"};
  return ops;
}

inline const std::vector<std::string>& variables() {
  static const std::vector<std::string> vars{"x", "y", "w", "b", "alpha", "beta", "lr", "n", "theta", "grad"};
  return vars;
}

class Generator {
 public:
  Generator(std::uint64_t seed, std::size_t depth, std::size_t branching, const GeneratorOptions& options)
      : rng_(seed), depth_(depth), branching_(branching), options_(options) {
    program_.seed = seed;
  }

  ProgramSkeleton run() {
    grow(1);
    assign_counts();
    print();
    return std::move(program_);
  }

 private:
  // Returns the index of the new subtree root; `level` is 1-based.
  std::size_t grow(std::size_t level) {
    const auto self = program_.nodes.size();
    program_.nodes.emplace_back();
    height_.push_back(1);
    size_.push_back(1);
    program_.nodes[self].base_cost = Nanos{static_cast<std::int64_t>(rng_.uniform(1'000, 50'000))};

    std::size_t arity = 0;
    // Below the last level every node has operands; the root takes at least
    // two when it may, so programs are never a bare chain from the top.
    if (level < depth_) arity = rng_.uniform(level == 1 ? std::min<std::size_t>(2, branching_) : 1, branching_);

    std::vector<std::size_t> kids;
    for (std::size_t slot = 0; slot < arity && program_.nodes.size() < options_.max_nodes; ++slot) {
      if (auto original = pick_reusable(level + 1); original && rng_.chance(options_.reuse_probability)) {
        kids.push_back(replicate(*original));
      } else {
        kids.push_back(grow(level + 1));
      }
      height_[self] = std::max(height_[self], height_[kids.back()] + 1);
    }
    program_.nodes[self].children = kids;
    size_[self] = 1;
    for (auto c : kids) size_[self] += size_[c];
    name(self, level);
    finished_.push_back(self);
    return self;
  }

  // A finished internal subtree that fits under `level` and the node cap.
  std::optional<std::size_t> pick_reusable(std::size_t level) {
    std::vector<std::size_t> candidates;
    const auto room = options_.max_nodes - program_.nodes.size();
    for (auto v : finished_) {
      const auto& n = program_.nodes[v];
      if (n.children.empty() || n.reuse_of) continue;
      if (level + height_[v] - 1 > depth_ || size_[v] > room) continue;
      candidates.push_back(v);
    }
    if (candidates.empty()) return std::nullopt;
    return candidates[rng_.uniform(0, candidates.size() - 1)];
  }

  std::size_t replicate(std::size_t original) {
    const auto self = program_.nodes.size();
    program_.nodes.push_back(program_.nodes[original]);
    height_.push_back(height_[original]);
    size_.push_back(size_[original]);
    auto& copy = program_.nodes[self];
    copy.reuse_of = program_.nodes[original].reuse_of.value_or(original);
    const auto originals = copy.children;
    program_.nodes[self].children.clear();
    for (auto c : originals) {
      auto k = replicate(c);
      program_.nodes[self].children.push_back(k);
    }
    return self;
  }

  void name(std::size_t v, std::size_t level) {
    auto& n = program_.nodes[v];
    if (n.children.empty() && level > 1) {
      n.library = false;
      return;  // leaves get variable names when printed
    }
    const bool control = rng_.chance(0.25);
    const auto& pool = control ? control_ops() : library_ops();
    n.name = pool[rng_.uniform(0, pool.size() - 1)];
    n.library = !control;
    if (n.name == "for_each") iterations_[v] = static_cast<std::int64_t>(rng_.uniform(2, 5));
  }

  void assign_counts() {
    auto& nodes = program_.nodes;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      const auto it = iterations_.find(nodes[v].reuse_of.value_or(v));
      const auto multiplier = it == iterations_.end() ? 1 : it->second;
      for (auto c : nodes[v].children) nodes[c].count = nodes[v].count * multiplier;
    }
  }

  void print() {
    std::vector<std::string> lines;
    emit(0, 0, lines, "");
    for (auto& n : program_.nodes) {
      if (!n.reuse_of) continue;
      const auto& original = program_.nodes[*n.reuse_of];
      n.name = original.name;
      n.line = original.line;
      n.column = original.column;
    }
    for (const auto& l : lines) program_.source += l + "\n";
  }

  std::string leaf_name(std::size_t v, std::set<std::string>& taken) {
    auto& n = program_.nodes[v];
    if (n.name.empty()) {
      const auto& vars = variables();
      for (std::size_t attempt = 0; attempt < vars.size(); ++attempt) {
        const auto& candidate = vars[rng_.uniform(0, vars.size() - 1)];
        if (!taken.count(candidate)) {
          n.name = candidate;
          break;
        }
      }
      for (std::size_t k = 0; n.name.empty(); ++k)
        if (auto candidate = "v" + std::to_string(k); !taken.count(candidate)) n.name = candidate;
    }
    taken.insert(n.name);
    return n.name;
  }

  // Internal nodes whose operands are all leaves print on one line; other
  // internal nodes open a line and indent their operands below.
  void emit(std::size_t v, std::size_t indent, std::vector<std::string>& lines, const std::string& suffix) {
    auto& n = program_.nodes[v];
    const std::string pad(indent, ' ');
    if (n.reuse_of) {
      lines.push_back(pad + program_.nodes[*n.reuse_of].name + "(...)" + suffix);
      return;
    }
    n.line = static_cast<std::int64_t>(lines.size()) + 1;
    n.column = static_cast<std::int64_t>(indent) + 1;
    if (n.children.empty()) {
      std::set<std::string> taken;
      lines.push_back(pad + leaf_name(v, taken) + suffix);
      return;
    }
    bool flat = true;
    for (auto c : n.children) flat = flat && program_.nodes[c].children.empty();
    if (flat) {
      std::string text = pad + n.name + "(";
      std::set<std::string> taken;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        auto& child = program_.nodes[n.children[i]];
        if (i) text += ", ";
        const auto child_name = leaf_name(n.children[i], taken);
        child.line = n.line;
        child.column = static_cast<std::int64_t>(text.size()) + 1;
        text += child_name;
      }
      lines.push_back(text + ")" + suffix);
      return;
    }
    lines.push_back(pad + n.name + "(");
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const bool last = i + 1 == n.children.size();
      emit(n.children[i], indent + 4, lines, last ? ")" + suffix : ",");
    }
  }

  Rng rng_;
  std::size_t depth_;
  std::size_t branching_;
  GeneratorOptions options_;
  ProgramSkeleton program_;
  std::vector<std::size_t> height_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> finished_;
  std::map<std::size_t, std::int64_t> iterations_;
};

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_threshold(Nanos t) {
  return t == PolicyConfig::infinite_threshold() ? "inf" : std::to_string(t.count());
}

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

/// Random expression program of at most `depth` levels and `branching`
/// operands per node. Deterministic in (seed, depth, branching, options).
inline ProgramSkeleton generate_program(std::uint64_t seed, std::size_t depth, std::size_t branching,
                                        const GeneratorOptions& options = {}) {
  if (depth < 1 || branching < 1) throw Error(Errc::BadParams, "depth and branching must be at least 1");
  if (options.max_nodes < 1) throw Error(Errc::BadParams, "max_nodes must be at least 1");
  if (!(options.reuse_probability >= 0.0 && options.reuse_probability <= 1.0))
    throw Error(Errc::BadParams, "reuse_probability must lie in [0, 1]");
  return detail::Generator(seed, depth, branching, options).run();
}

inline void check_policy(const PolicyConfig& p) {
  if (p.threshold < Nanos{0}) throw Error(Errc::BadParams, "threshold must be non-negative");
  if (p.async_overhead < Nanos{0}) throw Error(Errc::BadParams, "async overhead must be non-negative");
  if (!(p.overlap_fraction >= 0.0 && p.overlap_fraction <= 1.0))
    throw Error(Errc::BadParams, "overlap fraction must lie in [0, 1]");
  if (!(p.cost_scale > 0.0)) throw Error(Errc::BadParams, "cost scale must be positive");
  if (!(p.jitter >= 0.0 && p.jitter < 1.0)) throw Error(Errc::BadParams, "jitter must lie in [0, 1)");
}

/// Policy as recorded in a trace's run.policy map.
inline std::map<std::string, std::string> describe(const PolicyConfig& p) {
  std::map<std::string, std::string> out{
      {"async_overhead_ns", std::to_string(p.async_overhead.count())},
      {"cost_scale", detail::format_double(p.cost_scale)},
      {"jitter", detail::format_double(p.jitter)},
      {"overlap_fraction", detail::format_double(p.overlap_fraction)},
      {"seed", std::to_string(p.seed)},
      {"threshold_ns", detail::format_threshold(p.threshold)},
  };
  if (!p.undecided.empty()) {
    std::string ids;
    for (auto i : p.undecided) ids += (ids.empty() ? "" : ",") + std::to_string(i);
    out.emplace("undecided", ids);
  }
  return out;
}

/// Per-node costs after inflation and jitter, in skeleton order.
inline std::vector<Nanos> effective_costs(const ProgramSkeleton& skeleton, const PolicyConfig& policy) {
  detail::Rng rng(policy.seed);
  std::vector<Nanos> costs;
  costs.reserve(skeleton.nodes.size());
  for (const auto& n : skeleton.nodes) {
    double factor = policy.cost_scale;
    if (policy.jitter > 0.0) factor *= 1.0 + policy.jitter * (2.0 * rng.unit() - 1.0);
    auto scaled = std::llround(static_cast<double>(n.base_cost.count()) * factor);
    costs.push_back(Nanos{std::max<long long>(scaled, 1)});
  }
  return costs;
}

/// Subtree sums of `costs`; a node's entry includes itself.
inline std::vector<Nanos> subtree_costs(const ProgramSkeleton& skeleton, const std::vector<Nanos>& costs) {
  std::vector<Nanos> sums(costs);
  for (std::size_t v = skeleton.nodes.size(); v-- > 0;)
    for (auto c : skeleton.nodes[v].children) sums[v] += sums[c];
  return sums;
}

/// Times the program bottom-up under a threshold policy:
///   sync:  inclusive = cost + sum(child inclusive)
///   async: inclusive = cost + overhead + (1 - overlap) * sum(child inclusive)
/// A node runs async iff its subtree cost reaches the threshold.
inline Run simulate(const ProgramSkeleton& skeleton, const PolicyConfig& policy) {
  check_policy(policy);
  const auto& nodes = skeleton.nodes;
  const auto costs = effective_costs(skeleton, policy);
  const auto sums = subtree_costs(skeleton, costs);

  std::vector<ExecutionMode> modes(nodes.size());
  std::vector<Nanos> inclusive(nodes.size());
  for (std::size_t v = nodes.size(); v-- > 0;) {
    const bool async = sums[v] >= policy.threshold;
    Nanos children{0};
    for (auto c : nodes[v].children) children += inclusive[c];
    if (async) {
      auto hidden = std::llround(static_cast<double>(children.count()) * (1.0 - policy.overlap_fraction));
      inclusive[v] = costs[v] + policy.async_overhead + Nanos{hidden};
    } else {
      inclusive[v] = costs[v] + children;
    }
    modes[v] = policy.undecided.count(v) ? ExecutionMode::Undecided
                                         : (async ? ExecutionMode::Async : ExecutionMode::Sync);
  }

  Run run;
  run.application = "synthetic-" + std::to_string(skeleton.seed);
  run.timestamp = "2026-01-01T00:00:00Z";
  run.policy = describe(policy);
  std::string fingerprint;
  for (const auto& [k, v] : run.policy) fingerprint += k + "=" + v + ";";
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(detail::fnv1a(fingerprint)));
  run.run_id = "sim-" + std::to_string(skeleton.seed) + "-" + std::string(hex, 8);
  run.source = SourceText{"physl", skeleton.source};

  std::vector<Provenance> paths(nodes.size());
  if (!nodes.empty()) paths[0] = {{nodes[0].name, 0}};
  for (std::size_t v = 0; v < nodes.size(); ++v)
    for (std::size_t i = 0; i < nodes[v].children.size(); ++i) {
      auto c = nodes[v].children[i];
      paths[c] = paths[v];
      paths[c].push_back({nodes[c].name, static_cast<std::int64_t>(i)});
    }

  std::map<std::string, std::size_t> last_access;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const auto& s = nodes[v];
    PrimitiveNode n;
    n.id = node_id(v);
    n.name = s.name;
    n.provenance = paths[v];
    n.line = s.line;
    n.column = s.column;
    n.count = s.count;
    n.inclusive_time = inclusive[v];
    n.mode = modes[v];
    n.library = s.library;
    run.nodes.push_back(std::move(n));

    for (std::size_t i = 0; i < s.children.size(); ++i)
      run.edges.push_back({node_id(v), node_id(s.children[i]), EdgeKind::Operand, static_cast<std::int64_t>(i)});
    if (s.children.empty() && v != 0) {
      if (auto it = last_access.find(s.name); it != last_access.end())
        run.edges.push_back({node_id(it->second), node_id(v), EdgeKind::VariableAccess, std::nullopt});
      last_access[s.name] = v;
    }
  }

  // One function-reuse edge per replicated subtree, from the original's root.
  std::vector<bool> inside_copy(nodes.size(), false);
  for (std::size_t v = 0; v < nodes.size(); ++v)
    for (auto c : nodes[v].children) inside_copy[c] = inside_copy[c] || (nodes[v].reuse_of.has_value());
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (nodes[v].reuse_of && !inside_copy[v])
      run.edges.push_back({node_id(*nodes[v].reuse_of), node_id(v), EdgeKind::FunctionReuse, std::nullopt});

  canonicalize(run);
  return run;
}

/// Two runs of one program under two policies; provenance sets coincide, so
/// every node matches.
inline std::pair<Run, Run> make_comparison_pair(const ProgramSkeleton& skeleton, const PolicyConfig& a,
                                                const PolicyConfig& b) {
  return {simulate(skeleton, a), simulate(skeleton, b)};
}

}  // namespace atria::gen
