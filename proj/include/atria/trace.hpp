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
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace atria {

// ----------------------------------------------------------------------------
// Core vocabulary
// ----------------------------------------------------------------------------

using Nanos = std::chrono::nanoseconds;

/// Identifier of an aggregated primitive, unique within one Run.
enum class NodeId : std::uint64_t {};

constexpr NodeId node_id(std::uint64_t raw) noexcept { return static_cast<NodeId>(raw); }
constexpr std::uint64_t raw(NodeId id) noexcept { return static_cast<std::uint64_t>(id); }

inline std::string to_string(NodeId id) { return "n" + std::to_string(raw(id)); }

enum class ExecutionMode { Sync, Async, Undecided };

inline constexpr std::string_view to_string(ExecutionMode mode) noexcept {
  switch (mode) {
    case ExecutionMode::Sync: return "sync";
    case ExecutionMode::Async: return "async";
    case ExecutionMode::Undecided: return "undecided";
  }
  return "undecided";
}

inline std::optional<ExecutionMode> parse_mode(std::string_view text) noexcept {
  if (text == "sync") return ExecutionMode::Sync;
  if (text == "async") return ExecutionMode::Async;
  if (text == "undecided") return ExecutionMode::Undecided;
  return std::nullopt;
}

/// Operand edges form the expression tree. The other two kinds are the
/// dependencies that the tree view elides and shows on demand.
enum class EdgeKind { Operand, VariableAccess, FunctionReuse };

inline constexpr std::string_view to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::Operand: return "operand";
    case EdgeKind::VariableAccess: return "variable";
    case EdgeKind::FunctionReuse: return "function-reuse";
  }
  return "operand";
}

inline std::optional<EdgeKind> parse_edge_kind(std::string_view text) noexcept {
  if (text == "operand") return EdgeKind::Operand;
  if (text == "variable") return EdgeKind::VariableAccess;
  if (text == "function-reuse") return EdgeKind::FunctionReuse;
  return std::nullopt;
}

struct ProvenanceStep {
  std::string name;
  std::int64_t arg_index = 0;

  auto operator<=>(const ProvenanceStep&) const = default;
};

/// Name path from the root down to a node; the aggregation key of a trace.
using Provenance = std::vector<ProvenanceStep>;

inline std::string to_string(const Provenance& path) {
  std::string out;
  for (const auto& step : path) {
    if (!out.empty()) out += '/';
    out += step.name;
    out += '#';
    out += std::to_string(step.arg_index);
  }
  return out;
}

struct PrimitiveNode {
  NodeId id{};
  std::string name;
  Provenance provenance;
  std::int64_t line = 1;
  std::int64_t column = 1;
  std::int64_t count = 1;
  Nanos inclusive_time{0};
  ExecutionMode mode = ExecutionMode::Sync;
  bool library = false;

  bool operator==(const PrimitiveNode&) const = default;
};

struct DependencyEdge {
  NodeId source{};
  NodeId target{};
  EdgeKind kind = EdgeKind::Operand;
  std::optional<std::int64_t> arg_index;

  bool operator==(const DependencyEdge&) const = default;
};

struct SourceText {
  std::string language;
  std::string text;

  /// A trailing newline does not open a new line.
  std::int64_t line_count() const noexcept {
    if (text.empty()) return 0;
    auto lines = static_cast<std::int64_t>(std::count(text.begin(), text.end(), '\n'));
    return text.back() == '\n' ? lines : lines + 1;
  }

  bool operator==(const SourceText&) const = default;
};

struct Run {
  std::string run_id;
  std::string application;
  std::string timestamp;
  std::map<std::string, std::string> policy;
  std::optional<SourceText> source;
  std::vector<PrimitiveNode> nodes;
  std::vector<DependencyEdge> edges;

  bool operator==(const Run&) const = default;
};

inline const PrimitiveNode* find_node(const Run& run, NodeId id) noexcept {
  auto it = std::find_if(run.nodes.begin(), run.nodes.end(),
                         [id](const PrimitiveNode& n) { return n.id == id; });
  return it == run.nodes.end() ? nullptr : &*it;
}

/// Ids of all nodes recorded with the given execution mode, ascending.
inline std::vector<NodeId> nodes_with_mode(const Run& run, ExecutionMode mode) {
  std::vector<NodeId> out;
  for (const auto& n : run.nodes)
    if (n.mode == mode) out.push_back(n.id);
  std::sort(out.begin(), out.end());
  return out;
}

/// Sorts nodes by id and edges by (kind, source, target).
inline void canonicalize(Run& run) {
  std::sort(run.nodes.begin(), run.nodes.end(),
            [](const PrimitiveNode& a, const PrimitiveNode& b) { return a.id < b.id; });
  std::sort(run.edges.begin(), run.edges.end(), [](const DependencyEdge& a, const DependencyEdge& b) {
    return std::tie(a.kind, a.source, a.target, a.arg_index) <
           std::tie(b.kind, b.source, b.target, b.arg_index);
  });
}

// ----------------------------------------------------------------------------
// Validation
// ----------------------------------------------------------------------------

enum class ViolationCode {
  NoRoot,
  MultipleRoots,
  MultipleOperandParents,
  Cycle,
  SelfLoop,
  DanglingEdge,
  DuplicateNodeId,
  DuplicateProvenance,
  DuplicateArgIndex,
  MissingArgIndex,
  UnexpectedArgIndex,
  EmptyProvenance,
  InvalidCount,
  NegativeTime,
  InvalidPosition,
  LineOutOfRange,
};

inline constexpr std::string_view to_string(ViolationCode code) noexcept {
  switch (code) {
    case ViolationCode::NoRoot: return "NoRoot";
    case ViolationCode::MultipleRoots: return "MultipleRoots";
    case ViolationCode::MultipleOperandParents: return "MultipleOperandParents";
    case ViolationCode::Cycle: return "Cycle";
    case ViolationCode::SelfLoop: return "SelfLoop";
    case ViolationCode::DanglingEdge: return "DanglingEdge";
    case ViolationCode::DuplicateNodeId: return "DuplicateNodeId";
    case ViolationCode::DuplicateProvenance: return "DuplicateProvenance";
    case ViolationCode::DuplicateArgIndex: return "DuplicateArgIndex";
    case ViolationCode::MissingArgIndex: return "MissingArgIndex";
    case ViolationCode::UnexpectedArgIndex: return "UnexpectedArgIndex";
    case ViolationCode::EmptyProvenance: return "EmptyProvenance";
    case ViolationCode::InvalidCount: return "InvalidCount";
    case ViolationCode::NegativeTime: return "NegativeTime";
    case ViolationCode::InvalidPosition: return "InvalidPosition";
    case ViolationCode::LineOutOfRange: return "LineOutOfRange";
  }
  return "Unknown";
}

struct Violation {
  ViolationCode code;
  std::vector<NodeId> ids;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// "LineOutOfRange: line 99 of n5 exceeds 3 source lines"
inline std::string to_string(const Violation& v) {
  return std::string(to_string(v.code)) + ": " + v.message;
}

/// Checks every Run invariant. Returns an empty list iff the run is valid.
/// Self loops and dangling edges are reported once and then left out of the
/// structural (root, parent, cycle) checks.
inline std::vector<Violation> validate(const Run& run) {
  std::vector<Violation> out;
  auto add = [&out](ViolationCode code, std::vector<NodeId> ids, std::string message) {
    out.push_back({code, std::move(ids), std::move(message)});
  };

  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < run.nodes.size(); ++i) {
    const auto& n = run.nodes[i];
    if (!index.emplace(n.id, i).second)
      add(ViolationCode::DuplicateNodeId, {n.id}, "node id " + to_string(n.id) + " appears more than once");
  }

  const auto line_count = run.source ? std::optional(run.source->line_count()) : std::nullopt;
  std::map<Provenance, NodeId> by_path;
  for (const auto& n : run.nodes) {
    if (n.count < 1)
      add(ViolationCode::InvalidCount, {n.id}, "count of " + to_string(n.id) + " is " + std::to_string(n.count));
    if (n.inclusive_time.count() < 0)
      add(ViolationCode::NegativeTime, {n.id}, "inclusive time of " + to_string(n.id) + " is negative");
    if (n.line < 1 || n.column < 1)
      add(ViolationCode::InvalidPosition, {n.id}, "position of " + to_string(n.id) + " is not 1-based");
    else if (line_count && n.line > *line_count)
      add(ViolationCode::LineOutOfRange, {n.id},
          "line " + std::to_string(n.line) + " of " + to_string(n.id) + " exceeds " +
              std::to_string(*line_count) + " source lines");
    if (n.provenance.empty()) {
      add(ViolationCode::EmptyProvenance, {n.id}, "node " + to_string(n.id) + " has no provenance");
      continue;
    }
    auto [it, inserted] = by_path.emplace(n.provenance, n.id);
    if (!inserted)
      add(ViolationCode::DuplicateProvenance, {it->second, n.id},
          "nodes " + to_string(it->second) + " and " + to_string(n.id) + " share provenance " +
              to_string(n.provenance));
  }

  std::vector<const DependencyEdge*> structural;
  for (const auto& e : run.edges) {
    bool dangling = !index.count(e.source) || !index.count(e.target);
    if (dangling) {
      add(ViolationCode::DanglingEdge, {e.source, e.target},
          "edge " + to_string(e.source) + "->" + to_string(e.target) + " references an unknown node");
      continue;
    }
    if (e.source == e.target) {
      add(ViolationCode::SelfLoop, {e.source}, "self loop on " + to_string(e.source));
      continue;
    }
    if (e.kind == EdgeKind::Operand && (!e.arg_index || *e.arg_index < 0))
      add(ViolationCode::MissingArgIndex, {e.source, e.target},
          "operand edge " + to_string(e.source) + "->" + to_string(e.target) + " lacks a valid arg_index");
    if (e.kind != EdgeKind::Operand && e.arg_index)
      add(ViolationCode::UnexpectedArgIndex, {e.source, e.target},
          std::string(to_string(e.kind)) + " edge " + to_string(e.source) + "->" + to_string(e.target) +
              " carries an arg_index");
    structural.push_back(&e);
  }

  std::map<NodeId, std::vector<NodeId>> operand_parents;
  std::map<NodeId, std::map<std::int64_t, std::vector<NodeId>>> slots;
  for (const auto* e : structural) {
    if (e->kind != EdgeKind::Operand) continue;
    operand_parents[e->target].push_back(e->source);
    if (e->arg_index) slots[e->source][*e->arg_index].push_back(e->target);
  }
  for (auto& [target, parents] : operand_parents) {
    if (parents.size() < 2) continue;
    std::vector<NodeId> ids{target};
    ids.insert(ids.end(), parents.begin(), parents.end());
    add(ViolationCode::MultipleOperandParents, std::move(ids),
        "node " + to_string(target) + " has " + std::to_string(parents.size()) + " operand parents");
  }

  std::vector<NodeId> roots;
  for (const auto& [id, _] : index)
    if (!operand_parents.count(id)) roots.push_back(id);
  if (roots.empty()) {
    add(ViolationCode::NoRoot, {}, "no root");
  } else if (roots.size() > 1) {
    std::string names;
    for (auto id : roots) names += (names.empty() ? "" : ", ") + to_string(id);
    add(ViolationCode::MultipleRoots, roots, std::to_string(roots.size()) + " roots: " + names);
  }

  for (const auto& [parent, by_arg] : slots)
    for (const auto& [arg, children] : by_arg) {
      if (children.size() < 2) continue;
      std::vector<NodeId> ids{parent};
      ids.insert(ids.end(), children.begin(), children.end());
      add(ViolationCode::DuplicateArgIndex, std::move(ids),
          "node " + to_string(parent) + " has " + std::to_string(children.size()) + " operands at arg_index " +
              std::to_string(arg));
    }

  // Kahn's algorithm over every structurally sound edge.
  std::map<NodeId, std::size_t> indegree;
  std::map<NodeId, std::vector<NodeId>> successors;
  for (const auto& [id, _] : index) indegree[id] = 0;
  for (const auto* e : structural) {
    ++indegree[e->target];
    successors[e->source].push_back(e->target);
  }
  std::vector<NodeId> ready;
  for (const auto& [id, d] : indegree)
    if (d == 0) ready.push_back(id);
  std::size_t visited = 0;
  while (!ready.empty()) {
    auto id = ready.back();
    ready.pop_back();
    ++visited;
    for (auto next : successors[id])
      if (--indegree[next] == 0) ready.push_back(next);
  }
  if (visited < indegree.size()) {
    std::vector<NodeId> cyclic;
    for (const auto& [id, d] : indegree)
      if (d > 0) cyclic.push_back(id);
    add(ViolationCode::Cycle, cyclic, std::to_string(cyclic.size()) + " nodes lie on or behind a dependency cycle");
  }

  return out;
}

// ----------------------------------------------------------------------------
// Trace document
// ----------------------------------------------------------------------------

inline constexpr int kTraceFormatVersion = 1;

class TraceError : public Error {
 public:
  TraceError(Errc code, const std::string& what, std::vector<Violation> violations = {})
      : Error(code, what), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct ParseResult {
  Run run;
  std::vector<std::string> warnings;
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& field, const std::string& expected) {
  throw TraceError(Errc::SchemaViolation, field + ": expected " + expected);
}

inline const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + key, "field to be present");
  return *it;
}

inline std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = member(obj, key, where);
  if (!v.is_string()) schema_error(where + key, "string");
  return v.get<std::string>();
}

inline std::int64_t get_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) schema_error(field, "integer");
  return v.get<std::int64_t>();
}

inline std::int64_t get_int(const json& obj, const char* key, const std::string& where) {
  return get_int(member(obj, key, where), where + key);
}

inline NodeId get_id(const json& obj, const char* key, const std::string& where) {
  auto value = get_int(obj, key, where);
  if (value < 0) schema_error(where + key, "non-negative integer");
  return node_id(static_cast<std::uint64_t>(value));
}

inline Provenance get_provenance(const json& obj, const std::string& where) {
  const auto& v = member(obj, "provenance", where);
  const auto field = where + "provenance";
  if (!v.is_array()) schema_error(field, "array of [name, arg_index] pairs");
  Provenance path;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& step = v[i];
    const auto at = field + "[" + std::to_string(i) + "]";
    if (!step.is_array() || step.size() != 2 || !step[0].is_string())
      schema_error(at, "[name, arg_index] pair");
    path.push_back({step[0].get<std::string>(), get_int(step[1], at + "[1]")});
  }
  return path;
}

inline PrimitiveNode parse_node(const json& obj, const std::string& where) {
  if (!obj.is_object()) schema_error(where.substr(0, where.size() - 1), "object");
  PrimitiveNode n;
  n.id = get_id(obj, "id", where);
  n.name = get_string(obj, "name", where);
  n.provenance = get_provenance(obj, where);
  n.line = get_int(obj, "line", where);
  n.column = get_int(obj, "column", where);
  n.count = get_int(obj, "count", where);
  n.inclusive_time = Nanos{get_int(obj, "inclusive_time_ns", where)};
  auto mode = parse_mode(get_string(obj, "mode", where));
  if (!mode) schema_error(where + "mode", "one of sync, async, undecided");
  n.mode = *mode;
  const auto& library = member(obj, "library", where);
  if (!library.is_boolean()) schema_error(where + "library", "boolean");
  n.library = library.get<bool>();
  return n;
}

inline DependencyEdge parse_edge(const json& obj, const std::string& where) {
  if (!obj.is_object()) schema_error(where.substr(0, where.size() - 1), "object");
  DependencyEdge e;
  e.source = get_id(obj, "source", where);
  e.target = get_id(obj, "target", where);
  auto kind = parse_edge_kind(get_string(obj, "kind", where));
  if (!kind) schema_error(where + "kind", "one of operand, variable, function-reuse");
  e.kind = *kind;
  if (auto it = obj.find("arg_index"); it != obj.end() && !it->is_null())
    e.arg_index = get_int(*it, where + "arg_index");
  return e;
}

}  // namespace detail

/// Parses a trace document and enforces every Run invariant.
/// Throws TraceError with MalformedDocument, SchemaViolation or
/// InvariantViolation; the latter carries the violation list.
inline ParseResult parse_trace(std::string_view document) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw TraceError(Errc::MalformedDocument, e.what());
  }
  if (!doc.is_object()) throw TraceError(Errc::SchemaViolation, "document: expected object");

  ParseResult result;
  static const std::set<std::string> known{"format_version", "run", "source", "nodes", "edges"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) result.warnings.push_back("ignoring unknown field '" + key + "'");

  auto version = detail::get_int(doc, "format_version", "");
  if (version != kTraceFormatVersion)
    throw TraceError(Errc::SchemaViolation,
                     "format_version: expected " + std::to_string(kTraceFormatVersion) + ", got " +
                         std::to_string(version));

  Run& run = result.run;
  const auto& meta = detail::member(doc, "run", "");
  if (!meta.is_object()) detail::schema_error("run", "object");
  run.run_id = detail::get_string(meta, "run_id", "run.");
  run.application = detail::get_string(meta, "application", "run.");
  run.timestamp = detail::get_string(meta, "timestamp", "run.");
  const auto& policy = detail::member(meta, "policy", "run.");
  if (!policy.is_object()) detail::schema_error("run.policy", "object of strings");
  for (const auto& [key, value] : policy.items()) {
    if (!value.is_string()) detail::schema_error("run.policy." + key, "string");
    run.policy.emplace(key, value.get<std::string>());
  }

  if (auto it = doc.find("source"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) detail::schema_error("source", "object");
    run.source = SourceText{detail::get_string(*it, "language", "source."),
                            detail::get_string(*it, "text", "source.")};
  }

  const auto& nodes = detail::member(doc, "nodes", "");
  if (!nodes.is_array()) detail::schema_error("nodes", "array");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    run.nodes.push_back(detail::parse_node(nodes[i], "nodes[" + std::to_string(i) + "]."));

  const auto& edges = detail::member(doc, "edges", "");
  if (!edges.is_array()) detail::schema_error("edges", "array");
  for (std::size_t i = 0; i < edges.size(); ++i)
    run.edges.push_back(detail::parse_edge(edges[i], "edges[" + std::to_string(i) + "]."));

  if (auto violations = validate(run); !violations.empty()) {
    std::string what;
    for (const auto& v : violations) what += (what.empty() ? "" : "; ") + v.message;
    throw TraceError(Errc::InvariantViolation, what, std::move(violations));
  }
  canonicalize(run);
  return result;
}

inline nlohmann::ordered_json to_json(const Provenance& path) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& step : path) out.push_back({step.name, step.arg_index});
  return out;
}

/// Canonical document: fixed key order, nodes by id, edges by
/// (kind, source, target). Equal runs produce identical bytes.
inline std::string serialize_trace(const Run& run) {
  using ojson = nlohmann::ordered_json;
  Run canonical = run;
  canonicalize(canonical);

  ojson doc;
  doc["format_version"] = kTraceFormatVersion;
  ojson meta;
  meta["run_id"] = canonical.run_id;
  meta["application"] = canonical.application;
  meta["timestamp"] = canonical.timestamp;
  meta["policy"] = ojson::object();
  for (const auto& [key, value] : canonical.policy) meta["policy"][key] = value;
  doc["run"] = std::move(meta);
  if (canonical.source) {
    ojson src;
    src["language"] = canonical.source->language;
    src["text"] = canonical.source->text;
    doc["source"] = std::move(src);
  }
  doc["nodes"] = ojson::array();
  for (const auto& n : canonical.nodes) {
    ojson node;
    node["id"] = raw(n.id);
    node["name"] = n.name;
    node["provenance"] = to_json(n.provenance);
    node["line"] = n.line;
    node["column"] = n.column;
    node["count"] = n.count;
    node["inclusive_time_ns"] = n.inclusive_time.count();
    node["mode"] = to_string(n.mode);
    node["library"] = n.library;
    doc["nodes"].push_back(std::move(node));
  }
  doc["edges"] = ojson::array();
  for (const auto& e : canonical.edges) {
    ojson edge;
    edge["source"] = raw(e.source);
    edge["target"] = raw(e.target);
    edge["kind"] = to_string(e.kind);
    edge["arg_index"] = e.arg_index ? ojson(*e.arg_index) : ojson(nullptr);
    doc["edges"].push_back(std::move(edge));
  }
  return doc.dump(2) + "\n";
}

}  // namespace atria
