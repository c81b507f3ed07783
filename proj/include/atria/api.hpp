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

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "payload.hpp"
#include "store.hpp"
#include "svg.hpp"

namespace atria {

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Transport-independent request handling for the read-mostly HTTP API.
///
///   GET  /api/runs
///   POST /api/runs                              (upload a trace document)
///   GET  /api/runs/{id}/tree?metric=&collapsed=&compare=
///   GET  /api/runs/{id}/render.svg?metric=&collapsed=&compare=
///   GET  /api/runs/{id}/node/{nid}?library=0|1
///   GET  /api/runs/{id}/source
///   GET  /api/runs/{id}/hotspots?metric=&n=
///   GET  /api/compare?a=&b=&metric=
///
/// When `collapsed` is absent the default uninteresting set is collapsed;
/// an empty value means nothing is collapsed.
class Api {
 public:
  explicit Api(RunStore& store, std::set<std::string> uninteresting = default_uninteresting())
      : store_(store), uninteresting_(std::move(uninteresting)) {}

  ApiResponse handle(const ApiRequest& req) const {
    try {
      return route(req);
    } catch (const HttpError& e) {
      return error(e.status, e.what());
    } catch (const TraceError& e) {
      if (e.code() == Errc::InvariantViolation) {
        ojson body;
        body["error"] = "invalid trace";
        body["violations"] = to_json(e.violations());
        return {422, body.dump()};
      }
      return error(400, e.what());
    } catch (const Error& e) {
      switch (e.code()) {
        case Errc::UnknownNode:
        case Errc::NoSource: return error(404, e.what());
        default: return error(400, e.what());
      }
    }
  }

 private:
  struct HttpError : std::runtime_error {
    HttpError(int s, const std::string& what) : std::runtime_error(what), status(s) {}
    int status;
  };

  static ApiResponse error(int status, const std::string& message) {
    ojson body;
    body["error"] = message;
    return {status, body.dump()};
  }

  static ApiResponse ok(const ojson& body, int status = 200) { return {status, body.dump()}; }

  static std::vector<std::string_view> segments(std::string_view path) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < path.size()) {
      auto end = path.find('/', start);
      if (end == std::string_view::npos) end = path.size();
      if (end > start) out.push_back(path.substr(start, end - start));
      start = end + 1;
    }
    return out;
  }

  static std::optional<std::uint64_t> parse_uint(std::string_view text) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
  }

  static const std::string* param(const ApiRequest& req, const std::string& key) {
    auto it = req.query.find(key);
    return it == req.query.end() ? nullptr : &it->second;
  }

  static TimeMetric metric_param(const ApiRequest& req) {
    const auto* text = param(req, "metric");
    if (!text || text->empty()) return TimeMetric::Inclusive;
    auto metric = parse_metric(*text);
    if (!metric) throw HttpError(400, "metric must be inclusive or exclusive");
    return *metric;
  }

  RunStore::Entry entry(const std::string& id) const {
    auto e = store_.get(id);
    if (!e) throw HttpError(404, "no run " + id);
    return *e;
  }

  ApiResponse route(const ApiRequest& req) const {
    const auto parts = segments(req.path);
    if (parts.empty() || parts[0] != "api") throw HttpError(404, "not found: " + req.path);

    if (parts.size() == 2 && parts[1] == "runs") {
      if (req.method == "GET") return list_runs();
      if (req.method == "POST") return upload(req);
      throw HttpError(405, "method not allowed");
    }
    if (req.method != "GET") throw HttpError(405, "method not allowed");

    if (parts.size() == 2 && parts[1] == "compare") return compare(req);
    if (parts.size() >= 4 && parts[1] == "runs") {
      const auto run = entry(std::string(parts[2]));
      const auto what = parts[3];
      if (parts.size() == 4 && what == "tree") return ok(to_json(scene_for(req, run)));
      if (parts.size() == 4 && what == "render.svg")
        return {200, render_svg(scene_for(req, run)), "image/svg+xml"};
      if (parts.size() == 4 && what == "source") return ok(source_json(*run.run));
      if (parts.size() == 4 && what == "hotspots") return hotspots(req, run);
      if (parts.size() == 5 && what == "node") return node(req, run, parts[4]);
    }
    throw HttpError(404, "not found: " + req.path);
  }

  ApiResponse list_runs() const {
    ojson out = ojson::array();
    for (const auto& run : store_.list()) {
      ojson item;
      item["run_id"] = run->run_id;
      item["application"] = run->application;
      item["timestamp"] = run->timestamp;
      item["policy"] = ojson::object();
      for (const auto& [k, v] : run->policy) item["policy"][k] = v;
      item["node_count"] = run->nodes.size();
      item["has_source"] = run->source.has_value();
      out.push_back(std::move(item));
    }
    return ok(out);
  }

  ApiResponse upload(const ApiRequest& req) const {
    auto parsed = parse_trace(req.body);
    const auto id = parsed.run.run_id;
    if (!store_.add(std::move(parsed.run))) throw HttpError(409, "run " + id + " already loaded");
    ojson out;
    out["run_id"] = id;
    out["warnings"] = parsed.warnings;
    return ok(out, 201);
  }

  ViewTree view_for(const ApiRequest& req, const RunStore::Entry& run) const {
    const auto* csv = param(req, "collapsed");
    if (!csv) return collapse_default(run.tree, uninteresting_);
    std::set<NodeId> ids;
    for (const auto& item : parse_name_list(*csv)) {
      auto value = parse_uint(item);
      if (!value) throw HttpError(400, "collapsed must be a comma-separated list of node ids");
      ids.insert(node_id(*value));
    }
    return ViewTree(run.tree, ids);
  }

  Scene scene_for(const ApiRequest& req, const RunStore::Entry& run) const {
    const auto metric = metric_param(req);
    const auto view = view_for(req, run);
    if (const auto* other = param(req, "compare"); other && !other->empty()) {
      const auto b = entry(*other);
      const auto result = diff(run.tree, b.tree, metric);
      return build_scene(view, metric, &result);
    }
    return build_scene(view, metric);
  }

  ApiResponse hotspots(const ApiRequest& req, const RunStore::Entry& run) const {
    const auto metric = metric_param(req);
    std::size_t n = 10;
    if (const auto* text = param(req, "n"); text && !text->empty()) {
      auto value = parse_uint(*text);
      if (!value) throw HttpError(400, "n must be a non-negative integer");
      n = static_cast<std::size_t>(*value);
    }
    return ok(hotspots_json(run.tree, metric, atria::hotspots(run.tree, metric, n)));
  }

  ApiResponse node(const ApiRequest& req, const RunStore::Entry& run, std::string_view nid) const {
    auto value = parse_uint(nid);
    if (!value) throw HttpError(400, "node id must be a non-negative integer");
    bool library = false;
    if (const auto* text = param(req, "library"); text && !text->empty()) {
      if (*text != "0" && *text != "1") throw HttpError(400, "library must be 0 or 1");
      library = *text == "1";
    }
    return ok(node_detail_json(run.tree, node_id(*value), library));
  }

  ApiResponse compare(const ApiRequest& req) const {
    const auto* a = param(req, "a");
    const auto* b = param(req, "b");
    if (!a || !b || a->empty() || b->empty()) throw HttpError(400, "compare needs both a and b");
    const auto metric = metric_param(req);
    return ok(to_json(diff(entry(*a).tree, entry(*b).tree, metric)));
  }

  RunStore& store_;
  std::set<std::string> uninteresting_;
};

}  // namespace atria
