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

// atria: command-line front end for execution-graph traces.
//
//   atria validate <trace>
//   atria render <trace> [--compare <trace>] --metric inclusive|exclusive --out <svg>
//   atria top <trace> -n N --metric M
//   atria diff <a> <b> --format json|table
//   atria gen --seed S --depth D --branching B --threshold T --overhead O --out <trace>
//   atria serve <dir> --port P

#include <CLI11.hpp>

#include <atria/atria.hpp>
#include <atria/http_service.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace atria;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUnreadable = 2;

struct CliFailure {
  int code;
  std::string message;
};

Run load(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw CliFailure{kExitUnreadable, e.what()};
  }
  try {
    auto parsed = parse_trace(text);
    for (const auto& w : parsed.warnings) std::cerr << path << ": warning: " << w << "\n";
    return std::move(parsed.run);
  } catch (const TraceError& e) {
    throw CliFailure{e.code() == Errc::InvariantViolation ? kExitViolations : kExitUnreadable, path + ": " + e.what()};
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliFailure{kExitUnreadable, "cannot write " + path};
  out << content;
}

TimeMetric metric_from(const std::string& text) {
  auto metric = parse_metric(text);
  if (!metric) throw CliFailure{kExitViolations, "unknown metric '" + text + "'"};
  return *metric;
}

int cmd_validate(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUnreadable;
  }
  try {
    auto parsed = parse_trace(text);
    for (const auto& w : parsed.warnings) std::cerr << path << ": warning: " << w << "\n";
  } catch (const TraceError& e) {
    if (e.code() != Errc::InvariantViolation) {
      std::cerr << path << ": " << e.what() << "\n";
      return kExitUnreadable;
    }
    for (const auto& v : e.violations()) std::cout << to_string(v) << "\n";
    return kExitViolations;
  }
  std::cout << path << ": valid\n";
  return kExitOk;
}

int cmd_render(const std::string& path, const std::string& compare_path, const std::string& metric_text,
               const std::optional<std::string>& collapsed, const std::string& out) {
  const auto metric = metric_from(metric_text);
  auto tree = build_expression_tree(load(path));
  ViewTree view = collapse_default(tree, default_uninteresting());
  if (collapsed) {
    std::set<NodeId> ids;
    for (const auto& item : parse_name_list(*collapsed)) ids.insert(node_id(std::stoull(item)));
    view = ViewTree(tree, ids);
  }
  std::string svg;
  if (!compare_path.empty()) {
    auto other = build_expression_tree(load(compare_path));
    const auto result = diff(tree, other, metric);
    svg = render_svg(build_scene(view, metric, &result));
  } else {
    svg = render_svg(build_scene(view, metric));
  }
  write_output(out, svg);
  return kExitOk;
}

int cmd_top(const std::string& path, std::size_t n, const std::string& metric_text) {
  const auto metric = metric_from(metric_text);
  const auto tree = build_expression_tree(load(path));
  std::size_t rank = 0;
  for (const auto& h : hotspots(tree, metric, n)) {
    const auto& node = tree.node(h.id);
    std::cout << ++rank << "\t" << to_string(h.id) << "\t" << node.name << "\t" << h.value.count() << " ns\t"
              << to_string(node.mode) << "\tline " << node.line << "\n";
  }
  return kExitOk;
}

int cmd_diff(const std::string& a_path, const std::string& b_path, const std::string& format,
             const std::string& metric_text) {
  const auto metric = metric_from(metric_text);
  const auto a = load(a_path);
  const auto b = load(b_path);
  const auto result = diff(a, b, metric);
  if (format == "json") {
    std::cout << diff_report_json(result, a, b).dump(2) << "\n";
  } else {
    std::cout << diff_report_table(result, a, b);
  }
  return kExitOk;
}

Nanos parse_threshold(const std::string& text) {
  if (text == "inf" || text == "infinity") return gen::PolicyConfig::infinite_threshold();
  try {
    std::size_t used = 0;
    auto value = std::stoll(text, &used);
    if (used == text.size() && value >= 0) return Nanos{value};
  } catch (const std::exception&) {
  }
  throw CliFailure{kExitViolations, "threshold must be a non-negative integer (ns) or 'inf'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Execution-graph trace analysis: validate, render, rank, diff, generate and serve traces."};
  app.require_subcommand(1);

  std::string trace_path, compare_path, out_path, metric = "inclusive", format = "table";
  std::optional<std::string> collapsed;
  std::size_t top_n = 10;

  auto* validate = app.add_subcommand("validate", "Check a trace document against every invariant");
  validate->add_option("trace", trace_path, "Trace file")->required();

  auto* render = app.add_subcommand("render", "Export the expression tree as SVG");
  render->add_option("trace", trace_path, "Trace file")->required();
  render->add_option("--compare", compare_path, "Second run; switches to comparison encoding");
  render->add_option("--metric", metric, "inclusive or exclusive")->check(CLI::IsMember({"inclusive", "exclusive"}));
  render->add_option("--collapsed", collapsed, "Comma-separated node ids to collapse (default: uninteresting set)");
  render->add_option("--out", out_path, "Output SVG path ('-' for stdout)");

  auto* top = app.add_subcommand("top", "List the most time-consuming primitives");
  top->add_option("trace", trace_path, "Trace file")->required();
  top->add_option("-n", top_n, "Number of rows");
  top->add_option("--metric", metric, "inclusive or exclusive")->check(CLI::IsMember({"inclusive", "exclusive"}));

  std::string b_path;
  auto* diff_cmd = app.add_subcommand("diff", "Compare two runs of the same program");
  diff_cmd->add_option("a", trace_path, "First run")->required();
  diff_cmd->add_option("b", b_path, "Second run")->required();
  diff_cmd->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  diff_cmd->add_option("--metric", metric, "inclusive or exclusive")->check(CLI::IsMember({"inclusive", "exclusive"}));

  std::uint64_t seed = 0;
  std::size_t depth = 4, branching = 3, max_nodes = 0;
  std::string threshold = "10000";
  std::int64_t overhead = 0;
  double overlap = 0.0, cost_scale = 1.0;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic trace");
  gen_cmd->add_option("--seed", seed, "Program seed");
  gen_cmd->add_option("--depth", depth, "Maximum tree depth")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--branching", branching, "Maximum operands per primitive")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--threshold", threshold, "Async threshold on subtree cost, ns or 'inf'");
  gen_cmd->add_option("--overhead", overhead, "Async scheduling overhead, ns")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--overlap", overlap, "Fraction of async child time hidden")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--cost-scale", cost_scale, "Uniform cost inflation factor")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--max-nodes", max_nodes, "Cap on the number of primitives (0: none)");
  gen_cmd->add_option("--out", out_path, "Output trace path ('-' for stdout)");

  std::string dir, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API over a directory of traces");
  serve->add_option("dir", dir, "Directory of *.json traces")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(trace_path);
    if (*render) return cmd_render(trace_path, compare_path, metric, collapsed, out_path);
    if (*top) return cmd_top(trace_path, top_n, metric);
    if (*diff_cmd) return cmd_diff(trace_path, b_path, format, metric);
    if (*gen_cmd) {
      gen::GeneratorOptions options;
      if (max_nodes > 0) options.max_nodes = max_nodes;
      gen::PolicyConfig policy;
      policy.threshold = parse_threshold(threshold);
      policy.async_overhead = Nanos{overhead};
      policy.overlap_fraction = overlap;
      policy.cost_scale = cost_scale;
      policy.seed = seed;
      const auto skeleton = gen::generate_program(seed, depth, branching, options);
      write_output(out_path, serialize_trace(gen::simulate(skeleton, policy)));
      return kExitOk;
    }
    if (*serve) {
      RunStore store;
      for (const auto& problem : store.load_directory(dir)) std::cerr << "skipped " << problem << "\n";
      Api api(store);
      httplib::Server server;
      bind_routes(server, api);
      std::cerr << "serving " << store.size() << " runs on http://" << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return kExitViolations;
      }
      return kExitOk;
    }
  } catch (const CliFailure& f) {
    std::cerr << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitViolations;
  }
  return kExitOk;
}
