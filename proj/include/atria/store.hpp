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

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"

namespace atria {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Loaded runs keyed by run_id. Entries never change once added; readers
/// share them without copying. Additions are serialized behind a lock.
class RunStore {
 public:
  struct Entry {
    std::shared_ptr<const Run> run;
    ExpressionTree tree;
  };

  /// Loads every *.json trace in `dir`. Files that fail to parse or repeat
  /// a run_id are skipped and described in the returned list.
  std::vector<std::string> load_directory(const std::filesystem::path& dir) {
    std::vector<std::string> problems;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        auto parsed = parse_trace(read_file(file));
        if (!add(std::move(parsed.run)))
          problems.push_back(file.string() + ": duplicate run_id");
      } catch (const std::exception& e) {
        problems.push_back(file.string() + ": " + e.what());
      }
    }
    return problems;
  }

  /// False when the run_id is already taken.
  bool add(Run run) {
    auto shared = std::make_shared<const Run>(std::move(run));
    Entry entry{shared, ExpressionTree(shared)};
    std::unique_lock lock(mutex_);
    return runs_.emplace(shared->run_id, std::move(entry)).second;
  }

  std::optional<Entry> get(const std::string& run_id) const {
    std::shared_lock lock(mutex_);
    auto it = runs_.find(run_id);
    if (it == runs_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::shared_ptr<const Run>> list() const {
    std::shared_lock lock(mutex_);
    std::vector<std::shared_ptr<const Run>> out;
    for (const auto& [_, e] : runs_) out.push_back(e.run);
    return out;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return runs_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, Entry> runs_;
};

}  // namespace atria
