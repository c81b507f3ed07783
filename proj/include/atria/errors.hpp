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

#include <stdexcept>
#include <string>
#include <string_view>

namespace atria {

/// Error categories raised by the analysis modules. The HTTP layer maps
/// these onto status codes, the CLI onto exit codes.
enum class Errc {
  MalformedDocument,
  SchemaViolation,
  InvariantViolation,
  UnknownNode,
  HiddenNode,
  EmptyInput,
  EmptyView,
  InvalidArgument,
  NoSource,
  LineOutOfRange,
  BadParams,
};

inline constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::HiddenNode: return "HiddenNode";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptyView: return "EmptyView";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NoSource: return "NoSource";
    case Errc::LineOutOfRange: return "LineOutOfRange";
    case Errc::BadParams: return "BadParams";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace atria
