// Copyright 2026 The hysafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reader and writer for the .hsa project format.
//
//   component Encoder { functionality: "Compresses camera feeds" }
//   fmea fm1 { element: Encoder mode: Hallucination ... severity: 9 ... }
//   fault_tree lane_change { top: g0  g0 = OR(e1, e2)  e1 = event p: 0.1 }
//
// The parser only checks syntax and literal ranges; cross-reference
// resolution is validate_project's job.

#ifndef HYSAFE_PARSER_H_
#define HYSAFE_PARSER_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hysafe/model.h"

namespace hysafe {

struct ParseError {
  enum class Kind {
    kLexical,       // illegal character, unterminated string, bad escape
    kSyntax,        // grammar violation, unknown or missing key
    kDuplicateKey,  // key or node declared twice in one block
    kOutOfRange,    // literal outside its domain, e.g. severity: 0
    kInclude,       // unreadable, nested or cyclic include
  };

  Kind kind = Kind::kSyntax;
  SourceSpan span;
  std::string message;
};

std::string format_parse_error(const ParseError& e);

struct ParseResult {
  std::optional<HazardProject> project;
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty() && project.has_value(); }
  /// True when every error is a literal range violation.
  bool only_range_errors() const;
};

/// Loads the text of an included file; nullopt when unreadable.
using IncludeResolver =
    std::function<std::optional<std::string>(const std::string& path)>;

IncludeResolver filesystem_resolver();

/// Parses one project source. `origin` names the source in spans and is the
/// base for resolving `include` paths. Deterministic; all independent block
/// errors are reported in one pass.
ParseResult parse(std::string_view source, const std::string& origin,
                  const IncludeResolver& resolver = filesystem_resolver());

/// Reads and parses a file; an unreadable file yields a single kInclude
/// error spanning line 1.
ParseResult parse_file(const std::string& path,
                       const IncludeResolver& resolver = filesystem_resolver());

/// Parses several files as one project, declarations concatenated in order.
ParseResult parse_files(const std::vector<std::string>& paths,
                        const IncludeResolver& resolver = filesystem_resolver());

/// Canonical text: fixed key order, 2-space indent, one block per
/// declaration, declaration order preserved within each kind.
std::string serialize(const HazardProject& project);

}  // namespace hysafe

#endif  // HYSAFE_PARSER_H_
