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

#ifndef HYSAFE_VALIDATE_H_
#define HYSAFE_VALIDATE_H_

#include <optional>
#include <string>
#include <vector>

#include "hysafe/model.h"

namespace hysafe {

enum class Severity { kError, kWarning };

std::string_view severity_name(Severity s);  // "error" / "warning"

struct Diagnostic {
  Severity severity = Severity::kError;
  std::optional<SourceSpan> span;
  /// Logical location, e.g. "fmea fm1" or "fault_tree lane_change/g1".
  std::string location;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// "file:line:col: error: message [location]" or, without a span,
/// "error: message [location]".
std::string format_diagnostic(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Orders by source position (when known), then location, then message.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

/// Checks every structural invariant of a project: identifier syntax and
/// uniqueness, cross-reference resolution, rating ranges, fault-tree shape
/// (rooted, acyclic, non-empty gates), mitigation deltas and simulation
/// settings. Returns an empty list iff all invariants hold. Pure.
std::vector<Diagnostic> validate_project(const HazardProject& project);

/// Structural checks for a single tree. `project`, when given, resolves
/// fmea links.
/// Used by validate_project and by the analysis entry points.
std::vector<Diagnostic> validate_tree(const FaultTree& tree,
                                      const HazardProject* project);

}  // namespace hysafe

#endif  // HYSAFE_VALIDATE_H_
