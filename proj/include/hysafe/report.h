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

// Markdown tables, Graphviz DOT graphs and the JSON summary. All renderers
// are pure and byte-deterministic.

#ifndef HYSAFE_REPORT_H_
#define HYSAFE_REPORT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "hysafe/fmea.h"
#include "hysafe/fta.h"
#include "hysafe/model.h"
#include "hysafe/simulation.h"

namespace hysafe {

inline constexpr std::string_view kAndGateShape = "box";
inline constexpr std::string_view kOrGateShape = "invtriangle";
inline constexpr std::string_view kEventShape = "ellipse";
inline constexpr std::string_view kSinglePointColor = "red";

/// Columns: System Element | AI Failure Mode (Guidewords) | Manifestation |
/// Effect | Caused By | S | O | D | RPN, one row per entry in rank order.
std::string render_fmea(const RankedFmea& ranked);

/// Per-row "D 4→1 (-3), RPN 252→63 (-189)" view of a mitigation run.
std::string render_fmea_delta(const FmeaDeltaReport& report);

/// Gates are drawn with kAndGateShape / kOrGateShape, basic events as
/// ellipses; with a cut-set report, single points get a red border.
std::string render_fta_dot(const FaultTree& tree,
                           const std::optional<CutSetReport>& cut_report = {});

std::string render_architecture_dot(const ArchitectureModel& architecture);

std::string render_simulation_table(const SimulationReport& report);

/// `{"fmea": [...]}`
std::string render_fmea_json(const RankedFmea& ranked);
/// `{"fmea_delta": [...]}`
std::string render_fmea_delta_json(const FmeaDeltaReport& report);
std::string render_simulation_json(const SimulationReport& report);

/// One object with keys fmea, cut_sets, single_points, probability and
/// simulation (null when absent). Reals carry at most 12 significant
/// digits.
std::string render_summary_json(const HazardProject& project,
                                const RankedFmea& ranked,
                                const std::optional<CutSetReport>& cut_report,
                                const std::optional<ProbabilityResult>& prob,
                                const std::optional<SimulationReport>& sim);

struct ReportBundle {
  std::string fmea_markdown;
  std::string fmea_delta_markdown;
  std::string fta_dot_before;
  std::optional<std::string> fta_dot_after;
  std::string architecture_dot;
  std::string summary_json;
};

struct ReportOptions {
  std::optional<std::string> tree_id;  // default: first tree
  std::size_t event_limit = kDefaultEventLimit;
  bool run_simulation = true;  // when the project has a simulation block
  bool simulate_mitigated = false;
};

/// Runs every analysis and renders the full bundle. Probability is omitted
/// (null) when some event lacks a probability.
ReportBundle build_report_bundle(const HazardProject& project,
                                 const ReportOptions& options = {});

}  // namespace hysafe

#endif  // HYSAFE_REPORT_H_
