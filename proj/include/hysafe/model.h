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

// Domain types shared by every analysis: the architecture under study, the
// AI failure-mode taxonomy, FMEA rows, fault trees and mitigations.

#ifndef HYSAFE_MODEL_H_
#define HYSAFE_MODEL_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hysafe {

/// Raised when an operation receives a value outside its domain
/// (rating out of range, unresolved id, conflicting mitigations, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a configured resource limit (e.g. basic-event count) is hit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classical FMEA guidewords. The set is closed.
enum class Guideword {
  kIncorrectValue,
  kMissingValue,
  kValueTooHigh,
  kValueTooLow,
  kIncorrectTiming,
};

inline constexpr Guideword kAllGuidewords[] = {
    Guideword::kIncorrectValue, Guideword::kMissingValue,
    Guideword::kValueTooHigh, Guideword::kValueTooLow,
    Guideword::kIncorrectTiming};

using GuidewordSet = std::set<Guideword>;

/// DSL token, e.g. "IncorrectValue".
std::string_view guideword_token(Guideword g);
std::optional<Guideword> parse_guideword(std::string_view token);

/// Human-readable phrase, e.g. "Incorrect Value".
std::string_view guideword_phrase(Guideword g);

/// Merges a guideword set into one table cell the way FMEA worksheets do:
/// {IncorrectValue, IncorrectTiming} -> "Incorrect Value/Timing",
/// {IncorrectValue, MissingValue} -> "Incorrect or Missing Value".
std::string describe_guidewords(const GuidewordSet& set);

/// `[A-Za-z_][A-Za-z0-9_-]*`
bool is_identifier(std::string_view s);

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 1;

  auto operator<=>(const SourceSpan&) const = default;
};

struct Component {
  std::string id;
  std::string name;
  std::string functionality;
  std::vector<std::string> inputs;   // interface ids
  std::vector<std::string> outputs;  // interface ids
  std::vector<std::string> features;

  bool operator==(const Component&) const = default;
};

struct Interface {
  std::string id;
  std::string producer;
  std::vector<std::string> consumers;
  std::string payload;

  bool operator==(const Interface&) const = default;
};

struct ArchitectureModel {
  std::string name;
  std::vector<Component> components;
  std::vector<Interface> interfaces;
  /// Analysis subjects that are not architecture components, such as a
  /// training dataset.
  std::vector<std::string> pseudo_elements;
  std::map<std::string, std::string> annotations;

  const Component* find_component(std::string_view id) const;
  bool has_element(std::string_view id) const;

  bool operator==(const ArchitectureModel&) const = default;
};

struct AiFailureMode {
  std::string id;
  std::string label;
  GuidewordSet guidewords;
  std::string description;

  bool operator==(const AiFailureMode&) const = default;
};

struct RiskRating {
  int severity = 1;
  int occurrence = 1;
  int detection = 1;

  bool operator==(const RiskRating&) const = default;
};

inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 10;

constexpr bool rating_in_range(int value) {
  return value >= kMinRating && value <= kMaxRating;
}

struct FmeaEntry {
  std::string id;
  std::string element;
  std::string failure_mode;
  std::string manifestation;
  std::string effect;
  std::string caused_by;
  RiskRating rating;

  bool operator==(const FmeaEntry&) const = default;
};

enum class GateKind { kAnd, kOr };

std::string_view gate_keyword(GateKind kind);  // "AND" / "OR"

struct Gate {
  GateKind kind = GateKind::kOr;
  std::vector<std::string> children;
  std::string label;

  bool operator==(const Gate&) const = default;
};

struct BasicEvent {
  std::string label;
  std::optional<double> probability;
  std::optional<std::string> fmea_link;

  bool operator==(const BasicEvent&) const = default;
};

struct FaultNode {
  std::string id;
  std::variant<Gate, BasicEvent> body;

  bool is_gate() const { return std::holds_alternative<Gate>(body); }
  const Gate& gate() const { return std::get<Gate>(body); }
  const BasicEvent& event() const { return std::get<BasicEvent>(body); }

  bool operator==(const FaultNode&) const = default;
};

/// Nodes keep declaration order; ids are unique within one tree.
struct FaultTree {
  std::string id;
  std::string top;
  std::vector<FaultNode> nodes;

  const FaultNode* find(std::string_view node_id) const;

  bool operator==(const FaultTree&) const = default;
};

struct FmeaTarget {
  std::string entry;
  int detection_delta = -1;

  bool operator==(const FmeaTarget&) const = default;
};

struct FtaTarget {
  std::string event;
  std::string monitor_label;
  std::optional<double> miss_probability;

  bool operator==(const FtaTarget&) const = default;
};

struct Mitigation {
  std::string id;
  std::string name;
  std::string comment;
  std::vector<FmeaTarget> fmea_targets;
  std::vector<FtaTarget> fta_targets;

  bool operator==(const Mitigation&) const = default;
};

struct SimulationConfig {
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  double occurrence_scale = 2.0;
  double detection_scale = 10.0;

  bool operator==(const SimulationConfig&) const = default;
};

/// Where each declaration (and selected fields) came from, keyed by
/// "<kind>:<id>" or "<kind>:<id>.<field>". Not part of structural equality.
using SourceMap = std::map<std::string, SourceSpan, std::less<>>;

struct HazardProject {
  ArchitectureModel architecture;
  std::vector<AiFailureMode> taxonomy;
  std::vector<FmeaEntry> fmea;
  std::vector<FaultTree> trees;
  std::vector<Mitigation> mitigations;
  std::optional<SimulationConfig> sim_config;
  SourceMap locations;

  const AiFailureMode* find_failure_mode(std::string_view id) const;
  const FmeaEntry* find_entry(std::string_view id) const;
  const FaultTree* find_tree(std::string_view id) const;
  const Mitigation* find_mitigation(std::string_view id) const;
  std::optional<SourceSpan> location(std::string_view key) const;

  /// Structural equality; source locations are ignored.
  friend bool operator==(const HazardProject& a, const HazardProject& b) {
    return a.architecture == b.architecture && a.taxonomy == b.taxonomy &&
           a.fmea == b.fmea && a.trees == b.trees &&
           a.mitigations == b.mitigations && a.sim_config == b.sim_config;
  }
};

}  // namespace hysafe

#endif  // HYSAFE_MODEL_H_
