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

// Qualitative and quantitative fault-tree analysis over coherent AND/OR
// trees with possibly shared (repeated) basic events.

#ifndef HYSAFE_FTA_H_
#define HYSAFE_FTA_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hysafe/model.h"

namespace hysafe {

inline constexpr std::size_t kDefaultEventLimit = 64;

using CutSet = std::vector<std::string>;  // sorted event ids

struct CutSetReport {
  /// Minimal cut sets ordered by size, then lexicographically.
  std::vector<CutSet> cut_sets;
  /// Members of the order-1 cut sets, sorted.
  std::vector<std::string> single_points;
};

struct ProbabilityResult {
  double exact = 0.0;
  /// Sum over minimal cut sets of the product of member probabilities.
  double rare_event_upper = 0.0;
};

/// Basic events reachable from the top node, sorted by id.
std::vector<std::string> reachable_events(const FaultTree& tree);

/// MOCUS expansion from the top gate followed by absorption. Throws
/// DomainError for a structurally invalid tree and ResourceError when more
/// than `event_limit` basic events are reachable.
CutSetReport minimal_cut_sets(const FaultTree& tree,
                              std::size_t event_limit = kDefaultEventLimit);

/// Value of the top event when exactly `true_events` occur. Throws
/// DomainError for an id that is not a basic event of the tree.
bool evaluate_assignment(const FaultTree& tree,
                         const std::set<std::string>& true_events);

/// Exact top-event probability under independent basic events, by Shannon
/// decomposition on events shared between sibling subtrees. Throws
/// DomainError naming the first reachable event without a probability.
ProbabilityResult top_event_probability(
    const FaultTree& tree, std::size_t event_limit = kDefaultEventLimit);

/// Replaces every targeted basic event `e` by a fresh AND gate over `e` and
/// a monitor event (labelled with the monitor label, probability = miss
/// probability). Parents of `e` point at the new gate instead. When
/// `monitor_of` is given it receives event id -> monitor event id.
/// Throws DomainError when a target is missing from the tree, is a gate, is
/// targeted twice, or when a monitor label repeats.
FaultTree apply_fta_mitigations(
    const FaultTree& tree, const std::vector<Mitigation>& mitigations,
    std::map<std::string, std::string>* monitor_of = nullptr);

/// Keeps only the fta targets of `mitigations` that name a basic event of
/// `tree`.
std::vector<Mitigation> restrict_to_tree(
    const FaultTree& tree, const std::vector<Mitigation>& mitigations);

}  // namespace hysafe

#endif  // HYSAFE_FTA_H_
