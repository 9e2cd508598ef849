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

// Test-only helpers: brute-force oracles that share no code with the
// library, seeded generators of random trees and projects, and a small DOT
// syntax checker.

#ifndef HYSAFE_TESTS_SUPPORT_H_
#define HYSAFE_TESTS_SUPPORT_H_

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hysafe/model.h"

namespace hysafe::testing {

using Rng = std::mt19937_64;

/// Top-event value by direct recursion over the node list.
bool oracle_eval(const FaultTree& tree, const std::set<std::string>& true_events);

/// Basic events reachable from the top, sorted.
std::vector<std::string> oracle_events(const FaultTree& tree);

/// Minimal true points by exhaustive enumeration over 2^n assignments,
/// sorted by size then lexicographically.
std::vector<std::vector<std::string>> oracle_cut_sets(const FaultTree& tree);

/// Exact top-event probability by summing over all 2^n assignments.
double oracle_probability(const FaultTree& tree);

/// Sum over the given cut sets of the product of member probabilities.
double oracle_rare_event(const FaultTree& tree,
                         const std::vector<std::vector<std::string>>& cuts);

struct TreeShape {
  int max_events = 12;
  int max_depth = 5;
  double leaf_bias = 0.35;   // chance to stop early at a non-leaf depth
  double reuse_gate = 0.15;  // chance to share an existing gate subtree
  bool with_probabilities = true;
};

/// Coherent tree with mixed AND/OR gates, shared events and optionally
/// shared gate subtrees. Every declared node is reachable.
FaultTree random_tree(Rng& rng, const TreeShape& shape = {},
                      const std::string& id = "t");

/// A random project that validates cleanly and exercises every block kind,
/// including strings with quotes and backslashes.
HazardProject random_project(Rng& rng);

/// Minimal DOT checker for the subset the renderers emit: `digraph ID {`
/// then node, edge and `key=value` statements, then `}`. Returns an empty
/// string when valid, otherwise a description of the first problem.
std::string dot_syntax_error(const std::string& text);

/// Reads a bundled data file.
std::string data_path(const std::string& name);

}  // namespace hysafe::testing

#endif  // HYSAFE_TESTS_SUPPORT_H_
