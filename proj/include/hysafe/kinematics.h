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

// Trajectory plausibility checks and plan arbitration for the fused stack:
// the Safety Evaluator's physics check and the arbitrator that picks the
// highest-confidence plan both monitors accept.

#ifndef HYSAFE_KINEMATICS_H_
#define HYSAFE_KINEMATICS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hysafe {

struct Waypoint {
  double x = 0.0;  // m
  double y = 0.0;  // m
  double t = 0.0;  // s
};

/// A planned trajectory. Invariants (checked, DomainError otherwise): at
/// least two waypoints, strictly increasing timestamps, confidence in [0,1].
class TrajectoryCandidate {
 public:
  TrajectoryCandidate(std::vector<Waypoint> waypoints, double confidence,
                      std::set<std::string> source_flags = {});

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  double confidence() const { return confidence_; }
  /// Ids of the failure modes injected into this plan.
  const std::set<std::string>& source_flags() const { return source_flags_; }

 private:
  std::vector<Waypoint> waypoints_;
  double confidence_;
  std::set<std::string> source_flags_;
};

struct KinematicLimits {
  double max_lateral_accel = 9.0;        // m/s^2
  double max_longitudinal_accel = 10.0;  // m/s^2
};

struct PhysicsVerdict {
  enum class Quantity { kNone, kLateral, kLongitudinal, kDegenerate };

  bool pass = true;
  Quantity quantity = Quantity::kNone;
  std::size_t waypoint = 0;  // index of the first violation
  double value = 0.0;        // offending acceleration, m/s^2
  std::string reason;        // empty on pass
};

/// Segment-wise feasibility. Speeds are segment averages; longitudinal
/// acceleration is the speed change between consecutive segments over the
/// time between their midpoints; lateral acceleration is v^2 * kappa with
/// kappa the inverse circumradius of each waypoint triple. Coincident
/// consecutive waypoints are rejected as a degenerate segment.
PhysicsVerdict physics_check(const TrajectoryCandidate& candidate,
                             const KinematicLimits& limits = {});

struct AssessedCandidate {
  TrajectoryCandidate candidate;
  bool monitor_pass = false;
  bool evaluator_pass = false;
};

struct Arbitration {
  std::optional<std::size_t> selected;  // nullopt: minimal-risk fallback

  bool fallback() const { return !selected.has_value(); }
};

/// Highest-confidence candidate accepted by both monitor and evaluator;
/// ties go to the lowest index.
Arbitration arbitrate(std::span<const AssessedCandidate> candidates);

}  // namespace hysafe

#endif  // HYSAFE_KINEMATICS_H_
