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

// Monte Carlo fault injection over the fused architecture: every FMEA entry
// is a failure source, the Policy Monitor detects with a probability derived
// from the detection rating, the Safety Evaluator physics-checks plans, and
// the arbitrator decides whether a faulty plan is executed.

#ifndef HYSAFE_SIMULATION_H_
#define HYSAFE_SIMULATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "hysafe/kinematics.h"
#include "hysafe/model.h"

namespace hysafe {

/// 10^((O - 10) / scale): 1 at O = 10, strictly increasing in O.
double occurrence_probability(int occurrence, double occurrence_scale);

/// min(1, D / scale): chance that an injected failure is not detected.
double miss_probability(int detection, double detection_scale);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z = 1.959963984540054);

struct Maneuver {
  std::string name;
  TrajectoryCandidate trajectory;
};

/// Constant-speed circular arc starting at the origin heading +x.
TrajectoryCandidate arc_trajectory(double speed, double radius,
                                   double angle_rad, int steps,
                                   double confidence = 0.9);

/// Straight line along +x with constant acceleration from v0 to v1.
TrajectoryCandidate straight_trajectory(double v0, double v1, double duration,
                                        int steps, double confidence = 0.9);

/// Lateral offset `offset` at constant forward speed with a cosine profile.
TrajectoryCandidate lane_change_trajectory(double speed, double offset,
                                           double duration, int steps,
                                           double confidence = 0.9);

/// Plans a planner emits under a constraint-adherence failure. Half are
/// physically impossible (a 90-degree turn at 30 m/s, 26.8 m/s to standstill
/// in 0.5 s), half feasible but wrong.
const std::vector<Maneuver>& kinematic_failure_catalog();

/// Fraction of the catalog that passes physics_check under `limits`.
double physics_escape_fraction(const KinematicLimits& limits);

/// Failure modes whose guidewords include ValueTooHigh or ValueTooLow
/// produce kinematically implausible plans and are subject to the physics
/// check.
bool is_kinematic_mode(const AiFailureMode& mode);

struct ModeStats {
  std::string entry_id;
  std::string failure_mode;
  int occurrence = 0;
  int detection = 0;  // effective rating used for this run
  std::int64_t injected = 0;
  std::int64_t detected_by_monitor = 0;
  std::int64_t detected_by_evaluator = 0;
  std::int64_t escaped = 0;
  double residual_rate = 0.0;  // escaped / trials
  WilsonInterval wilson_95;
  double analytic_rate = 0.0;
  double occurrence_p = 0.0;
  double miss_p = 0.0;
  double escape_factor = 1.0;
};

struct SimulationReport {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  bool mitigated = false;
  std::vector<ModeStats> modes;  // FMEA declaration order
  /// Trials in which at least one injected failure escaped.
  std::int64_t hazardous_trials = 0;
  double residual_rate = 0.0;
  WilsonInterval wilson_95;
  /// 1 - prod(1 - analytic_rate) over modes.
  double analytic_rate = 0.0;
};

struct SimulationOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  KinematicLimits limits;
};

/// Runs `sim_config.trials` trials. With `mitigated`, the detection ratings
/// are lowered by every mitigation's deltas and the Safety Evaluator is in
/// the loop. Randomness for (trial, entry) derives only from the seed, the
/// trial index and the entry id, so the report does not depend on thread
/// count or scheduling. Throws DomainError when the project lacks a
/// simulation config or carries an invalid rating.
SimulationReport run_simulation(const HazardProject& project, bool mitigated,
                                const SimulationOptions& options = {});

}  // namespace hysafe

#endif  // HYSAFE_SIMULATION_H_
