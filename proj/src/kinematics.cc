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

#include "hysafe/kinematics.h"

#include <cmath>

#include <fmt/format.h>

#include "hysafe/model.h"

namespace hysafe {

TrajectoryCandidate::TrajectoryCandidate(std::vector<Waypoint> waypoints,
                                         double confidence,
                                         std::set<std::string> source_flags)
    : waypoints_(std::move(waypoints)),
      confidence_(confidence),
      source_flags_(std::move(source_flags)) {
  if (waypoints_.size() < 2) {
    throw DomainError("a trajectory needs at least two waypoints");
  }
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (!(waypoints_[i].t > waypoints_[i - 1].t)) {
      throw DomainError(
          fmt::format("waypoint times must increase strictly (index {})", i));
    }
  }
  if (!(confidence_ >= 0.0 && confidence_ <= 1.0)) {
    throw DomainError("trajectory confidence must lie in [0,1]");
  }
}

PhysicsVerdict physics_check(const TrajectoryCandidate& candidate,
                             const KinematicLimits& limits) {
  const auto& w = candidate.waypoints();
  const std::size_t n = w.size();
  constexpr double kMinSegment = 1e-9;

  std::vector<double> length(n - 1), speed(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    length[i] = std::hypot(w[i + 1].x - w[i].x, w[i + 1].y - w[i].y);
    if (length[i] < kMinSegment) {
      PhysicsVerdict v;
      v.pass = false;
      v.quantity = PhysicsVerdict::Quantity::kDegenerate;
      v.waypoint = i;
      v.reason = fmt::format("degenerate segment between waypoints {} and {}",
                             i, i + 1);
      return v;
    }
    speed[i] = length[i] / (w[i + 1].t - w[i].t);
  }

  for (std::size_t j = 1; j + 1 < n; ++j) {
    double dt_mid = (w[j + 1].t - w[j - 1].t) / 2.0;
    double a_long = std::abs(speed[j] - speed[j - 1]) / dt_mid;
    if (a_long > limits.max_longitudinal_accel) {
      PhysicsVerdict v;
      v.pass = false;
      v.quantity = PhysicsVerdict::Quantity::kLongitudinal;
      v.waypoint = j;
      v.value = a_long;
      v.reason = fmt::format(
          "longitudinal acceleration {:.3g} m/s^2 exceeds {:.3g} m/s^2 at "
          "waypoint {}",
          a_long, limits.max_longitudinal_accel, j);
      return v;
    }

    // Circumradius curvature: kappa = 4 * area / (a * b * c).
    double ax = w[j].x - w[j - 1].x, ay = w[j].y - w[j - 1].y;
    double bx = w[j + 1].x - w[j - 1].x, by = w[j + 1].y - w[j - 1].y;
    double cross = std::abs(ax * by - ay * bx);
    double chord = std::hypot(bx, by);
    double kappa = 2.0 * cross / (length[j - 1] * length[j] * chord);
    double v_mid = (speed[j - 1] + speed[j]) / 2.0;
    double a_lat = v_mid * v_mid * kappa;
    if (a_lat > limits.max_lateral_accel) {
      PhysicsVerdict v;
      v.pass = false;
      v.quantity = PhysicsVerdict::Quantity::kLateral;
      v.waypoint = j;
      v.value = a_lat;
      v.reason = fmt::format(
          "lateral acceleration {:.3g} m/s^2 exceeds {:.3g} m/s^2 at "
          "waypoint {}",
          a_lat, limits.max_lateral_accel, j);
      return v;
    }
  }
  return {};
}

Arbitration arbitrate(std::span<const AssessedCandidate> candidates) {
  Arbitration out;
  double best = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (!c.monitor_pass || !c.evaluator_pass) continue;
    if (c.candidate.confidence() > best) {
      best = c.candidate.confidence();
      out.selected = i;
    }
  }
  return out;
}

}  // namespace hysafe
