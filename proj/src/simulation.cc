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

#include "hysafe/simulation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "hysafe/fmea.h"

namespace hysafe {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based stream keyed by (seed, trial, entry).
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t entry)
      : key_(splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ entry)) {}

  double uniform() {
    std::uint64_t bits = splitmix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct EntryPlan {
  std::string id;
  std::string mode;
  int occurrence = 0;
  int detection = 0;
  std::uint64_t hash = 0;
  double occurrence_p = 0.0;
  double miss_p = 0.0;
  bool kinematic = false;
};

struct Counts {
  std::vector<std::int64_t> injected, by_monitor, by_evaluator, escaped;
  std::int64_t hazardous = 0;

  explicit Counts(std::size_t n)
      : injected(n), by_monitor(n), by_evaluator(n), escaped(n) {}

  void merge(const Counts& o) {
    for (std::size_t i = 0; i < injected.size(); ++i) {
      injected[i] += o.injected[i];
      by_monitor[i] += o.by_monitor[i];
      by_evaluator[i] += o.by_evaluator[i];
      escaped[i] += o.escaped[i];
    }
    hazardous += o.hazardous;
  }
};

const TrajectoryCandidate& benign_plan() {
  static const TrajectoryCandidate plan =
      straight_trajectory(25.0, 25.0, 3.0, 6, 0.9);
  return plan;
}

const TrajectoryCandidate& fallback_plan() {
  static const TrajectoryCandidate plan =
      straight_trajectory(25.0, 20.0, 3.0, 6, 0.6);
  return plan;
}

}  // namespace

double occurrence_probability(int occurrence, double occurrence_scale) {
  if (!rating_in_range(occurrence)) {
    throw DomainError(
        fmt::format("occurrence rating {} outside [1,10]", occurrence));
  }
  if (!(occurrence_scale > 0.0)) {
    throw DomainError("occurrence_scale must be > 0");
  }
  return std::pow(10.0, (occurrence - 10) / occurrence_scale);
}

double miss_probability(int detection, double detection_scale) {
  if (!rating_in_range(detection)) {
    throw DomainError(
        fmt::format("detection rating {} outside [1,10]", detection));
  }
  if (!(detection_scale > 0.0)) {
    throw DomainError("detection_scale must be > 0");
  }
  return std::min(1.0, detection / detection_scale);
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
  // Guard the containment invariant against rounding at the boundaries.
  w.lo = std::min(w.lo, p);
  w.hi = std::max(w.hi, p);
  return w;
}

TrajectoryCandidate arc_trajectory(double speed, double radius,
                                   double angle_rad, int steps,
                                   double confidence) {
  std::vector<Waypoint> w;
  const double duration = radius * angle_rad / speed;
  for (int i = 0; i <= steps; ++i) {
    double f = static_cast<double>(i) / steps;
    double theta = angle_rad * f;
    w.push_back({radius * std::sin(theta), radius * (1.0 - std::cos(theta)),
                 duration * f});
  }
  return TrajectoryCandidate(std::move(w), confidence);
}

TrajectoryCandidate straight_trajectory(double v0, double v1, double duration,
                                        int steps, double confidence) {
  std::vector<Waypoint> w;
  const double a = (v1 - v0) / duration;
  for (int i = 0; i <= steps; ++i) {
    double t = duration * i / steps;
    w.push_back({v0 * t + 0.5 * a * t * t, 0.0, t});
  }
  return TrajectoryCandidate(std::move(w), confidence);
}

TrajectoryCandidate lane_change_trajectory(double speed, double offset,
                                           double duration, int steps,
                                           double confidence) {
  std::vector<Waypoint> w;
  for (int i = 0; i <= steps; ++i) {
    double t = duration * i / steps;
    double y = offset / 2.0 * (1.0 - std::cos(std::numbers::pi * t / duration));
    w.push_back({speed * t, y, t});
  }
  return TrajectoryCandidate(std::move(w), confidence);
}

const std::vector<Maneuver>& kinematic_failure_catalog() {
  static const std::vector<Maneuver> catalog = {
      {"90-degree turn, radius 10 m at 30 m/s",
       arc_trajectory(30.0, 10.0, std::numbers::pi / 2.0, 6)},
      {"stop from 26.8 m/s in 0.5 s", straight_trajectory(26.8, 0.0, 0.5, 6)},
      {"untimely lane change, 3.5 m over 4 s at 30 m/s",
       lane_change_trajectory(30.0, 3.5, 4.0, 6)},
      {"hard stop from 26.8 m/s in 3 s",
       straight_trajectory(26.8, 0.0, 3.0, 6)},
  };
  return catalog;
}

double physics_escape_fraction(const KinematicLimits& limits) {
  const auto& catalog = kinematic_failure_catalog();
  auto passing = std::count_if(
      catalog.begin(), catalog.end(), [&](const Maneuver& m) {
        return physics_check(m.trajectory, limits).pass;
      });
  return static_cast<double>(passing) / static_cast<double>(catalog.size());
}

bool is_kinematic_mode(const AiFailureMode& mode) {
  return mode.guidewords.count(Guideword::kValueTooHigh) > 0 ||
         mode.guidewords.count(Guideword::kValueTooLow) > 0;
}

SimulationReport run_simulation(const HazardProject& project, bool mitigated,
                                const SimulationOptions& options) {
  if (!project.sim_config) {
    throw DomainError("project has no simulation config");
  }
  const SimulationConfig& config = *project.sim_config;
  if (config.trials < 1) {
    throw DomainError(fmt::format("trials must be >= 1 (got {})",
                                  config.trials));
  }

  const HazardProject* effective = &project;
  HazardProject lowered;
  if (mitigated) {
    lowered =
        apply_fmea_mitigations(project, all_mitigation_ids(project)).project;
    effective = &lowered;
  }

  const auto& catalog = kinematic_failure_catalog();
  std::vector<bool> catalog_pass;
  for (const auto& m : catalog) {
    catalog_pass.push_back(physics_check(m.trajectory, options.limits).pass);
  }
  const bool benign_pass = physics_check(benign_plan(), options.limits).pass;
  const double escape_fraction = physics_escape_fraction(options.limits);

  std::vector<EntryPlan> plans;
  for (const auto& e : effective->fmea) {
    EntryPlan p;
    p.id = e.id;
    p.mode = e.failure_mode;
    p.occurrence = e.rating.occurrence;
    p.detection = e.rating.detection;
    p.hash = fnv1a(e.id);
    p.occurrence_p = occurrence_probability(p.occurrence, config.occurrence_scale);
    p.miss_p = miss_probability(p.detection, config.detection_scale);
    const AiFailureMode* mode = project.find_failure_mode(e.failure_mode);
    p.kinematic = mode && is_kinematic_mode(*mode);
    plans.push_back(std::move(p));
  }

  auto run_range = [&](std::int64_t begin, std::int64_t end, Counts& counts) {
    for (std::int64_t trial = begin; trial < end; ++trial) {
      bool hazardous = false;
      for (std::size_t i = 0; i < plans.size(); ++i) {
        const EntryPlan& p = plans[i];
        TrialStream rng(config.seed, static_cast<std::uint64_t>(trial), p.hash);
        const double u_inject = rng.uniform();
        const double u_detect = rng.uniform();
        const double u_maneuver = rng.uniform();
        if (!(u_inject < p.occurrence_p)) continue;
        ++counts.injected[i];

        const bool monitor_flags = !(u_detect < p.miss_p);
        const TrajectoryCandidate* faulty = &benign_plan();
        bool physics_pass = benign_pass;
        if (p.kinematic) {
          auto k = std::min(catalog.size() - 1,
                            static_cast<std::size_t>(u_maneuver *
                                                     catalog.size()));
          faulty = &catalog[k].trajectory;
          physics_pass = catalog_pass[k];
        }
        // The Safety Evaluator only exists in the mitigated architecture.
        const bool evaluator_pass = !mitigated || physics_pass;

        const AssessedCandidate candidates[] = {
            {*faulty, !monitor_flags, evaluator_pass},
            {fallback_plan(), true, true},
        };
        Arbitration choice = arbitrate(candidates);
        if (choice.selected == std::size_t{0}) {
          ++counts.escaped[i];
          hazardous = true;
        } else if (monitor_flags) {
          ++counts.by_monitor[i];
        } else {
          ++counts.by_evaluator[i];
        }
      }
      if (hazardous) ++counts.hazardous;
    }
  };

  unsigned threads = options.threads ? options.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::int64_t>(threads, std::max<std::int64_t>(1, config.trials / 1000)));
  std::vector<Counts> partial(threads, Counts(plans.size()));
  {
    std::vector<std::jthread> workers;
    const std::int64_t chunk = (config.trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      std::int64_t begin = std::min<std::int64_t>(config.trials, w * chunk);
      std::int64_t end = std::min<std::int64_t>(config.trials, begin + chunk);
      workers.emplace_back(run_range, begin, end, std::ref(partial[w]));
    }
  }
  Counts total(plans.size());
  for (const auto& c : partial) total.merge(c);

  SimulationReport report;
  report.trials = config.trials;
  report.seed = config.seed;
  report.mitigated = mitigated;
  double none = 1.0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const EntryPlan& p = plans[i];
    ModeStats s;
    s.entry_id = p.id;
    s.failure_mode = p.mode;
    s.occurrence = p.occurrence;
    s.detection = p.detection;
    s.injected = total.injected[i];
    s.detected_by_monitor = total.by_monitor[i];
    s.detected_by_evaluator = total.by_evaluator[i];
    s.escaped = total.escaped[i];
    s.residual_rate =
        static_cast<double>(s.escaped) / static_cast<double>(config.trials);
    s.wilson_95 = wilson_interval(s.escaped, config.trials);
    s.occurrence_p = p.occurrence_p;
    s.miss_p = p.miss_p;
    if (mitigated) {
      s.escape_factor = p.kinematic ? escape_fraction : (benign_pass ? 1.0 : 0.0);
    }
    s.analytic_rate = s.occurrence_p * s.miss_p * s.escape_factor;
    none *= 1.0 - s.analytic_rate;
    report.modes.push_back(std::move(s));
  }
  report.hazardous_trials = total.hazardous;
  report.residual_rate = static_cast<double>(total.hazardous) /
                         static_cast<double>(config.trials);
  report.wilson_95 = wilson_interval(total.hazardous, config.trials);
  report.analytic_rate = 1.0 - none;
  return report;
}

}  // namespace hysafe
