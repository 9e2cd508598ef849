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

#include <gtest/gtest.h>

#include "hysafe/parser.h"
#include "hysafe/validate.h"
#include "support.h"

namespace hysafe {
namespace {

HazardProject bundled() {
  auto r = parse_file(testing::data_path("reference.hsa"));
  EXPECT_TRUE(r.ok());
  return *r.project;
}

HazardProject small_project() {
  HazardProject p;
  p.architecture.components.push_back(Component{.id = "Planner"});
  p.taxonomy.push_back(AiFailureMode{
      .id = "Hall", .label = "Hallucination",
      .guidewords = {Guideword::kIncorrectValue}});
  p.fmea.push_back(FmeaEntry{.id = "f1", .element = "Planner",
                             .failure_mode = "Hall", .rating = {9, 6, 3}});
  return p;
}

std::size_t count(const std::vector<Diagnostic>& ds, Severity s) {
  return std::count_if(ds.begin(), ds.end(),
                       [&](const Diagnostic& d) { return d.severity == s; });
}

TEST(Validate, BundledProjectIsClean) {
  EXPECT_TRUE(validate_project(bundled()).empty());
}

TEST(Validate, SeverityElevenIsOneError) {
  HazardProject p = small_project();
  p.fmea[0].rating.severity = 11;
  auto ds = validate_project(p);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].severity, Severity::kError);
  EXPECT_NE(ds[0].message.find("severity out of range [1,10]"),
            std::string::npos);
}

TEST(Validate, DanglingGateChildNamesGateAndChild) {
  HazardProject p = small_project();
  FaultTree t;
  t.id = "t";
  t.top = "g";
  t.nodes.push_back(FaultNode{"g", Gate{GateKind::kOr, {"e", "ghost"}, ""}});
  t.nodes.push_back(FaultNode{"e", BasicEvent{}});
  p.trees.push_back(t);
  auto ds = validate_project(p);
  ASSERT_EQ(count(ds, Severity::kError), 1u);
  EXPECT_NE(ds[0].message.find("'g'"), std::string::npos);
  EXPECT_NE(ds[0].message.find("'ghost'"), std::string::npos);
}

TEST(Validate, CycleIsAnError) {
  HazardProject p = small_project();
  FaultTree t;
  t.id = "t";
  t.top = "a";
  t.nodes.push_back(FaultNode{"a", Gate{GateKind::kOr, {"b"}, ""}});
  t.nodes.push_back(FaultNode{"b", Gate{GateKind::kAnd, {"a", "e"}, ""}});
  t.nodes.push_back(FaultNode{"e", BasicEvent{}});
  p.trees.push_back(t);
  EXPECT_TRUE(has_errors(validate_project(p)));
}

TEST(Validate, UnreachableNodeIsOnlyAWarning) {
  HazardProject p = small_project();
  FaultTree t;
  t.id = "t";
  t.top = "g";
  t.nodes.push_back(FaultNode{"g", Gate{GateKind::kOr, {"e"}, ""}});
  t.nodes.push_back(FaultNode{"e", BasicEvent{}});
  t.nodes.push_back(FaultNode{"orphan", BasicEvent{}});
  p.trees.push_back(t);
  auto ds = validate_project(p);
  EXPECT_EQ(count(ds, Severity::kError), 0u);
  EXPECT_EQ(count(ds, Severity::kWarning), 1u);
}

TEST(Validate, PseudoElementsAreValidFmeaElements) {
  HazardProject p = small_project();
  p.fmea[0].element = "TrainingDataset";
  EXPECT_TRUE(has_errors(validate_project(p)));
  p.architecture.pseudo_elements.push_back("TrainingDataset");
  EXPECT_TRUE(validate_project(p).empty());
}

TEST(Validate, MitigationDeltaRules) {
  HazardProject p = small_project();
  Mitigation m{.id = "m", .name = "M"};
  m.fmea_targets.push_back({"f1", -2});
  p.mitigations.push_back(m);
  EXPECT_TRUE(validate_project(p).empty());
  p.mitigations[0].fmea_targets[0].detection_delta = -3;  // D 3 -> 0
  EXPECT_TRUE(has_errors(validate_project(p)));
  p.mitigations[0].fmea_targets[0].detection_delta = 0;
  EXPECT_TRUE(has_errors(validate_project(p)));
  p.mitigations[0].fmea_targets[0] = {"nope", -1};
  EXPECT_TRUE(has_errors(validate_project(p)));
}

TEST(Validate, FtaTargetMustBeABasicEvent) {
  HazardProject p = bundled();
  p.mitigations[0].fta_targets[0].event = "perception_failure";
  auto ds = validate_project(p);
  ASSERT_TRUE(has_errors(ds));
  bool mentions = false;
  for (const auto& d : ds) {
    mentions |= d.message.find("is a gate") != std::string::npos;
  }
  EXPECT_TRUE(mentions);
}

TEST(Validate, IdempotentAndOrderedBySource) {
  HazardProject p = bundled();
  p.fmea[3].rating.occurrence = 0;
  p.fmea[0].rating.severity = 12;
  auto a = validate_project(p);
  auto b = validate_project(p);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_TRUE(a[0].span && a[1].span);
  EXPECT_LT(*a[0].span, *a[1].span);
}

TEST(Validate, FormatIncludesPositionAndLocation) {
  Diagnostic d{Severity::kError, SourceSpan{"m.hsa", 4, 7, 2}, "fmea:f1",
               "boom"};
  EXPECT_EQ(format_diagnostic(d), "m.hsa:4:7: error: boom [fmea:f1]");
  d.span.reset();
  d.severity = Severity::kWarning;
  EXPECT_EQ(format_diagnostic(d), "warning: boom [fmea:f1]");
}

// Property: a single-field mutation of a valid project yields an ERROR iff
// it breaks a stated invariant.
TEST(ValidateProperty, MutationsFlagExactlyTheBrokenInvariants) {
  testing::Rng rng(7);
  int broken_checked = 0, benign_checked = 0;
  for (int iter = 0; iter < 300; ++iter) {
    HazardProject p = testing::random_project(rng);
    ASSERT_FALSE(has_errors(validate_project(p)))
        << serialize(p) << "\n"
        << format_diagnostic(validate_project(p).front());
    std::uniform_int_distribution<int> which(0, 11);
    std::uniform_int_distribution<int> any(-5, 15);
    HazardProject q = p;
    bool breaks = false;
    FmeaEntry& e = q.fmea[std::uniform_int_distribution<std::size_t>(
        0, q.fmea.size() - 1)(rng)];
    switch (which(rng)) {
      case 0: {
        int v = any(rng);
        e.rating.severity = v;
        breaks = !rating_in_range(v);
        break;
      }
      case 1: {
        int v = any(rng);
        e.rating.occurrence = v;
        breaks = !rating_in_range(v);
        break;
      }
      case 2: {
        // Detection also interacts with mitigation deltas.
        int v = any(rng);
        int lowest = 0;
        for (const auto& m : q.mitigations) {
          for (const auto& t : m.fmea_targets) {
            if (t.entry == e.id) lowest = std::min(lowest, t.detection_delta);
          }
        }
        e.rating.detection = v;
        breaks = !rating_in_range(v) || v + lowest < 1;
        break;
      }
      case 3:
        e.failure_mode = "NoSuchMode";
        breaks = true;
        break;
      case 4:
        e.element = "NoSuchElement";
        breaks = true;
        break;
      case 5:
        e.manifestation = "changed text";
        breaks = false;
        break;
      case 6:
        q.taxonomy[0].guidewords.clear();
        breaks = true;
        break;
      case 7:
        q.taxonomy[0].label = "Renamed";
        breaks = false;
        break;
      case 8: {
        auto& gate = std::get<Gate>(q.trees[0].nodes[0].body);
        gate.children.push_back("undeclared_node");
        breaks = true;
        break;
      }
      case 9:
        q.architecture.components[0].id = "9bad";
        breaks = true;
        break;
      case 10:
        q.fmea.push_back(q.fmea[0]);  // duplicate id
        breaks = true;
        break;
      case 11:
        q.architecture.components[0].features.push_back("extra");
        breaks = false;
        break;
    }
    auto ds = validate_project(q);
    EXPECT_EQ(has_errors(ds), breaks) << serialize(q);
    (breaks ? broken_checked : benign_checked)++;
  }
  EXPECT_GT(broken_checked, 50);
  EXPECT_GT(benign_checked, 20);
}

}  // namespace
}  // namespace hysafe
