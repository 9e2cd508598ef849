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

#include <algorithm>

#include "hysafe/fmea.h"
#include "hysafe/parser.h"
#include "support.h"

namespace hysafe {
namespace {

HazardProject bundled() {
  auto r = parse_file(testing::data_path("reference.hsa"));
  EXPECT_TRUE(r.ok());
  return *r.project;
}

TEST(Rpn, ProductOfRatings) {
  EXPECT_EQ(compute_rpn({9, 7, 4}), 252);
  EXPECT_EQ(compute_rpn({10, 4, 2}), 80);
  EXPECT_EQ(compute_rpn({1, 1, 1}), 1);
  EXPECT_EQ(compute_rpn({10, 10, 10}), 1000);
  EXPECT_THROW(compute_rpn({0, 5, 5}), DomainError);
  EXPECT_THROW(compute_rpn({5, 11, 5}), DomainError);
}

TEST(Rpn, MonotoneInEachRating) {
  for (int s = 1; s <= 10; ++s) {
    for (int o = 1; o <= 10; ++o) {
      for (int d = 1; d <= 10; ++d) {
        int r = compute_rpn({s, o, d});
        if (s < 10) EXPECT_GE(compute_rpn({s + 1, o, d}), r);
        if (o < 10) EXPECT_GE(compute_rpn({s, o + 1, d}), r);
        if (d < 10) EXPECT_GE(compute_rpn({s, o, d + 1}), r);
      }
    }
  }
}

TEST(RankFmea, BundledTableOrder) {
  RankedFmea ranked = rank_fmea(bundled());
  std::vector<int> rpns;
  std::vector<std::tuple<int, int, int>> sod;
  for (const auto& e : ranked.entries) {
    rpns.push_back(e.rpn);
    sod.emplace_back(e.entry.rating.severity, e.entry.rating.occurrence,
                     e.entry.rating.detection);
  }
  EXPECT_EQ(rpns, (std::vector<int>{252, 252, 216, 162, 150, 150, 100, 80}));
  EXPECT_EQ(sod, (std::vector<std::tuple<int, int, int>>{{9, 7, 4},
                                                          {9, 7, 4},
                                                          {9, 6, 4},
                                                          {9, 6, 3},
                                                          {10, 5, 3},
                                                          {10, 5, 3},
                                                          {10, 5, 2},
                                                          {10, 4, 2}}));
  EXPECT_EQ(ranked.entries[0].element_name,
            "Latent Denoiser - Quantized Activations");
  EXPECT_EQ(ranked.entries[2].element_name, "Training Dataset");
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    EXPECT_EQ(ranked.entries[i].rank, static_cast<int>(i + 1));
  }
}

TEST(RankFmea, TieBreakSeverityThenOccurrenceThenId) {
  HazardProject p;
  auto add = [&](std::string id, RiskRating r) {
    p.fmea.push_back(FmeaEntry{.id = std::move(id), .rating = r});
  };
  add("b", {5, 4, 5});   // 100
  add("a", {5, 4, 5});   // 100, same S and O: id decides
  add("c", {4, 5, 5});   // 100, lower S
  add("d", {10, 2, 5});  // 100, highest S
  add("e", {5, 5, 4});   // 100, S=5 with higher O
  RankedFmea r = rank_fmea(p);
  std::vector<std::string> ids;
  for (const auto& e : r.entries) ids.push_back(e.entry.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"d", "e", "a", "b", "c"}));
}

TEST(RankFmeaProperty, InvariantUnderPermutation) {
  testing::Rng rng(99);
  for (int iter = 0; iter < 100; ++iter) {
    HazardProject p = testing::random_project(rng);
    RankedFmea base = rank_fmea(p);
    std::shuffle(p.fmea.begin(), p.fmea.end(), rng);
    RankedFmea shuffled = rank_fmea(p);
    ASSERT_EQ(base.entries.size(), shuffled.entries.size());
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
      EXPECT_EQ(base.entries[i].entry, shuffled.entries[i].entry);
      EXPECT_EQ(base.entries[i].rank, shuffled.entries[i].rank);
    }
  }
}

TEST(CheckTaxonomy, FlagsUndeclaredModesAndEmptyGuidewords) {
  HazardProject p = bundled();
  EXPECT_TRUE(check_taxonomy(p).empty());
  p.fmea[1].failure_mode = "Unknown";
  p.taxonomy[4].guidewords.clear();
  auto ds = check_taxonomy(p);
  EXPECT_EQ(ds.size(), 2u);
}

TEST(ApplyMitigations, SingleEntryExamples) {
  HazardProject p = bundled();
  auto r = apply_fmea_mitigations(p, {"quantization_calibrated_uncertainty",
                                      "active_learning"});
  ASSERT_EQ(r.report.rows.size(), 2u);
  const auto& q = r.report.rows[0];
  EXPECT_EQ(q.entry_id, "fm1_quantized_hallucination");
  EXPECT_EQ(q.d_before, 4);
  EXPECT_EQ(q.d_after, 1);
  EXPECT_EQ(q.rpn_before, 252);
  EXPECT_EQ(q.rpn_after, 63);
  EXPECT_EQ(q.rpn_delta, -189);
  const auto& s = r.report.rows[1];
  EXPECT_EQ(s.rpn_before, 216);
  EXPECT_EQ(s.rpn_after, 54);
  // The input is untouched; the returned project carries the new ratings.
  EXPECT_EQ(p.find_entry("fm1_quantized_hallucination")->rating.detection, 4);
  EXPECT_EQ(
      r.project.find_entry("fm1_quantized_hallucination")->rating.detection, 1);
  EXPECT_EQ(r.project.find_entry("fm2_temporal_reasoning")->rating.detection, 4);
}

TEST(ApplyMitigations, FullTableDeltas) {
  auto r = apply_fmea_mitigations(bundled(), all_mitigation_ids(bundled()));
  std::vector<int> after, d_delta, rpn_delta;
  for (const auto& row : r.report.rows) {
    after.push_back(row.rpn_after);
    d_delta.push_back(row.d_after - row.d_before);
    rpn_delta.push_back(row.rpn_delta);
  }
  EXPECT_EQ(after, (std::vector<int>{63, 63, 54, 54, 50, 50, 50, 40}));
  EXPECT_EQ(d_delta, (std::vector<int>{-3, -3, -3, -2, -2, -2, -1, -1}));
  EXPECT_EQ(rpn_delta,
            (std::vector<int>{-189, -189, -162, -108, -100, -100, -50, -40}));
}

TEST(ApplyMitigations, Errors) {
  HazardProject p = bundled();
  EXPECT_THROW(apply_fmea_mitigations(p, {"nope"}), DomainError);

  HazardProject conflict = p;
  Mitigation extra{.id = "extra", .name = "Extra"};
  extra.fmea_targets.push_back({"fm1_quantized_hallucination", -1});
  conflict.mitigations.push_back(extra);
  EXPECT_THROW(apply_fmea_mitigations(
                   conflict, {"quantization_calibrated_uncertainty", "extra"}),
               DomainError);
  EXPECT_NO_THROW(apply_fmea_mitigations(conflict, {"extra"}));

  HazardProject too_far = p;
  too_far.mitigations[1].fmea_targets[0].detection_delta = -4;  // D 4 -> 0
  try {
    apply_fmea_mitigations(too_far, {too_far.mitigations[1].id});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("fm1_quantized_hallucination"),
              std::string::npos);
  }

  HazardProject zero = p;
  zero.mitigations[1].fmea_targets[0].detection_delta = 0;
  EXPECT_THROW(apply_fmea_mitigations(zero, {zero.mitigations[1].id}),
               DomainError);
}

TEST(ApplyMitigations, EmptySelectionYieldsEmptyReport) {
  auto r = apply_fmea_mitigations(bundled(), {});
  EXPECT_TRUE(r.report.rows.empty());
  EXPECT_EQ(r.project, bundled());
}

TEST(ApplyMitigationsProperty, SoundOnRandomProjects) {
  testing::Rng rng(4242);
  int rows = 0;
  for (int iter = 0; iter < 200; ++iter) {
    HazardProject p = testing::random_project(rng);
    auto r = apply_fmea_mitigations(p, all_mitigation_ids(p));
    for (const auto& row : r.report.rows) {
      ++rows;
      const FmeaEntry* before = p.find_entry(row.entry_id);
      const FmeaEntry* after = r.project.find_entry(row.entry_id);
      ASSERT_NE(before, nullptr);
      EXPECT_LE(row.rpn_after, row.rpn_before);
      EXPECT_EQ(after->rating.severity, before->rating.severity);
      EXPECT_EQ(after->rating.occurrence, before->rating.occurrence);
      EXPECT_GE(row.d_after, 1);
      EXPECT_EQ(row.rpn_after,
                row.severity * row.occurrence * row.d_after);
    }
  }
  EXPECT_GT(rows, 50);
}

}  // namespace
}  // namespace hysafe
