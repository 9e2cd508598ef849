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

// Risk priority numbers, ranking, guideword-taxonomy checks and
// post-mitigation detection deltas.

#ifndef HYSAFE_FMEA_H_
#define HYSAFE_FMEA_H_

#include <string>
#include <vector>

#include "hysafe/model.h"
#include "hysafe/validate.h"

namespace hysafe {

/// S * O * D, in [1, 1000]. Throws DomainError for a rating outside [1,10].
int compute_rpn(const RiskRating& rating);

struct RankedEntry {
  FmeaEntry entry;
  int rpn = 0;
  int rank = 0;  // 1-based
  // Resolved for rendering; empty when the reference does not resolve.
  std::string element_name;
  std::string mode_label;
  GuidewordSet guidewords;
};

struct RankedFmea {
  std::vector<RankedEntry> entries;
};

/// Sorts by RPN descending; ties go to higher S, then higher O, then the
/// lexicographically smaller entry id.
RankedFmea rank_fmea(const HazardProject& project);

/// One ERROR per FMEA entry whose failure mode is undeclared and one per
/// failure mode with no guideword.
std::vector<Diagnostic> check_taxonomy(const HazardProject& project);

struct FmeaDeltaRow {
  std::string entry_id;
  std::string mitigation_id;
  std::string mitigation_name;
  std::string element_name;
  std::string mode_label;
  GuidewordSet guidewords;
  int severity = 0;
  int occurrence = 0;
  int d_before = 0;
  int d_after = 0;
  int rpn_before = 0;
  int rpn_after = 0;
  int rpn_delta = 0;  // rpn_after - rpn_before, <= 0
};

struct FmeaDeltaReport {
  std::vector<FmeaDeltaRow> rows;  // in pre-mitigation rank order
};

struct FmeaMitigationResult {
  FmeaDeltaReport report;
  HazardProject project;  // copy with the detection ratings lowered
};

/// Applies the detection deltas of the selected mitigations. Untargeted
/// entries are absent from the report and unchanged in the returned
/// project. Throws DomainError for an unknown id, for two selected
/// mitigations targeting the same entry, or for a delta that would take
/// D below 1 (or is not negative).
FmeaMitigationResult apply_fmea_mitigations(
    const HazardProject& project, const std::vector<std::string>& mitigation_ids);

std::vector<std::string> all_mitigation_ids(const HazardProject& project);

/// Display name for an FMEA element: the component name when set,
/// otherwise the id.
std::string element_display_name(const HazardProject& project,
                                 const std::string& element);

}  // namespace hysafe

#endif  // HYSAFE_FMEA_H_
