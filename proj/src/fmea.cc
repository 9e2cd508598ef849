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

#include "hysafe/fmea.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

namespace hysafe {

int compute_rpn(const RiskRating& r) {
  if (!rating_in_range(r.severity) || !rating_in_range(r.occurrence) ||
      !rating_in_range(r.detection)) {
    throw DomainError(fmt::format(
        "rating (S={}, O={}, D={}) outside [1,10]", r.severity, r.occurrence,
        r.detection));
  }
  return r.severity * r.occurrence * r.detection;
}

std::string element_display_name(const HazardProject& project,
                                 const std::string& element) {
  const Component* c = project.architecture.find_component(element);
  if (c && !c->name.empty()) return c->name;
  if (c) return element;
  // Pseudo-elements have no name field; split CamelCase ids into words.
  std::string out;
  for (std::size_t i = 0; i < element.size(); ++i) {
    char ch = element[i];
    if (ch == '_') {
      out += ' ';
      continue;
    }
    bool upper = ch >= 'A' && ch <= 'Z';
    bool prev_lower = i > 0 && element[i - 1] >= 'a' && element[i - 1] <= 'z';
    if (upper && prev_lower) out += ' ';
    out += ch;
  }
  return out;
}

RankedFmea rank_fmea(const HazardProject& project) {
  RankedFmea out;
  out.entries.reserve(project.fmea.size());
  for (const auto& e : project.fmea) {
    RankedEntry r;
    r.entry = e;
    try {
      r.rpn = compute_rpn(e.rating);
    } catch (const DomainError& err) {
      throw DomainError(fmt::format("fmea '{}': {}", e.id, err.what()));
    }
    r.element_name = element_display_name(project, e.element);
    if (const AiFailureMode* mode = project.find_failure_mode(e.failure_mode)) {
      r.mode_label = mode->label;
      r.guidewords = mode->guidewords;
    }
    out.entries.push_back(std::move(r));
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              return std::make_tuple(-a.rpn, -a.entry.rating.severity,
                                     -a.entry.rating.occurrence,
                                     std::cref(a.entry.id)) <
                     std::make_tuple(-b.rpn, -b.entry.rating.severity,
                                     -b.entry.rating.occurrence,
                                     std::cref(b.entry.id));
            });
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    out.entries[i].rank = static_cast<int>(i + 1);
  }
  return out;
}

std::vector<Diagnostic> check_taxonomy(const HazardProject& project) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string key, std::string where, std::string message) {
    Diagnostic d;
    d.severity = Severity::kError;
    d.span = project.location(key);
    d.location = std::move(where);
    d.message = std::move(message);
    out.push_back(std::move(d));
  };
  for (const auto& mode : project.taxonomy) {
    if (mode.guidewords.empty()) {
      add("failure_mode:" + mode.id, "failure_mode " + mode.id,
          fmt::format("failure mode '{}' maps to no guideword", mode.id));
    }
  }
  for (const auto& e : project.fmea) {
    if (!project.find_failure_mode(e.failure_mode)) {
      add("fmea:" + e.id + ".mode", "fmea " + e.id,
          fmt::format("failure mode '{}' is not declared in the taxonomy",
                      e.failure_mode));
    }
  }
  sort_diagnostics(out);
  return out;
}

std::vector<std::string> all_mitigation_ids(const HazardProject& project) {
  std::vector<std::string> ids;
  ids.reserve(project.mitigations.size());
  for (const auto& m : project.mitigations) ids.push_back(m.id);
  return ids;
}

FmeaMitigationResult apply_fmea_mitigations(
    const HazardProject& project,
    const std::vector<std::string>& mitigation_ids) {
  std::set<std::string> selected(mitigation_ids.begin(), mitigation_ids.end());

  // entry id -> (mitigation, delta)
  std::map<std::string, std::pair<const Mitigation*, int>> plan;
  for (const auto& id : selected) {
    const Mitigation* m = project.find_mitigation(id);
    if (!m) throw DomainError(fmt::format("unknown mitigation '{}'", id));
  }
  // Iterate in declaration order so conflict messages are stable.
  for (const auto& m : project.mitigations) {
    if (!selected.count(m.id)) continue;
    for (const auto& t : m.fmea_targets) {
      const FmeaEntry* e = project.find_entry(t.entry);
      if (!e) {
        throw DomainError(fmt::format("mitigation '{}' targets unknown fmea "
                                      "entry '{}'",
                                      m.id, t.entry));
      }
      if (t.detection_delta >= 0) {
        throw DomainError(fmt::format("mitigation '{}': detection delta for "
                                      "'{}' must be negative (got {})",
                                      m.id, t.entry, t.detection_delta));
      }
      if (e->rating.detection + t.detection_delta < kMinRating) {
        throw DomainError(fmt::format(
            "mitigation '{}' would lower detection of '{}' below 1 ({} {})",
            m.id, t.entry, e->rating.detection, t.detection_delta));
      }
      auto [it, inserted] = plan.emplace(t.entry, std::pair{&m, t.detection_delta});
      if (!inserted) {
        throw DomainError(fmt::format(
            "mitigations '{}' and '{}' both target fmea entry '{}'",
            it->second.first->id, m.id, t.entry));
      }
    }
  }

  FmeaMitigationResult result;
  result.project = project;
  for (auto& e : result.project.fmea) {
    auto it = plan.find(e.id);
    if (it != plan.end()) e.rating.detection += it->second.second;
  }

  RankedFmea before = rank_fmea(project);
  for (const auto& r : before.entries) {
    auto it = plan.find(r.entry.id);
    if (it == plan.end()) continue;
    const Mitigation& m = *it->second.first;
    FmeaDeltaRow row;
    row.entry_id = r.entry.id;
    row.mitigation_id = m.id;
    row.mitigation_name = m.name;
    row.element_name = r.element_name;
    row.mode_label = r.mode_label;
    row.guidewords = r.guidewords;
    row.severity = r.entry.rating.severity;
    row.occurrence = r.entry.rating.occurrence;
    row.d_before = r.entry.rating.detection;
    row.d_after = row.d_before + it->second.second;
    row.rpn_before = r.rpn;
    row.rpn_after = compute_rpn({row.severity, row.occurrence, row.d_after});
    row.rpn_delta = row.rpn_after - row.rpn_before;
    result.report.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace hysafe
