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

#include "hysafe/model.h"

#include <algorithm>

namespace hysafe {
namespace {

struct GuidewordInfo {
  Guideword guideword;
  std::string_view token;
  std::string_view prefix;
  std::string_view head;
};

constexpr GuidewordInfo kGuidewordInfo[] = {
    {Guideword::kIncorrectValue, "IncorrectValue", "Incorrect", "Value"},
    {Guideword::kMissingValue, "MissingValue", "Missing", "Value"},
    {Guideword::kValueTooHigh, "ValueTooHigh", "Value too", "high"},
    {Guideword::kValueTooLow, "ValueTooLow", "Value too", "low"},
    {Guideword::kIncorrectTiming, "IncorrectTiming", "Incorrect", "Timing"},
};

const GuidewordInfo& info(Guideword g) {
  return kGuidewordInfo[static_cast<int>(g)];
}

std::string phrase(const GuidewordInfo& i) {
  return std::string(i.prefix) + " " + std::string(i.head);
}

template <class T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::find_if(items.begin(), items.end(),
                         [id](const T& item) { return item.id == id; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

std::string_view guideword_token(Guideword g) { return info(g).token; }

std::optional<Guideword> parse_guideword(std::string_view token) {
  for (const auto& i : kGuidewordInfo) {
    if (i.token == token) return i.guideword;
  }
  return std::nullopt;
}

std::string_view guideword_phrase(Guideword g) {
  static const std::string kPhrases[] = {
      phrase(kGuidewordInfo[0]), phrase(kGuidewordInfo[1]),
      phrase(kGuidewordInfo[2]), phrase(kGuidewordInfo[3]),
      phrase(kGuidewordInfo[4])};
  return kPhrases[static_cast<int>(g)];
}

std::string describe_guidewords(const GuidewordSet& set) {
  if (set.empty()) return {};
  if (set.size() == 1) return std::string(guideword_phrase(*set.begin()));

  const auto& first = info(*set.begin());
  bool same_prefix = std::all_of(set.begin(), set.end(), [&](Guideword g) {
    return info(g).prefix == first.prefix;
  });
  bool same_head = std::all_of(set.begin(), set.end(), [&](Guideword g) {
    return info(g).head == first.head;
  });

  std::string out;
  if (same_prefix) {
    out = std::string(first.prefix) + " ";
    for (Guideword g : set) {
      if (g != *set.begin()) out += "/";
      out += info(g).head;
    }
  } else if (same_head) {
    for (Guideword g : set) {
      if (g != *set.begin()) out += " or ";
      out += info(g).prefix;
    }
    out += " ";
    out += first.head;
  } else {
    for (Guideword g : set) {
      if (g != *set.begin()) out += "/";
      out += guideword_phrase(g);
    }
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9') || c == '-';
  });
}

std::string_view gate_keyword(GateKind kind) {
  return kind == GateKind::kAnd ? "AND" : "OR";
}

const Component* ArchitectureModel::find_component(std::string_view id) const {
  return find_by_id(components, id);
}

bool ArchitectureModel::has_element(std::string_view id) const {
  return find_component(id) != nullptr ||
         std::find(pseudo_elements.begin(), pseudo_elements.end(), id) !=
             pseudo_elements.end();
}

const FaultNode* FaultTree::find(std::string_view node_id) const {
  return find_by_id(nodes, node_id);
}

const AiFailureMode* HazardProject::find_failure_mode(
    std::string_view id) const {
  return find_by_id(taxonomy, id);
}

const FmeaEntry* HazardProject::find_entry(std::string_view id) const {
  return find_by_id(fmea, id);
}

const FaultTree* HazardProject::find_tree(std::string_view id) const {
  return find_by_id(trees, id);
}

const Mitigation* HazardProject::find_mitigation(std::string_view id) const {
  return find_by_id(mitigations, id);
}

std::optional<SourceSpan> HazardProject::location(std::string_view key) const {
  auto it = locations.find(key);
  if (it == locations.end()) return std::nullopt;
  return it->second;
}

}  // namespace hysafe
