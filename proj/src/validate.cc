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

#include "hysafe/validate.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

namespace hysafe {
namespace {

class DiagnosticSink {
 public:
  explicit DiagnosticSink(const HazardProject* project) : project_(project) {}

  void error(std::string_view key, std::string location, std::string message) {
    add(Severity::kError, key, std::move(location), std::move(message));
  }
  void warning(std::string_view key, std::string location,
               std::string message) {
    add(Severity::kWarning, key, std::move(location), std::move(message));
  }

  std::vector<Diagnostic> take() { return std::move(out_); }

 private:
  void add(Severity severity, std::string_view key, std::string location,
           std::string message) {
    Diagnostic d;
    d.severity = severity;
    if (project_) {
      d.span = project_->location(key);
      // Field-level keys fall back to the enclosing declaration.
      if (!d.span) {
        auto dot = key.find('.');
        if (dot != std::string_view::npos) {
          d.span = project_->location(key.substr(0, dot));
        }
      }
    }
    d.location = std::move(location);
    d.message = std::move(message);
    out_.push_back(std::move(d));
  }

  const HazardProject* project_;
  std::vector<Diagnostic> out_;
};

void check_identifier(DiagnosticSink& sink, std::string_view kind,
                      const std::string& id, const std::string& key,
                      const std::string& where) {
  if (!is_identifier(id)) {
    sink.error(key, where, fmt::format("invalid {} identifier '{}'", kind, id));
  }
}

void check_architecture(const ArchitectureModel& arch, DiagnosticSink& sink) {
  std::set<std::string> elements;
  for (const auto& pseudo : arch.pseudo_elements) {
    std::string key = "pseudo_element:" + pseudo;
    std::string where = "pseudo_element " + pseudo;
    check_identifier(sink, "pseudo-element", pseudo, key, where);
    if (!elements.insert(pseudo).second) {
      sink.error(key, where, fmt::format("duplicate element id '{}'", pseudo));
    }
  }
  for (const auto& c : arch.components) {
    std::string key = "component:" + c.id;
    std::string where = "component " + c.id;
    check_identifier(sink, "component", c.id, key, where);
    if (!elements.insert(c.id).second) {
      sink.error(key, where, fmt::format("duplicate element id '{}'", c.id));
    }
  }

  std::map<std::string, const Interface*> interfaces;
  for (const auto& itf : arch.interfaces) {
    std::string key = "interface:" + itf.id;
    std::string where = "interface " + itf.id;
    check_identifier(sink, "interface", itf.id, key, where);
    if (!interfaces.emplace(itf.id, &itf).second) {
      sink.error(key, where, fmt::format("duplicate interface id '{}'", itf.id));
    }
    if (!arch.find_component(itf.producer)) {
      sink.error(key, where,
                 fmt::format("producer '{}' is not a declared component",
                             itf.producer));
    }
    if (itf.consumers.empty()) {
      sink.error(key, where, "interface has no consumers");
    }
    for (const auto& consumer : itf.consumers) {
      if (!arch.find_component(consumer)) {
        sink.error(key, where,
                   fmt::format("consumer '{}' is not a declared component",
                               consumer));
      }
    }
  }

  for (const auto& c : arch.components) {
    std::string key = "component:" + c.id;
    std::string where = "component " + c.id;
    for (const auto& in : c.inputs) {
      auto it = interfaces.find(in);
      if (it == interfaces.end()) {
        sink.error(key, where,
                   fmt::format("input '{}' is not a declared interface", in));
      } else {
        const auto& consumers = it->second->consumers;
        if (std::find(consumers.begin(), consumers.end(), c.id) ==
            consumers.end()) {
          sink.warning(key, where,
                       fmt::format("input '{}' does not list '{}' as consumer",
                                   in, c.id));
        }
      }
    }
    for (const auto& out : c.outputs) {
      auto it = interfaces.find(out);
      if (it == interfaces.end()) {
        sink.error(key, where,
                   fmt::format("output '{}' is not a declared interface", out));
      } else if (it->second->producer != c.id) {
        sink.warning(key, where,
                     fmt::format("output '{}' is produced by '{}'", out,
                                 it->second->producer));
      }
    }
  }
}

void check_taxonomy_block(const HazardProject& p, DiagnosticSink& sink) {
  std::set<std::string> ids;
  for (const auto& mode : p.taxonomy) {
    std::string key = "failure_mode:" + mode.id;
    std::string where = "failure_mode " + mode.id;
    check_identifier(sink, "failure mode", mode.id, key, where);
    if (!ids.insert(mode.id).second) {
      sink.error(key, where,
                 fmt::format("duplicate failure mode id '{}'", mode.id));
    }
    if (mode.guidewords.empty()) {
      sink.error(key, where,
                 fmt::format("failure mode '{}' maps to no guideword", mode.id));
    }
  }
}

void check_rating(DiagnosticSink& sink, const FmeaEntry& e) {
  const std::string where = "fmea " + e.id;
  auto check = [&](std::string_view field, int value) {
    if (!rating_in_range(value)) {
      sink.error(fmt::format("fmea:{}.{}", e.id, field), where,
                 fmt::format("{} out of range [1,10] (got {})", field, value));
    }
  };
  check("severity", e.rating.severity);
  check("occurrence", e.rating.occurrence);
  check("detection", e.rating.detection);
}

void check_fmea(const HazardProject& p, DiagnosticSink& sink) {
  std::set<std::string> ids;
  for (const auto& e : p.fmea) {
    std::string key = "fmea:" + e.id;
    std::string where = "fmea " + e.id;
    check_identifier(sink, "fmea entry", e.id, key, where);
    if (!ids.insert(e.id).second) {
      sink.error(key, where, fmt::format("duplicate fmea id '{}'", e.id));
    }
    if (!p.architecture.has_element(e.element)) {
      sink.error(key + ".element", where,
                 fmt::format("element '{}' is neither a component nor a "
                             "pseudo-element",
                             e.element));
    }
    if (!p.find_failure_mode(e.failure_mode)) {
      sink.error(key + ".mode", where,
                 fmt::format("failure mode '{}' is not declared in the "
                             "taxonomy",
                             e.failure_mode));
    }
    check_rating(sink, e);
  }
}

void check_tree(const FaultTree& tree, const HazardProject* project,
                DiagnosticSink& sink) {
  const std::string tkey = "fault_tree:" + tree.id;
  auto node_key = [&](const std::string& n) { return tkey + "/" + n; };
  auto node_where = [&](const std::string& n) {
    return "fault_tree " + tree.id + "/" + n;
  };

  std::unordered_map<std::string, const FaultNode*> index;
  for (const auto& node : tree.nodes) {
    check_identifier(sink, "node", node.id, node_key(node.id),
                     node_where(node.id));
    if (!index.emplace(node.id, &node).second) {
      sink.error(node_key(node.id), node_where(node.id),
                 fmt::format("duplicate node id '{}'", node.id));
    }
  }

  for (const auto& node : tree.nodes) {
    const std::string key = node_key(node.id);
    const std::string where = node_where(node.id);
    if (node.is_gate()) {
      const Gate& g = node.gate();
      if (g.children.empty()) {
        sink.error(key, where,
                   fmt::format("gate '{}' has no children", node.id));
      }
      std::set<std::string> seen;
      for (const auto& child : g.children) {
        if (!index.count(child)) {
          sink.error(key, where,
                     fmt::format("gate '{}' references undeclared node '{}'",
                                 node.id, child));
        } else if (!seen.insert(child).second) {
          sink.warning(key, where,
                       fmt::format("gate '{}' lists child '{}' twice", node.id,
                                   child));
        }
      }
    } else {
      const BasicEvent& e = node.event();
      if (e.probability &&
          !(*e.probability >= 0.0 && *e.probability <= 1.0)) {
        sink.error(key, where,
                   fmt::format("probability of '{}' outside [0,1]", node.id));
      }
      if (e.fmea_link && project && !project->find_entry(*e.fmea_link)) {
        sink.error(key, where,
                   fmt::format("event '{}' links undeclared fmea entry '{}'",
                               node.id, *e.fmea_link));
      }
    }
  }

  if (!index.count(tree.top)) {
    sink.error(tkey, "fault_tree " + tree.id,
               fmt::format("top node '{}' is not declared", tree.top));
    return;
  }

  // Cycle detection and reachability from the top node.
  enum class Mark { kNone, kActive, kDone };
  std::unordered_map<std::string, Mark> marks;
  std::set<std::string> reported;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) return;
    Mark& m = marks[id];
    if (m == Mark::kDone) return;
    if (m == Mark::kActive) {
      if (reported.insert(id).second) {
        sink.error(node_key(id), node_where(id),
                   fmt::format("cycle through node '{}'", id));
      }
      return;
    }
    m = Mark::kActive;
    if (it->second->is_gate()) {
      for (const auto& child : it->second->gate().children) visit(child);
    }
    marks[id] = Mark::kDone;
  };
  visit(tree.top);

  for (const auto& node : tree.nodes) {
    if (!marks.count(node.id)) {
      sink.warning(node_key(node.id), node_where(node.id),
                   fmt::format("node '{}' is unreachable from top '{}'",
                               node.id, tree.top));
    }
  }
}

void check_trees(const HazardProject& p, DiagnosticSink& sink) {
  std::set<std::string> ids;
  for (const auto& tree : p.trees) {
    std::string key = "fault_tree:" + tree.id;
    std::string where = "fault_tree " + tree.id;
    check_identifier(sink, "fault tree", tree.id, key, where);
    if (!ids.insert(tree.id).second) {
      sink.error(key, where, fmt::format("duplicate fault tree id '{}'", tree.id));
    }
    check_tree(tree, &p, sink);
  }
}

void check_mitigations(const HazardProject& p, DiagnosticSink& sink) {
  std::set<std::string> ids;
  std::map<std::string, std::string> entry_owner;
  std::map<std::pair<std::string, std::string>, std::string> event_owner;
  std::set<std::pair<std::string, std::string>> monitor_labels;

  for (const auto& m : p.mitigations) {
    std::string key = "mitigation:" + m.id;
    std::string where = "mitigation " + m.id;
    check_identifier(sink, "mitigation", m.id, key, where);
    if (!ids.insert(m.id).second) {
      sink.error(key, where, fmt::format("duplicate mitigation id '{}'", m.id));
    }

    for (const auto& t : m.fmea_targets) {
      const FmeaEntry* entry = p.find_entry(t.entry);
      if (!entry) {
        sink.error(key, where,
                   fmt::format("fmea target '{}' is not declared", t.entry));
        continue;
      }
      if (t.detection_delta >= 0) {
        sink.error(key, where,
                   fmt::format("detection delta for '{}' must be negative "
                               "(got {})",
                               t.entry, t.detection_delta));
      } else if (entry->rating.detection + t.detection_delta < kMinRating) {
        sink.error(key, where,
                   fmt::format("detection of '{}' would drop below 1 ({} {})",
                               t.entry, entry->rating.detection,
                               t.detection_delta));
      }
      auto [it, inserted] = entry_owner.emplace(t.entry, m.id);
      if (!inserted) {
        sink.warning(key, where,
                     fmt::format("fmea entry '{}' is also targeted by '{}'; "
                                 "the two cannot be applied together",
                                 t.entry, it->second));
      }
    }

    for (const auto& t : m.fta_targets) {
      bool found = false;
      for (const auto& tree : p.trees) {
        const FaultNode* node = tree.find(t.event);
        if (!node) continue;
        found = true;
        if (node->is_gate()) {
          sink.error(key, where,
                     fmt::format("fta target '{}' in tree '{}' is a gate, not "
                                 "a basic event",
                                 t.event, tree.id));
          continue;
        }
        auto [it, inserted] =
            event_owner.emplace(std::pair{tree.id, t.event}, m.id);
        if (!inserted) {
          sink.warning(key, where,
                       fmt::format("event '{}' in tree '{}' is also targeted "
                                   "by '{}'",
                                   t.event, tree.id, it->second));
        }
        if (!monitor_labels.emplace(tree.id, t.monitor_label).second) {
          sink.error(key, where,
                     fmt::format("duplicate monitor label '{}' in tree '{}'",
                                 t.monitor_label, tree.id));
        }
      }
      if (!found) {
        sink.error(key, where,
                   fmt::format("fta target '{}' is not a node of any fault "
                               "tree",
                               t.event));
      }
      if (t.monitor_label.empty()) {
        sink.error(key, where,
                   fmt::format("fta target '{}' has an empty monitor label",
                               t.event));
      }
      if (t.miss_probability &&
          !(*t.miss_probability >= 0.0 && *t.miss_probability <= 1.0)) {
        sink.error(key, where,
                   fmt::format("miss probability for '{}' outside [0,1]",
                               t.event));
      }
    }
  }
}

void check_simulation(const HazardProject& p, DiagnosticSink& sink) {
  if (!p.sim_config) return;
  const auto& c = *p.sim_config;
  if (c.trials < 1) {
    sink.error("simulation", "simulation",
               fmt::format("trials must be >= 1 (got {})", c.trials));
  }
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(c.occurrence_scale)) {
    sink.error("simulation", "simulation", "occurrence_scale must be > 0");
  }
  if (!positive(c.detection_scale)) {
    sink.error("simulation", "simulation", "detection_scale must be > 0");
  }
}

}  // namespace

std::string_view severity_name(Severity s) {
  return s == Severity::kError ? "error" : "warning";
}

std::string format_diagnostic(const Diagnostic& d) {
  if (d.span) {
    return fmt::format("{}:{}:{}: {}: {} [{}]", d.span->file, d.span->line,
                       d.span->column, severity_name(d.severity), d.message,
                       d.location);
  }
  return fmt::format("{}: {} [{}]", severity_name(d.severity), d.message,
                     d.location);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) {
                       return d.severity == Severity::kError;
                     });
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     // Located diagnostics first, in source order.
                     if (a.span.has_value() != b.span.has_value()) {
                       return a.span.has_value();
                     }
                     return std::tie(a.span, a.location, a.message) <
                            std::tie(b.span, b.location, b.message);
                   });
}

std::vector<Diagnostic> validate_tree(const FaultTree& tree,
                                      const HazardProject* project) {
  DiagnosticSink sink(project);
  check_tree(tree, project, sink);
  auto out = sink.take();
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> validate_project(const HazardProject& project) {
  DiagnosticSink sink(&project);
  check_architecture(project.architecture, sink);
  check_taxonomy_block(project, sink);
  check_fmea(project, sink);
  check_trees(project, sink);
  check_mitigations(project, sink);
  check_simulation(project, sink);
  auto out = sink.take();
  sort_diagnostics(out);
  return out;
}

}  // namespace hysafe
