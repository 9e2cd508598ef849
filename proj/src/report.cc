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

#include "hysafe/report.h"

#include <algorithm>
#include <cstdlib>
#include <set>

#include <fmt/format.h>

#include "json.hpp"

namespace hysafe {
namespace {

using Json = nlohmann::ordered_json;

std::string cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string mode_cell(const std::string& label, const GuidewordSet& gws) {
  std::string g = describe_guidewords(gws);
  if (g.empty()) return cell(label);
  return cell(fmt::format("{} ({})", label, g));
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

double round12(double v) {
  return std::strtod(fmt::format("{:.12g}", v).c_str(), nullptr);
}

Json guideword_tokens(const GuidewordSet& gws) {
  Json arr = Json::array();
  for (Guideword g : gws) arr.push_back(std::string(guideword_token(g)));
  return arr;
}

Json fmea_json(const RankedFmea& ranked) {
  Json arr = Json::array();
  for (const auto& r : ranked.entries) {
    Json j;
    j["rank"] = r.rank;
    j["id"] = r.entry.id;
    j["element"] = r.entry.element;
    j["failure_mode"] = r.entry.failure_mode;
    j["guidewords"] = guideword_tokens(r.guidewords);
    j["severity"] = r.entry.rating.severity;
    j["occurrence"] = r.entry.rating.occurrence;
    j["detection"] = r.entry.rating.detection;
    j["rpn"] = r.rpn;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json interval_json(const WilsonInterval& w) {
  return Json::array({round12(w.lo), round12(w.hi)});
}

Json simulation_json(const SimulationReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["mitigated"] = r.mitigated;
  j["hazardous_trials"] = r.hazardous_trials;
  j["residual_rate"] = round12(r.residual_rate);
  j["wilson_95"] = interval_json(r.wilson_95);
  j["analytic_rate"] = round12(r.analytic_rate);
  Json modes = Json::array();
  for (const auto& m : r.modes) {
    Json mj;
    mj["entry"] = m.entry_id;
    mj["failure_mode"] = m.failure_mode;
    mj["occurrence"] = m.occurrence;
    mj["detection"] = m.detection;
    mj["injected"] = m.injected;
    mj["detected_by_monitor"] = m.detected_by_monitor;
    mj["detected_by_evaluator"] = m.detected_by_evaluator;
    mj["escaped"] = m.escaped;
    mj["residual_rate"] = round12(m.residual_rate);
    mj["wilson_95"] = interval_json(m.wilson_95);
    mj["analytic_rate"] = round12(m.analytic_rate);
    modes.push_back(std::move(mj));
  }
  j["modes"] = std::move(modes);
  return j;
}

}  // namespace

std::string render_fmea(const RankedFmea& ranked) {
  std::string out =
      "| System Element | AI Failure Mode (Guidewords) | Manifestation | "
      "Effect | Caused By | S | O | D | RPN |\n"
      "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : ranked.entries) {
    const auto& e = r.entry;
    out += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
                       cell(r.element_name), mode_cell(r.mode_label, r.guidewords),
                       cell(e.manifestation), cell(e.effect),
                       cell(e.caused_by), e.rating.severity,
                       e.rating.occurrence, e.rating.detection, r.rpn);
  }
  return out;
}

std::string render_fmea_delta(const FmeaDeltaReport& report) {
  std::string out =
      "| System Element | AI Failure Mode (Guidewords) | Mitigation Strategy | "
      "D | D Delta | RPN | RPN Delta |\n"
      "|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.rows) {
    out += fmt::format(
        "| {} | {} | {} | {}→{} | {} | {}→{} | {} |\n", cell(r.element_name),
        mode_cell(r.mode_label, r.guidewords),
        cell(r.mitigation_name.empty() ? r.mitigation_id : r.mitigation_name),
        r.d_before, r.d_after, r.d_after - r.d_before, r.rpn_before,
        r.rpn_after, r.rpn_delta);
  }
  return out;
}

std::string render_fta_dot(const FaultTree& tree,
                           const std::optional<CutSetReport>& cut_report) {
  std::set<std::string> single;
  if (cut_report) {
    single.insert(cut_report->single_points.begin(),
                  cut_report->single_points.end());
  }
  std::string out = fmt::format("digraph {} {{\n", dot_quote(tree.id));
  out += "  rankdir=TB;\n";
  for (const auto& node : tree.nodes) {
    if (node.is_gate()) {
      const Gate& g = node.gate();
      std::string label(gate_keyword(g.kind));
      label += "\n";
      label += g.label.empty() ? node.id : g.label;
      out += fmt::format(
          "  {} [shape={}, label={}];\n", dot_quote(node.id),
          g.kind == GateKind::kAnd ? kAndGateShape : kOrGateShape,
          dot_quote(label));
    } else {
      const BasicEvent& e = node.event();
      std::string label = e.label.empty() ? node.id : e.label;
      if (e.probability) label += fmt::format("\np={:.6g}", *e.probability);
      out += fmt::format("  {} [shape={}, label={}", dot_quote(node.id),
                         kEventShape, dot_quote(label));
      if (single.count(node.id)) {
        out += fmt::format(", color={}, penwidth=2", kSinglePointColor);
      }
      out += "];\n";
    }
  }
  for (const auto& node : tree.nodes) {
    if (!node.is_gate()) continue;
    for (const auto& child : node.gate().children) {
      out += fmt::format("  {} -> {};\n", dot_quote(node.id), dot_quote(child));
    }
  }
  out += "}\n";
  return out;
}

std::string render_architecture_dot(const ArchitectureModel& arch) {
  std::string out = fmt::format(
      "digraph {} {{\n", dot_quote(arch.name.empty() ? "architecture" : arch.name));
  out += "  rankdir=LR;\n";
  for (const auto& c : arch.components) {
    out += fmt::format("  {} [shape=box, label={}];\n", dot_quote(c.id),
                       dot_quote(c.name.empty() ? c.id : c.name));
  }
  for (const auto& p : arch.pseudo_elements) {
    out += fmt::format("  {} [shape=note, label={}];\n", dot_quote(p),
                       dot_quote(p));
  }
  for (const auto& itf : arch.interfaces) {
    for (const auto& consumer : itf.consumers) {
      out += fmt::format("  {} -> {} [label={}];\n", dot_quote(itf.producer),
                         dot_quote(consumer), dot_quote(itf.id));
    }
  }
  out += "}\n";
  return out;
}

std::string render_simulation_table(const SimulationReport& r) {
  std::string out = fmt::format(
      "simulation: {} trials, seed {}, {}\n\n", r.trials, r.seed,
      r.mitigated ? "mitigated" : "unmitigated");
  out +=
      "| FMEA Entry | Failure Mode | O | D | Injected | Monitor | Evaluator | "
      "Escaped | Residual | Wilson 95% | Analytic |\n"
      "|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& m : r.modes) {
    out += fmt::format(
        "| {} | {} | {} | {} | {} | {} | {} | {} | {:.6g} | [{:.6g}, {:.6g}] | "
        "{:.6g} |\n",
        m.entry_id, m.failure_mode, m.occurrence, m.detection, m.injected,
        m.detected_by_monitor, m.detected_by_evaluator, m.escaped,
        m.residual_rate, m.wilson_95.lo, m.wilson_95.hi, m.analytic_rate);
  }
  out += fmt::format(
      "\nhazardous trials: {} (residual {:.6g}, Wilson 95% [{:.6g}, {:.6g}], "
      "analytic {:.6g})\n",
      r.hazardous_trials, r.residual_rate, r.wilson_95.lo, r.wilson_95.hi,
      r.analytic_rate);
  return out;
}

std::string render_fmea_json(const RankedFmea& ranked) {
  Json j;
  j["fmea"] = fmea_json(ranked);
  return j.dump(2) + "\n";
}

std::string render_fmea_delta_json(const FmeaDeltaReport& report) {
  Json arr = Json::array();
  for (const auto& r : report.rows) {
    Json j;
    j["entry"] = r.entry_id;
    j["mitigation"] = r.mitigation_id;
    j["severity"] = r.severity;
    j["occurrence"] = r.occurrence;
    j["d_before"] = r.d_before;
    j["d_after"] = r.d_after;
    j["d_delta"] = r.d_after - r.d_before;
    j["rpn_before"] = r.rpn_before;
    j["rpn_after"] = r.rpn_after;
    j["rpn_delta"] = r.rpn_delta;
    arr.push_back(std::move(j));
  }
  Json j;
  j["fmea_delta"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string render_simulation_json(const SimulationReport& report) {
  return simulation_json(report).dump(2) + "\n";
}

std::string render_summary_json(const HazardProject& /*project*/,
                                const RankedFmea& ranked,
                                const std::optional<CutSetReport>& cut_report,
                                const std::optional<ProbabilityResult>& prob,
                                const std::optional<SimulationReport>& sim) {
  Json j;
  j["fmea"] = fmea_json(ranked);
  Json cuts = Json::array();
  Json singles = Json::array();
  if (cut_report) {
    for (const auto& s : cut_report->cut_sets) cuts.push_back(s);
    for (const auto& s : cut_report->single_points) singles.push_back(s);
  }
  j["cut_sets"] = std::move(cuts);
  j["single_points"] = std::move(singles);
  if (prob) {
    Json p;
    p["exact"] = round12(prob->exact);
    p["rare_event_upper"] = round12(prob->rare_event_upper);
    j["probability"] = std::move(p);
  } else {
    j["probability"] = nullptr;
  }
  j["simulation"] = sim ? simulation_json(*sim) : Json(nullptr);
  return j.dump(2) + "\n";
}

ReportBundle build_report_bundle(const HazardProject& project,
                                 const ReportOptions& options) {
  ReportBundle bundle;
  RankedFmea ranked = rank_fmea(project);
  bundle.fmea_markdown = render_fmea(ranked);
  bundle.fmea_delta_markdown = render_fmea_delta(
      apply_fmea_mitigations(project, all_mitigation_ids(project)).report);
  bundle.architecture_dot = render_architecture_dot(project.architecture);

  const FaultTree* tree = nullptr;
  if (options.tree_id) {
    tree = project.find_tree(*options.tree_id);
    if (!tree) {
      throw DomainError(fmt::format("unknown fault tree '{}'", *options.tree_id));
    }
  } else if (!project.trees.empty()) {
    tree = &project.trees.front();
  }

  std::optional<CutSetReport> cuts;
  std::optional<ProbabilityResult> prob;
  if (tree) {
    cuts = minimal_cut_sets(*tree, options.event_limit);
    bundle.fta_dot_before = render_fta_dot(*tree, cuts);
    auto mitigations = restrict_to_tree(*tree, project.mitigations);
    bool any = std::any_of(mitigations.begin(), mitigations.end(),
                           [](const Mitigation& m) {
                             return !m.fta_targets.empty();
                           });
    if (any) {
      FaultTree after = apply_fta_mitigations(*tree, mitigations);
      bundle.fta_dot_after =
          render_fta_dot(after, minimal_cut_sets(after, options.event_limit));
    }
    try {
      prob = top_event_probability(*tree, options.event_limit);
    } catch (const DomainError&) {
      prob.reset();  // some event carries no probability
    }
  } else {
    bundle.fta_dot_before = "digraph \"empty\" {\n}\n";
  }

  std::optional<SimulationReport> sim;
  if (options.run_simulation && project.sim_config) {
    sim = run_simulation(project, options.simulate_mitigated);
  }
  bundle.summary_json = render_summary_json(project, ranked, cuts, prob, sim);
  return bundle;
}

}  // namespace hysafe
