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

// Python bindings. Results cross the boundary as plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hysafe/cli.h"
#include "hysafe/fmea.h"
#include "hysafe/fta.h"
#include "hysafe/kinematics.h"
#include "hysafe/parser.h"
#include "hysafe/report.h"
#include "hysafe/simulation.h"
#include "hysafe/validate.h"

namespace py = pybind11;
using namespace hysafe;

namespace {

struct HsaParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

HazardProject unwrap(ParseResult r) {
  if (!r.ok()) {
    std::string text;
    for (const auto& e : r.errors) text += format_parse_error(e) + "\n";
    if (!text.empty()) text.pop_back();
    throw HsaParseError(text);
  }
  return std::move(*r.project);
}

const FaultTree& pick_tree(const HazardProject& p,
                           const std::optional<std::string>& id) {
  if (id) {
    if (const FaultTree* t = p.find_tree(*id)) return *t;
    throw DomainError("unknown fault tree '" + *id + "'");
  }
  if (p.trees.empty()) throw DomainError("project declares no fault tree");
  return p.trees.front();
}

py::list guidewords(const GuidewordSet& set) {
  py::list out;
  for (Guideword g : set) out.append(std::string(guideword_token(g)));
  return out;
}

py::dict ranked_dict(const RankedEntry& e) {
  py::dict d;
  d["rank"] = e.rank;
  d["id"] = e.entry.id;
  d["element"] = e.element_name;
  d["failure_mode"] = e.mode_label;
  d["guidewords"] = guidewords(e.guidewords);
  d["severity"] = e.entry.rating.severity;
  d["occurrence"] = e.entry.rating.occurrence;
  d["detection"] = e.entry.rating.detection;
  d["rpn"] = e.rpn;
  return d;
}

py::dict delta_dict(const FmeaDeltaRow& r) {
  py::dict d;
  d["id"] = r.entry_id;
  d["mitigation"] = r.mitigation_id;
  d["element"] = r.element_name;
  d["failure_mode"] = r.mode_label;
  d["d_before"] = r.d_before;
  d["d_after"] = r.d_after;
  d["rpn_before"] = r.rpn_before;
  d["rpn_after"] = r.rpn_after;
  d["rpn_delta"] = r.rpn_delta;
  return d;
}

py::dict simulation_dict(const SimulationReport& r) {
  py::list modes;
  for (const auto& m : r.modes) {
    py::dict d;
    d["entry"] = m.entry_id;
    d["failure_mode"] = m.failure_mode;
    d["occurrence"] = m.occurrence;
    d["detection"] = m.detection;
    d["injected"] = m.injected;
    d["detected_by_monitor"] = m.detected_by_monitor;
    d["detected_by_evaluator"] = m.detected_by_evaluator;
    d["escaped"] = m.escaped;
    d["residual_rate"] = m.residual_rate;
    d["wilson_95"] = py::make_tuple(m.wilson_95.lo, m.wilson_95.hi);
    d["analytic_rate"] = m.analytic_rate;
    modes.append(d);
  }
  py::dict d;
  d["trials"] = r.trials;
  d["seed"] = r.seed;
  d["mitigated"] = r.mitigated;
  d["hazardous_trials"] = r.hazardous_trials;
  d["residual_rate"] = r.residual_rate;
  d["wilson_95"] = py::make_tuple(r.wilson_95.lo, r.wilson_95.hi);
  d["analytic_rate"] = r.analytic_rate;
  d["modes"] = modes;
  return d;
}

std::vector<Waypoint> to_waypoints(
    const std::vector<std::tuple<double, double, double>>& points) {
  std::vector<Waypoint> out;
  for (auto [x, y, t] : points) out.push_back({x, y, t});
  return out;
}

const char* quantity_name(PhysicsVerdict::Quantity q) {
  switch (q) {
    case PhysicsVerdict::Quantity::kLateral: return "lateral";
    case PhysicsVerdict::Quantity::kLongitudinal: return "longitudinal";
    case PhysicsVerdict::Quantity::kDegenerate: return "degenerate";
    case PhysicsVerdict::Quantity::kNone: break;
  }
  return "none";
}

}  // namespace

PYBIND11_MODULE(_hysafe, m) {
  m.doc() = "FMEA, fault-tree and fault-injection analysis of .hsa models";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<HsaParseError>(m, "ParseError", PyExc_ValueError);

  m.def("compute_rpn", [](int s, int o, int d) {
    return compute_rpn(RiskRating{s, o, d});
  }, py::arg("severity"), py::arg("occurrence"), py::arg("detection"));
  m.def("occurrence_probability", &occurrence_probability,
        py::arg("occurrence"), py::arg("scale") = 2.0);
  m.def("miss_probability", &miss_probability, py::arg("detection"),
        py::arg("scale") = 10.0);

  m.def("physics_check",
        [](const std::vector<std::tuple<double, double, double>>& points,
           double max_lateral, double max_longitudinal) {
          TrajectoryCandidate c(to_waypoints(points), 1.0);
          auto v = physics_check(c, {max_lateral, max_longitudinal});
          py::dict d;
          d["pass"] = v.pass;
          d["quantity"] = quantity_name(v.quantity);
          d["waypoint"] = v.waypoint;
          d["value"] = v.value;
          d["reason"] = v.reason;
          return d;
        },
        py::arg("waypoints"), py::arg("max_lateral") = 9.0,
        py::arg("max_longitudinal") = 10.0,
        "waypoints: list of (x, y, t) in metres and seconds");

  m.def("arbitrate",
        [](const std::vector<std::tuple<double, bool, bool>>& candidates)
            -> std::optional<std::size_t> {
          std::vector<AssessedCandidate> assessed;
          for (auto [conf, monitor, evaluator] : candidates) {
            assessed.push_back(
                {TrajectoryCandidate({{0, 0, 0}, {1, 0, 1}}, conf), monitor,
                 evaluator});
          }
          return arbitrate(assessed).selected;
        },
        py::arg("candidates"),
        "candidates: list of (confidence, monitor_pass, evaluator_pass); "
        "returns the selected index or None for the fallback");

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));

  py::class_<HazardProject>(m, "Project")
      .def_static("from_text", [](const std::string& text,
                                  const std::string& origin) {
        return unwrap(parse(text, origin));
      }, py::arg("text"), py::arg("origin") = "<string>")
      .def_static("from_file", [](const std::string& path) {
        return unwrap(parse_file(path));
      }, py::arg("path"))
      .def_static("from_files", [](const std::vector<std::string>& paths) {
        return unwrap(parse_files(paths));
      }, py::arg("paths"))
      .def("serialize", &serialize)
      .def("__eq__", [](const HazardProject& a, const HazardProject& b) {
        return a == b;
      })
      .def("validate", [](const HazardProject& p) {
        py::list out;
        for (const auto& d : validate_project(p)) {
          py::dict item;
          item["severity"] = std::string(severity_name(d.severity));
          item["location"] = d.location;
          item["message"] = d.message;
          item["text"] = format_diagnostic(d);
          out.append(item);
        }
        return out;
      })
      .def_property_readonly("tree_ids", [](const HazardProject& p) {
        std::vector<std::string> ids;
        for (const auto& t : p.trees) ids.push_back(t.id);
        return ids;
      })
      .def_property_readonly("mitigation_ids", &all_mitigation_ids)
      .def("rank_fmea", [](const HazardProject& p) {
        py::list out;
        for (const auto& e : rank_fmea(p).entries) out.append(ranked_dict(e));
        return out;
      })
      .def("apply_fmea_mitigations",
           [](const HazardProject& p,
              std::optional<std::vector<std::string>> ids) {
             auto r = apply_fmea_mitigations(p, ids ? *ids : all_mitigation_ids(p));
             py::list rows;
             for (const auto& row : r.report.rows) rows.append(delta_dict(row));
             return py::make_tuple(rows, r.project);
           },
           py::arg("mitigations") = py::none(),
           "Returns (delta rows, mitigated project); None selects all")
      .def("minimal_cut_sets",
           [](const HazardProject& p, std::optional<std::string> tree,
              std::size_t limit, bool mitigated) {
             FaultTree t = pick_tree(p, tree);
             if (mitigated) {
               t = apply_fta_mitigations(t, restrict_to_tree(t, p.mitigations));
             }
             auto r = minimal_cut_sets(t, limit);
             py::dict d;
             d["cut_sets"] = r.cut_sets;
             d["single_points"] = r.single_points;
             return d;
           },
           py::arg("tree") = py::none(),
           py::arg("event_limit") = kDefaultEventLimit,
           py::arg("mitigated") = false)
      .def("top_event_probability",
           [](const HazardProject& p, std::optional<std::string> tree,
              std::size_t limit, bool mitigated) {
             FaultTree t = pick_tree(p, tree);
             if (mitigated) {
               t = apply_fta_mitigations(t, restrict_to_tree(t, p.mitigations));
             }
             auto r = top_event_probability(t, limit);
             return py::make_tuple(r.exact, r.rare_event_upper);
           },
           py::arg("tree") = py::none(),
           py::arg("event_limit") = kDefaultEventLimit,
           py::arg("mitigated") = false,
           "Returns (exact, rare-event upper bound)")
      .def("simulate",
           [](const HazardProject& p, bool mitigated,
              std::optional<std::int64_t> trials,
              std::optional<std::uint64_t> seed, unsigned threads) {
             HazardProject q = p;
             if (!q.sim_config && (trials || seed)) {
               q.sim_config = SimulationConfig{};
             }
             if (q.sim_config && trials) q.sim_config->trials = *trials;
             if (q.sim_config && seed) q.sim_config->seed = *seed;
             SimulationReport r;
             {
               py::gil_scoped_release release;
               r = run_simulation(q, mitigated,
                                  SimulationOptions{.threads = threads});
             }
             return simulation_dict(r);
           },
           py::arg("mitigated") = false, py::arg("trials") = py::none(),
           py::arg("seed") = py::none(), py::arg("threads") = 0)
      .def("summary_json",
           [](const HazardProject& p, bool simulate) {
             ReportOptions opts;
             opts.run_simulation = simulate;
             return build_report_bundle(p, opts).summary_json;
           },
           py::arg("simulate") = false);
}
