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

#include "hysafe/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "hysafe/fmea.h"
#include "hysafe/fta.h"
#include "hysafe/parser.h"
#include "hysafe/report.h"
#include "hysafe/simulation.h"
#include "hysafe/validate.h"

namespace hysafe {
namespace {

namespace fs = std::filesystem;

int code(ExitCode c) { return static_cast<int>(c); }

/// Thrown to leave a command with a given exit code after reporting.
struct Exit {
  ExitCode code;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
};

HazardProject load(const std::vector<std::string>& paths, Context& ctx) {
  ParseResult parsed = parse_files(paths);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) ctx.err << format_parse_error(e) << "\n";
    // Literal range violations are findings about the model, not about the
    // input syntax.
    throw Exit{parsed.only_range_errors() ? ExitCode::kFindings
                                          : ExitCode::kUsage};
  }
  return std::move(*parsed.project);
}

std::vector<Diagnostic> report_diagnostics(const HazardProject& project,
                                           Context& ctx) {
  auto diagnostics = validate_project(project);
  for (const auto& d : diagnostics) ctx.err << format_diagnostic(d) << "\n";
  return diagnostics;
}

HazardProject load_valid(const std::vector<std::string>& paths, Context& ctx) {
  HazardProject project = load(paths, ctx);
  if (has_errors(report_diagnostics(project, ctx))) {
    throw Exit{ExitCode::kFindings};
  }
  return project;
}

std::size_t event_limit(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HYSAFE_EVENT_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw DomainError(fmt::format("HYSAFE_EVENT_LIMIT='{}' is not a positive "
                                  "integer",
                                  env));
  }
  return kDefaultEventLimit;
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) ids.push_back(item);
  }
  return ids;
}

/// Resolves `--mitigate` to mitigation ids; "all" selects every mitigation.
std::vector<std::string> selected_mitigations(const HazardProject& project,
                                              const std::string& selection) {
  if (selection == "all") return all_mitigation_ids(project);
  auto ids = split_ids(selection);
  for (const auto& id : ids) {
    if (!project.find_mitigation(id)) {
      throw DomainError(fmt::format("unknown mitigation '{}'", id));
    }
  }
  return ids;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError(fmt::format("cannot write '{}'", path));
  f << content;
}

std::string join(const std::vector<std::string>& items,
                 std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::vector<std::string> paths;
};

int cmd_validate(const ValidateArgs& a, Context& ctx) {
  HazardProject project = load(a.paths, ctx);
  auto diagnostics = report_diagnostics(project, ctx);
  std::size_t errors = std::count_if(
      diagnostics.begin(), diagnostics.end(),
      [](const Diagnostic& d) { return d.severity == Severity::kError; });
  ctx.out << fmt::format(
      "{}: {} components, {} failure modes, {} fmea entries, {} fault trees, "
      "{} mitigations: {}\n",
      join(a.paths), project.architecture.components.size(),
      project.taxonomy.size(), project.fmea.size(), project.trees.size(),
      project.mitigations.size(),
      errors ? fmt::format("{} error(s)", errors) : std::string("ok"));
  return code(errors ? ExitCode::kFindings : ExitCode::kOk);
}

struct FmeaArgs {
  std::vector<std::string> paths;
  std::optional<std::string> mitigate;
  std::string format = "md";
};

int cmd_fmea(const FmeaArgs& a, Context& ctx) {
  HazardProject project = load_valid(a.paths, ctx);
  const bool json = a.format == "json";
  if (a.mitigate) {
    auto ids = selected_mitigations(project, *a.mitigate);
    auto result = apply_fmea_mitigations(project, ids);
    ctx.out << (json ? render_fmea_delta_json(result.report)
                     : render_fmea_delta(result.report));
  } else {
    RankedFmea ranked = rank_fmea(project);
    ctx.out << (json ? render_fmea_json(ranked) : render_fmea(ranked));
  }
  return code(ExitCode::kOk);
}

struct FtaArgs {
  std::vector<std::string> paths;
  std::optional<std::string> tree;
  std::optional<std::string> mitigate;
  bool cutsets = false;
  bool prob = false;
  std::optional<std::string> dot;
  std::optional<std::size_t> event_limit;
};

void print_cut_sets(const CutSetReport& r, Context& ctx) {
  ctx.out << fmt::format("minimal cut sets: {}\n", r.cut_sets.size());
  for (std::size_t i = 0; i < r.cut_sets.size(); ++i) {
    ctx.out << fmt::format("  {}. {{{}}}\n", i + 1, join(r.cut_sets[i]));
  }
  ctx.out << fmt::format("single points: {}\n",
                         r.single_points.empty() ? std::string("(none)")
                                                 : join(r.single_points));
}

void print_probability(const FaultTree& tree, std::size_t limit,
                       Context& ctx) {
  ProbabilityResult p = top_event_probability(tree, limit);
  ctx.out << fmt::format(
      "top event probability: exact {:.12g}, rare-event upper bound {:.12g}\n",
      p.exact, p.rare_event_upper);
}

int cmd_fta(const FtaArgs& a, Context& ctx) {
  HazardProject project = load_valid(a.paths, ctx);
  const std::size_t limit = event_limit(a.event_limit);

  const FaultTree* tree = nullptr;
  if (a.tree) {
    tree = project.find_tree(*a.tree);
    if (!tree) throw DomainError(fmt::format("unknown fault tree '{}'", *a.tree));
  } else if (project.trees.size() == 1) {
    tree = &project.trees.front();
  } else if (project.trees.empty()) {
    throw DomainError("project declares no fault tree");
  } else {
    std::vector<std::string> ids;
    for (const auto& t : project.trees) ids.push_back(t.id);
    throw DomainError(fmt::format("several fault trees ({}); pick one with "
                                  "--tree",
                                  join(ids)));
  }

  const bool show_cuts = a.cutsets || !a.prob;
  auto analyse = [&](const FaultTree& t) {
    ctx.out << fmt::format("fault tree: {} (top: {})\n", t.id, t.top);
    CutSetReport cuts = minimal_cut_sets(t, limit);
    if (show_cuts) print_cut_sets(cuts, ctx);
    if (a.prob) print_probability(t, limit, ctx);
    return cuts;
  };

  if (!a.mitigate) {
    CutSetReport cuts = analyse(*tree);
    if (a.dot) {
      write_file(*a.dot, render_fta_dot(*tree, cuts));
      ctx.out << fmt::format("wrote {}\n", *a.dot);
    }
    return code(ExitCode::kOk);
  }

  auto ids = selected_mitigations(project, *a.mitigate);
  std::set<std::string> chosen(ids.begin(), ids.end());
  std::vector<Mitigation> selected;
  for (const auto& m : project.mitigations) {
    if (chosen.count(m.id)) selected.push_back(m);
  }
  selected = restrict_to_tree(*tree, selected);

  std::map<std::string, std::string> monitors;
  FaultTree after = apply_fta_mitigations(*tree, selected, &monitors);

  ctx.out << "== before mitigation ==\n";
  CutSetReport before_cuts = analyse(*tree);
  ctx.out << "\n== after mitigation ==\n";
  CutSetReport after_cuts = analyse(after);

  ctx.out << "\nmonitors:\n";
  for (const auto& [event, monitor] : monitors) {
    ctx.out << fmt::format("  {} guarded by {}\n", event, monitor);
  }
  std::vector<std::string> still_single;
  for (const auto& s : after_cuts.single_points) {
    if (monitors.count(s)) still_single.push_back(s);
  }
  if (a.dot) {
    fs::path dot(*a.dot);
    fs::path after_path = dot.parent_path() /
                          (dot.stem().string() + "_mitigated" +
                           dot.extension().string());
    write_file(*a.dot, render_fta_dot(*tree, before_cuts));
    write_file(after_path.string(), render_fta_dot(after, after_cuts));
    ctx.out << fmt::format("wrote {}\nwrote {}\n", *a.dot, after_path.string());
  }
  if (!still_single.empty()) {
    ctx.err << fmt::format("error: mitigated events remain single points: {}\n",
                           join(still_single));
    return code(ExitCode::kFindings);
  }
  ctx.out << fmt::format("mitigated events that remain single points: "
                         "(none)\n");
  return code(ExitCode::kOk);
}

struct SimulateArgs {
  std::vector<std::string> paths;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  bool mitigated = false;
  unsigned threads = 0;
};

int cmd_simulate(const SimulateArgs& a, Context& ctx) {
  if (a.trials && *a.trials < 1) {
    ctx.err << fmt::format("error: --trials must be >= 1 (got {})\n",
                           *a.trials);
    return code(ExitCode::kUsage);
  }
  HazardProject project = load_valid(a.paths, ctx);
  if (!project.sim_config) {
    if (!a.trials || !a.seed) {
      ctx.err << "error: no simulation block; pass --trials and --seed\n";
      return code(ExitCode::kUsage);
    }
    project.sim_config = SimulationConfig{};
  }
  if (a.trials) project.sim_config->trials = *a.trials;
  if (a.seed) project.sim_config->seed = *a.seed;

  SimulationOptions options;
  options.threads = a.threads;
  SimulationReport report = run_simulation(project, a.mitigated, options);
  ctx.out << render_simulation_table(report) << "\n"
          << render_simulation_json(report);
  return code(ExitCode::kOk);
}

struct ReportArgs {
  std::vector<std::string> paths;
  std::string out_dir;
  std::optional<std::string> tree;
  std::optional<std::size_t> event_limit;
  bool mitigated = false;
  bool no_simulation = false;
};

int cmd_report(const ReportArgs& a, Context& ctx) {
  HazardProject project = load_valid(a.paths, ctx);
  ReportOptions options;
  options.tree_id = a.tree;
  options.event_limit = event_limit(a.event_limit);
  options.simulate_mitigated = a.mitigated;
  options.run_simulation = !a.no_simulation;
  ReportBundle bundle = build_report_bundle(project, options);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) {
    throw DomainError(fmt::format("cannot create '{}': {}", a.out_dir,
                                  ec.message()));
  }
  auto emit = [&](const std::string& name, const std::string& content) {
    std::string path = (fs::path(a.out_dir) / name).string();
    write_file(path, content);
    ctx.out << fmt::format("wrote {}\n", path);
  };
  emit("fmea.md", bundle.fmea_markdown);
  emit("fmea_delta.md", bundle.fmea_delta_markdown);
  emit("fta_before.dot", bundle.fta_dot_before);
  if (bundle.fta_dot_after) emit("fta_after.dot", *bundle.fta_dot_after);
  emit("architecture.dot", bundle.architecture_dot);
  emit("summary.json", bundle.summary_json);
  return code(ExitCode::kOk);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Safety analysis for AI-based driving stacks: FMEA, fault trees "
               "and fault-injection simulation over .hsa models",
               "hysafe"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Parse and validate models");
  validate->add_option("paths", validate_args.paths, ".hsa files")->required();

  FmeaArgs fmea_args;
  auto* fmea = app.add_subcommand("fmea", "Ranked FMEA or mitigation deltas");
  fmea->add_option("paths", fmea_args.paths, ".hsa files")->required();
  fmea->add_option("--mitigate", fmea_args.mitigate,
                   "Comma-separated mitigation ids, or 'all'");
  fmea->add_option("--format", fmea_args.format, "md or json")
      ->check(CLI::IsMember({"md", "json"}));

  FtaArgs fta_args;
  auto* fta = app.add_subcommand("fta", "Cut sets, single points, probability");
  fta->add_option("paths", fta_args.paths, ".hsa files")->required();
  fta->add_option("--tree", fta_args.tree, "Fault tree id");
  fta->add_option("--mitigate", fta_args.mitigate,
                  "Comma-separated mitigation ids, or 'all'");
  fta->add_flag("--cutsets", fta_args.cutsets, "Print minimal cut sets");
  fta->add_flag("--prob", fta_args.prob, "Print top-event probability");
  fta->add_option("--dot", fta_args.dot, "Write the tree as DOT");
  fta->add_option("--event-limit", fta_args.event_limit,
                  "Maximum basic events (default 64, env HYSAFE_EVENT_LIMIT)")
      ->check(CLI::PositiveNumber);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo fault injection");
  simulate->add_option("paths", sim_args.paths, ".hsa files")->required();
  simulate->add_option("--trials", sim_args.trials, "Number of trials");
  simulate->add_option("--seed", sim_args.seed, "64-bit seed");
  simulate->add_flag("--mitigated", sim_args.mitigated,
                     "Apply every mitigation and enable the Safety Evaluator");
  simulate->add_option("--threads", sim_args.threads,
                       "Worker threads (0: all cores)");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Write the full report bundle");
  report->add_option("paths", report_args.paths, ".hsa files")->required();
  report->add_option("--out", report_args.out_dir, "Output directory")
      ->required();
  report->add_option("--tree", report_args.tree, "Fault tree id");
  report->add_option("--event-limit", report_args.event_limit,
                     "Maximum basic events")
      ->check(CLI::PositiveNumber);
  report->add_flag("--mitigated", report_args.mitigated,
                   "Simulate the mitigated architecture");
  report->add_flag("--no-simulation", report_args.no_simulation,
                   "Skip the simulation even if configured");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : code(ExitCode::kUsage);
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_args, ctx);
    if (fmea->parsed()) return cmd_fmea(fmea_args, ctx);
    if (fta->parsed()) return cmd_fta(fta_args, ctx);
    if (simulate->parsed()) return cmd_simulate(sim_args, ctx);
    if (report->parsed()) return cmd_report(report_args, ctx);
  } catch (const Exit& e) {
    return code(e.code);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::kLimit);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::kUsage);
  }
  return code(ExitCode::kUsage);
}

}  // namespace hysafe
