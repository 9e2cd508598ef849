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

#include "hysafe/fta.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>

#include "hysafe/validate.h"

namespace hysafe {
namespace {

struct CompiledNode {
  bool is_gate = false;
  GateKind kind = GateKind::kOr;
  std::vector<int> children;
  int event = -1;  // index into CompiledTree::event_ids for basic events
};

// Index-based view over the nodes reachable from the top. Basic events are
// numbered in id order, so sorted index vectors are sorted id vectors.
struct CompiledTree {
  std::vector<CompiledNode> nodes;
  int top = 0;
  std::vector<std::string> event_ids;
  std::vector<const BasicEvent*> events;
  std::unordered_map<std::string, int> node_index;
};

void require_valid(const FaultTree& tree) {
  for (const auto& d : validate_tree(tree, nullptr)) {
    if (d.severity == Severity::kError) {
      throw DomainError(fmt::format("fault tree '{}': {}", tree.id, d.message));
    }
  }
}

CompiledTree compile(const FaultTree& tree, std::size_t event_limit) {
  require_valid(tree);

  std::unordered_map<std::string, const FaultNode*> by_id;
  for (const auto& n : tree.nodes) by_id.emplace(n.id, &n);

  // Reachable nodes in DFS preorder.
  std::vector<const FaultNode*> order;
  std::unordered_map<std::string, int> index;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (index.count(id)) return;
    const FaultNode* n = by_id.at(id);
    index.emplace(id, static_cast<int>(order.size()));
    order.push_back(n);
    if (n->is_gate()) {
      for (const auto& c : n->gate().children) visit(c);
    }
  };
  visit(tree.top);

  CompiledTree out;
  for (const FaultNode* n : order) {
    if (!n->is_gate()) out.event_ids.push_back(n->id);
  }
  std::sort(out.event_ids.begin(), out.event_ids.end());
  if (out.event_ids.size() > event_limit) {
    throw ResourceError(fmt::format(
        "fault tree '{}' has {} basic events, above the limit of {}; raise it "
        "with --event-limit or HYSAFE_EVENT_LIMIT",
        tree.id, out.event_ids.size(), event_limit));
  }
  std::unordered_map<std::string, int> event_index;
  for (std::size_t i = 0; i < out.event_ids.size(); ++i) {
    event_index.emplace(out.event_ids[i], static_cast<int>(i));
  }
  out.events.resize(out.event_ids.size());

  out.nodes.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const FaultNode* n = order[i];
    CompiledNode& c = out.nodes[i];
    if (n->is_gate()) {
      c.is_gate = true;
      c.kind = n->gate().kind;
      for (const auto& child : n->gate().children) {
        c.children.push_back(index.at(child));
      }
    } else {
      c.event = event_index.at(n->id);
      out.events[c.event] = &n->event();
    }
  }
  out.top = 0;
  out.node_index = std::move(index);
  return out;
}

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

bool size_then_lex(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::vector<std::vector<int>> mocus(const CompiledTree& t) {
  struct Row {
    std::vector<int> events;
    std::vector<int> gates;
    bool operator<(const Row& o) const {
      return std::tie(events, gates) < std::tie(o.events, o.gates);
    }
  };

  auto add = [&](Row& row, int node) {
    const CompiledNode& n = t.nodes[node];
    if (n.is_gate) {
      insert_sorted(row.gates, node);
    } else {
      insert_sorted(row.events, n.event);
    }
  };

  Row start;
  add(start, t.top);
  std::vector<Row> stack{start};
  std::set<Row> seen{start};
  std::vector<std::vector<int>> finished;

  auto push = [&](Row row) {
    if (seen.insert(row).second) stack.push_back(std::move(row));
  };

  while (!stack.empty()) {
    Row row = std::move(stack.back());
    stack.pop_back();
    if (row.gates.empty()) {
      finished.push_back(std::move(row.events));
      continue;
    }
    int g = row.gates.back();
    row.gates.pop_back();
    const CompiledNode& gate = t.nodes[g];
    if (gate.kind == GateKind::kAnd) {
      for (int c : gate.children) add(row, c);
      push(std::move(row));
    } else {
      for (int c : gate.children) {
        Row alt = row;
        add(alt, c);
        push(std::move(alt));
      }
    }
  }

  // Absorption: drop every set that contains a smaller (or equal) one.
  std::sort(finished.begin(), finished.end(), size_then_lex);
  finished.erase(std::unique(finished.begin(), finished.end()),
                 finished.end());
  std::vector<std::vector<int>> minimal;
  for (auto& s : finished) {
    bool absorbed = std::any_of(minimal.begin(), minimal.end(),
                                [&](const std::vector<int>& m) {
                                  return std::includes(s.begin(), s.end(),
                                                       m.begin(), m.end());
                                });
    if (!absorbed) minimal.push_back(std::move(s));
  }
  return minimal;
}

class ShannonEvaluator {
 public:
  ShannonEvaluator(const CompiledTree& t, std::vector<double> p)
      : t_(t), p_(std::move(p)), support_(t.nodes.size()),
        has_support_(t.nodes.size(), false),
        assignment_(t.event_ids.size(), -1) {}

  double run() { return prob(t_.top); }

 private:
  const std::vector<int>& support(int node) {
    if (has_support_[node]) return support_[node];
    const CompiledNode& n = t_.nodes[node];
    std::vector<int> s;
    if (n.is_gate) {
      for (int c : n.children) {
        const auto& cs = support(c);
        std::vector<int> merged;
        std::set_union(s.begin(), s.end(), cs.begin(), cs.end(),
                       std::back_inserter(merged));
        s = std::move(merged);
      }
    } else {
      s.push_back(n.event);
    }
    support_[node] = std::move(s);
    has_support_[node] = true;
    return support_[node];
  }

  std::string memo_key(int node) {
    const auto& s = support(node);
    std::string key = std::to_string(node);
    key += ':';
    for (int e : s) key += static_cast<char>('1' + assignment_[e]);
    return key;
  }

  double prob(int node) {
    const CompiledNode& n = t_.nodes[node];
    if (!n.is_gate) {
      int a = assignment_[n.event];
      return a < 0 ? p_[n.event] : static_cast<double>(a);
    }

    std::string key = memo_key(node);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // Events that more than one child depends on break independence
    // between the children; condition on the most shared one.
    std::unordered_map<int, int> counts;
    for (int c : n.children) {
      for (int e : support(c)) {
        if (assignment_[e] < 0) ++counts[e];
      }
    }
    int pivot = -1, best = 1;
    for (const auto& [e, count] : counts) {
      if (count > best || (count == best && count > 1 && e < pivot)) {
        pivot = e;
        best = count;
      }
    }

    double result;
    if (pivot >= 0) {
      assignment_[pivot] = 1;
      double if_true = prob(node);
      assignment_[pivot] = 0;
      double if_false = prob(node);
      assignment_[pivot] = -1;
      result = p_[pivot] * if_true + (1.0 - p_[pivot]) * if_false;
    } else if (n.kind == GateKind::kAnd) {
      result = 1.0;
      for (int c : n.children) result *= prob(c);
    } else {
      double none = 1.0;
      for (int c : n.children) none *= 1.0 - prob(c);
      result = 1.0 - none;
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  const CompiledTree& t_;
  std::vector<double> p_;
  std::vector<std::vector<int>> support_;
  std::vector<bool> has_support_;
  std::vector<int> assignment_;
  std::unordered_map<std::string, double> memo_;
};

std::string sanitize_identifier(const std::string& label) {
  std::string out;
  for (char c : label) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || !is_identifier(out)) out.insert(out.begin(), '_');
  return out;
}

}  // namespace

std::vector<std::string> reachable_events(const FaultTree& tree) {
  return compile(tree, std::numeric_limits<std::size_t>::max()).event_ids;
}

CutSetReport minimal_cut_sets(const FaultTree& tree, std::size_t event_limit) {
  CompiledTree t = compile(tree, event_limit);
  CutSetReport report;
  for (const auto& s : mocus(t)) {
    CutSet ids;
    ids.reserve(s.size());
    for (int e : s) ids.push_back(t.event_ids[e]);
    if (ids.size() == 1) report.single_points.push_back(ids.front());
    report.cut_sets.push_back(std::move(ids));
  }
  std::sort(report.single_points.begin(), report.single_points.end());
  return report;
}

bool evaluate_assignment(const FaultTree& tree,
                         const std::set<std::string>& true_events) {
  require_valid(tree);
  for (const auto& id : true_events) {
    const FaultNode* n = tree.find(id);
    if (!n || n->is_gate()) {
      throw DomainError(fmt::format("'{}' is not a basic event of tree '{}'",
                                    id, tree.id));
    }
  }
  CompiledTree t = compile(tree, std::numeric_limits<std::size_t>::max());
  std::vector<signed char> memo(t.nodes.size(), -1);
  std::function<bool(int)> eval = [&](int node) -> bool {
    if (memo[node] >= 0) return memo[node] != 0;
    const CompiledNode& n = t.nodes[node];
    bool v;
    if (!n.is_gate) {
      v = true_events.count(t.event_ids[n.event]) > 0;
    } else if (n.kind == GateKind::kAnd) {
      v = std::all_of(n.children.begin(), n.children.end(), eval);
    } else {
      v = std::any_of(n.children.begin(), n.children.end(), eval);
    }
    memo[node] = v ? 1 : 0;
    return v;
  };
  return eval(t.top);
}

ProbabilityResult top_event_probability(const FaultTree& tree,
                                        std::size_t event_limit) {
  CompiledTree t = compile(tree, event_limit);
  std::vector<double> p(t.event_ids.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!t.events[i]->probability) {
      throw DomainError(fmt::format(
          "missing probability for event '{}' in tree '{}'", t.event_ids[i],
          tree.id));
    }
    p[i] = *t.events[i]->probability;
  }

  ProbabilityResult result;
  result.exact = ShannonEvaluator(t, p).run();
  for (const auto& s : mocus(t)) {
    double product = 1.0;
    for (int e : s) product *= p[e];
    result.rare_event_upper += product;
  }
  return result;
}

FaultTree apply_fta_mitigations(const FaultTree& tree,
                                const std::vector<Mitigation>& mitigations,
                                std::map<std::string, std::string>* monitor_of) {
  require_valid(tree);

  struct Planned {
    const Mitigation* mitigation;
    const FtaTarget* target;
  };
  std::map<std::string, Planned> plan;  // event id -> target
  std::set<std::string> labels;
  for (const auto& m : mitigations) {
    for (const auto& t : m.fta_targets) {
      const FaultNode* n = tree.find(t.event);
      if (!n) {
        throw DomainError(fmt::format("mitigation '{}': '{}' is not a node of "
                                      "tree '{}'",
                                      m.id, t.event, tree.id));
      }
      if (n->is_gate()) {
        throw DomainError(fmt::format("mitigation '{}': '{}' is a gate; only "
                                      "basic events can be mitigated",
                                      m.id, t.event));
      }
      if (!labels.insert(t.monitor_label).second) {
        throw DomainError(fmt::format("duplicate monitor label '{}' in tree "
                                      "'{}'",
                                      t.monitor_label, tree.id));
      }
      auto [it, inserted] = plan.emplace(t.event, Planned{&m, &t});
      if (!inserted) {
        throw DomainError(fmt::format("event '{}' is targeted by both '{}' and "
                                      "'{}'",
                                      t.event, it->second.mitigation->id,
                                      m.id));
      }
    }
  }

  std::set<std::string> taken;
  for (const auto& n : tree.nodes) taken.insert(n.id);
  auto fresh = [&](const std::string& base) {
    std::string id = base;
    for (int k = 2; taken.count(id); ++k) id = fmt::format("{}_{}", base, k);
    taken.insert(id);
    return id;
  };

  FaultTree out;
  out.id = tree.id;
  out.top = tree.top;
  std::map<std::string, std::string> replacement;  // event -> new gate
  for (const auto& node : tree.nodes) {
    out.nodes.push_back(node);
    auto it = plan.find(node.id);
    if (it == plan.end()) continue;
    const Mitigation& m = *it->second.mitigation;
    const FtaTarget& t = *it->second.target;

    std::string monitor_id = fresh(sanitize_identifier(t.monitor_label));
    std::string gate_id = fresh(node.id + "_mitigated");
    replacement.emplace(node.id, gate_id);
    if (monitor_of) (*monitor_of)[node.id] = monitor_id;

    const std::string& what =
        node.event().label.empty() ? node.id : node.event().label;
    Gate gate;
    gate.kind = GateKind::kAnd;
    gate.children = {node.id, monitor_id};
    gate.label = fmt::format("{} undetected by {}", what,
                             m.name.empty() ? m.id : m.name);
    out.nodes.push_back(FaultNode{gate_id, gate});

    BasicEvent monitor;
    monitor.label = t.monitor_label;
    monitor.probability = t.miss_probability;
    out.nodes.push_back(FaultNode{monitor_id, monitor});
  }

  std::set<std::string> new_gates;
  for (const auto& [event, gate] : replacement) new_gates.insert(gate);
  for (auto& node : out.nodes) {
    if (!node.is_gate() || new_gates.count(node.id)) continue;
    for (auto& child : std::get<Gate>(node.body).children) {
      auto it = replacement.find(child);
      if (it != replacement.end()) child = it->second;
    }
  }
  if (auto it = replacement.find(out.top); it != replacement.end()) {
    out.top = it->second;
  }
  return out;
}

std::vector<Mitigation> restrict_to_tree(
    const FaultTree& tree, const std::vector<Mitigation>& mitigations) {
  std::vector<Mitigation> out;
  for (const auto& m : mitigations) {
    Mitigation copy = m;
    copy.fta_targets.clear();
    for (const auto& t : m.fta_targets) {
      const FaultNode* n = tree.find(t.event);
      if (n && !n->is_gate()) copy.fta_targets.push_back(t);
    }
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace hysafe
