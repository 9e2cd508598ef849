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

#include "support.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <stdexcept>

namespace hysafe::testing {
namespace {

const FaultNode& node_or_throw(const FaultTree& tree, const std::string& id) {
  for (const auto& n : tree.nodes) {
    if (n.id == id) return n;
  }
  throw std::runtime_error("oracle: unknown node " + id);
}

bool eval_node(const FaultTree& tree, const std::string& id,
               const std::set<std::string>& on) {
  const FaultNode& n = node_or_throw(tree, id);
  if (!n.is_gate()) return on.count(id) > 0;
  const Gate& g = n.gate();
  if (g.kind == GateKind::kAnd) {
    for (const auto& c : g.children) {
      if (!eval_node(tree, c, on)) return false;
    }
    return true;
  }
  for (const auto& c : g.children) {
    if (eval_node(tree, c, on)) return true;
  }
  return false;
}

std::set<std::string> subset(const std::vector<std::string>& events,
                             std::uint32_t mask) {
  std::set<std::string> on;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (mask & (1u << i)) on.insert(events[i]);
  }
  return on;
}

double probability_of(const FaultTree& tree, const std::string& id) {
  const FaultNode& n = node_or_throw(tree, id);
  return n.event().probability.value_or(0.0);
}

}  // namespace

bool oracle_eval(const FaultTree& tree,
                 const std::set<std::string>& true_events) {
  return eval_node(tree, tree.top, true_events);
}

std::vector<std::string> oracle_events(const FaultTree& tree) {
  std::set<std::string> seen, events;
  std::function<void(const std::string&)> walk = [&](const std::string& id) {
    if (!seen.insert(id).second) return;
    const FaultNode& n = node_or_throw(tree, id);
    if (n.is_gate()) {
      for (const auto& c : n.gate().children) walk(c);
    } else {
      events.insert(id);
    }
  };
  walk(tree.top);
  return {events.begin(), events.end()};
}

std::vector<std::vector<std::string>> oracle_cut_sets(const FaultTree& tree) {
  auto events = oracle_events(tree);
  if (events.size() > 20) throw std::runtime_error("oracle: too many events");
  std::vector<std::vector<std::string>> out;
  const std::uint32_t n = 1u << events.size();
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    auto on = subset(events, mask);
    if (!oracle_eval(tree, on)) continue;
    // Monotone function: a true point is minimal iff dropping any single
    // member makes it false.
    bool minimal = true;
    for (const auto& e : on) {
      auto smaller = on;
      smaller.erase(e);
      if (oracle_eval(tree, smaller)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.emplace_back(on.begin(), on.end());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

double oracle_probability(const FaultTree& tree) {
  auto events = oracle_events(tree);
  if (events.size() > 20) throw std::runtime_error("oracle: too many events");
  std::vector<double> p;
  for (const auto& e : events) p.push_back(probability_of(tree, e));
  double total = 0.0;
  const std::uint32_t n = 1u << events.size();
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    auto on = subset(events, mask);
    if (!oracle_eval(tree, on)) continue;
    double w = 1.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      w *= (mask & (1u << i)) ? p[i] : 1.0 - p[i];
    }
    total += w;
  }
  return total;
}

double oracle_rare_event(const FaultTree& tree,
                         const std::vector<std::vector<std::string>>& cuts) {
  double sum = 0.0;
  for (const auto& cut : cuts) {
    double w = 1.0;
    for (const auto& e : cut) w *= probability_of(tree, e);
    sum += w;
  }
  return sum;
}

FaultTree random_tree(Rng& rng, const TreeShape& shape, const std::string& id) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n_events = std::uniform_int_distribution<int>(2, shape.max_events)(rng);
  std::vector<double> probs(n_events);
  for (double& p : probs) {
    double r = unit(rng);
    p = r < 0.05 ? 0.0 : r > 0.95 ? 1.0 : unit(rng);
  }

  FaultTree tree;
  tree.id = id;
  std::set<int> used_events;
  std::vector<std::string> finished_gates;
  int gate_count = 0;

  std::function<std::string(int)> make = [&](int depth) -> std::string {
    const bool leaf =
        depth >= shape.max_depth || (depth > 0 && unit(rng) < shape.leaf_bias);
    if (leaf) {
      if (!finished_gates.empty() && unit(rng) < shape.reuse_gate) {
        return finished_gates[std::uniform_int_distribution<std::size_t>(
            0, finished_gates.size() - 1)(rng)];
      }
      int e = std::uniform_int_distribution<int>(0, n_events - 1)(rng);
      used_events.insert(e);
      return "e" + std::to_string(e);
    }
    Gate g;
    g.kind = unit(rng) < 0.5 ? GateKind::kAnd : GateKind::kOr;
    const int arity = std::uniform_int_distribution<int>(2, 4)(rng);
    std::string gid = "g" + std::to_string(gate_count++);
    for (int i = 0; i < arity; ++i) {
      std::string child = make(depth + 1);
      if (std::find(g.children.begin(), g.children.end(), child) ==
          g.children.end()) {
        g.children.push_back(child);
      }
    }
    tree.nodes.push_back(FaultNode{gid, g});
    finished_gates.push_back(gid);
    return gid;
  };
  tree.top = make(0);
  // Top first, reads naturally when printed.
  std::rotate(tree.nodes.rbegin(), tree.nodes.rbegin() + 1, tree.nodes.rend());
  for (int e : used_events) {
    BasicEvent ev;
    if (shape.with_probabilities) ev.probability = probs[e];
    tree.nodes.push_back(FaultNode{"e" + std::to_string(e), ev});
  }
  return tree;
}

HazardProject random_project(Rng& rng) {
  std::uniform_int_distribution<int> rating(1, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto text = [&](const std::string& base) {
    static const char* kFlavours[] = {"", " \"quoted\"", " back\\slash",
                                      " (x/y), z", " ünïcode"};
    return base + kFlavours[pick(0, 4)];
  };

  HazardProject p;
  if (pick(0, 1)) {
    p.architecture.name = text("arch");
    if (pick(0, 1)) p.architecture.annotations["quantization"] = text("int8");
  }
  const int n_comp = pick(1, 5);
  for (int i = 0; i < n_comp; ++i) {
    Component c;
    c.id = "C" + std::to_string(i);
    if (pick(0, 3)) c.name = text("Component " + std::to_string(i));
    if (pick(0, 1)) c.functionality = text("does things");
    for (int f = pick(0, 2); f > 0; --f) c.features.push_back(text("feat"));
    p.architecture.components.push_back(std::move(c));
  }
  for (int i = 0; i + 1 < n_comp; ++i) {
    if (!pick(0, 2)) continue;
    Interface itf;
    itf.id = "if" + std::to_string(i);
    itf.producer = "C" + std::to_string(i);
    itf.consumers.push_back("C" + std::to_string(i + 1));
    if (pick(0, 1)) itf.payload = text("payload");
    p.architecture.components[i].outputs.push_back(itf.id);
    p.architecture.components[i + 1].inputs.push_back(itf.id);
    p.architecture.interfaces.push_back(std::move(itf));
  }
  if (pick(0, 1)) p.architecture.pseudo_elements.push_back("Data");

  const int n_modes = pick(1, 4);
  for (int i = 0; i < n_modes; ++i) {
    AiFailureMode m;
    m.id = "M" + std::to_string(i);
    m.label = text("mode " + std::to_string(i));
    for (Guideword g : kAllGuidewords) {
      if (pick(0, 2) == 0) m.guidewords.insert(g);
    }
    if (m.guidewords.empty()) m.guidewords.insert(kAllGuidewords[pick(0, 4)]);
    if (pick(0, 1)) m.description = text("desc");
    p.taxonomy.push_back(std::move(m));
  }

  const int n_fmea = pick(1, 6);
  for (int i = 0; i < n_fmea; ++i) {
    FmeaEntry e;
    e.id = "f" + std::to_string(i);
    e.element = p.architecture.components[pick(0, n_comp - 1)].id;
    e.failure_mode = "M" + std::to_string(pick(0, n_modes - 1));
    e.manifestation = text("manifest");
    e.effect = text("effect");
    e.caused_by = text("cause");
    e.rating = {rating(rng), rating(rng), rating(rng)};
    p.fmea.push_back(std::move(e));
  }

  TreeShape shape;
  shape.max_events = 6;
  shape.max_depth = 3;
  FaultTree tree = random_tree(rng, shape, "T0");
  for (auto& n : tree.nodes) {
    if (n.is_gate()) {
      if (pick(0, 1)) std::get<Gate>(n.body).label = text("gate");
    } else {
      auto& ev = std::get<BasicEvent>(n.body);
      if (pick(0, 1)) ev.label = text("event");
      if (pick(0, 2) == 0) {
        ev.fmea_link = p.fmea[pick(0, n_fmea - 1)].id;
      }
    }
  }
  p.trees.push_back(tree);

  // Disjoint targets so any subset of mitigations can be applied together.
  std::vector<std::string> entries, events;
  for (const auto& e : p.fmea) entries.push_back(e.id);
  for (const auto& n : tree.nodes) {
    if (!n.is_gate()) events.push_back(n.id);
  }
  std::shuffle(entries.begin(), entries.end(), rng);
  std::shuffle(events.begin(), events.end(), rng);
  const int n_mit = pick(0, 3);
  for (int i = 0; i < n_mit; ++i) {
    Mitigation m;
    m.id = "mit" + std::to_string(i);
    m.name = text("Mitigation " + std::to_string(i));
    if (pick(0, 1)) m.comment = text("comment");
    if (!entries.empty() && pick(0, 2)) {
      std::string entry = entries.back();
      entries.pop_back();
      int d = p.find_entry(entry)->rating.detection;
      if (d > 1) m.fmea_targets.push_back({entry, -pick(1, d - 1)});
    }
    if (!events.empty() && pick(0, 2)) {
      FtaTarget t;
      t.event = events.back();
      events.pop_back();
      t.monitor_label = "monitor " + std::to_string(i);
      if (pick(0, 1)) t.miss_probability = unit(rng);
      m.fta_targets.push_back(std::move(t));
    }
    p.mitigations.push_back(std::move(m));
  }

  if (pick(0, 1)) {
    SimulationConfig cfg;
    cfg.trials = pick(1, 100000);
    cfg.seed = rng();
    cfg.occurrence_scale = 0.5 + 4.0 * unit(rng);
    cfg.detection_scale = pick(0, 1) ? 10.0 : 1.0 + 20.0 * unit(rng);
    p.sim_config = cfg;
  }
  return p;
}

// ---------------------------------------------------------------------------
// DOT

namespace {

class DotChecker {
 public:
  explicit DotChecker(const std::string& s) : s_(s) {}

  std::string run() {
    try {
      graph();
    } catch (const std::runtime_error& e) {
      return e.what();
    }
    return {};
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error(what + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(std::string_view tok) {
    skip();
    return s_.compare(pos_, tok.size(), tok) == 0;
  }

  void expect(std::string_view tok) {
    if (!peek(tok)) fail("expected '" + std::string(tok) + "'");
    pos_ += tok.size();
  }

  // ID: identifier, numeral or double-quoted string with \" escapes.
  void id() {
    skip();
    if (pos_ >= s_.size()) fail("expected ID");
    char c = s_[pos_];
    if (c == '"') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\') ++pos_;
        ++pos_;
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      ++pos_;
      return;
    }
    auto word = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
             ch == '.' || ch == '-';
    };
    if (!word(c)) fail("expected ID");
    while (pos_ < s_.size() && word(s_[pos_])) ++pos_;
  }

  void attr_list() {
    expect("[");
    while (!peek("]")) {
      id();
      expect("=");
      id();
      if (peek(",")) expect(",");
    }
    expect("]");
  }

  void graph() {
    expect("digraph");
    id();
    expect("{");
    while (!peek("}")) {
      id();
      if (peek("->")) {
        expect("->");
        id();
      } else if (peek("=")) {
        expect("=");
        id();
      }
      if (peek("[")) attr_list();
      expect(";");
    }
    expect("}");
    skip();
    if (pos_ != s_.size()) fail("trailing content");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string dot_syntax_error(const std::string& text) {
  return DotChecker(text).run();
}

std::string data_path(const std::string& name) {
  return std::string(HYSAFE_DATA_DIR) + "/" + name;
}

}  // namespace hysafe::testing
