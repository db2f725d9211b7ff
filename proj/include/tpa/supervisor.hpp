/*
 * Copyright 2026 The TPA Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TPA_SUPERVISOR_HPP
#define TPA_SUPERVISOR_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tpa/automata.hpp"
#include "tpa/observation.hpp"
#include "tpa/opacity.hpp"
#include "tpa/predicate.hpp"
#include "tpa/semantics.hpp"

namespace tpa {

struct ControlDecision {
  std::set<Label> disabled;
  /// Number of t actions the supervisor inserts before anything else.
  std::size_t insert = 0;

  friend bool operator==(const ControlDecision&, const ControlDecision&) = default;
};

/// A finite supervisor. It moves on what it observes: t for every time
/// step, otherwise the supervisor observer's image of the plant action;
/// invisible actions and symbols without a transition leave it in place.
/// A state with insert i > 0 lets only a plant t-step happen and then
/// moves on t to a state whose insert is i - 1.
struct SupervisorAutomaton {
  std::vector<std::map<Label, std::size_t>> step;
  std::vector<ControlDecision> policy;
  std::size_t initial = 0;

  std::size_t num_states() const { return policy.size(); }
  std::size_t add_state(ControlDecision d = {}) {
    policy.push_back(std::move(d));
    step.emplace_back();
    return policy.size() - 1;
  }
  std::size_t next(std::size_t s, const Label& theta) const {
    auto it = step[s].find(theta);
    return it == step[s].end() ? s : it->second;
  }

  /// The supervisor that never intervenes.
  static SupervisorAutomaton permissive() {
    SupervisorAutomaton s;
    s.add_state();
    return s;
  }
};

namespace detail {

inline const StaticObserver& require_static_sup(const Observer& o) {
  if (!o.is_static()) {
    throw PreconditionFailed("the supervisor observer must be static");
  }
  return o.as_static();
}

/// What the supervisor sees of a plant action.
inline LetterImage sup_sees(const StaticObserver& o, const Label& x) {
  if (x.is_time()) return x;
  return o.image(x);
}

}  // namespace detail

/// A supervisor asked for a time step the plant cannot take.
class InsertionBlocked : public PreconditionFailed {
 public:
  using PreconditionFailed::PreconditionFailed;
};

/// The plant under supervision as an Lts over all labels. State names are
/// "plant-name @ supervisor-state".
inline Lts supervised_product(const Lts& plant, const Observer& sup_observer,
                              const SupervisorAutomaton& sup,
                              std::size_t budget = default_max_states()) {
  require_complete(plant, "supervised_product");
  const auto& os = detail::require_static_sup(sup_observer);
  LtsBuilder b;
  std::map<std::pair<StateId, std::size_t>, StateId> index;
  std::deque<std::pair<StateId, std::size_t>> queue;
  bool complete = true;
  auto intern = [&](StateId p, std::size_t s) -> std::optional<StateId> {
    auto it = index.find({p, s});
    if (it != index.end()) return it->second;
    if (index.size() >= budget) return std::nullopt;
    StateId id = b.add_state(plant.state_names[p] + " @ " + std::to_string(s));
    index.emplace(std::make_pair(p, s), id);
    queue.emplace_back(p, s);
    return id;
  };
  intern(plant.initial, sup.initial);
  const auto time_id = plant.label_id(Label::time());
  while (!queue.empty()) {
    auto [p, s] = queue.front();
    queue.pop_front();
    StateId from = index.at({p, s});
    const ControlDecision& d = sup.policy.at(s);
    for (const auto& e : plant.out[p]) {
      const Label& x = plant.labels[e.label];
      std::size_t s2 = s;
      if (d.insert > 0) {
        if (!x.is_time()) continue;
        s2 = sup.next(s, x);
      } else {
        if (x.is_visible() && d.disabled.count(x)) continue;
        if (auto theta = detail::sup_sees(os, x)) s2 = sup.next(s, *theta);
      }
      auto target = intern(e.target, s2);
      if (!target) {
        complete = false;
        continue;
      }
      b.add_transition(from, x, *target);
    }
    if (d.insert > 0 && !(time_id && time_successor(plant, p))) {
      throw InsertionBlocked("supervisor state " + std::to_string(s) + " inserts t where plant state '" +
                  plant.state_names[p] + "' cannot let time pass");
    }
  }
  b.set_complete(complete);
  return b.build();
}

enum class SupervisorValidity { Valid, Invalid, Incomplete };

struct VerificationResult {
  SupervisorValidity outcome = SupervisorValidity::Incomplete;
  /// Shortest supervised trace that leaves the safe traces.
  Trace witness;
  std::string reason;

  bool valid() const { return outcome == SupervisorValidity::Valid; }
};

/// Whether every trace of the supervised plant is safe.
inline VerificationResult verify_supervisor(const Lts& plant, const Predicate& phi,
                                            const Observer& attacker,
                                            const Observer& sup_observer,
                                            const SupervisorAutomaton& sup,
                                            std::size_t budget = default_max_states()) {
  VerificationResult r;
  try {
    Lts composite = supervised_product(plant, sup_observer, sup, budget);
    if (!composite.complete) {
      r.reason = "supervised product truncated";
      return r;
    }
    SafetyMonitor mon(plant, phi, attacker, budget);
    using Node = std::pair<StateId, std::size_t>;
    std::vector<Node> nodes{{composite.initial, mon.initial()}};
    std::vector<std::pair<std::size_t, Label>> parent{{0, Label()}};
    std::map<Node, std::size_t> seen{{nodes[0], 0}};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      auto [c, m] = nodes[i];
      if (!mon.safe(m)) {
        r.outcome = SupervisorValidity::Invalid;
        for (std::size_t j = i; j != 0; j = parent[j].first) r.witness.push_back(parent[j].second);
        std::reverse(r.witness.begin(), r.witness.end());
        return r;
      }
      for (const auto& e : composite.out[c]) {
        const Label& x = composite.labels[e.label];
        Node n{e.target, mon.step(m, x)};
        if (seen.emplace(n, nodes.size()).second) {
          nodes.push_back(n);
          parent.emplace_back(i, x);
        }
      }
    }
    r.outcome = SupervisorValidity::Valid;
  } catch (const InsertionBlocked& e) {
    r.outcome = SupervisorValidity::Invalid;
    r.reason = e.what();
  } catch (const BudgetExceeded& e) {
    r.reason = e.what();
  }
  return r;
}

enum class Permissiveness { MorePermissive, LessPermissive, Equal, Incomparable };

inline const char* to_string(Permissiveness p) {
  switch (p) {
    case Permissiveness::MorePermissive: return "MorePermissive";
    case Permissiveness::LessPermissive: return "LessPermissive";
    case Permissiveness::Equal: return "Equal";
    case Permissiveness::Incomparable: return "Incomparable";
  }
  return "?";
}

/// How the trace set of the plant under s1 relates to that under s2.
inline Permissiveness compare_supervisors(const Lts& plant, const Observer& sup_observer,
                                          const SupervisorAutomaton& s1,
                                          const SupervisorAutomaton& s2,
                                          std::size_t budget = default_max_states()) {
  Lts a = supervised_product(plant, sup_observer, s1, budget);
  Lts b = supervised_product(plant, sup_observer, s2, budget);
  require_complete(a, "compare_supervisors");
  require_complete(b, "compare_supervisors");
  bool ab = !trace_inclusion_counterexample(a, b, false, budget);
  bool ba = !trace_inclusion_counterexample(b, a, false, budget);
  if (ab && ba) return Permissiveness::Equal;
  if (ba) return Permissiveness::MorePermissive;
  if (ab) return Permissiveness::LessPermissive;
  return Permissiveness::Incomparable;
}

// ---------------------------------------------------------------------------
// Controllability

struct ControllabilityReport {
  bool controllable = true;
  /// w is safe, w.x is a plant trace that is not, x is uncontrollable.
  Trace w;
  std::optional<Label> x;
};

/// Closure of the safe traces under uncontrollable visible extensions
/// within the plant.
inline ControllabilityReport check_controllability(const Lts& plant, const Predicate& phi,
                                                   const Observer& attacker,
                                                   const std::set<Label>& controllable,
                                                   std::size_t budget = default_max_states()) {
  require_complete(plant, "check_controllability");
  SafetyMonitor mon(plant, phi, attacker, budget);
  LtsDeterminizer det(plant, false, budget);
  using Node = std::pair<std::size_t, std::size_t>;
  std::vector<Node> nodes{{det.initial(), mon.initial()}};
  std::vector<std::pair<std::size_t, Label>> parent{{0, Label()}};
  std::map<Node, std::size_t> seen{{nodes[0], 0}};
  ControllabilityReport r;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [s, m] = nodes[i];
    if (!mon.safe(m)) continue;  // only extensions of safe traces matter
    for (const auto& [x, s2] : det.moves(s)) {
      Node n{s2, mon.step(m, x)};
      if (x.is_visible() && !controllable.count(x) && !mon.safe(n.second)) {
        r.controllable = false;
        for (std::size_t j = i; j != 0; j = parent[j].first) r.w.push_back(parent[j].second);
        std::reverse(r.w.begin(), r.w.end());
        r.x = x;
        return r;
      }
      if (seen.emplace(n, nodes.size()).second) {
        nodes.push_back(n);
        parent.emplace_back(i, x);
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Synthesis

/// The partial-observation safety game behind synthesis. A node is the
/// set of (plant state, monitor state) pairs the system may occupy when
/// the supervisor enters a state, together with the insertions still
/// allowed in a row. At a node the supervisor either acts (disables a
/// set D of controllable actions and waits for the next observation) or
/// forces one t-step.
class SupervisionGame {
 public:
  using PState = std::pair<StateId, std::size_t>;
  using Entry = std::vector<PState>;

  struct Choice {
    bool force = false;
    std::set<Label> disabled;
    /// Every state the choice can lead to before the next observation,
    /// and every state right after it, is safe.
    bool locally_safe = true;
    /// Observation -> successor node.
    std::vector<std::pair<Label, std::size_t>> successors;

    ControlDecision decision() const { return {disabled, force ? 1u : 0u}; }
    /// Tie-break: fewer disabled actions, then fewer insertions, then
    /// label order of the disabled set.
    auto rank() const {
      return std::make_tuple(force ? 0 : disabled.size(), force ? 1 : 0,
                             std::vector<Label>(disabled.begin(), disabled.end()));
    }
  };

  struct Node {
    std::size_t entry;
    std::size_t budget;
    std::vector<Choice> choices;
  };

  SupervisionGame(const Lts& plant, const Predicate& phi, const Observer& attacker,
                  const Observer& sup_observer, std::set<Label> controllable,
                  std::size_t max_insert, std::size_t budget = default_max_states())
      : plant_(plant),
        mon_(plant, phi, attacker, budget),
        sup_(detail::require_static_sup(sup_observer)),
        controllable_(std::move(controllable)),
        max_insert_(max_insert),
        budget_(budget) {
    require_complete(plant, "synthesize");
    for (const auto& c : controllable_) {
      if (!c.is_visible()) throw PreconditionFailed("only visible actions can be controllable");
    }
    initial_ = intern(Entry{{plant.initial, mon_.initial()}}, max_insert_);
    for (std::size_t i = 0; i < nodes_.size(); ++i) expand(i);
  }

  std::size_t initial() const { return initial_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Entry& entry(std::size_t node) const { return entries_[nodes_[node].entry]; }
  SafetyMonitor& monitor() { return mon_; }

  /// Greatest fixpoint: a node wins if some locally safe choice leads only
  /// to winning nodes.
  std::vector<bool> solve() const {
    std::vector<bool> win(nodes_.size(), true);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (!win[n]) continue;
        bool any = false;
        for (const auto& c : nodes_[n].choices) {
          if (choice_wins(c, win)) {
            any = true;
            break;
          }
        }
        if (!any) {
          win[n] = false;
          changed = true;
        }
      }
    }
    return win;
  }

  static bool choice_wins(const Choice& c, const std::vector<bool>& win) {
    if (!c.locally_safe) return false;
    return std::all_of(c.successors.begin(), c.successors.end(),
                       [&](const auto& s) { return win[s.second]; });
  }

  /// The supervisor that plays `pick[n]` (a choice index) at every node
  /// reachable from the initial one. Nodes are numbered in breadth-first
  /// order of first visit.
  SupervisorAutomaton realize(const std::vector<std::size_t>& pick) const {
    SupervisorAutomaton sup;
    std::map<std::size_t, std::size_t> id;
    std::vector<std::size_t> order{initial_};
    id[initial_] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Choice& c = nodes_[order[i]].choices.at(pick.at(order[i]));
      for (const auto& [theta, n] : c.successors) {
        if (id.emplace(n, order.size()).second) order.push_back(n);
      }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      sup.add_state(nodes_[order[i]].choices[pick[order[i]]].decision());
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Choice& c = nodes_[order[i]].choices[pick[order[i]]];
      for (const auto& [theta, n] : c.successors) sup.step[i][theta] = id.at(n);
    }
    // A forcing state inserts as many t as the chain of forcing states it
    // starts.
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::size_t len = 0, s = i;
      std::set<std::size_t> visited;
      while (sup.policy[s].insert > 0 && visited.insert(s).second) {
        ++len;
        s = sup.next(s, Label::time());
      }
      if (sup.policy[i].insert > 0) sup.policy[i].insert = len;
    }
    sup.initial = 0;
    return sup;
  }

 private:
  std::size_t intern(Entry e, std::size_t k) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    auto [eit, efresh] = entry_index_.emplace(e, entries_.size());
    if (efresh) entries_.push_back(std::move(e));
    auto [it, fresh] = node_index_.emplace(std::make_pair(eit->second, k), nodes_.size());
    if (fresh) {
      if (nodes_.size() >= budget_) throw BudgetExceeded("synthesis game exceeded budget");
      nodes_.push_back({eit->second, k, {}});
    }
    return it->second;
  }

  PState move(const PState& s, const Edge& e) {
    return {e.target, mon_.step(s.second, plant_.labels[e.label])};
  }

  // States reachable from the entry through moves the supervisor neither
  // blocks nor sees.
  Entry closure(const Entry& entry, const std::set<Label>& disabled) {
    std::set<PState> seen(entry.begin(), entry.end());
    std::vector<PState> stack(entry.begin(), entry.end());
    while (!stack.empty()) {
      PState s = stack.back();
      stack.pop_back();
      for (const auto& e : plant_.out[s.first]) {
        const Label& x = plant_.labels[e.label];
        if (x.is_time() || disabled.count(x) || detail::sup_sees(sup_, x)) continue;
        PState n = move(s, e);
        if (seen.insert(n).second) stack.push_back(n);
      }
    }
    return {seen.begin(), seen.end()};
  }

  void expand(std::size_t n) {
    const Entry entry = entries_[nodes_[n].entry];
    const std::size_t k = nodes_[n].budget;
    std::vector<Choice> choices;

    // Controllable actions that matter here.
    std::vector<Label> relevant;
    {
      std::set<Label> r;
      for (const auto& s : closure(entry, {})) {
        for (const auto& e : plant_.out[s.first]) {
          const Label& x = plant_.labels[e.label];
          if (controllable_.count(x)) r.insert(x);
        }
      }
      relevant.assign(r.begin(), r.end());
    }
    if (relevant.size() > 16) throw BudgetExceeded("too many controllable actions at one node");

    for (std::size_t mask = 0; mask < (std::size_t{1} << relevant.size()); ++mask) {
      Choice c;
      for (std::size_t i = 0; i < relevant.size(); ++i) {
        if (mask >> i & 1) c.disabled.insert(relevant[i]);
      }
      Entry inside = closure(entry, c.disabled);
      std::map<Label, Entry> next;
      for (const auto& s : inside) {
        if (!mon_.safe(s.second)) c.locally_safe = false;
        for (const auto& e : plant_.out[s.first]) {
          const Label& x = plant_.labels[e.label];
          if (c.disabled.count(x)) continue;
          auto theta = detail::sup_sees(sup_, x);
          if (!theta) continue;
          PState t = move(s, e);
          if (!mon_.safe(t.second)) c.locally_safe = false;
          next[*theta].push_back(t);
        }
      }
      if (c.locally_safe) {
        for (auto& [theta, e] : next) c.successors.emplace_back(theta, intern(std::move(e), max_insert_));
      }
      choices.push_back(std::move(c));
    }

    if (k > 0) {
      Choice c;
      c.force = true;
      Entry next;
      for (const auto& s : entry) {
        if (!mon_.safe(s.second)) c.locally_safe = false;
        auto t = time_successor(plant_, s.first);
        if (!t) {
          c.locally_safe = false;
          break;
        }
        PState ns{*t, mon_.step(s.second, Label::time())};
        if (!mon_.safe(ns.second)) c.locally_safe = false;
        next.push_back(ns);
      }
      if (c.locally_safe) c.successors.emplace_back(Label::time(), intern(std::move(next), k - 1));
      choices.push_back(std::move(c));
    }
    nodes_[n].choices = std::move(choices);
  }

  const Lts& plant_;
  SafetyMonitor mon_;
  StaticObserver sup_;
  std::set<Label> controllable_;
  std::size_t max_insert_;
  std::size_t budget_;
  std::vector<Entry> entries_;
  std::map<Entry, std::size_t> entry_index_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> node_index_;
  std::vector<Node> nodes_;
  std::size_t initial_ = 0;
};

enum class SynthesisOutcome { Supervisor, NoSupervisor, TrivialOnly, Incomplete };

inline const char* to_string(SynthesisOutcome o) {
  switch (o) {
    case SynthesisOutcome::Supervisor: return "Supervisor";
    case SynthesisOutcome::NoSupervisor: return "NoSupervisor";
    case SynthesisOutcome::TrivialOnly: return "TrivialOnly";
    case SynthesisOutcome::Incomplete: return "Incomplete";
  }
  return "?";
}

struct SynthesisResult {
  SynthesisOutcome outcome = SynthesisOutcome::Incomplete;
  /// Present for Supervisor and TrivialOnly.
  std::optional<SupervisorAutomaton> supervisor;
  std::string reason;
  std::size_t game_nodes = 0;
  std::size_t losing_nodes = 0;
  ControllabilityReport controllability;
};

/// Maximally permissive supervisor among those that decide from the
/// supervisor observer's view, may disable actions of `controllable`, and
/// insert at most `max_insert` t actions in a row.
inline SynthesisResult synthesize(const Lts& plant, const Predicate& phi,
                                  const Observer& attacker, const Observer& sup_observer,
                                  const std::set<Label>& controllable,
                                  std::size_t max_insert = 4,
                                  std::size_t budget = default_max_states()) {
  SynthesisResult r;
  if (!plant.complete) {
    r.reason = "plant transition system was truncated";
    return r;
  }
  try {
    r.controllability = check_controllability(plant, phi, attacker, controllable, budget);
    SupervisionGame game(plant, phi, attacker, sup_observer, controllable, max_insert, budget);
    auto win = game.solve();
    r.game_nodes = game.nodes().size();
    r.losing_nodes = static_cast<std::size_t>(std::count(win.begin(), win.end(), false));
    if (!win[game.initial()]) {
      r.outcome = SynthesisOutcome::NoSupervisor;
      r.reason = "every strategy reaches an unsafe trace";
      return r;
    }
    std::vector<std::size_t> pick(game.nodes().size(), 0);
    for (std::size_t n = 0; n < game.nodes().size(); ++n) {
      if (!win[n]) continue;
      const auto& cs = game.nodes()[n].choices;
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!SupervisionGame::choice_wins(cs[i], win)) continue;
        if (!best || cs[i].rank() < cs[*best].rank()) best = i;
      }
      pick[n] = *best;
    }
    SupervisorAutomaton sup = game.realize(pick);
    // The ranking is only a local preference (disabling {h} and {l} rank
    // alike, yet one may cut far more). Switch single nodes to other
    // winning choices while that strictly enlarges the supervised
    // language.
    std::size_t work = 0;
    for (bool improved = true; improved && work < budget;) {
      improved = false;
      for (std::size_t n = 0; n < game.nodes().size() && work < budget; ++n) {
        if (!win[n]) continue;
        const auto& cs = game.nodes()[n].choices;
        for (std::size_t i = 0; i < cs.size() && work < budget; ++i) {
          if (i == pick[n] || !SupervisionGame::choice_wins(cs[i], win)) continue;
          auto trial = pick;
          trial[n] = i;
          SupervisorAutomaton cand = game.realize(trial);
          work += cand.num_states() + sup.num_states();
          Permissiveness cmp;
          try {
            cmp = compare_supervisors(plant, sup_observer, cand, sup, budget);
          } catch (const PreconditionFailed&) {
            work = budget;  // products outgrew the budget; keep what we have
            break;
          }
          if (cmp == Permissiveness::MorePermissive) {
            pick = std::move(trial);
            sup = std::move(cand);
            improved = true;
          }
        }
      }
    }
    auto check = verify_supervisor(plant, phi, attacker, sup_observer, sup, budget);
    if (check.outcome == SupervisorValidity::Incomplete) {
      r.reason = check.reason;
      return r;
    }
    if (!check.valid()) {
      throw Error("synthesized supervisor admits unsafe trace " + to_string(check.witness));
    }
    r.outcome = SynthesisOutcome::Supervisor;
    bool covers = true;
    for (const auto& l : plant.labels) {
      if (l.is_visible() && !controllable.count(l)) covers = false;
    }
    if (covers) {
      Lts composite = supervised_product(plant, sup_observer, sup, budget);
      bool visible = false;
      for (const auto& o : composite.out) {
        for (const auto& e : o) visible = visible || composite.labels[e.label].is_visible();
      }
      if (!visible) r.outcome = SynthesisOutcome::TrivialOnly;
    }
    r.supervisor = std::move(sup);
  } catch (const BudgetExceeded& e) {
    r.outcome = SynthesisOutcome::Incomplete;
    r.reason = e.what();
  }
  return r;
}

/// Whether t-insertion alone (no disabling) can enforce opacity.
/// Requires the attacker to be weaker than the supervisor observer.
inline bool insertion_only_enforceable(const Lts& plant, const Predicate& phi,
                                       const Observer& attacker, const Observer& sup_observer,
                                       std::size_t max_insert = 4,
                                       std::size_t budget = default_max_states()) {
  if (compare_observers(attacker, sup_observer).outcome != OrderOutcome::Stronger) {
    throw PreconditionFailed("the attacker must be weaker than the supervisor observer");
  }
  auto r = synthesize(plant, phi, attacker, sup_observer, {}, max_insert, budget);
  if (r.outcome == SynthesisOutcome::Incomplete) throw BudgetExceeded(r.reason);
  return r.outcome != SynthesisOutcome::NoSupervisor;
}

}  // namespace tpa

#endif  // TPA_SUPERVISOR_HPP
