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

#ifndef TPA_OPACITY_HPP
#define TPA_OPACITY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "tpa/automata.hpp"
#include "tpa/observation.hpp"
#include "tpa/predicate.hpp"
#include "tpa/semantics.hpp"

namespace tpa {

namespace detail {

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h = hash_combine(h, x);
    return h;
  }
};

struct ArrayHash {
  template <std::size_t N>
  std::size_t operator()(const std::array<std::size_t, N>& a) const {
    std::size_t h = N;
    for (auto x : a) h = hash_combine(h, x);
    return h;
  }
};

}  // namespace detail

/// Online recognizer of the safe traces of a plant: a trace w is safe if
/// phi(w) is false, or O(w) is empty, or some trace w' of the plant with
/// phi(w') false has O(w') = O(w).
///
/// The observations of the non-phi traces are recognized by an NFA whose
/// states are (plant state, phi state, observation-machine state, flush
/// position): plant moves emit their observable (or nothing), and from a
/// non-phi state the NFA may stop the plant and read the pending flush of
/// the observation machine. The monitor runs the subset construction of
/// this NFA on the observables of w, built lazily, and is itself built
/// lazily; every table is bounded by `budget` and overflow raises
/// BudgetExceeded.
class SafetyMonitor {
 public:
  using State = std::size_t;

  SafetyMonitor(const Lts& plant, Predicate phi, const Observer& attacker,
                std::size_t budget = default_max_states())
      : plant_(plant), phi_(std::move(phi)), obs_(attacker), budget_(budget) {
    std::vector<std::uint32_t> start{static_cast<std::uint32_t>(
        intern_n({plant_.initial, phi_.acceptor().initial(), obs_.initial(), kNormal}))};
    std::size_t s0 = intern_subset(closure(std::move(start)));
    initial_ = intern_m({phi_.acceptor().initial(), obs_.initial(), s0, 0});
  }

  State initial() const { return initial_; }
  std::size_t size() const { return mstates_.size(); }
  std::size_t subset_count() const { return subsets_.size(); }

  State step(State m, const Label& x) {
    auto key = std::make_pair(m, x);
    if (auto it = mmoves_.find(key); it != mmoves_.end()) return it->second;
    auto [d, o, s, emitted] = mstates_[m];
    std::size_t d2 = phi_.acceptor().next(d, x);
    auto mv = obs_.step(o, x);
    std::size_t s2 = s;
    if (mv.output) {
      s2 = subset_move(s, *mv.output);
      emitted = 1;
    }
    State r = intern_m({d2, mv.next, s2, emitted});
    mmoves_.emplace(key, r);
    return r;
  }

  bool safe(State m) {
    if (auto it = safe_.find(m); it != safe_.end()) return it->second;
    auto [d, o, s, emitted] = mstates_[m];
    bool r = true;
    if (phi_.acceptor().accepting(d)) {
      Observable rest = obs_.flush(o);
      if (emitted || !rest.empty()) {
        for (const auto& y : rest) s = subset_move(s, y);
        r = subset_accepting(s);
      }
    }
    safe_.emplace(m, r);
    return r;
  }

  /// phi holds on the traces leading to m.
  bool phi_holds(State m) const { return phi_.acceptor().accepting(mstates_[m][0]); }

  const Predicate& phi() const { return phi_; }

 private:
  static constexpr std::size_t kNormal = static_cast<std::size_t>(-1);
  using NKey = std::array<std::size_t, 4>;  // plant, phi, observer, flush position
  using MKey = std::array<std::size_t, 4>;  // phi, observer, subset, emitted
  using Subset = std::vector<std::uint32_t>;

  void guard(std::size_t n, const char* what) const {
    if (n >= budget_) {
      throw BudgetExceeded(std::string(what) + " exceeded " + std::to_string(budget_) +
                           " states");
    }
  }

  std::size_t intern_n(const NKey& k) {
    auto [it, fresh] = nindex_.emplace(k, nstates_.size());
    if (fresh) {
      guard(nstates_.size(), "observation automaton");
      nstates_.push_back(k);
    }
    return it->second;
  }

  std::size_t intern_subset(Subset s) {
    auto [it, fresh] = sindex_.emplace(s, subsets_.size());
    if (fresh) {
      guard(subsets_.size(), "subset construction");
      subsets_.push_back(std::move(s));
    }
    return it->second;
  }

  std::size_t intern_m(const MKey& k) {
    auto [it, fresh] = mindex_.emplace(k, mstates_.size());
    if (fresh) {
      guard(mstates_.size(), "safety monitor");
      mstates_.push_back(k);
    }
    return it->second;
  }

  // NFA moves of one state: epsilon successors and lettered successors.
  struct NMoves {
    std::vector<std::uint32_t> eps;
    std::vector<std::pair<Label, std::uint32_t>> letters;
  };

  const NMoves& nmoves(std::size_t n) {
    if (auto it = nmoves_.find(n); it != nmoves_.end()) return it->second;
    NMoves r;
    const NKey k = nstates_[n];
    const auto [p, d, o, f] = k;
    if (f == kNormal) {
      for (const auto& e : plant_.out[p]) {
        const Label& x = plant_.labels[e.label];
        auto mv = obs_.step(o, x);
        auto id = static_cast<std::uint32_t>(
            intern_n({e.target, phi_.acceptor().next(d, x), mv.next, kNormal}));
        if (mv.output) {
          r.letters.emplace_back(*mv.output, id);
        } else {
          r.eps.push_back(id);
        }
      }
      if (!phi_.acceptor().accepting(d)) {
        r.eps.push_back(static_cast<std::uint32_t>(intern_n({p, d, o, 0})));
      }
    } else {
      Observable rest = obs_.flush(o);
      if (f < rest.size()) {
        r.letters.emplace_back(rest[f],
                               static_cast<std::uint32_t>(intern_n({p, d, o, f + 1})));
      }
    }
    return nmoves_.emplace(n, std::move(r)).first->second;
  }

  bool n_accepting(std::size_t n) {
    const auto& k = nstates_[n];
    return k[3] != kNormal && k[3] == obs_.flush(k[2]).size();
  }

  Subset closure(Subset s) {
    std::vector<std::uint32_t> stack = s;
    std::unordered_map<std::uint32_t, bool> seen;
    for (auto x : s) seen[x] = true;
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      for (auto e : nmoves(n).eps) {
        if (seen.emplace(e, true).second) {
          s.push_back(e);
          stack.push_back(e);
        }
      }
    }
    std::sort(s.begin(), s.end());
    return s;
  }

  std::size_t subset_move(std::size_t s, const Label& y) {
    auto key = std::make_pair(s, y);
    if (auto it = smoves_.find(key); it != smoves_.end()) return it->second;
    Subset next;
    const Subset members = subsets_[s];
    for (auto n : members) {
      for (const auto& [l, target] : nmoves(n).letters) {
        if (l == y) next.push_back(target);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::size_t r = intern_subset(closure(std::move(next)));
    smoves_.emplace(key, r);
    return r;
  }

  bool subset_accepting(std::size_t s) {
    if (auto it = sacc_.find(s); it != sacc_.end()) return it->second;
    bool r = false;
    for (auto n : subsets_[s]) {
      if (n_accepting(n)) {
        r = true;
        break;
      }
    }
    sacc_.emplace(s, r);
    return r;
  }

  const Lts& plant_;
  Predicate phi_;
  ObservationMachine obs_;
  std::size_t budget_;

  std::vector<NKey> nstates_;
  std::unordered_map<NKey, std::size_t, detail::ArrayHash> nindex_;
  std::unordered_map<std::size_t, NMoves> nmoves_;

  std::vector<Subset> subsets_;
  std::unordered_map<Subset, std::size_t, detail::VecHash> sindex_;
  std::map<std::pair<std::size_t, Label>, std::size_t> smoves_;
  std::unordered_map<std::size_t, bool> sacc_;

  std::vector<MKey> mstates_;
  std::unordered_map<MKey, std::size_t, detail::ArrayHash> mindex_;
  std::map<std::pair<std::size_t, Label>, std::size_t> mmoves_;
  std::unordered_map<std::size_t, bool> safe_;
  State initial_ = 0;
};

/// The safe traces of a plant as an explicit automaton: the subset
/// construction of the plant (tau kept as a letter) in product with the
/// safety monitor. A state accepts iff the trace is a plant trace and is
/// safe, so the language is K, a subset of Tr(P).
struct SafeTraceAutomaton {
  Dfa acceptor;
  std::size_t plant_subsets = 0;
  std::size_t monitor_states = 0;
  std::size_t observation_subsets = 0;
};

inline SafeTraceAutomaton safe_automaton(const Lts& plant, const Predicate& phi,
                                         const Observer& attacker,
                                         std::size_t budget = default_max_states()) {
  require_complete(plant, "safe_automaton");
  SafetyMonitor mon(plant, phi, attacker, budget);
  LtsDeterminizer det(plant, false, budget);
  SafeTraceAutomaton r;
  Dfa& d = r.acceptor;
  const std::size_t sink = d.add_state(false);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto intern = [&](std::size_t s, std::size_t m) {
    auto [it, fresh] = index.emplace(std::make_pair(s, m), 0);
    if (fresh) {
      if (index.size() > budget) throw BudgetExceeded("safe-trace automaton exceeded budget");
      it->second = d.add_state(mon.safe(m));
      d.set_default(it->second, sink);
      queue.emplace_back(s, m);
    }
    return it->second;
  };
  d.set_initial(intern(det.initial(), mon.initial()));
  while (!queue.empty()) {
    auto [s, m] = queue.front();
    queue.pop_front();
    std::size_t from = index.at({s, m});
    for (const auto& [x, s2] : det.moves(s)) {
      d.set_transition(from, x, intern(s2, mon.step(m, x)));
    }
  }
  r.plant_subsets = det.size();
  r.monitor_states = mon.size();
  r.observation_subsets = mon.subset_count();
  return r;
}

// ---------------------------------------------------------------------------
// Verdicts

enum class OpacityOutcome { Opaque, NotOpaque, Incomplete };

inline const char* to_string(OpacityOutcome o) {
  switch (o) {
    case OpacityOutcome::Opaque: return "Opaque";
    case OpacityOutcome::NotOpaque: return "NotOpaque";
    case OpacityOutcome::Incomplete: return "Incomplete";
  }
  return "?";
}

struct OpacityVerdict {
  OpacityOutcome outcome = OpacityOutcome::Incomplete;
  Trace witness;
  Observable observable;
  /// Product states explored (plant state, monitor state).
  std::size_t explored = 0;
  std::size_t monitor_states = 0;
  std::string reason;

  bool opaque() const { return outcome == OpacityOutcome::Opaque; }
};

/// Language opacity of phi under the attacker's observation. A violation
/// is a shortest unsafe plant trace, least in label order among the
/// shortest.
inline OpacityVerdict check_opacity(const Lts& plant, const Predicate& phi,
                                    const Observer& attacker,
                                    std::size_t budget = default_max_states()) {
  OpacityVerdict v;
  if (!plant.complete) {
    v.reason = "plant transition system was truncated at " +
               std::to_string(plant.num_states()) + " states";
    return v;
  }
  try {
    SafetyMonitor mon(plant, phi, attacker, budget);
    using Node = std::pair<StateId, std::size_t>;
    // Level-synchronous BFS. Nodes of one level are kept in the label
    // order of their paths; nodes whose paths coincide share a rank.
    struct Entry {
      Node node;
      std::size_t parent;
      Label label;
      std::size_t rank;
    };
    std::vector<Entry> nodes;
    std::set<Node> seen;
    auto trace_to = [&](std::size_t i) {
      Trace w;
      while (i != 0) {
        w.push_back(nodes[i].label);
        i = nodes[i].parent;
      }
      std::reverse(w.begin(), w.end());
      return w;
    };
    Node start{plant.initial, mon.initial()};
    nodes.push_back({start, 0, Label::tau(), 0});
    seen.insert(start);
    for (std::size_t lo = 0, hi = 1; lo < hi; lo = hi, hi = nodes.size()) {
      for (std::size_t i = lo; i < hi; ++i) {
        if (!mon.safe(nodes[i].node.second)) {
          v.outcome = OpacityOutcome::NotOpaque;
          v.witness = trace_to(i);
          v.observable = observe(attacker, v.witness);
          v.explored = nodes.size();
          v.monitor_states = mon.size();
          return v;
        }
      }
      std::vector<Entry> next;
      for (std::size_t i = lo; i < hi; ++i) {
        auto [p, m] = nodes[i].node;
        for (const auto& e : plant.out[p]) {
          const Label& x = plant.labels[e.label];
          next.push_back({{e.target, mon.step(m, x)}, i, x, nodes[i].rank});
        }
      }
      std::stable_sort(next.begin(), next.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.rank, a.label) < std::tie(b.rank, b.label);
      });
      std::size_t rank = 0;
      const Entry* prev = nullptr;
      for (const Entry& e : next) {
        if (prev && (prev->rank != e.rank || !(prev->label == e.label))) ++rank;
        prev = &e;
        if (!seen.insert(e.node).second) continue;
        if (nodes.size() >= budget) throw BudgetExceeded("opacity product exceeded budget");
        nodes.push_back({e.node, e.parent, e.label, rank});
      }
    }
    v.outcome = OpacityOutcome::Opaque;
    v.explored = nodes.size();
    v.monitor_states = mon.size();
  } catch (const BudgetExceeded& e) {
    v.outcome = OpacityOutcome::Incomplete;
    v.reason = e.what();
  }
  return v;
}

/// One instance of the monotonicity property: if phi2 implies phi1 and
/// o2 is weaker than o1, opacity for (phi1, o1) carries over to
/// (phi2, o2). Returns nothing when the hypotheses fail or a verdict is
/// incomplete; otherwise whether the implication held.
inline std::optional<bool> check_monotonicity_instance(const Lts& plant, const Predicate& phi1,
                                                       const Predicate& phi2,
                                                       const Observer& o1,
                                                       const Observer& o2,
                                                       std::size_t budget = default_max_states()) {
  if (compare_observers(o2, o1).outcome != OrderOutcome::Stronger) return std::nullopt;
  if (!implies(phi2, phi1)) return std::nullopt;
  auto v1 = check_opacity(plant, phi1, o1, budget);
  auto v2 = check_opacity(plant, phi2, o2, budget);
  if (v1.outcome == OpacityOutcome::Incomplete || v2.outcome == OpacityOutcome::Incomplete) {
    return std::nullopt;
  }
  return !v1.opaque() || v2.opaque();
}

enum class TimingOutcome { Prone, NotProne, Incomplete };

inline const char* to_string(TimingOutcome o) {
  switch (o) {
    case TimingOutcome::Prone: return "Prone";
    case TimingOutcome::NotProne: return "NotProne";
    case TimingOutcome::Incomplete: return "Incomplete";
  }
  return "?";
}

struct TimingVerdict {
  TimingOutcome outcome = TimingOutcome::Incomplete;
  OpacityVerdict timed;
  OpacityVerdict untimed;
};

/// Prone iff the plant leaks under the attacker but not under the same
/// attacker with time erased.
inline TimingVerdict check_timing_attack(const Lts& plant, const Predicate& phi,
                                         const Observer& attacker,
                                         std::size_t budget = default_max_states()) {
  TimingVerdict r;
  r.timed = check_opacity(plant, phi, attacker, budget);
  r.untimed = check_opacity(plant, phi, derive_untimed(attacker), budget);
  if (r.timed.outcome == OpacityOutcome::Incomplete ||
      r.untimed.outcome == OpacityOutcome::Incomplete) {
    // A decided NotProne survives one incomplete side.
    if (r.timed.outcome == OpacityOutcome::Opaque ||
        r.untimed.outcome == OpacityOutcome::NotOpaque) {
      r.outcome = TimingOutcome::NotProne;
    }
    return r;
  }
  r.outcome = (!r.timed.opaque() && r.untimed.opaque()) ? TimingOutcome::Prone
                                                        : TimingOutcome::NotProne;
  return r;
}

// ---------------------------------------------------------------------------
// Time dependability

enum class DependabilityReading {
  /// Every unsafe plant trace has a t-padding that is a safe plant trace.
  Repaired,
  /// Every phi-trace has a t-padding on which phi fails.
  Literal
};

namespace detail {

inline bool literal_time_dependable(const Predicate& phi) {
  const Dfa& d = phi.acceptor();
  const auto sigma = distinguishing_alphabet({&d});
  const Label t = Label::time();
  auto close = [&](std::set<std::size_t> s) {
    std::vector<std::size_t> stack(s.begin(), s.end());
    while (!stack.empty()) {
      auto q = stack.back();
      stack.pop_back();
      if (s.insert(d.next(q, t)).second) stack.push_back(d.next(q, t));
    }
    return s;
  };
  using Node = std::pair<std::size_t, std::set<std::size_t>>;
  std::set<Node> seen;
  std::deque<Node> queue;
  Node start{d.initial(), close({d.initial()})};
  seen.insert(start);
  queue.push_back(start);
  while (!queue.empty()) {
    auto [q, s] = queue.front();
    queue.pop_front();
    if (d.accepting(q) &&
        std::all_of(s.begin(), s.end(), [&](std::size_t x) { return d.accepting(x); })) {
      return false;
    }
    for (const auto& x : sigma) {
      std::set<std::size_t> s2;
      for (auto y : s) s2.insert(d.next(y, x));
      Node n{d.next(q, x), close(std::move(s2))};
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  return true;
}

}  // namespace detail

/// Whether every unsafe trace can be made safe by inserting t actions
/// (Repaired), or whether every phi-trace has a t-padding outside phi
/// (Literal). The literal reading ignores the plant and fails for every
/// predicate that t-insertions cannot falsify, such as contains {h}.
inline bool is_time_dependable(const Lts& plant, const Predicate& phi,
                               const Observer& attacker,
                               DependabilityReading reading = DependabilityReading::Repaired,
                               std::size_t budget = default_max_states()) {
  if (reading == DependabilityReading::Literal) return detail::literal_time_dependable(phi);
  require_complete(plant, "is_time_dependable");
  SafetyMonitor mon(plant, phi, attacker, budget);
  auto time_id = plant.label_id(Label::time());
  using Pair = std::pair<StateId, std::size_t>;
  using Padded = std::set<Pair>;
  auto close = [&](Padded s) {
    if (!time_id) return s;
    std::vector<Pair> stack(s.begin(), s.end());
    while (!stack.empty()) {
      auto [p, m] = stack.back();
      stack.pop_back();
      for (const auto& e : plant.out[p]) {
        if (e.label != *time_id) continue;
        Pair n{e.target, mon.step(m, Label::time())};
        if (s.insert(n).second) stack.push_back(n);
      }
    }
    return s;
  };
  using Node = std::tuple<StateId, std::size_t, Padded>;
  std::set<Node> seen;
  std::deque<Node> queue;
  Node start{plant.initial, mon.initial(), close({{plant.initial, mon.initial()}})};
  seen.insert(start);
  queue.push_back(start);
  while (!queue.empty()) {
    auto [p, m, padded] = queue.front();
    queue.pop_front();
    if (seen.size() > budget) throw BudgetExceeded("time-dependability product exceeded budget");
    if (!mon.safe(m) && std::none_of(padded.begin(), padded.end(),
                                     [&](const Pair& q) { return mon.safe(q.second); })) {
      return false;
    }
    for (const auto& e : plant.out[p]) {
      const Label& x = plant.labels[e.label];
      Padded next;
      for (const auto& [q, mq] : padded) {
        for (const auto& f : plant.out[q]) {
          if (f.label == e.label) next.emplace(f.target, mon.step(mq, x));
        }
      }
      Node n{e.target, mon.step(m, x), close(std::move(next))};
      if (seen.insert(n).second) queue.push_back(std::move(n));
    }
  }
  return true;
}

}  // namespace tpa

#endif  // TPA_OPACITY_HPP
