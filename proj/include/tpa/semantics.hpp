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

#ifndef TPA_SEMANTICS_HPP
#define TPA_SEMANTICS_HPP

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tpa/error.hpp"
#include "tpa/label.hpp"
#include "tpa/term.hpp"

namespace tpa {

struct SemanticsOptions {
  /// When set, tau-prefixes do not idle (they are urgent like
  /// synchronizations). The default lets every non-t prefix idle.
  bool strict_tau_urgency = false;
};

struct Step {
  Label label;
  Term target;
};

using StepSet = std::vector<Step>;

namespace detail {

inline bool name_restricted(const NameSet& names, const Label& l) {
  return l.is_visible() && names.count(l.action().name) > 0;
}

inline Label relabel_label(const Relabeling& f, const Label& l) {
  if (!l.is_visible()) return l;
  auto it = f.find(l.action().name);
  if (it == f.end()) return l;
  return Label::visible(it->second, l.action().co);
}

// Derivation depth is bounded by the term size plus one unfolding per
// guarded recursion, so plain recursion suffices.
inline void derive(const Term& t, const SemanticsOptions& opt, StepSet& out) {
  switch (t.kind()) {
    case TermKind::Nil:
      out.push_back({Label::time(), t});  // A1
      return;
    case TermKind::Var:
      throw IllFormedTerm("cannot step open term (free variable '" + t.name() +
                          "')");
    case TermKind::Prefix: {
      const Label& u = t.label();
      out.push_back({u, t.body()});
      // A2: non-time prefixes idle. A t-prefix advances only through the
      // prefix rule, which keeps time deterministic.
      bool idles = !u.is_time() && !(opt.strict_tau_urgency && u.is_tau());
      if (idles) out.push_back({Label::time(), t});
      return;
    }
    case TermKind::Choice: {
      StepSet l, r;
      derive(t.lhs(), opt, l);
      derive(t.rhs(), opt, r);
      for (auto& s : l) {
        if (!s.label.is_time()) out.push_back(s);
      }
      for (auto& s : r) {
        if (!s.label.is_time()) out.push_back(s);
      }
      // S: time passes only if both branches let it, and keeps the choice.
      for (auto& sl : l) {
        if (!sl.label.is_time()) continue;
        for (auto& sr : r) {
          if (sr.label.is_time()) {
            out.push_back({Label::time(), Term::choice(sl.target, sr.target)});
          }
        }
      }
      return;
    }
    case TermKind::Par: {
      StepSet l, r;
      derive(t.lhs(), opt, l);
      derive(t.rhs(), opt, r);
      std::size_t first = out.size();
      for (auto& s : l) {
        if (!s.label.is_time()) out.push_back({s.label, Term::par(s.target, t.rhs())});
      }
      for (auto& s : r) {
        if (!s.label.is_time()) out.push_back({s.label, Term::par(t.lhs(), s.target)});
      }
      for (auto& sl : l) {
        if (!sl.label.is_visible()) continue;
        Label co = Label::visible(sl.label.action().complement());
        for (auto& sr : r) {
          if (sr.label == co) {
            out.push_back({Label::tau(), Term::par(sl.target, sr.target)});
          }
        }
      }
      // Pa: internal moves take priority over time.
      bool has_tau = std::any_of(out.begin() + static_cast<std::ptrdiff_t>(first),
                                 out.end(), [](const Step& s) { return s.label.is_tau(); });
      if (has_tau) return;
      for (auto& sl : l) {
        if (!sl.label.is_time()) continue;
        for (auto& sr : r) {
          if (sr.label.is_time()) {
            out.push_back({Label::time(), Term::par(sl.target, sr.target)});
          }
        }
      }
      return;
    }
    case TermKind::Restrict: {
      StepSet inner;
      derive(t.body(), opt, inner);
      for (auto& s : inner) {
        if (name_restricted(t.restricted(), s.label)) continue;
        out.push_back({s.label, Term::restrict(s.target, t.restricted())});
      }
      return;
    }
    case TermKind::Relabel: {
      StepSet inner;
      derive(t.body(), opt, inner);
      for (auto& s : inner) {
        out.push_back({relabel_label(t.relabeling(), s.label),
                       Term::relabel(s.target, t.relabeling())});
      }
      return;
    }
    case TermKind::Rec:
      derive(unfold(t), opt, out);
      return;
  }
}

}  // namespace detail

/// All (label, successor) pairs derivable from the CCS rules plus the
/// time rules. Duplicates are removed; order is by label, then target key.
inline StepSet step(const Term& t, const SemanticsOptions& opt = {}) {
  StepSet out;
  detail::derive(t, opt, out);
  std::sort(out.begin(), out.end(), [](const Step& a, const Step& b) {
    auto c = a.label <=> b.label;
    if (c != 0) return c < 0;
    return a.target.key() < b.target.key();
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Step& a, const Step& b) {
                          return a.label == b.label && a.target == b.target;
                        }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Canonical state representatives

namespace detail {

inline void flatten(const Term& t, TermKind k, std::vector<Term>& out) {
  if (t.kind() == k) {
    flatten(t.lhs(), k, out);
    flatten(t.rhs(), k, out);
  } else {
    out.push_back(t);
  }
}

inline Term canon(const Term& t, bool unfold_rec) {
  switch (t.kind()) {
    case TermKind::Nil:
    case TermKind::Var: return t;
    case TermKind::Prefix:
      return Term::prefix(t.label(), canon(t.body(), false));
    case TermKind::Rec:
      if (unfold_rec) return canon(unfold(t), true);
      return Term::rec(t.name(), canon(t.body(), false));
    case TermKind::Choice:
    case TermKind::Par: {
      std::vector<Term> raw, ops;
      flatten(t, t.kind(), raw);
      for (auto& op : raw) {
        Term c = canon(op, unfold_rec);
        if (c.kind() == t.kind()) {
          flatten(c, t.kind(), ops);
        } else {
          ops.push_back(std::move(c));
        }
      }
      ops.erase(std::remove_if(ops.begin(), ops.end(),
                               [](const Term& x) { return x.is_nil(); }),
                ops.end());
      std::sort(ops.begin(), ops.end(),
                [](const Term& a, const Term& b) { return a.key() < b.key(); });
      if (t.kind() == TermKind::Choice) {
        // P + P ~ P; the same does not hold for parallel composition.
        ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
        return Term::choice_of(ops);
      }
      return Term::par_of(ops);
    }
    case TermKind::Restrict: {
      Term b = canon(t.body(), unfold_rec);
      if (b.is_nil() || t.restricted().empty()) return b;
      if (b.kind() == TermKind::Restrict) {
        NameSet all = t.restricted();
        all.insert(b.restricted().begin(), b.restricted().end());
        return Term::restrict(b.body(), std::move(all));
      }
      return Term::restrict(std::move(b), t.restricted());
    }
    case TermKind::Relabel: {
      Term b = canon(t.body(), unfold_rec);
      if (b.is_nil() || t.relabeling().empty()) return b;
      return Term::relabel(std::move(b), t.relabeling());
    }
  }
  return t;
}

}  // namespace detail

/// Bisimilarity-preserving normal form used to identify LTS states:
/// recursions outside prefixes are unfolded, choice and parallel operands
/// are flattened and sorted, Nil units dropped, duplicate choice operands
/// merged, and empty restrictions/relabelings removed.
inline Term canonicalize(const Term& t) { return detail::canon(t, true); }

// ---------------------------------------------------------------------------
// Explicit transition systems

using StateId = std::size_t;
using LabelId = std::size_t;

struct Edge {
  LabelId label;
  StateId target;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Explicit labeled transition system. Labels are interned in `labels`
/// (sorted by printed form, so label ids order like labels); outgoing
/// edges are sorted by (label id, target).
struct Lts {
  std::vector<std::string> state_names;
  std::vector<Label> labels;
  std::vector<std::vector<Edge>> out;
  StateId initial = 0;
  bool complete = true;

  std::size_t num_states() const { return out.size(); }
  std::size_t num_transitions() const {
    std::size_t n = 0;
    for (const auto& e : out) n += e.size();
    return n;
  }
  std::optional<LabelId> label_id(const Label& l) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), l);
    if (it == labels.end() || !(*it == l)) return std::nullopt;
    return static_cast<LabelId>(it - labels.begin());
  }
  std::vector<StateId> successors(StateId s, LabelId l) const {
    std::vector<StateId> r;
    for (const auto& e : out[s]) {
      if (e.label == l) r.push_back(e.target);
    }
    return r;
  }
};

/// Builds an Lts from explicit (source, label, target) triples. State
/// names default to "s<i>".
class LtsBuilder {
 public:
  StateId add_state(std::string name = {}) {
    if (name.empty()) name = "s" + std::to_string(names_.size());
    names_.push_back(std::move(name));
    return names_.size() - 1;
  }
  void add_transition(StateId from, Label l, StateId to) {
    edges_.push_back({from, std::move(l), to});
  }
  void set_initial(StateId s) { initial_ = s; }
  void set_complete(bool c) { complete_ = c; }

  Lts build() const {
    Lts lts;
    lts.state_names = names_;
    lts.out.resize(names_.size());
    lts.initial = initial_;
    lts.complete = complete_;
    std::set<Label> alphabet;
    for (const auto& e : edges_) alphabet.insert(e.label);
    lts.labels.assign(alphabet.begin(), alphabet.end());
    for (const auto& e : edges_) {
      lts.out.at(e.from).push_back({*lts.label_id(e.label), e.to});
    }
    for (auto& o : lts.out) {
      std::sort(o.begin(), o.end());
      o.erase(std::unique(o.begin(), o.end()), o.end());
    }
    return lts;
  }

 private:
  struct RawEdge {
    StateId from;
    Label label;
    StateId to;
  };
  std::vector<std::string> names_;
  std::vector<RawEdge> edges_;
  StateId initial_ = 0;
  bool complete_ = true;
};

inline std::size_t default_max_states() {
  if (const char* env = std::getenv("TPA_MAX_STATES")) {
    try {
      return std::stoul(env);
    } catch (...) {
    }
  }
  return 100000;
}

/// Reachable fragment of the transition system of t, explored
/// breadth-first from the canonical form of t (state 0). If more than
/// max_states states are discovered, exploration stops and the result is
/// marked incomplete.
inline Lts build_lts(const Term& t, std::size_t max_states = default_max_states(),
                     const SemanticsOptions& opt = {}) {
  require_wellformed(t);
  LtsBuilder b;
  std::unordered_map<Term, StateId, TermHash> index;
  std::vector<Term> states;
  std::deque<StateId> queue;
  bool complete = true;

  auto intern = [&](const Term& u) -> std::optional<StateId> {
    auto it = index.find(u);
    if (it != index.end()) return it->second;
    if (states.size() >= max_states) return std::nullopt;
    StateId id = b.add_state(print_term(u));
    index.emplace(u, id);
    states.push_back(u);
    queue.push_back(id);
    return id;
  };

  intern(canonicalize(t));
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    Term current = states[s];
    for (const auto& st : step(current, opt)) {
      auto target = intern(canonicalize(st.target));
      if (!target) {
        complete = false;
        continue;
      }
      b.add_transition(s, st.label, *target);
    }
  }
  b.set_complete(complete);
  b.set_initial(0);
  return b.build();
}

// ---------------------------------------------------------------------------
// Queries

struct TraceSet {
  std::set<Trace> traces;
  /// Set when the underlying Lts was truncated; the set is then a lower
  /// bound.
  bool partial = false;
};

/// Every label sequence of length <= depth from the initial state.
inline TraceSet traces(const Lts& l, std::size_t depth) {
  TraceSet r;
  r.partial = !l.complete;
  if (l.num_states() == 0) return r;
  // Breadth-first over (trace, state set) so shared prefixes are not
  // re-enumerated per path.
  std::map<Trace, std::set<StateId>> frontier{{Trace{}, {l.initial}}};
  r.traces.insert(Trace{});
  for (std::size_t d = 0; d < depth; ++d) {
    std::map<Trace, std::set<StateId>> next;
    for (const auto& [w, states] : frontier) {
      for (StateId s : states) {
        for (const auto& e : l.out[s]) {
          Trace w2 = w;
          w2.push_back(l.labels[e.label]);
          next[w2].insert(e.target);
        }
      }
    }
    for (const auto& [w, _] : next) r.traces.insert(w);
    frontier = std::move(next);
  }
  return r;
}

inline std::set<StateId> tau_closure(const Lts& l, std::set<StateId> states) {
  auto tau = l.label_id(Label::tau());
  if (!tau) return states;
  std::vector<StateId> stack(states.begin(), states.end());
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& e : l.out[s]) {
      if (e.label == *tau && states.insert(e.target).second) stack.push_back(e.target);
    }
  }
  return states;
}

/// States reachable by tau* x tau*.
inline std::set<StateId> weak_step(const Lts& l, StateId s, const Label& x) {
  if (x.is_tau()) throw PreconditionFailed("weak_step label must not be tau");
  std::set<StateId> after;
  auto id = l.label_id(x);
  if (!id) return after;
  for (StateId u : tau_closure(l, {s})) {
    for (const auto& e : l.out[u]) {
      if (e.label == *id) after.insert(e.target);
    }
  }
  return tau_closure(l, std::move(after));
}

inline std::set<Label> enabled(const Lts& l, StateId s) {
  std::set<Label> r;
  for (const auto& e : l.out[s]) r.insert(l.labels[e.label]);
  return r;
}

struct SortResult {
  std::set<Label> labels;
  /// The Lts was incomplete, so `labels` is a lower bound.
  bool lower_bound = false;
};

/// L(P): labels of all reachable transitions.
inline SortResult sort_of(const Lts& l) {
  SortResult r;
  r.lower_bound = !l.complete;
  for (const auto& o : l.out) {
    for (const auto& e : o) r.labels.insert(l.labels[e.label]);
  }
  return r;
}

inline SortResult sort_of(const Term& t, std::size_t max_states = default_max_states(),
                          const SemanticsOptions& opt = {}) {
  return sort_of(build_lts(t, max_states, opt));
}

/// Number of t-successors per state never exceeds one.
inline bool time_deterministic(const Lts& l) {
  auto t = l.label_id(Label::time());
  if (!t) return true;
  for (const auto& o : l.out) {
    std::size_t n = 0;
    for (const auto& e : o) n += e.label == *t;
    if (n > 1) return false;
  }
  return true;
}

/// The unique t-successor of s, if any.
inline std::optional<StateId> time_successor(const Lts& l, StateId s) {
  auto t = l.label_id(Label::time());
  if (!t) return std::nullopt;
  for (const auto& e : l.out[s]) {
    if (e.label == *t) return e.target;
  }
  return std::nullopt;
}

}  // namespace tpa

#endif  // TPA_SEMANTICS_HPP
