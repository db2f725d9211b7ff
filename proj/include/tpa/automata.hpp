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

#ifndef TPA_AUTOMATA_HPP
#define TPA_AUTOMATA_HPP

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tpa/error.hpp"
#include "tpa/label.hpp"
#include "tpa/semantics.hpp"

namespace tpa {

/// Complete deterministic automaton over the (unbounded) label alphabet.
/// Every state has explicit transitions for finitely many labels and a
/// default target for all others, so the transition function is total.
class Dfa {
 public:
  std::size_t add_state(bool accepting) {
    accepting_.push_back(accepting);
    explicit_.emplace_back();
    default_.push_back(accepting_.size() - 1);  // self loop until set
    return accepting_.size() - 1;
  }
  void set_transition(std::size_t from, const Label& l, std::size_t to) {
    explicit_.at(from)[l] = to;
  }
  void set_default(std::size_t from, std::size_t to) { default_.at(from) = to; }
  void set_initial(std::size_t s) { initial_ = s; }
  void set_accepting(std::size_t s, bool a) { accepting_.at(s) = a; }

  std::size_t num_states() const { return accepting_.size(); }
  std::size_t initial() const { return initial_; }
  bool accepting(std::size_t s) const { return accepting_.at(s); }
  std::size_t default_target(std::size_t s) const { return default_.at(s); }
  const std::map<Label, std::size_t>& explicit_transitions(std::size_t s) const {
    return explicit_.at(s);
  }

  std::size_t next(std::size_t s, const Label& l) const {
    const auto& m = explicit_[s];
    auto it = m.find(l);
    return it == m.end() ? default_[s] : it->second;
  }
  std::size_t run(const Trace& w) const { return run_from(initial_, w); }
  std::size_t run_from(std::size_t s, const Trace& w) const {
    for (const auto& x : w) s = next(s, x);
    return s;
  }
  bool accepts(const Trace& w) const { return accepting_[run(w)]; }

  /// Labels with an explicit transition somewhere.
  std::set<Label> letters() const {
    std::set<Label> r;
    for (const auto& m : explicit_) {
      for (const auto& [l, _] : m) r.insert(l);
    }
    return r;
  }

  Dfa complemented() const {
    Dfa d = *this;
    for (auto&& a : d.accepting_) a = !a;
    return d;
  }

 private:
  std::vector<bool> accepting_;
  std::vector<std::map<Label, std::size_t>> explicit_;
  std::vector<std::size_t> default_;
  std::size_t initial_ = 0;
};

/// A visible label no user alphabet contains; stands for "every other
/// letter" when comparing automata with default transitions.
inline Label fresh_letter(int i = 0) {
  return Label::visible("~" + std::to_string(i));
}

/// Letters that distinguish the behaviour of the given automata: their
/// explicit letters, tau, t and one fresh representative.
inline std::vector<Label> distinguishing_alphabet(const std::vector<const Dfa*>& dfas) {
  std::set<Label> s{Label::tau(), Label::time(), fresh_letter()};
  for (const auto* d : dfas) {
    auto l = d->letters();
    s.insert(l.begin(), l.end());
  }
  return {s.begin(), s.end()};
}

enum class Combine { And, Or };

inline Dfa product(const Dfa& a, const Dfa& b, Combine how) {
  auto sigma = distinguishing_alphabet({&a, &b});
  Dfa out;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto intern = [&](std::size_t x, std::size_t y) {
    auto [it, fresh] = index.emplace(std::make_pair(x, y), 0);
    if (fresh) {
      bool acc = how == Combine::And ? (a.accepting(x) && b.accepting(y))
                                     : (a.accepting(x) || b.accepting(y));
      it->second = out.add_state(acc);
      queue.emplace_back(x, y);
    }
    return it->second;
  };
  out.set_initial(intern(a.initial(), b.initial()));
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    std::size_t s = index.at({x, y});
    std::size_t dflt = intern(a.next(x, fresh_letter()), b.next(y, fresh_letter()));
    out.set_default(s, dflt);
    for (const auto& l : sigma) {
      if (l == fresh_letter()) continue;
      std::size_t t = intern(a.next(x, l), b.next(y, l));
      if (t != dflt) out.set_transition(s, l, t);
    }
  }
  return out;
}

/// Shortest word accepted by `a` and rejected by `b`, if any.
inline std::optional<Trace> inclusion_counterexample(const Dfa& a, const Dfa& b) {
  auto sigma = distinguishing_alphabet({&a, &b});
  std::map<std::pair<std::size_t, std::size_t>, Trace> seen;
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  seen[{a.initial(), b.initial()}] = {};
  queue.emplace_back(a.initial(), b.initial());
  while (!queue.empty()) {
    auto p = queue.front();
    queue.pop_front();
    const Trace w = seen[p];
    if (a.accepting(p.first) && !b.accepting(p.second)) return w;
    for (const auto& l : sigma) {
      std::pair<std::size_t, std::size_t> q{a.next(p.first, l), b.next(p.second, l)};
      if (seen.count(q)) continue;
      Trace w2 = w;
      w2.push_back(l);
      seen.emplace(q, std::move(w2));
      queue.push_back(q);
    }
  }
  return std::nullopt;
}

inline bool language_included(const Dfa& a, const Dfa& b) {
  return !inclusion_counterexample(a, b).has_value();
}

inline bool language_equal(const Dfa& a, const Dfa& b) {
  return language_included(a, b) && language_included(b, a);
}

/// Reachable part of `d` with equivalent states merged (Moore refinement
/// over the distinguishing alphabet).
inline Dfa minimize(const Dfa& d) {
  auto sigma = distinguishing_alphabet({&d});
  std::vector<std::size_t> order;
  std::map<std::size_t, std::size_t> pos;
  std::deque<std::size_t> queue{d.initial()};
  pos[d.initial()] = 0;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (const auto& l : sigma) {
      std::size_t t = d.next(s, l);
      if (pos.emplace(t, pos.size()).second) queue.push_back(t);
    }
  }
  const std::size_t n = order.size();
  std::vector<std::size_t> block(n);
  for (std::size_t i = 0; i < n; ++i) block[i] = d.accepting(order[i]) ? 1 : 0;
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> sig{block[i]};
      for (const auto& l : sigma) sig.push_back(block[pos.at(d.next(order[i], l))]);
      next[i] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    block = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  Dfa out;
  for (std::size_t b = 0; b < count; ++b) out.add_state(false);
  const Label other = fresh_letter();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t b = block[i];
    out.set_accepting(b, d.accepting(order[i]));
    std::size_t dflt = block[pos.at(d.next(order[i], other))];
    out.set_default(b, dflt);
    for (const auto& l : sigma) {
      std::size_t t = block[pos.at(d.next(order[i], l))];
      if (!(l == other) && t != dflt) out.set_transition(b, l, t);
    }
  }
  out.set_initial(block[0]);
  return out;
}

// ---------------------------------------------------------------------------
// Determinization of transition systems

/// Lazy subset construction over an Lts (every state accepting, i.e. the
/// prefix-closed trace language). With `abstract_tau`, subsets are closed
/// under tau and tau is not a letter.
class LtsDeterminizer {
 public:
  LtsDeterminizer(const Lts& lts, bool abstract_tau,
                  std::size_t budget = default_max_states())
      : lts_(lts), abstract_tau_(abstract_tau), budget_(budget) {
    tau_ = lts.label_id(Label::tau());
    std::set<StateId> init{lts.initial};
    initial_ = intern(close(std::move(init)));
  }

  std::size_t initial() const { return initial_; }
  std::size_t size() const { return subsets_.size(); }
  const std::set<StateId>& subset(std::size_t id) const { return subsets_[id]; }

  /// Successor subsets, keyed by label. Empty subsets are omitted.
  const std::map<Label, std::size_t>& moves(std::size_t id) {
    auto it = moves_.find(id);
    if (it != moves_.end()) return it->second;
    std::map<LabelId, std::set<StateId>> by_label;
    for (StateId s : subsets_[id]) {
      for (const auto& e : lts_.out[s]) {
        if (abstract_tau_ && tau_ && e.label == *tau_) continue;
        by_label[e.label].insert(e.target);
      }
    }
    std::map<Label, std::size_t> m;
    for (auto& [l, set] : by_label) {
      m.emplace(lts_.labels[l], intern(close(std::move(set))));
    }
    return moves_.emplace(id, std::move(m)).first->second;
  }

 private:
  std::set<StateId> close(std::set<StateId> s) const {
    return abstract_tau_ ? tau_closure(lts_, std::move(s)) : s;
  }
  std::size_t intern(std::set<StateId> s) {
    auto it = index_.find(s);
    if (it != index_.end()) return it->second;
    if (subsets_.size() >= budget_) {
      throw BudgetExceeded("subset construction exceeded " +
                           std::to_string(budget_) + " states");
    }
    index_.emplace(s, subsets_.size());
    subsets_.push_back(std::move(s));
    return subsets_.size() - 1;
  }

  const Lts& lts_;
  bool abstract_tau_;
  std::size_t budget_;
  std::optional<LabelId> tau_;
  std::map<std::set<StateId>, std::size_t> index_;
  std::vector<std::set<StateId>> subsets_;
  std::map<std::size_t, std::map<Label, std::size_t>> moves_;
  std::size_t initial_ = 0;
};

/// Shortest trace of `a` that is not a trace of `b` (both prefix-closed),
/// ties broken by label order. Tau is abstracted when requested.
inline std::optional<Trace> trace_inclusion_counterexample(
    const Lts& a, const Lts& b, bool abstract_tau = false,
    std::size_t budget = default_max_states()) {
  LtsDeterminizer da(a, abstract_tau, budget), db(b, abstract_tau, budget);
  std::map<std::pair<std::size_t, std::size_t>, Trace> seen;
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  seen[{da.initial(), db.initial()}] = {};
  queue.emplace_back(da.initial(), db.initial());
  while (!queue.empty()) {
    auto p = queue.front();
    queue.pop_front();
    const Trace w = seen[p];
    const auto ma = da.moves(p.first);
    const auto& mb = db.moves(p.second);
    for (const auto& [l, ta] : ma) {
      Trace w2 = w;
      w2.push_back(l);
      auto it = mb.find(l);
      if (it == mb.end()) return w2;
      std::pair<std::size_t, std::size_t> q{ta, it->second};
      if (seen.emplace(q, w2).second) queue.push_back(q);
    }
  }
  return std::nullopt;
}

/// The prefix-closed trace language of an Lts as a Dfa (rejecting sink as
/// the default everywhere).
inline Dfa trace_dfa(const Lts& l, bool abstract_tau = false,
                     std::size_t budget = default_max_states()) {
  LtsDeterminizer det(l, abstract_tau, budget);
  Dfa d;
  std::map<std::size_t, std::size_t> index;
  std::deque<std::size_t> queue;
  std::size_t sink = d.add_state(false);
  auto intern = [&](std::size_t s) {
    auto [it, fresh] = index.emplace(s, 0);
    if (fresh) {
      it->second = d.add_state(true);
      d.set_default(it->second, sink);
      queue.push_back(s);
    }
    return it->second;
  };
  d.set_initial(intern(det.initial()));
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    std::size_t from = index.at(s);
    for (const auto& [lab, t] : det.moves(s)) d.set_transition(from, lab, intern(t));
  }
  return d;
}

}  // namespace tpa

#endif  // TPA_AUTOMATA_HPP
