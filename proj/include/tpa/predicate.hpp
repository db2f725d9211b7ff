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

#ifndef TPA_PREDICATE_HPP
#define TPA_PREDICATE_HPP

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tpa/automata.hpp"
#include "tpa/equivalence.hpp"
#include "tpa/observation.hpp"

namespace tpa {

enum class PredicateOrigin { Builtin, Automaton, TestProcess };

/// A trace predicate given by a complete DFA over all labels.
class Predicate {
 public:
  Predicate() { acceptor_.add_state(false); }
  Predicate(std::string name, Dfa acceptor,
            PredicateOrigin origin = PredicateOrigin::Automaton,
            std::optional<Term> test = std::nullopt)
      : name_(std::move(name)),
        acceptor_(std::move(acceptor)),
        origin_(origin),
        test_(std::move(test)) {
    if (acceptor_.num_states() == 0) throw PreconditionFailed("predicate automaton has no states");
  }

  const std::string& name() const { return name_; }
  const Dfa& acceptor() const { return acceptor_; }
  PredicateOrigin origin() const { return origin_; }
  const std::optional<Term>& test() const { return test_; }

  bool holds(const Trace& w) const { return acceptor_.accepts(w); }
  /// Opacity checks assume the predicate is false on the empty trace.
  bool holds_on_empty() const { return acceptor_.accepting(acceptor_.initial()); }

 private:
  std::string name_;
  Dfa acceptor_;
  PredicateOrigin origin_ = PredicateOrigin::Automaton;
  std::optional<Term> test_;
};

inline Predicate complement(const Predicate& p) {
  std::string n = p.name().empty() ? "" : "not " + p.name();
  return Predicate(std::move(n), p.acceptor().complemented(), p.origin());
}

inline Predicate conjunction(const Predicate& a, const Predicate& b) {
  return Predicate(a.name() + " and " + b.name(),
                   minimize(product(a.acceptor(), b.acceptor(), Combine::And)));
}

inline Predicate disjunction(const Predicate& a, const Predicate& b) {
  return Predicate(a.name() + " or " + b.name(),
                   minimize(product(a.acceptor(), b.acceptor(), Combine::Or)));
}

/// Whether `stronger` implies `weaker` on every trace.
inline bool implies(const Predicate& stronger, const Predicate& weaker) {
  return language_included(stronger.acceptor(), weaker.acceptor());
}

inline bool equivalent(const Predicate& a, const Predicate& b) {
  return language_equal(a.acceptor(), b.acceptor());
}

inline Predicate predicate_false(std::string name = "false") {
  Dfa d;
  d.add_state(false);
  return Predicate(std::move(name), std::move(d), PredicateOrigin::Builtin);
}

/// True iff the trace contains a letter of `hidden`.
inline Predicate builtin_contains(const std::set<Action>& hidden) {
  if (hidden.empty()) throw PreconditionFailed("contains needs at least one action");
  Dfa d;
  auto no = d.add_state(false);
  auto yes = d.add_state(true);
  std::string n = "contains {";
  bool first = true;
  for (const auto& a : hidden) {
    d.set_transition(no, Label::visible(a), yes);
    n += (first ? "" : ", ") + a.str();
    first = false;
  }
  d.set_initial(no);
  return Predicate(n + "}", std::move(d), PredicateOrigin::Builtin);
}

/// True iff the trace is non-empty and its last letter is x.
inline Predicate builtin_ends_with(const Label& x) {
  Dfa d;
  auto other = d.add_state(false);
  auto last = d.add_state(true);
  d.set_transition(other, x, last);
  d.set_transition(last, x, last);
  d.set_default(last, other);
  d.set_initial(other);
  return Predicate("ends with " + x.str(), std::move(d), PredicateOrigin::Builtin);
}

/// Strong nondeterministic non-interference as an opacity instance: the
/// secret is "some high action occurred" and the attacker sees everything
/// except the high actions.
struct SnniBundle {
  Predicate phi;
  Observer observer;
};

inline SnniBundle snni_bundle(const std::set<Action>& high) {
  std::set<Label> hidden;
  for (const auto& a : high) hidden.insert(Label::visible(a));
  return {builtin_contains(high), Observer::hiding(hidden, "low")};
}

// ---------------------------------------------------------------------------
// Test processes

class NotConvertible : public Error {
 public:
  using Error::Error;
};

namespace detail {

/// The composition (w.0 | T) restricted on all channels, read as layers:
/// layer i holds the T-states reachable once w_1..w_i have been consumed.
/// What T can do inside a layer depends only on the next letter of w, so
/// the entry set of each layer is computed letter by letter.
class TestLayers {
 public:
  TestLayers(const Term& test, const SemanticsOptions& opt, std::size_t max_states)
      : lts_(build_lts(test, max_states, opt)) {
    if (!lts_.complete) throw BudgetExceeded("test process exceeded the state budget");
    tau_ = lts_.label_id(Label::tau());
    time_ = lts_.label_id(Label::time());
    tick_ = lts_.label_id(Label::tick());
  }

  const Lts& lts() const { return lts_; }

  /// Letters of w that T can synchronize with.
  std::set<Label> sync_letters() const {
    std::set<Label> r;
    for (const auto& l : lts_.labels) {
      if (l.is_visible()) r.insert(Label::visible(l.action().complement()));
    }
    return r;
  }

  std::set<StateId> advance(const std::set<StateId>& entry, const Label& x) const {
    std::set<StateId> inside = close(entry, x), next;
    for (StateId q : inside) {
      if (x.is_tau()) {
        next.insert(q);
      } else if (x.is_time()) {
        if (has(q, tau_)) continue;
        for (const auto& e : lts_.out[q]) {
          if (time_ && e.label == *time_) next.insert(e.target);
        }
      } else if (x.is_visible()) {
        auto co = lts_.label_id(Label::visible(x.action().complement()));
        for (const auto& e : lts_.out[q]) {
          if (co && e.label == *co) next.insert(e.target);
        }
      }
    }
    return next;
  }

 private:
  bool has(StateId q, std::optional<LabelId> l) const {
    if (!l) return false;
    for (const auto& e : lts_.out[q]) {
      if (e.label == *l) return true;
    }
    return false;
  }

  // Moves that keep the layer: T's tau and tick, and time passing when
  // the next letter of w can idle and nothing can synchronize.
  std::set<StateId> close(std::set<StateId> s, const Label& x) const {
    std::vector<StateId> stack(s.begin(), s.end());
    std::optional<LabelId> co;
    if (x.is_visible()) co = lts_.label_id(Label::visible(x.action().complement()));
    const bool w_idles = x.is_visible();
    while (!stack.empty()) {
      StateId q = stack.back();
      stack.pop_back();
      const bool may_idle = w_idles && !has(q, tau_) && !has(q, co);
      for (const auto& e : lts_.out[q]) {
        bool inner = (tau_ && e.label == *tau_) || (tick_ && e.label == *tick_) ||
                     (may_idle && time_ && e.label == *time_);
        if (inner && s.insert(e.target).second) stack.push_back(e.target);
      }
    }
    return s;
  }

  Lts lts_;
  std::optional<LabelId> tau_, time_, tick_;
};

inline void enumerate_words(const std::vector<Label>& sigma, std::size_t depth,
                            const std::function<void(const Trace&)>& visit) {
  std::vector<Trace> layer{Trace{}};
  visit(Trace{});
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Trace> next;
    next.reserve(layer.size() * sigma.size());
    for (const auto& w : layer) {
      for (const auto& x : sigma) {
        Trace w2 = w;
        w2.push_back(x);
        visit(w2);
        next.push_back(std::move(w2));
      }
    }
    layer = std::move(next);
  }
}

}  // namespace detail

/// Converts a finite-state test process into a predicate automaton.
///
/// A word is summarized by the entry set of its current layer together
/// with the verdicts of passes_test on the word extended by every suffix
/// of a bounded length; words with equal summaries share an automaton
/// state. Verdicts depend on t-letters through time passing in the
/// composition (a t consumed before the test can tick delays the tick),
/// so the entry set alone does not suffice. The result is checked against
/// passes_test on every word up to `validate_depth` letters over the
/// test's letters, tau, t and one foreign letter. On a disagreement the
/// suffix length grows, up to `max_suffix_depth`, after which
/// NotConvertible is raised.
inline Predicate from_test_process(const Term& test, std::string name = {},
                                   std::size_t validate_depth = 6,
                                   std::size_t max_suffix_depth = 4,
                                   const SemanticsOptions& opt = {},
                                   std::size_t max_states = default_max_states()) {
  require_wellformed(test);
  if (!is_regular(test)) throw IllFormedTerm("test process is not regular");
  detail::TestLayers layers(test, opt, max_states);

  auto letters = layers.sync_letters();
  std::vector<Label> sigma(letters.begin(), letters.end());
  sigma.push_back(Label::tau());
  sigma.push_back(Label::time());
  const Label foreign = fresh_letter();
  sigma.push_back(foreign);

  std::map<Trace, bool> memo;
  auto passes = [&](const Trace& w) {
    auto it = memo.find(w);
    if (it == memo.end()) it = memo.emplace(w, passes_test(w, test, opt, max_states)).first;
    return it->second;
  };

  auto build = [&](std::size_t suffix_depth) {
    std::vector<Trace> suffixes;
    detail::enumerate_words(sigma, suffix_depth, [&](const Trace& s) { suffixes.push_back(s); });
    auto verdicts = [&](const Trace& rep) {
      std::vector<bool> v;
      v.reserve(suffixes.size());
      for (const auto& s : suffixes) {
        Trace w = rep;
        w.insert(w.end(), s.begin(), s.end());
        v.push_back(passes(w));
      }
      return v;
    };

    using Key = std::pair<std::set<StateId>, std::vector<bool>>;
    std::map<Key, std::size_t> index;
    std::vector<Key> keys;
    std::vector<Trace> reps;
    Dfa d;
    std::deque<std::size_t> queue;
    auto intern = [&](std::set<StateId> entry, const Trace& rep) {
      Key k{std::move(entry), verdicts(rep)};
      auto [it, fresh] = index.emplace(k, keys.size());
      if (fresh) {
        if (keys.size() >= max_states) throw BudgetExceeded("test automaton exceeded the state budget");
        d.add_state(k.second.front());
        keys.push_back(std::move(k));
        reps.push_back(rep);
        queue.push_back(it->second);
      }
      return it->second;
    };
    d.set_initial(intern({layers.lts().initial}, {}));
    while (!queue.empty()) {
      std::size_t s = queue.front();
      queue.pop_front();
      for (const auto& x : sigma) {
        Trace rep = reps[s];
        rep.push_back(x);
        std::size_t target = intern(layers.advance(keys[s].first, x), rep);
        if (x == foreign) {
          d.set_default(s, target);
        } else {
          d.set_transition(s, x, target);
        }
      }
    }
    return minimize(d);
  };

  std::optional<Trace> mismatch;
  for (std::size_t depth = 2; depth <= std::max<std::size_t>(2, max_suffix_depth); ++depth) {
    Predicate p(name.empty() ? "test" : name, build(depth), PredicateOrigin::TestProcess, test);
    mismatch.reset();
    detail::enumerate_words(sigma, validate_depth, [&](const Trace& w) {
      if (!mismatch && p.holds(w) != passes(w)) mismatch = w;
    });
    if (!mismatch) return p;
  }
  throw NotConvertible("test verdict on " + to_string(*mismatch) +
                       " is not determined by synchronization");
}

}  // namespace tpa

#endif  // TPA_PREDICATE_HPP
