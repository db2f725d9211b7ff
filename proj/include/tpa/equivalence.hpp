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

#ifndef TPA_EQUIVALENCE_HPP
#define TPA_EQUIVALENCE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tpa/automata.hpp"
#include "tpa/semantics.hpp"
#include "tpa/term.hpp"

namespace tpa {

/// Disjoint union of two transition systems over a merged label table.
/// States of `b` are shifted by a.num_states().
inline Lts disjoint_union(const Lts& a, const Lts& b) {
  LtsBuilder builder;
  for (const auto& n : a.state_names) builder.add_state(n);
  for (const auto& n : b.state_names) builder.add_state(n);
  const std::size_t shift = a.num_states();
  for (StateId s = 0; s < a.num_states(); ++s) {
    for (const auto& e : a.out[s]) builder.add_transition(s, a.labels[e.label], e.target);
  }
  for (StateId s = 0; s < b.num_states(); ++s) {
    for (const auto& e : b.out[s]) {
      builder.add_transition(s + shift, b.labels[e.label], e.target + shift);
    }
  }
  builder.set_complete(a.complete && b.complete);
  return builder.build();
}

/// Coarsest strong bisimulation of an Lts by signature refinement: a
/// state's signature is the set of (label, block of target) pairs; blocks
/// split until no signature distinguishes members of a block. Labels,
/// including tau and t, are compared literally.
///
/// Returns the block index of every state.
inline std::vector<std::size_t> bisimulation_partition(const Lts& l) {
  const std::size_t n = l.num_states();
  std::vector<std::size_t> block(n, 0);
  std::size_t num_blocks = n ? 1 : 0;
  for (;;) {
    using Signature = std::vector<std::pair<LabelId, std::size_t>>;
    std::map<std::pair<std::size_t, Signature>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (StateId s = 0; s < n; ++s) {
      Signature sig;
      sig.reserve(l.out[s].size());
      for (const auto& e : l.out[s]) sig.emplace_back(e.label, block[e.target]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, fresh] = ids.emplace(std::make_pair(block[s], std::move(sig)), ids.size());
      next[s] = it->second;
    }
    // Refinement is monotone, so an unchanged block count means a fixpoint.
    std::size_t count = ids.size();
    block = std::move(next);
    if (count == num_blocks) break;
    num_blocks = count;
  }
  return block;
}

inline void require_complete(const Lts& l, const char* what) {
  if (!l.complete) {
    throw PreconditionFailed(std::string(what) + ": transition system is incomplete");
  }
}

/// Strong bisimilarity of the initial states.
inline bool bisimilar(const Lts& p, const Lts& q) {
  require_complete(p, "bisimilar");
  require_complete(q, "bisimilar");
  Lts u = disjoint_union(p, q);
  auto block = bisimulation_partition(u);
  return block[p.initial] == block[q.initial + p.num_states()];
}

/// Two states of the same Lts.
inline bool bisimilar_states(const Lts& l, StateId a, StateId b) {
  auto block = bisimulation_partition(l);
  return block.at(a) == block.at(b);
}

struct EquivalenceResult {
  bool equivalent = false;
  /// A trace of exactly one side, when inequivalent and one is known.
  std::optional<Trace> witness;
};

/// Weak trace equivalence: equality of trace sets over A and t after
/// abstracting tau, decided by subset construction on both sides.
inline EquivalenceResult weak_trace_equiv(const Lts& p, const Lts& q,
                                          std::size_t budget = default_max_states()) {
  require_complete(p, "weak_trace_equiv");
  require_complete(q, "weak_trace_equiv");
  auto pq = trace_inclusion_counterexample(p, q, true, budget);
  auto qp = trace_inclusion_counterexample(q, p, true, budget);
  EquivalenceResult r;
  r.equivalent = !pq && !qp;
  if (pq && qp) {
    r.witness = pq->size() <= qp->size() ? pq : qp;
  } else if (pq) {
    r.witness = pq;
  } else if (qp) {
    r.witness = qp;
  }
  return r;
}

/// The term (w.0 | test) restricted on every channel either side mentions;
/// t, tau and tick stay free.
inline Term test_composition(const Trace& w, const Term& test) {
  NameSet names = channel_names(test);
  for (const auto& x : w) {
    if (x.is_visible()) names.insert(x.action().name);
  }
  return Term::restrict(Term::par(Term::sequence(w), test), std::move(names));
}

/// Whether the trace passes the test process: the composition must be
/// weak-trace equivalent to tick.0.
inline bool passes_test(const Trace& w, const Term& test,
                        const SemanticsOptions& opt = {},
                        std::size_t max_states = default_max_states()) {
  for (const auto& x : w) {
    if (x.is_tick()) throw PreconditionFailed("tick may not occur in the tested trace");
  }
  require_wellformed(test);
  if (!is_regular(test)) throw IllFormedTerm("test process is not regular");
  Lts composed = build_lts(test_composition(w, test), max_states, opt);
  if (!composed.complete) throw BudgetExceeded("test composition exceeded the state budget");
  static const Lts target = build_lts(Term::prefix(Label::tick(), Term::nil()));
  return weak_trace_equiv(composed, target).equivalent;
}

}  // namespace tpa

#endif  // TPA_EQUIVALENCE_HPP
