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

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tpa;
using oracle::L;

namespace {

Lts lts(const std::string& src) { return build_lts(parse_term(src)); }

const Predicate kPhi = builtin_contains({Action{"h"}});
const Observer kHideH = Observer::hiding({L("h")}, "O");

// Shortest unsafe traces, least first, by the oracle.
std::optional<Trace> oracle_first(const Lts& p, const Predicate& phi, const Observer& o,
                                  std::size_t depth) {
  std::optional<Trace> best;
  for (const auto& w : oracle::unsafe_traces(p, phi, o, depth)) {
    if (!best || w.size() < best->size() || (w.size() == best->size() && w < *best)) best = w;
  }
  return best;
}

}  // namespace

TEST(Opacity, RunningExample) {
  auto v1 = check_opacity(lts("h.l.0"), kPhi, kHideH);
  EXPECT_EQ(v1.outcome, OpacityOutcome::NotOpaque);
  EXPECT_EQ(to_string(v1.witness), "h.l");
  EXPECT_EQ(to_string(Trace(v1.observable.begin(), v1.observable.end())), "l");
  EXPECT_TRUE(check_opacity(lts("h.l.0 + l.0"), kPhi, kHideH).opaque());
  auto v3 = check_opacity(lts("h.l.0 + t.l.0"), kPhi, kHideH);
  EXPECT_EQ(v3.outcome, OpacityOutcome::NotOpaque);
  EXPECT_EQ(to_string(v3.witness), "h.l");
}

TEST(Opacity, EmptyObservationIsSafe) {
  // Nothing of h.0 is visible except time, which a non-h run matches.
  EXPECT_TRUE(check_opacity(lts("h.0 + t.0"), kPhi, kHideH).opaque());
}

TEST(Opacity, StaticObserversAgreeWithEnumeration) {
  oracle::Gen g(31);
  int violations = 0;
  for (int i = 0; i < 120; ++i) {
    Lts p = oracle::random_plant(g, {"a", "h", "l"}, 20);
    Observer o = i % 3 ? Observer::hiding({L("h")}) : oracle::random_static(g, {"a", "h", "l"});
    auto v = check_opacity(p, kPhi, o);
    ASSERT_NE(v.outcome, OpacityOutcome::Incomplete);
    auto first = oracle_first(p, kPhi, o, 6);
    if (v.opaque()) {
      EXPECT_FALSE(first) << p.state_names[p.initial] << " unsafe " << to_string(*first);
    } else {
      ++violations;
      EXPECT_TRUE(oracle::unsafe(p, kPhi, o, v.witness));
      if (v.witness.size() <= 6) {
        ASSERT_TRUE(first);
        EXPECT_EQ(v.witness, *first);
      }
    }
  }
  EXPECT_GE(violations, 20);
}

TEST(Opacity, WindowObserversAgreeWithEnumeration) {
  oracle::Gen g(37);
  for (int i = 0; i < 80; ++i) {
    Lts p = oracle::random_plant(g, {"a", "h"}, 12, 3);
    Observer o = oracle::random_nonerasing_window(g, {"a", "h"});
    auto v = check_opacity(p, kPhi, o);
    ASSERT_NE(v.outcome, OpacityOutcome::Incomplete);
    auto first = oracle_first(p, kPhi, o, 5);
    if (v.opaque()) {
      EXPECT_FALSE(first);
    } else if (v.witness.size() <= 5) {
      ASSERT_TRUE(first);
      EXPECT_EQ(v.witness, *first);
    }
  }
}

TEST(Opacity, SafeAutomatonIsK) {
  oracle::Gen g(41);
  for (int i = 0; i < 40; ++i) {
    Lts p = oracle::random_plant(g, {"a", "h"}, 15);
    auto k = safe_automaton(p, kPhi, kHideH);
    auto plant_traces = oracle::traces_upto(p, 5);
    std::vector<Trace> words;
    detail::enumerate_words({L("a"), L("h"), Label::tau(), Label::time()}, 4,
                            [&](const Trace& w) { words.push_back(w); });
    for (const auto& w : words) {
      bool in_k = plant_traces.count(w) && !oracle::unsafe(p, kPhi, kHideH, w);
      ASSERT_EQ(k.acceptor.accepts(w), in_k) << to_string(w);
    }
  }
}

TEST(Opacity, BudgetAndTruncation) {
  auto v = check_opacity(build_lts(parse_term("a.b.c.h.l.0"), 3), kPhi, kHideH);
  EXPECT_EQ(v.outcome, OpacityOutcome::Incomplete);
  EXPECT_FALSE(v.reason.empty());
  auto w = check_opacity(lts("a.b.c.h.l.0 + a.b.c.l.0"), kPhi, kHideH, 4);
  EXPECT_EQ(w.outcome, OpacityOutcome::Incomplete);
}

TEST(Timing, RunningExample) {
  auto p3 = check_timing_attack(lts("h.l.0 + t.l.0"), kPhi, kHideH);
  EXPECT_EQ(p3.outcome, TimingOutcome::Prone);
  EXPECT_FALSE(p3.timed.opaque());
  EXPECT_TRUE(p3.untimed.opaque());
  EXPECT_EQ(check_timing_attack(lts("h.l.0"), kPhi, kHideH).outcome, TimingOutcome::NotProne);
  EXPECT_EQ(check_timing_attack(lts("h.l.0 + l.0"), kPhi, kHideH).outcome, TimingOutcome::NotProne);
}

TEST(Timing, ProneMeansTimeIsTheOnlyLeak) {
  oracle::Gen g(43);
  for (int i = 0; i < 60; ++i) {
    Lts p = oracle::random_plant(g, {"a", "h"}, 15);
    auto v = check_timing_attack(p, kPhi, kHideH);
    auto timed = oracle::unsafe_traces(p, kPhi, kHideH, 5);
    auto untimed = oracle::unsafe_traces(p, kPhi, derive_untimed(kHideH), 5);
    if (v.outcome == TimingOutcome::Prone) { EXPECT_TRUE(untimed.empty()); }
    if (!timed.empty() && untimed.empty()) { EXPECT_EQ(v.outcome, TimingOutcome::Prone); }
  }
}

TEST(Monotonicity, CoarserObserverAndStrongerSecret) {
  Lts p = lts("h.l.0 + t.l.0");
  Observer coarse = derive_untimed(kHideH);
  auto r = check_monotonicity_instance(p, kPhi, kPhi, kHideH, coarse);
  ASSERT_TRUE(r);
  EXPECT_TRUE(*r);
  // Hypotheses fail the other way round.
  EXPECT_FALSE(check_monotonicity_instance(p, kPhi, kPhi, coarse, kHideH));
}

TEST(Dependability, RunningExample) {
  EXPECT_FALSE(is_time_dependable(lts("h.l.0"), kPhi, kHideH));
  EXPECT_TRUE(is_time_dependable(lts("h.l.0 + t.l.0"), kPhi, kHideH));
  EXPECT_FALSE(is_time_dependable(lts("h.l.0 + t.l.0"), kPhi, kHideH, DependabilityReading::Literal));
}

TEST(Dependability, AgreesWithBoundedPaddingSearch) {
  oracle::Gen g(47);
  int dependable = 0, not_dependable = 0;
  for (int i = 0; i < 80; ++i) {
    Lts p = oracle::random_plant(g, {"a", "h"}, 12, 3);
    bool dep = is_time_dependable(p, kPhi, kHideH);
    auto unsafe = oracle::unsafe_traces(p, kPhi, kHideH, 4);
    bool all_repaired = true;
    for (const auto& w : unsafe) {
      bool repaired = false;
      for (const auto& v : oracle::paddings(p, w, 4)) {
        if (!oracle::unsafe(p, kPhi, kHideH, v)) repaired = true;
      }
      all_repaired = all_repaired && repaired;
    }
    if (dep) {
      ++dependable;
      EXPECT_TRUE(all_repaired) << p.state_names[p.initial];
    } else {
      ++not_dependable;
    }
    if (unsafe.empty() && check_opacity(p, kPhi, kHideH).opaque()) { EXPECT_TRUE(dep); }
  }
  EXPECT_GE(dependable, 10);
  EXPECT_GE(not_dependable, 5);
}
