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

const std::vector<Label> kLetters{L("a"), L("h"), Label::tau(), Label::time(), L("zz")};

std::vector<Trace> words(std::size_t depth, const std::vector<Label>& sigma = kLetters) {
  std::vector<Trace> r;
  detail::enumerate_words(sigma, depth, [&](const Trace& w) { r.push_back(w); });
  return r;
}

bool contains(const Trace& w, const Label& x) { return std::find(w.begin(), w.end(), x) != w.end(); }

}  // namespace

TEST(Builtins, ContainsAndEndsWith) {
  Predicate c = builtin_contains({Action{"h"}});
  Predicate e = builtin_ends_with(L("h"));
  for (const auto& w : words(4)) {
    EXPECT_EQ(c.holds(w), contains(w, L("h"))) << to_string(w);
    EXPECT_EQ(e.holds(w), !w.empty() && w.back() == L("h")) << to_string(w);
  }
  EXPECT_FALSE(c.holds_on_empty());
  EXPECT_THROW(builtin_contains({}), PreconditionFailed);
  EXPECT_EQ(c.name(), "contains {h}");
}

TEST(Builtins, SnniBundle) {
  auto b = snni_bundle({Action{"h"}});
  EXPECT_TRUE(b.phi.holds(parse_trace("l.h")));
  EXPECT_TRUE(observe(b.observer, parse_trace("h")).empty());
}

TEST(Combinators, PointwiseOnWords) {
  oracle::Gen g(4);
  for (int i = 0; i < 40; ++i) {
    Predicate p = oracle::random_predicate(g, {L("a"), L("h")});
    Predicate q = oracle::random_predicate(g, {L("a"), Label::time()});
    Predicate n = complement(p), c = conjunction(p, q), d = disjunction(p, q);
    for (const auto& w : words(4)) {
      EXPECT_EQ(n.holds(w), !p.holds(w));
      EXPECT_EQ(c.holds(w), p.holds(w) && q.holds(w));
      EXPECT_EQ(d.holds(w), p.holds(w) || q.holds(w));
    }
    EXPECT_TRUE(implies(c, p));
    EXPECT_TRUE(implies(p, d));
    EXPECT_TRUE(equivalent(complement(n), p));
    EXPECT_FALSE(predicate_false().holds(parse_trace("a")));
  }
}

TEST(Combinators, ImplicationAgreesWithEnumeration) {
  oracle::Gen g(9);
  int held = 0;
  for (int i = 0; i < 200; ++i) {
    Predicate p = oracle::random_predicate(g, {L("a")}, 2);
    Predicate q = oracle::random_predicate(g, {L("a")}, 2);
    // Two-state automata over these letters are separated within 3 letters.
    bool counter = false;
    for (const auto& w : words(3)) counter = counter || (p.holds(w) && !q.holds(w));
    EXPECT_EQ(implies(p, q), !counter);
    held += !counter;
  }
  EXPECT_GE(held, 20);
}

// Generated tests are compared with passes_test, which is the definition.
class TestProcessConversion : public ::testing::TestWithParam<const char*> {};

TEST_P(TestProcessConversion, AgreesWithPassesTest) {
  Term t = parse_term(GetParam());
  Predicate p = from_test_process(t, "T");
  EXPECT_EQ(p.origin(), PredicateOrigin::TestProcess);
  std::set<Label> sigma_set{Label::tau(), Label::time(), L("zz")};
  for (const auto& l : channel_names(t)) sigma_set.insert(Label::visible(l));
  std::vector<Label> sigma(sigma_set.begin(), sigma_set.end());
  for (const auto& w : words(5, sigma)) {
    ASSERT_EQ(p.holds(w), passes_test(w, t)) << to_string(w);
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, TestProcessConversion,
                         ::testing::Values("'h.tick.0", "'a.'b.tick.0", "'a.tick.0 + 'b.tick.0",
                                           "rec X. ('a.X + 'h.tick.0)", "t.'h.tick.0",
                                           "'h.t.tick.0", "'a.('b.tick.0 + t.tick.0)"));

TEST(TestProcessConversion, ContainsTestIsTimeSensitive) {
  Term t = parse_term("rec X. ('a.X + 'h.tick.0)");
  Predicate p = from_test_process(t);
  EXPECT_TRUE(p.holds(parse_trace("a.h")));
  // A leading t delays the tick, while tick.0 may tick at once.
  EXPECT_FALSE(p.holds(parse_trace("t.h")));
  EXPECT_FALSE(passes_test(parse_trace("t.h"), t));
  EXPECT_TRUE(p.holds(parse_trace("h.t")));
  EXPECT_EQ(p.acceptor().num_states(), 3u);
}

TEST(TestProcessConversion, RejectsIllFormedTests) {
  EXPECT_THROW(from_test_process(parse_term("rec X. (X + 'a.tick.0)")), IllFormedTerm);
  EXPECT_THROW(from_test_process(parse_term("rec X. ('a.tick.0 | X)")), IllFormedTerm);
}
