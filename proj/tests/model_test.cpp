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

#include "tpa/tpa.hpp"

using namespace tpa;

namespace {

std::string example_path() { return std::string(TPA_MODELS_DIR) + "/example1.tpa"; }

RunReport run(const std::string& src) {
  RunOptions opt;
  opt.include_timings = false;
  return run_checks(parse_model(src), opt);
}

void expect_error_at(const std::string& src, std::size_t line, const std::string& fragment) {
  try {
    parse_model(src);
    FAIL() << "accepted: " << src;
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.where().line, line) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(ModelFile, RunningExampleVerdicts) {
  Model m = load_model(example_path());
  ASSERT_EQ(m.checks.size(), 6u);
  RunOptions opt;
  opt.include_timings = false;
  auto r = run_checks(m, opt);
  const auto& c = r.json["checks"];
  EXPECT_EQ(c[0]["outcome"], "NotOpaque");
  EXPECT_EQ(c[1]["outcome"], "Opaque");
  EXPECT_EQ(c[2]["outcome"], "NotOpaque");
  EXPECT_EQ(c[3]["outcome"], "Prone");
  EXPECT_EQ(c[4]["outcome"], "Supervisor");
  EXPECT_EQ(c[5]["outcome"], "Supervisor");
  EXPECT_EQ(r.status, CheckStatus::Violation);
  EXPECT_EQ(r.json["exit_code"], 1);
  EXPECT_EQ(r.json["tool"], "tpa");
  EXPECT_EQ(r.json["input_digest"].get<std::string>().size(), 16u);
}

TEST(ModelFile, SelectionAndDeterminism) {
  Model m = load_model(example_path());
  RunOptions opt;
  opt.include_timings = false;
  opt.selection = std::set<std::size_t>{2};
  auto r = run_checks(m, opt);
  ASSERT_EQ(r.json["checks"].size(), 1u);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  opt.selection.reset();
  EXPECT_EQ(run_checks(m, opt).json.dump(), run_checks(m, opt).json.dump());
}

TEST(ModelFile, NamedRecursionAndObservers) {
  auto r = run(R"(
    Loop = h.Back + l.Loop
    Back = l.Loop
    observer O { h -> eps; default -> id }
    observer W window 2 { l -> seen when h; h -> eps }
    predicate Phi = contains {h}
    check opacity Loop observer O predicate Phi
    check opacity Loop observer W predicate Phi
    check bisim Loop Back
  )");
  const auto& c = r.json["checks"];
  EXPECT_EQ(c[0]["outcome"], "Opaque");
  EXPECT_EQ(c[1]["outcome"], "NotOpaque");
  EXPECT_EQ(c[2]["outcome"], "NotEquivalent");
}

TEST(ModelFile, PredicateForms) {
  Model m = parse_model(R"(
    P = a.b.0
    predicate A = dfa { states 2; initial 0; accept 1; 0 -a-> 1; default self }
    predicate B = not A and contains {b}
    predicate C = ends_with b or A
    predicate T = test Tst
    Tst = 'a.tick.0
    check opacity P observer O predicate A
    observer O { default -> id }
  )");
  EXPECT_TRUE(m.predicates.at("A").holds(parse_trace("a.a")));
  EXPECT_FALSE(m.predicates.at("B").holds(parse_trace("a.b")));
  EXPECT_TRUE(m.predicates.at("C").holds(parse_trace("c.b")));
  EXPECT_TRUE(m.predicates.at("T").holds(parse_trace("a")));
  EXPECT_EQ(m.predicates.at("T").origin(), PredicateOrigin::TestProcess);
}

TEST(ModelFile, WarnsWhenSecretHoldsOnEmptyTrace) {
  Model m = parse_model(R"(
    P = a.0
    observer O { default -> id }
    predicate N = not contains {h}
    check opacity P observer O predicate N
  )");
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NE(m.warnings[0].find("line 5"), std::string::npos);
}

TEST(ModelFile, ErrorsCarryLines) {
  expect_error_at("P = a.Q\n", 1, "unresolved name 'Q'");
  expect_error_at("P = a.0\nobserver O { default -> id }\npredicate X = contains {h}\n"
                  "check opacity P observer Z predicate X\n",
                  4, "unresolved observer 'Z'");
  expect_error_at("P = a.tick.0\nobserver O { default -> id }\npredicate X = contains {h}\n"
                  "check opacity P observer O predicate X\n",
                  4, "uses tick");
  expect_error_at("\nP = P + a.0\n", 2, "unguarded");
  expect_error_at("P = a.0\nP = b.0\n", 2, "defined twice");
  expect_error_at("predicate X = contains {}\n", 1, "at least one");
  expect_error_at("T = 'a.tick.0\npredicate X = test T\npredicate Y = X and X\n", 3,
                  "cannot be combined");
  expect_error_at("P = a.0\ncheck frobnicate P\n", 2, "unknown check kind");
  EXPECT_THROW(load_model("/nonexistent/model.tpa"), Error);
}

TEST(ModelFile, ErrorsInOneCheckDoNotStopTheRest) {
  auto r = run(R"(
    P = a.b.c.d.e.f.0
    Q = a.0
    check bisim P Q
    check wtrace Q Q
  )");
  EXPECT_EQ(r.json["checks"][1]["status"], "pass");
  EXPECT_EQ(worst(CheckStatus::Violation, CheckStatus::Error), CheckStatus::Error);
  EXPECT_EQ(worst(CheckStatus::Incomplete, CheckStatus::Violation), CheckStatus::Violation);
  EXPECT_EQ(worst(CheckStatus::Pass, CheckStatus::Incomplete), CheckStatus::Incomplete);
}

TEST(Export, LtsJsonAndDot) {
  Lts l = build_lts(parse_term("h.l.0 + t.l.0"));
  Json j = lts_to_json(l);
  EXPECT_EQ(j["states"].size(), l.num_states());
  EXPECT_EQ(j["initial"], l.initial);
  EXPECT_TRUE(j["complete"].get<bool>());
  std::string dot = lts_to_dot(l);
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
}
