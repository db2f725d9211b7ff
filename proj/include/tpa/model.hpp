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

#ifndef TPA_MODEL_HPP
#define TPA_MODEL_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tpa/equivalence.hpp"
#include "tpa/io.hpp"
#include "tpa/opacity.hpp"
#include "tpa/parser.hpp"
#include "tpa/predicate.hpp"
#include "tpa/supervisor.hpp"

namespace tpa {

inline constexpr const char* kToolVersion = "0.1.0";

enum class CheckKind { Opacity, Timing, Synth, Bisim, WeakTrace, Dependable, Insertion };

inline const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Opacity: return "opacity";
    case CheckKind::Timing: return "timing";
    case CheckKind::Synth: return "synth";
    case CheckKind::Bisim: return "bisim";
    case CheckKind::WeakTrace: return "wtrace";
    case CheckKind::Dependable: return "dependable";
    case CheckKind::Insertion: return "insertion";
  }
  return "?";
}

struct CheckDecl {
  CheckKind kind = CheckKind::Opacity;
  std::size_t line = 0;
  std::string process;
  std::string other;  // second process of bisim / wtrace
  std::string observer;
  std::string sup_observer;
  std::string predicate;
  std::set<Label> controllable;
  std::size_t max_insert = 4;
};

struct Model {
  /// Definitions in declaration order, named recursion already resolved.
  std::vector<std::pair<std::string, Term>> processes;
  std::map<std::string, Observer> observers;
  std::map<std::string, Predicate> predicates;
  std::vector<CheckDecl> checks;
  std::vector<std::string> warnings;
  std::string digest;

  const Term* process(const std::string& name) const {
    for (const auto& [n, t] : processes) {
      if (n == name) return &t;
    }
    return nullptr;
  }
};

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string fnv1a_digest(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string r(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) r[static_cast<std::size_t>(i)] = hex[h & 15];
  return r;
}

namespace detail {

inline bool is_keyword(const std::string& w) {
  return w == "observer" || w == "predicate" || w == "check";
}

class ModelParser : public TokenParser {
 public:
  explicit ModelParser(std::string_view src) : TokenParser(src) {}

  Model parse() {
    while (!at_end()) {
      if (accept_punct(";")) continue;
      if (peek_ident("observer")) {
        parse_observer();
      } else if (peek_ident("predicate")) {
        parse_predicate();
      } else if (peek_ident("check")) {
        parse_check();
      } else {
        parse_definition();
      }
    }
    resolve_processes();
    resolve_references();
    return std::move(model_);
  }

 private:
  struct RawDef {
    Term term;
    SourceLocation where;
  };

  [[noreturn]] void error_at(const SourceLocation& where, const std::string& what) const {
    throw SyntaxError(what, where);
  }

  std::string new_name(std::string_view what) {
    auto where = peek().where;
    std::string n = expect_ident(what);
    if (is_reserved_name(n) || is_keyword(n)) error_at(where, "reserved name '" + n + "'");
    return n;
  }

  void parse_definition() {
    auto where = peek().where;
    std::string name = new_name("definition name");
    expect_punct("=");
    Term t = parse_term();
    if (raw_.count(name)) error_at(where, "process '" + name + "' defined twice");
    raw_.emplace(name, RawDef{t, where});
    order_.push_back(name);
  }

  LetterImage parse_image() {
    if (accept_ident("eps")) return std::nullopt;
    return parse_label();
  }

  void parse_observer() {
    next();
    auto where = peek().where;
    std::string name = new_name("observer name");
    std::optional<std::size_t> window;
    if (accept_ident("window")) window = expect_number();
    expect_punct("{");
    StaticObserver base;
    std::vector<WindowRule> rules;
    while (!accept_punct("}")) {
      if (accept_punct(";")) continue;
      if (accept_ident("default")) {
        expect_punct("->");
        if (accept_ident("id")) {
          base.fallback = DefaultRule::Identity;
        } else if (accept_ident("eps")) {
          base.fallback = DefaultRule::Erase;
        } else {
          fail("expected 'id' or 'eps'");
        }
        continue;
      }
      Label x = parse_label();
      expect_punct("->");
      LetterImage out = parse_image();
      if (accept_ident("when")) {
        if (!window) fail("'when' needs an observer with a window");
        rules.push_back({x, parse_label(), out});
      } else if (window) {
        rules.push_back({x, std::nullopt, out});
      } else {
        base.map[x] = out;
      }
    }
    if (model_.observers.count(name)) error_at(where, "observer '" + name + "' defined twice");
    if (window) {
      if (*window == 0) error_at(where, "window must be at least 1");
      WindowObserver w;
      w.window = *window;
      w.rules = std::move(rules);
      w.base = std::move(base);
      model_.observers.emplace(name, Observer(std::move(w), name));
    } else {
      model_.observers.emplace(name, Observer(std::move(base), name));
    }
  }

  Predicate predicate_ref() {
    auto where = peek().where;
    std::string n = expect_ident("predicate name");
    auto it = model_.predicates.find(n);
    if (it == model_.predicates.end()) {
      error_at(where, "unresolved predicate '" + n + "'");
    }
    for (const auto& pt : pending_tests_) {
      if (pt.predicate == n) error_at(where, "test predicate '" + n + "' cannot be combined");
    }
    return it->second;
  }

  Predicate parse_predicate_atom(const std::string& name) {
    if (accept_ident("not")) return complement(parse_predicate_atom(name));
    if (accept_ident("contains")) {
      expect_punct("{");
      std::set<Action> hs;
      if (!peek_punct("}")) {
        do {
          Label l = parse_label();
          if (!l.is_visible()) fail("contains takes visible actions");
          hs.insert(l.action());
        } while (accept_punct(","));
      }
      auto where = peek().where;
      expect_punct("}");
      if (hs.empty()) error_at(where, "contains needs at least one action");
      return builtin_contains(hs);
    }
    if (accept_ident("ends_with")) return builtin_ends_with(parse_label());
    if (accept_ident("dfa")) return parse_dfa(name);
    if (accept_ident("test")) {
      auto where = peek().where;
      std::string proc = expect_ident("test process name");
      pending_tests_.push_back({name, proc, where});
      return predicate_false(name);  // replaced once processes are resolved
    }
    return predicate_ref();
  }

  Predicate parse_dfa(const std::string& name) {
    expect_punct("{");
    std::optional<std::size_t> states, initial;
    std::set<std::size_t> accept;
    std::vector<std::tuple<std::size_t, Label, std::size_t>> moves;
    std::optional<std::size_t> sink;
    auto where = peek().where;
    while (!accept_punct("}")) {
      if (accept_punct(";")) continue;
      if (accept_ident("states")) {
        states = expect_number();
      } else if (accept_ident("initial")) {
        initial = expect_number();
      } else if (accept_ident("accept")) {
        if (peek().kind == TokenKind::Number) {
          do {
            accept.insert(expect_number());
          } while (accept_punct(","));
        }
      } else if (accept_ident("default")) {
        if (!accept_ident("self")) sink = expect_number();
      } else {
        std::size_t from = expect_number();
        expect_punct("-");
        Label x = parse_label();
        expect_punct("->");
        moves.emplace_back(from, x, expect_number());
      }
    }
    if (!states || *states == 0) error_at(where, "dfa needs 'states N' with N > 0");
    auto check = [&](std::size_t s) {
      if (s >= *states) error_at(where, "dfa state " + std::to_string(s) + " out of range");
    };
    Dfa d;
    for (std::size_t i = 0; i < *states; ++i) d.add_state(accept.count(i) > 0);
    for (auto a : accept) check(a);
    d.set_initial(initial.value_or(0));
    check(d.initial());
    if (sink) {
      check(*sink);
      for (std::size_t i = 0; i < *states; ++i) d.set_default(i, *sink);
    }
    for (const auto& [from, x, to] : moves) {
      check(from);
      check(to);
      d.set_transition(from, x, to);
    }
    return Predicate(name, std::move(d), PredicateOrigin::Automaton);
  }

  void parse_predicate() {
    next();
    auto where = peek().where;
    std::string name = new_name("predicate name");
    expect_punct("=");
    const bool bare_test = peek_ident("test");
    const std::size_t tests_before = pending_tests_.size();
    Predicate p = parse_predicate_atom(name);
    if (pending_tests_.size() > tests_before && !bare_test) {
      error_at(where, "a test predicate must be declared on its own");
    }
    while (peek_ident("and") || peek_ident("or")) {
      if (bare_test) error_at(where, "a test predicate must be declared on its own");
      bool conj = next().text == "and";
      Predicate q = parse_predicate_atom(name);
      p = conj ? conjunction(p, q) : disjunction(p, q);
    }
    if (model_.predicates.count(name)) error_at(where, "predicate '" + name + "' defined twice");
    model_.predicates.emplace(name, Predicate(name, p.acceptor(), p.origin(), p.test()));
  }

  void parse_check() {
    auto where = next().where;
    CheckDecl c;
    c.line = where.line;
    std::string kind = expect_ident("check kind");
    if (kind == "opacity") {
      c.kind = CheckKind::Opacity;
    } else if (kind == "timing") {
      c.kind = CheckKind::Timing;
    } else if (kind == "synth") {
      c.kind = CheckKind::Synth;
    } else if (kind == "bisim") {
      c.kind = CheckKind::Bisim;
    } else if (kind == "wtrace") {
      c.kind = CheckKind::WeakTrace;
    } else if (kind == "dependable") {
      c.kind = CheckKind::Dependable;
    } else if (kind == "insertion") {
      c.kind = CheckKind::Insertion;
    } else {
      error_at(where, "unknown check kind '" + kind + "'");
    }
    c.process = expect_ident("process name");
    if (c.kind == CheckKind::Bisim || c.kind == CheckKind::WeakTrace) {
      c.other = expect_ident("process name");
    } else {
      // Clauses have no terminator, so "observer X {", "observer X window"
      // and "predicate X =" start the next declaration instead.
      auto declaration_ahead = [&] {
        return peek_punct("{", 2) || peek_punct("=", 2) || peek_ident("window", 2);
      };
      for (;;) {
        if ((peek_ident("observer") || peek_ident("attacker")) && !declaration_ahead()) {
          next();
          c.observer = expect_ident("observer name");
        } else if (accept_ident("sup")) {
          c.sup_observer = expect_ident("observer name");
        } else if (peek_ident("predicate") && !declaration_ahead()) {
          next();
          c.predicate = expect_ident("predicate name");
        } else if (accept_ident("controllable")) {
          expect_punct("{");
          if (!peek_punct("}")) {
            do {
              c.controllable.insert(parse_label());
            } while (accept_punct(","));
          }
          expect_punct("}");
        } else if (accept_ident("max_insert")) {
          c.max_insert = expect_number();
        } else {
          break;
        }
      }
      if (c.observer.empty()) error_at(where, "check needs an observer");
      if (c.predicate.empty()) error_at(where, "check needs a predicate");
      if (c.sup_observer.empty()) c.sup_observer = c.observer;
    }
    checks_where_.push_back(where);
    model_.checks.push_back(std::move(c));
  }

  Term resolve(const std::string& name, std::vector<std::string>& stack) {
    const RawDef& def = raw_.at(name);
    stack.push_back(name);
    Term t = def.term;
    for (const auto& x : free_variables(def.term)) {
      if (!raw_.count(x)) {
        stack.pop_back();
        error_at(def.where, "unresolved name '" + x + "' in definition of '" + name + "'");
      }
      if (std::find(stack.begin(), stack.end(), x) != stack.end()) continue;
      t = substitute(t, x, resolve(x, stack));
    }
    stack.pop_back();
    if (free_variables(t).count(name)) t = Term::rec(name, t);
    return t;
  }

  void resolve_processes() {
    for (const auto& name : order_) {
      std::vector<std::string> stack;
      Term t = resolve(name, stack);
      auto report = check_wellformed(t);
      if (!report.guarded) {
        error_at(raw_.at(name).where, "process '" + name + "' has unguarded recursion");
      }
      model_.processes.emplace_back(name, t);
    }
  }

  void resolve_references() {
    for (const auto& pt : pending_tests_) {
      const Term* t = model_.process(pt.process);
      if (!t) error_at(pt.where, "unresolved process '" + pt.process + "'");
      Predicate p = from_test_process(*t, pt.predicate);
      model_.predicates.at(pt.predicate) = Predicate(pt.predicate, p.acceptor(),
                                                     PredicateOrigin::TestProcess, *t);
    }
    for (std::size_t i = 0; i < model_.checks.size(); ++i) {
      const auto& c = model_.checks[i];
      const auto& where = checks_where_[i];
      auto need_process = [&](const std::string& n, bool plant) {
        const Term* t = model_.process(n);
        if (!t) error_at(where, "unresolved process '" + n + "'");
        if (plant && uses_tick(*t)) {
          error_at(where, "process '" + n + "' uses tick and cannot be a plant");
        }
      };
      need_process(c.process, true);
      if (!c.other.empty()) need_process(c.other, true);
      if (!c.observer.empty() && !model_.observers.count(c.observer)) {
        error_at(where, "unresolved observer '" + c.observer + "'");
      }
      if (!c.sup_observer.empty() && !model_.observers.count(c.sup_observer)) {
        error_at(where, "unresolved observer '" + c.sup_observer + "'");
      }
      if (!c.predicate.empty()) {
        auto it = model_.predicates.find(c.predicate);
        if (it == model_.predicates.end()) {
          error_at(where, "unresolved predicate '" + c.predicate + "'");
        }
        if (it->second.holds_on_empty()) {
          model_.warnings.push_back("line " + std::to_string(where.line) + ": predicate '" +
                                    c.predicate + "' holds on the empty trace");
        }
      }
    }
  }

  struct PendingTest {
    std::string predicate;
    std::string process;
    SourceLocation where;
  };

  Model model_;
  std::map<std::string, RawDef> raw_;
  std::vector<std::string> order_;
  std::vector<PendingTest> pending_tests_;
  std::vector<SourceLocation> checks_where_;
};

}  // namespace detail

inline Model parse_model(std::string_view text) {
  Model m = detail::ModelParser(text).parse();
  m.digest = fnv1a_digest(std::string(text));
  return m;
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model(buf.str());
  } catch (const SyntaxError& e) {
    throw Error(path + ":" + e.what());
  }
}

// ---------------------------------------------------------------------------
// Running declared checks

enum class CheckStatus { Pass = 0, Violation = 1, Incomplete = 2, Error = 3 };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Violation: return "violation";
    case CheckStatus::Incomplete: return "incomplete";
    case CheckStatus::Error: return "error";
  }
  return "?";
}

/// Exit status of several outcomes: errors outrank violations, which
/// outrank incomplete results.
inline CheckStatus worst(CheckStatus a, CheckStatus b) {
  auto rank = [](CheckStatus s) {
    switch (s) {
      case CheckStatus::Pass: return 0;
      case CheckStatus::Incomplete: return 1;
      case CheckStatus::Violation: return 2;
      case CheckStatus::Error: return 3;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

struct RunOptions {
  std::size_t max_states = default_max_states();
  SemanticsOptions semantics;
  /// 1-based indices of the checks to run; all when absent.
  std::optional<std::set<std::size_t>> selection;
  bool include_timings = true;
};

struct RunReport {
  Json json;
  CheckStatus status = CheckStatus::Pass;
  int exit_code() const { return static_cast<int>(status); }
};

namespace detail {

inline Json verdict_json(const OpacityVerdict& v) {
  Json j = {{"outcome", to_string(v.outcome)}};
  if (v.outcome == OpacityOutcome::NotOpaque) {
    j["witness"] = to_string(v.witness);
    j["observable"] = to_string(v.observable);
  }
  j["explored"] = v.explored;
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline CheckStatus opacity_status(const OpacityVerdict& v) {
  switch (v.outcome) {
    case OpacityOutcome::Opaque: return CheckStatus::Pass;
    case OpacityOutcome::NotOpaque: return CheckStatus::Violation;
    case OpacityOutcome::Incomplete: return CheckStatus::Incomplete;
  }
  return CheckStatus::Error;
}

inline std::pair<CheckStatus, Json> run_one(const Model& m, const CheckDecl& c,
                                            const RunOptions& opt) {
  auto plant = [&](const std::string& n) {
    return build_lts(*m.process(n), opt.max_states, opt.semantics);
  };
  Lts p = plant(c.process);
  Json j;
  if (c.kind == CheckKind::Bisim || c.kind == CheckKind::WeakTrace) {
    Lts q = plant(c.other);
    j["other"] = c.other;
    if (!p.complete || !q.complete) {
      j["outcome"] = "Incomplete";
      return {CheckStatus::Incomplete, j};
    }
    if (c.kind == CheckKind::Bisim) {
      bool eq = bisimilar(p, q);
      j["outcome"] = eq ? "Equivalent" : "NotEquivalent";
      return {eq ? CheckStatus::Pass : CheckStatus::Violation, j};
    }
    auto r = weak_trace_equiv(p, q, opt.max_states);
    j["outcome"] = r.equivalent ? "Equivalent" : "NotEquivalent";
    if (r.witness) j["witness"] = to_string(*r.witness);
    return {r.equivalent ? CheckStatus::Pass : CheckStatus::Violation, j};
  }
  const Observer& o = m.observers.at(c.observer);
  const Predicate& phi = m.predicates.at(c.predicate);
  j["observer"] = c.observer;
  j["predicate"] = c.predicate;
  switch (c.kind) {
    case CheckKind::Opacity: {
      auto v = check_opacity(p, phi, o, opt.max_states);
      j.update(verdict_json(v));
      return {opacity_status(v), j};
    }
    case CheckKind::Timing: {
      auto v = check_timing_attack(p, phi, o, opt.max_states);
      j["outcome"] = to_string(v.outcome);
      j["timed"] = verdict_json(v.timed);
      j["untimed"] = verdict_json(v.untimed);
      CheckStatus s = v.outcome == TimingOutcome::Prone      ? CheckStatus::Violation
                      : v.outcome == TimingOutcome::NotProne ? CheckStatus::Pass
                                                             : CheckStatus::Incomplete;
      return {s, j};
    }
    case CheckKind::Dependable: {
      if (!p.complete) {
        j["outcome"] = "Incomplete";
        return {CheckStatus::Incomplete, j};
      }
      bool dep = is_time_dependable(p, phi, o, DependabilityReading::Repaired, opt.max_states);
      j["outcome"] = dep ? "Dependable" : "NotDependable";
      return {dep ? CheckStatus::Pass : CheckStatus::Violation, j};
    }
    case CheckKind::Synth:
    case CheckKind::Insertion: {
      const Observer& os = m.observers.at(c.sup_observer);
      std::set<Label> ctrl = c.kind == CheckKind::Synth ? c.controllable : std::set<Label>{};
      j["sup_observer"] = c.sup_observer;
      Json cj = Json::array();
      for (const auto& l : ctrl) cj.push_back(l.str());
      j["controllable"] = cj;
      j["max_insert"] = c.max_insert;
      auto r = synthesize(p, phi, o, os, ctrl, c.max_insert, opt.max_states);
      j["outcome"] = to_string(r.outcome);
      j["game_nodes"] = r.game_nodes;
      if (!r.reason.empty()) j["reason"] = r.reason;
      if (r.supervisor) j["supervisor"] = supervisor_to_json(*r.supervisor);
      CheckStatus s = r.outcome == SynthesisOutcome::Incomplete     ? CheckStatus::Incomplete
                      : r.outcome == SynthesisOutcome::NoSupervisor ? CheckStatus::Violation
                                                                    : CheckStatus::Pass;
      return {s, j};
    }
    default: break;
  }
  return {CheckStatus::Error, j};
}

}  // namespace detail

/// Runs the selected checks in declaration order. A failing check is
/// recorded as an error and never stops the others.
inline RunReport run_checks(const Model& m, const RunOptions& opt = {}) {
  RunReport r;
  Json checks = Json::array();
  for (std::size_t i = 0; i < m.checks.size(); ++i) {
    if (opt.selection && !opt.selection->count(i + 1)) continue;
    const CheckDecl& c = m.checks[i];
    Json j = {{"index", i + 1}, {"kind", to_string(c.kind)}, {"line", c.line},
              {"process", c.process}};
    CheckStatus s;
    auto start = std::chrono::steady_clock::now();
    try {
      auto [status, body] = detail::run_one(m, c, opt);
      s = status;
      j.update(body);
    } catch (const std::exception& e) {
      s = CheckStatus::Error;
      j["outcome"] = "Error";
      j["error"] = e.what();
    }
    j["status"] = to_string(s);
    if (opt.include_timings) {
      j["time_ms"] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    }
    r.status = worst(r.status, s);
    checks.push_back(std::move(j));
  }
  Json warnings = Json::array();
  for (const auto& w : m.warnings) warnings.push_back(w);
  r.json = {{"tool", "tpa"},          {"version", kToolVersion}, {"input_digest", m.digest},
            {"warnings", warnings},   {"checks", checks},        {"exit_code", r.exit_code()}};
  return r;
}

}  // namespace tpa

#endif  // TPA_MODEL_HPP
