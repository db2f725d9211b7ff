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

// tpa: command-line front end for the timed process algebra toolkit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "tpa/tpa.hpp"

namespace {

using namespace tpa;

struct Globals {
  bool json = false;
  std::string dot;
  std::size_t max_states = default_max_states();
  std::size_t depth = 4;
  std::uint64_t seed = 1;
  std::size_t max_insert = 4;
  bool strict = false;

  SemanticsOptions semantics() const { return {strict}; }
};

struct Target {
  std::string input;
  std::string process;
};

/// INPUT is a model file (then --process names the definition) or a term.
Term resolve_term(const Target& t, std::optional<Model>* model_out = nullptr) {
  if (std::filesystem::is_regular_file(t.input)) {
    Model m = load_model(t.input);
    if (t.process.empty()) {
      if (m.processes.size() != 1) throw Error("--process is required for this model");
      Term r = m.processes.front().second;
      if (model_out) *model_out = std::move(m);
      return r;
    }
    const Term* p = m.process(t.process);
    if (!p) throw Error("no process '" + t.process + "' in " + t.input);
    Term r = *p;
    if (model_out) *model_out = std::move(m);
    return r;
  }
  return parse_term(t.input);
}

const Observer& find_observer(const Model& m, const std::string& n) {
  auto it = m.observers.find(n);
  if (it == m.observers.end()) throw Error("no observer '" + n + "' in model");
  return it->second;
}

const Predicate& find_predicate(const Model& m, const std::string& n) {
  auto it = m.predicates.find(n);
  if (it == m.predicates.end()) throw Error("no predicate '" + n + "' in model");
  return it->second;
}

Lts plant_lts(const Term& t, const Globals& g) {
  if (uses_tick(t)) throw Error("tick may only appear in test processes");
  return build_lts(t, g.max_states, g.semantics());
}

SupervisorAutomaton read_supervisor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open supervisor file '" + path + "'");
  try {
    return supervisor_from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void emit(const Globals& g, const Json& j, const std::string& text) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::set<Label> parse_label_list(const std::string& s) {
  std::set<Label> r;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) r.insert(Label::parse(item));
  }
  return r;
}

int opacity_exit(OpacityOutcome o) {
  return o == OpacityOutcome::Opaque ? 0 : o == OpacityOutcome::NotOpaque ? 1 : 2;
}

Trace random_walk(const Lts& l, std::size_t steps, std::mt19937_64& rng) {
  Trace w;
  StateId s = l.initial;
  for (std::size_t i = 0; i < steps && !l.out[s].empty(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, l.out[s].size() - 1);
    const Edge& e = l.out[s][pick(rng)];
    w.push_back(l.labels[e.label]);
    s = e.target;
  }
  return w;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timed process algebra toolkit: semantics, opacity and supervisor synthesis"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--max-states", g.max_states, "State budget for every construction");
  app.add_flag("--strict-tau-urgency", g.strict, "tau-prefixes do not let time pass");

  Target target;
  std::string observer, sup_observer, predicate, controllable, out_path, sup_path, other_sup,
      other, kind = "bisim", only;
  std::size_t steps = 10, runs = 5;

  auto add_target = [&](CLI::App* sub) {
    sub->add_option("input", target.input, "Model file or term")->required();
    sub->add_option("--process,-p", target.process, "Process name in the model");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--depth", g.depth, "Trace depth");
    sub->add_option("--seed", g.seed, "Random seed");
    sub->add_option("--max-insert", g.max_insert, "Consecutive t insertions allowed");
    sub->add_option("--dot", g.dot, "Write the transition system as Graphviz");
  };

  auto* parse = app.add_subcommand("parse", "Parse a term and report well-formedness");
  add_target(parse);
  auto* lts = app.add_subcommand("lts", "Build the transition system");
  add_target(lts);
  add_common(lts);
  auto* trs = app.add_subcommand("traces", "Enumerate traces up to --depth");
  add_target(trs);
  add_common(trs);
  auto* equiv = app.add_subcommand("equiv", "Compare two processes");
  add_target(equiv);
  equiv->add_option("--other,-q", other, "Second process (name or term)")->required();
  equiv->add_option("--kind", kind, "bisim or wtrace")->check(CLI::IsMember({"bisim", "wtrace"}));

  auto add_instance = [&](CLI::App* sub, bool with_sup) {
    add_target(sub);
    add_common(sub);
    sub->add_option("--observer,--attacker,-o", observer, "Attacker observer")->required();
    sub->add_option("--predicate,--phi", predicate, "Secret predicate")->required();
    if (with_sup) sub->add_option("--sup-observer", sup_observer, "Supervisor observer");
  };
  auto* opac = app.add_subcommand("check-opacity", "Decide language opacity");
  add_instance(opac, false);
  auto* timing = app.add_subcommand("check-timing", "Detect timing-attack proneness");
  add_instance(timing, false);
  auto* synth = app.add_subcommand("synth", "Synthesize a supervisor");
  add_instance(synth, true);
  synth->add_option("--controllable", controllable, "Comma-separated controllable actions");
  synth->add_option("--out", out_path, "Write the supervisor as JSON");
  auto* verify = app.add_subcommand("verify-sup", "Verify a supervisor");
  add_instance(verify, true);
  verify->add_option("--sup", sup_path, "Supervisor JSON")->required();
  auto* compare = app.add_subcommand("compare-sup", "Compare two supervisors");
  add_target(compare);
  compare->add_option("--sup-observer", sup_observer, "Supervisor observer")->required();
  compare->add_option("--sup", sup_path, "First supervisor JSON")->required();
  compare->add_option("--other-sup", other_sup, "Second supervisor JSON")->required();
  auto* sim = app.add_subcommand("simulate", "Random runs with and without supervision");
  add_target(sim);
  add_common(sim);
  sim->add_option("--sup-observer", sup_observer, "Supervisor observer")->required();
  sim->add_option("--sup", sup_path, "Supervisor JSON")->required();
  sim->add_option("--steps", steps, "Steps per run");
  sim->add_option("--runs", runs, "Number of runs");
  auto* run = app.add_subcommand("run", "Run the checks declared in a model file");
  run->add_option("model", target.input, "Model file")->required();
  run->add_option("--only", only, "Comma-separated 1-based check indices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version are reported as parse "errors" with code 0.
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    std::optional<Model> model;
    auto need_model = [&]() -> const Model& {
      if (!model) throw Error("this command needs a model file as input");
      return *model;
    };

    if (parse->parsed()) {
      Term t = resolve_term(target);
      auto rep = check_wellformed(t);
      Json j = {{"term", print_term(t)},
                {"closed", rep.closed},
                {"guarded", rep.guarded},
                {"regular", is_regular(t)},
                {"uses_tick", rep.uses_tick}};
      std::ostringstream s;
      s << print_term(t) << "\nclosed: " << rep.closed << "  guarded: " << rep.guarded
        << "  regular: " << is_regular(t) << "\n";
      emit(g, j, s.str());
      return rep.ok() ? 0 : 3;
    }

    if (lts->parsed() || trs->parsed()) {
      Term t = resolve_term(target);
      Lts l = build_lts(t, g.max_states, g.semantics());
      if (!g.dot.empty()) {
        std::ofstream(g.dot) << lts_to_dot(l);
      }
      if (lts->parsed()) {
        std::ostringstream s;
        s << l.num_states() << " states, " << l.num_transitions() << " transitions"
          << (l.complete ? "" : " (truncated)") << "\n";
        for (StateId i = 0; i < l.num_states(); ++i) {
          for (const auto& e : l.out[i]) {
            s << "  " << i << " -" << l.labels[e.label].str() << "-> " << e.target << "\n";
          }
        }
        emit(g, lts_to_json(l), s.str());
        return l.complete ? 0 : 2;
      }
      auto ts = traces(l, g.depth);
      Json arr = Json::array();
      std::ostringstream s;
      for (const auto& w : ts.traces) {
        arr.push_back(to_string(w));
        s << to_string(w) << "\n";
      }
      emit(g, {{"depth", g.depth}, {"partial", ts.partial}, {"traces", arr}}, s.str());
      return ts.partial ? 2 : 0;
    }

    if (equiv->parsed()) {
      Term a = resolve_term(target, &model);
      Term b = model ? resolve_term({target.input, other}) : parse_term(other);
      Lts la = build_lts(a, g.max_states, g.semantics());
      Lts lb = build_lts(b, g.max_states, g.semantics());
      if (!la.complete || !lb.complete) {
        emit(g, {{"outcome", "Incomplete"}}, "Incomplete\n");
        return 2;
      }
      bool eq;
      Json j = {{"kind", kind}};
      if (kind == "bisim") {
        eq = bisimilar(la, lb);
      } else {
        auto r = weak_trace_equiv(la, lb, g.max_states);
        eq = r.equivalent;
        if (r.witness) j["witness"] = to_string(*r.witness);
      }
      j["outcome"] = eq ? "Equivalent" : "NotEquivalent";
      emit(g, j, std::string(eq ? "Equivalent" : "NotEquivalent") +
                     (j.contains("witness") ? " (witness " + j["witness"].get<std::string>() + ")"
                                            : "") +
                     "\n");
      return eq ? 0 : 1;
    }

    if (opac->parsed() || timing->parsed() || synth->parsed() || verify->parsed()) {
      Term t = resolve_term(target, &model);
      const Model& m = need_model();
      Lts l = plant_lts(t, g);
      const Observer& o = find_observer(m, observer);
      const Predicate& phi = find_predicate(m, predicate);
      if (phi.holds_on_empty()) std::cerr << "warning: predicate holds on the empty trace\n";

      if (opac->parsed()) {
        auto v = check_opacity(l, phi, o, g.max_states);
        Json j = detail::verdict_json(v);
        std::string text = std::string(to_string(v.outcome));
        if (v.outcome == OpacityOutcome::NotOpaque) {
          text += ": witness " + to_string(v.witness) + " observed as " + to_string(v.observable);
        } else if (!v.reason.empty()) {
          text += ": " + v.reason;
        }
        if (v.outcome != OpacityOutcome::Incomplete) {
          j["k_automaton_states"] = safe_automaton(l, phi, o, g.max_states).acceptor.num_states();
        }
        emit(g, j, text + "\n");
        return opacity_exit(v.outcome);
      }
      if (timing->parsed()) {
        auto v = check_timing_attack(l, phi, o, g.max_states);
        Json j = {{"outcome", to_string(v.outcome)},
                  {"timed", detail::verdict_json(v.timed)},
                  {"untimed", detail::verdict_json(v.untimed)}};
        emit(g, j,
             std::string(to_string(v.outcome)) + " (timed: " + to_string(v.timed.outcome) +
                 ", untimed: " + to_string(v.untimed.outcome) + ")\n");
        return v.outcome == TimingOutcome::Prone ? 1 : v.outcome == TimingOutcome::NotProne ? 0 : 2;
      }
      const Observer& os = find_observer(m, sup_observer.empty() ? observer : sup_observer);
      if (synth->parsed()) {
        auto r = synthesize(l, phi, o, os, parse_label_list(controllable), g.max_insert,
                            g.max_states);
        Json j = {{"outcome", to_string(r.outcome)}, {"game_nodes", r.game_nodes}};
        if (!r.reason.empty()) j["reason"] = r.reason;
        std::ostringstream s;
        s << to_string(r.outcome) << "\n";
        if (r.supervisor) {
          j["supervisor"] = supervisor_to_json(*r.supervisor);
          for (std::size_t i = 0; i < r.supervisor->num_states(); ++i) {
            const auto& d = r.supervisor->policy[i];
            s << "  state " << i << ": disable {";
            bool first = true;
            for (const auto& x : d.disabled) {
              s << (first ? "" : ", ") << x.str();
              first = false;
            }
            s << "} insert " << d.insert;
            for (const auto& [theta, n] : r.supervisor->step[i]) s << "  " << theta.str() << "->" << n;
            s << "\n";
          }
          if (!out_path.empty()) {
            std::ofstream(out_path) << supervisor_to_json(*r.supervisor).dump(2) << "\n";
          }
        }
        emit(g, j, s.str());
        switch (r.outcome) {
          case SynthesisOutcome::Supervisor:
          case SynthesisOutcome::TrivialOnly: return 0;
          case SynthesisOutcome::NoSupervisor: return 1;
          case SynthesisOutcome::Incomplete: return 2;
        }
      }
      auto sup = read_supervisor(sup_path);
      auto r = verify_supervisor(l, phi, o, os, sup, g.max_states);
      const char* name = r.outcome == SupervisorValidity::Valid     ? "Valid"
                         : r.outcome == SupervisorValidity::Invalid ? "Invalid"
                                                                    : "Incomplete";
      Json j = {{"outcome", name}};
      if (!r.valid() && r.outcome == SupervisorValidity::Invalid) j["witness"] = to_string(r.witness);
      emit(g, j,
           std::string(name) +
               (r.outcome == SupervisorValidity::Invalid ? ": " + to_string(r.witness) : "") + "\n");
      return r.valid() ? 0 : r.outcome == SupervisorValidity::Invalid ? 1 : 2;
    }

    if (compare->parsed()) {
      Term t = resolve_term(target, &model);
      const Observer& os = find_observer(need_model(), sup_observer);
      Lts l = plant_lts(t, g);
      auto p = compare_supervisors(l, os, read_supervisor(sup_path), read_supervisor(other_sup),
                                   g.max_states);
      emit(g, {{"outcome", to_string(p)}}, std::string(to_string(p)) + "\n");
      return 0;
    }

    if (sim->parsed()) {
      Term t = resolve_term(target, &model);
      const Observer& os = find_observer(need_model(), sup_observer);
      Lts l = plant_lts(t, g);
      Lts s = supervised_product(l, os, read_supervisor(sup_path), g.max_states);
      std::mt19937_64 rng(g.seed);
      Json arr = Json::array();
      std::ostringstream text;
      for (std::size_t i = 0; i < runs; ++i) {
        Trace a = random_walk(l, steps, rng);
        Trace b = random_walk(s, steps, rng);
        arr.push_back({{"original", to_string(a)}, {"supervised", to_string(b)}});
        text << "original:   " << to_string(a) << "\nsupervised: " << to_string(b) << "\n";
      }
      emit(g, {{"seed", g.seed}, {"steps", steps}, {"runs", arr}}, text.str());
      return 0;
    }

    if (run->parsed()) {
      Model m = load_model(target.input);
      RunOptions opt;
      opt.max_states = g.max_states;
      opt.semantics = g.semantics();
      if (!only.empty()) {
        std::set<std::size_t> sel;
        std::stringstream in(only);
        std::string item;
        while (std::getline(in, item, ',')) {
          if (!item.empty()) sel.insert(std::stoul(item));
        }
        opt.selection = sel;
      }
      for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
      auto rep = run_checks(m, opt);
      std::ostringstream s;
      for (const auto& c : rep.json["checks"]) {
        s << "[" << c["index"].get<std::size_t>() << "] " << c["kind"].get<std::string>() << " "
          << c["process"].get<std::string>() << ": " << c["outcome"].get<std::string>();
        if (c.contains("witness")) s << " (witness " << c["witness"].get<std::string>() << ")";
        if (c.contains("error")) s << " (" << c["error"].get<std::string>() << ")";
        s << "\n";
      }
      emit(g, rep.json, s.str());
      return rep.exit_code();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
