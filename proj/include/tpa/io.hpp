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

#ifndef TPA_IO_HPP
#define TPA_IO_HPP

#include <sstream>
#include <string>

#include <json.hpp>

#include "tpa/semantics.hpp"
#include "tpa/supervisor.hpp"

namespace tpa {

using Json = nlohmann::ordered_json;

inline Json trace_json(const Trace& w) {
  Json a = Json::array();
  for (const auto& x : w) a.push_back(x.str());
  return a;
}

inline Json lts_to_json(const Lts& l) {
  Json states = Json::array();
  for (StateId s = 0; s < l.num_states(); ++s) {
    states.push_back({{"id", s}, {"term", l.state_names[s]}});
  }
  Json transitions = Json::array();
  for (StateId s = 0; s < l.num_states(); ++s) {
    for (const auto& e : l.out[s]) {
      transitions.push_back(Json::array({s, l.labels[e.label].str(), e.target}));
    }
  }
  return {{"states", states},
          {"initial", l.initial},
          {"transitions", transitions},
          {"complete", l.complete}};
}

inline std::string dot_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r;
}

/// Graphviz rendering; time steps are dashed.
inline std::string lts_to_dot(const Lts& l, const std::string& name = "lts") {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
  out << "  init [shape=point];\n  init -> s" << l.initial << ";\n";
  for (StateId s = 0; s < l.num_states(); ++s) {
    out << "  s" << s << " [label=\"" << s << "\", tooltip=\"" << dot_escape(l.state_names[s])
        << "\"];\n";
  }
  for (StateId s = 0; s < l.num_states(); ++s) {
    for (const auto& e : l.out[s]) {
      const Label& x = l.labels[e.label];
      out << "  s" << s << " -> s" << e.target << " [label=\"" << dot_escape(x.str()) << "\"";
      if (x.is_time()) out << ", style=dashed";
      out << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

inline Json supervisor_to_json(const SupervisorAutomaton& s) {
  Json states = Json::array();
  Json step = Json::object();
  Json policy = Json::object();
  for (std::size_t i = 0; i < s.num_states(); ++i) {
    states.push_back(i);
    Json moves = Json::object();
    for (const auto& [theta, t] : s.step[i]) moves[theta.str()] = t;
    step[std::to_string(i)] = moves;
    Json disabled = Json::array();
    for (const auto& l : s.policy[i].disabled) disabled.push_back(l.str());
    policy[std::to_string(i)] = {{"disabled", disabled}, {"insert", s.policy[i].insert}};
  }
  return {{"states", states}, {"initial", s.initial}, {"step", step}, {"policy", policy}};
}

/// Reads the format written by supervisor_to_json. States are numbered
/// by their position in "states".
inline SupervisorAutomaton supervisor_from_json(const Json& j) {
  try {
    SupervisorAutomaton s;
    std::map<std::string, std::size_t> id;
    for (const auto& st : j.at("states")) {
      std::string key = st.is_string() ? st.get<std::string>() : std::to_string(st.get<long long>());
      if (!id.emplace(key, id.size()).second) throw Error("duplicate supervisor state " + key);
      s.add_state();
    }
    auto lookup = [&](const Json& v) {
      std::string key = v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>());
      auto it = id.find(key);
      if (it == id.end()) throw Error("unknown supervisor state " + key);
      return it->second;
    };
    if (s.num_states() == 0) throw Error("supervisor has no states");
    s.initial = lookup(j.at("initial"));
    if (j.contains("step")) {
      for (const auto& [from, moves] : j.at("step").items()) {
        std::size_t f = lookup(Json(from));
        for (const auto& [theta, to] : moves.items()) s.step[f][Label::parse(theta)] = lookup(to);
      }
    }
    if (j.contains("policy")) {
      for (const auto& [state, d] : j.at("policy").items()) {
        std::size_t f = lookup(Json(state));
        for (const auto& l : d.value("disabled", Json::array())) {
          Label x = Label::parse(l.get<std::string>());
          if (!x.is_visible()) throw Error("only visible actions can be disabled");
          s.policy[f].disabled.insert(x);
        }
        s.policy[f].insert = d.value("insert", std::size_t{0});
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed supervisor file: ") + e.what());
  }
}

}  // namespace tpa

#endif  // TPA_IO_HPP
