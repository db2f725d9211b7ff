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

#ifndef TPA_LABEL_HPP
#define TPA_LABEL_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tpa/error.hpp"

namespace tpa {

/// Names that can never be used as channel names.
inline bool is_reserved_name(std::string_view name) {
  return name == "tau" || name == "t" || name == "tick" || name == "rec" ||
         name == "Nil" || name == "eps" || name == "default" ||
         name == "id";
}

/// A visible action: a channel name with a polarity. Output actions
/// (co-names) are written with a leading quote, as in 'a.
struct Action {
  std::string name;
  bool co = false;

  Action complement() const { return Action{name, !co}; }
  std::string str() const { return co ? "'" + name : name; }

  friend bool operator==(const Action&, const Action&) = default;
  friend std::strong_ordering operator<=>(const Action& a, const Action& b) {
    return a.str() <=> b.str();
  }
};

enum class LabelKind : std::uint8_t { Visible, Internal, Time, Tick };

/// A transition label: a visible action, the internal action tau, the
/// time action t, or the test-success action tick.
///
/// Labels are totally ordered by their printed form; every tie-break in
/// the toolkit (witness selection, state numbering) uses this order.
class Label {
 public:
  Label() = default;

  static Label visible(std::string name, bool co = false) {
    Label l;
    l.kind_ = LabelKind::Visible;
    l.action_ = Action{std::move(name), co};
    return l;
  }
  static Label visible(Action a) { return visible(std::move(a.name), a.co); }
  static Label tau() { return of_kind(LabelKind::Internal); }
  static Label time() { return of_kind(LabelKind::Time); }
  static Label tick() { return of_kind(LabelKind::Tick); }

  /// Parses the printed form ("a", "'a", "tau", "t", "tick").
  static Label parse(std::string_view text) {
    if (text == "tau") return tau();
    if (text == "t") return time();
    if (text == "tick") return tick();
    bool co = false;
    if (!text.empty() && text.front() == '\'') {
      co = true;
      text.remove_prefix(1);
    }
    if (text.empty() || is_reserved_name(text)) {
      throw Error("invalid action label '" + std::string(text) + "'");
    }
    return visible(std::string(text), co);
  }

  LabelKind kind() const { return kind_; }
  bool is_visible() const { return kind_ == LabelKind::Visible; }
  bool is_tau() const { return kind_ == LabelKind::Internal; }
  bool is_time() const { return kind_ == LabelKind::Time; }
  bool is_tick() const { return kind_ == LabelKind::Tick; }

  const Action& action() const { return action_; }

  std::string str() const {
    switch (kind_) {
      case LabelKind::Internal: return "tau";
      case LabelKind::Time: return "t";
      case LabelKind::Tick: return "tick";
      case LabelKind::Visible: break;
    }
    return action_.str();
  }

  friend bool operator==(const Label& a, const Label& b) {
    return a.kind_ == b.kind_ &&
           (a.kind_ != LabelKind::Visible || a.action_ == b.action_);
  }
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    return a.str() <=> b.str();
  }

 private:
  static Label of_kind(LabelKind k) {
    Label l;
    l.kind_ = k;
    return l;
  }

  LabelKind kind_ = LabelKind::Internal;
  Action action_;
};

/// A finite label sequence. The empty trace is epsilon.
using Trace = std::vector<Label>;

inline std::ostream& operator<<(std::ostream& out, const Label& l) { return out << l.str(); }

inline std::string to_string(const Trace& w) {
  if (w.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += w[i].str();
  }
  return out;
}

/// Parses "h.l", "t.'a.tau" or "eps"/"" into a trace.
inline Trace parse_trace(std::string_view text) {
  Trace w;
  if (text.empty() || text == "eps") return w;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto dot = text.find('.', start);
    if (dot == std::string_view::npos) dot = text.size();
    w.push_back(Label::parse(text.substr(start, dot - start)));
    start = dot + 1;
  }
  return w;
}

}  // namespace tpa

#endif  // TPA_LABEL_HPP
