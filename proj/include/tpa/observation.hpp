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

#ifndef TPA_OBSERVATION_HPP
#define TPA_OBSERVATION_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tpa/automata.hpp"
#include "tpa/error.hpp"
#include "tpa/label.hpp"

namespace tpa {

/// Sequence of observables.
using Observable = std::vector<Label>;

/// Image of one letter: an observable or nothing (epsilon).
using LetterImage = std::optional<Label>;

enum class DefaultRule { Identity, Erase };

/// Letterwise observation. Letters without an explicit entry follow the
/// default rule, except tau, which is erased unless mapped explicitly.
struct StaticObserver {
  std::map<Label, LetterImage> map;
  DefaultRule fallback = DefaultRule::Identity;

  LetterImage image(const Label& x) const {
    auto it = map.find(x);
    if (it != map.end()) return it->second;
    if (x.is_tau() || fallback == DefaultRule::Erase) return std::nullopt;
    return x;
  }
};

/// `letter -> output when context`: applies to `letter` if `context`
/// occurs at another position of the window.
struct WindowRule {
  Label letter;
  std::optional<Label> context;
  LetterImage output;
};

/// Observation whose image of position i depends on the window
/// x_{max(1,i-m+1)} .. x_{min(n,i+m-1)}. Rules are tried in order; the
/// base observer handles letters no rule matches.
struct WindowObserver {
  std::size_t window = 1;
  std::vector<WindowRule> rules;
  StaticObserver base;
  /// Windows are computed over the trace with every t deleted.
  bool time_blind = false;

  LetterImage image(std::span<const Label> win, std::size_t pos) const {
    const Label& x = win[pos];
    for (const auto& r : rules) {
      if (!(r.letter == x)) continue;
      if (r.context) {
        bool found = false;
        for (std::size_t k = 0; k < win.size(); ++k) {
          if (k != pos && win[k] == *r.context) found = true;
        }
        if (!found) continue;
      }
      return r.output;
    }
    return base.image(x);
  }
};

/// Arbitrary trace-to-observable function (dynamic or orwellian
/// observations). Usable for evaluation and bounded checks only.
struct PluginObserver {
  std::string description;
  std::function<Observable(const Trace&)> fn;
};

class Observer {
 public:
  using Kind = std::variant<StaticObserver, WindowObserver, PluginObserver>;

  Observer() : kind_(StaticObserver{}) {}
  Observer(StaticObserver s, std::string name = {})
      : name_(std::move(name)), kind_(std::move(s)) {}
  Observer(WindowObserver w, std::string name = {})
      : name_(std::move(name)), kind_(std::move(w)) {
    if (std::get<WindowObserver>(kind_).window == 0) {
      throw PreconditionFailed("observation window must be at least 1");
    }
  }
  Observer(PluginObserver p, std::string name = {})
      : name_(std::move(name)), kind_(std::move(p)) {}

  /// Identity on every letter except tau.
  static Observer identity() { return Observer(StaticObserver{}, "id"); }

  /// x -> x for x outside `hidden`, epsilon otherwise.
  static Observer hiding(const std::set<Label>& hidden, std::string name = {}) {
    StaticObserver s;
    for (const auto& h : hidden) s.map[h] = std::nullopt;
    return Observer(std::move(s), std::move(name));
  }

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const Kind& kind() const { return kind_; }
  bool is_static() const { return std::holds_alternative<StaticObserver>(kind_); }
  bool is_window() const { return std::holds_alternative<WindowObserver>(kind_); }
  bool is_plugin() const { return std::holds_alternative<PluginObserver>(kind_); }
  const StaticObserver& as_static() const { return std::get<StaticObserver>(kind_); }
  const WindowObserver& as_window() const { return std::get<WindowObserver>(kind_); }

  /// Labels the observer treats specially (map keys, rule letters and
  /// contexts).
  std::set<Label> mentioned() const {
    std::set<Label> r;
    auto add_static = [&](const StaticObserver& s) {
      for (const auto& [k, v] : s.map) {
        r.insert(k);
        if (v) r.insert(*v);
      }
    };
    if (is_static()) {
      add_static(as_static());
    } else if (is_window()) {
      const auto& w = as_window();
      add_static(w.base);
      for (const auto& rule : w.rules) {
        r.insert(rule.letter);
        if (rule.context) r.insert(*rule.context);
        if (rule.output) r.insert(*rule.output);
      }
    }
    return r;
  }

 private:
  std::string name_;
  Kind kind_;
};

namespace detail {

inline Observable observe_window(const WindowObserver& o, const Trace& w0) {
  Trace w;
  for (const auto& x : w0) {
    if (!(o.time_blind && x.is_time())) w.push_back(x);
  }
  Observable out;
  const std::size_t n = w.size(), m = o.window;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i + 1 >= m ? i + 1 - m : 0;
    std::size_t hi = std::min(n - 1, i + m - 1);
    std::span<const Label> win(w.data() + lo, hi - lo + 1);
    if (auto img = o.image(win, i - lo)) out.push_back(*img);
  }
  return out;
}

}  // namespace detail

inline Observable observe(const Observer& o, const Trace& w) {
  if (o.is_static()) {
    Observable out;
    for (const auto& x : w) {
      if (auto img = o.as_static().image(x)) out.push_back(*img);
    }
    return out;
  }
  if (o.is_window()) return detail::observe_window(o.as_window(), w);
  return std::get<PluginObserver>(o.kind()).fn(w);
}

/// The window observer with m = 1 that agrees with a static observer.
inline Observer lift_to_window(const StaticObserver& s) {
  WindowObserver w;
  w.window = 1;
  w.base = s;
  return Observer(std::move(w));
}

/// Observer that sees a trace as `o` sees it with every t removed.
inline Observer derive_untimed(const Observer& o) {
  if (o.is_static()) {
    StaticObserver s = o.as_static();
    s.map[Label::time()] = std::nullopt;
    return Observer(std::move(s), o.name().empty() ? "" : o.name() + "'");
  }
  if (o.is_window()) {
    WindowObserver w = o.as_window();
    w.time_blind = true;
    return Observer(std::move(w), o.name().empty() ? "" : o.name() + "'");
  }
  throw PreconditionFailed("derive_untimed needs a static or window observer");
}

// ---------------------------------------------------------------------------
// Ordering

enum class OrderOutcome { Stronger, NotStronger, UnknownUpTo };

struct ObserverOrder {
  OrderOutcome outcome = OrderOutcome::UnknownUpTo;
  /// For NotStronger: o2 identifies the pair, o1 separates it.
  std::optional<std::pair<Trace, Trace>> witness;
  std::size_t bound = 0;
};

namespace detail {

inline std::vector<Label> comparison_alphabet(const Observer& a, const Observer& b,
                                              const std::set<Label>& extra) {
  std::set<Label> s = a.mentioned();
  auto mb = b.mentioned();
  s.insert(mb.begin(), mb.end());
  s.insert(extra.begin(), extra.end());
  s.insert(Label::tau());
  s.insert(Label::time());
  s.insert(fresh_letter(0));
  s.insert(fresh_letter(1));
  return {s.begin(), s.end()};
}

inline ObserverOrder bounded_order(const Observer& o1, const Observer& o2,
                                   const std::vector<Label>& sigma, std::size_t bound) {
  std::map<Observable, std::pair<Observable, Trace>> seen;
  std::vector<Trace> layer{Trace{}};
  for (std::size_t len = 0;; ++len) {
    for (const auto& w : layer) {
      Observable img2 = observe(o2, w), img1 = observe(o1, w);
      auto [it, fresh] = seen.emplace(img2, std::make_pair(img1, w));
      if (!fresh && it->second.first != img1) {
        ObserverOrder r;
        r.outcome = OrderOutcome::NotStronger;
        r.witness = std::make_pair(w, it->second.second);
        r.bound = bound;
        return r;
      }
    }
    if (len == bound) break;
    std::vector<Trace> next;
    for (const auto& w : layer) {
      for (const auto& x : sigma) {
        Trace w2 = w;
        w2.push_back(x);
        next.push_back(std::move(w2));
      }
    }
    layer = std::move(next);
  }
  ObserverOrder r;
  r.outcome = OrderOutcome::UnknownUpTo;
  r.bound = bound;
  return r;
}

}  // namespace detail

/// Decides o1 <= o2 (o2 is stronger: whatever o2 identifies, o1
/// identifies too). Exact for two static observers: o1 <= o2 iff every
/// letter o2 erases is erased by o1 and letters o2 maps together are
/// mapped together by o1. Other combinations are checked on every trace
/// pair up to `bound` letters over the letters either observer mentions
/// (plus `extra`), and are reported UnknownUpTo when nothing separates.
inline ObserverOrder compare_observers(const Observer& o1, const Observer& o2,
                                       std::size_t bound = 4,
                                       const std::set<Label>& extra = {}) {
  auto sigma = detail::comparison_alphabet(o1, o2, extra);
  if (!(o1.is_static() && o2.is_static())) {
    return detail::bounded_order(o1, o2, sigma, bound);
  }
  const auto& s1 = o1.as_static();
  const auto& s2 = o2.as_static();
  ObserverOrder r;
  r.bound = bound;
  // Letter with a visible o2-image, used to pad witnesses so both sides
  // are non-empty observations where possible.
  std::optional<Label> pad;
  for (const auto& y : sigma) {
    if (s2.image(y) && s1.image(y)) {
      pad = y;
      break;
    }
  }
  for (const auto& x : sigma) {
    if (!s2.image(x) && s1.image(x)) {
      r.outcome = OrderOutcome::NotStronger;
      if (pad) {
        r.witness = std::make_pair(Trace{x, *pad}, Trace{*pad});
      } else {
        r.witness = std::make_pair(Trace{x}, Trace{});
      }
      return r;
    }
  }
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t j = i + 1; j < sigma.size(); ++j) {
      auto a2 = s2.image(sigma[i]), b2 = s2.image(sigma[j]);
      if (a2 && b2 && *a2 == *b2 && s1.image(sigma[i]) != s1.image(sigma[j])) {
        r.outcome = OrderOutcome::NotStronger;
        r.witness = std::make_pair(Trace{sigma[i]}, Trace{sigma[j]});
        return r;
      }
    }
  }
  r.outcome = OrderOutcome::Stronger;
  return r;
}

/// Mutual strength.
inline bool observers_comparable(const Observer& a, const Observer& b,
                                 std::size_t bound = 4) {
  return compare_observers(a, b, bound).outcome == OrderOutcome::Stronger &&
         compare_observers(b, a, bound).outcome == OrderOutcome::Stronger;
}

// ---------------------------------------------------------------------------
// Observation machines

/// Deterministic transducer computing an observation left to right: each
/// letter moves the machine and emits at most one observable, and the
/// final state contributes a flush sequence. O(w) = emitted(w) + flush.
///
/// Static observers compile to one state with an empty flush. Window
/// observers keep the last 2m-2 letters: the image of position j is
/// emitted when letter j+m-1 arrives, and the last m-1 positions are
/// emitted by the flush with truncated windows.
class ObservationMachine {
 public:
  explicit ObservationMachine(const Observer& o) : observer_(o) {
    if (o.is_plugin()) {
      throw PreconditionFailed("observer '" + o.name() +
                               "' is a plugin and cannot be compiled to an automaton");
    }
    buffers_.push_back({});
    index_[Trace{}] = 0;
  }

  std::size_t initial() const { return 0; }
  std::size_t size() const { return buffers_.size(); }
  bool is_static() const { return observer_.is_static(); }

  struct Move {
    std::size_t next;
    LetterImage output;
  };

  Move step(std::size_t s, const Label& x) {
    if (observer_.is_static()) return {0, observer_.as_static().image(x)};
    const auto& w = observer_.as_window();
    if (w.time_blind && x.is_time()) return {s, std::nullopt};
    const std::size_t m = w.window;
    Trace full = buffers_[s];
    full.push_back(x);
    LetterImage out;
    if (full.size() >= m) out = w.image(full, full.size() - m);
    const std::size_t keep = std::min(full.size(), 2 * m - 2);
    Trace buf(full.end() - static_cast<std::ptrdiff_t>(keep), full.end());
    return {intern(std::move(buf)), out};
  }

  Observable flush(std::size_t s) const {
    Observable out;
    if (observer_.is_static()) return out;
    const auto& w = observer_.as_window();
    const std::size_t m = w.window;
    const Trace& b = buffers_[s];
    const std::size_t pending = std::min(b.size(), m - 1);
    for (std::size_t q = b.size() - pending; q < b.size(); ++q) {
      std::size_t lo = q + 1 >= m ? q + 1 - m : 0;
      std::span<const Label> win(b.data() + lo, b.size() - lo);
      if (auto img = w.image(win, q - lo)) out.push_back(*img);
    }
    return out;
  }

 private:
  std::size_t intern(Trace buf) {
    auto [it, fresh] = index_.emplace(buf, buffers_.size());
    if (fresh) buffers_.push_back(std::move(buf));
    return it->second;
  }

  Observer observer_;
  std::vector<Trace> buffers_;
  std::map<Trace, std::size_t> index_;
};

}  // namespace tpa

#endif  // TPA_OBSERVATION_HPP
