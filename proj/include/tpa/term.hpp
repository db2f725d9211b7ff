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

#ifndef TPA_TERM_HPP
#define TPA_TERM_HPP

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tpa/error.hpp"
#include "tpa/label.hpp"

namespace tpa {

enum class TermKind {
  Nil,
  Var,
  Prefix,
  Choice,
  Par,
  Restrict,
  Relabel,
  Rec
};

/// Channel renaming applied by the relabeling operator. Maps names to
/// names, so co-names follow their names and tau, t and tick are fixed.
using Relabeling = std::map<std::string, std::string>;
using NameSet = std::set<std::string>;

/// Immutable process term. Copies share structure; equality is
/// structural and cheap (each node carries a serialized key).
class Term {
 public:
  /// Nil.
  Term() : node_(nil_node()) {}

  static Term nil() { return Term(); }
  static Term var(std::string name) {
    auto n = std::make_shared<Node>(TermKind::Var);
    n->name = std::move(name);
    return finish(std::move(n));
  }
  static Term prefix(Label label, Term body) {
    auto n = std::make_shared<Node>(TermKind::Prefix);
    n->label = std::move(label);
    n->children = {std::move(body)};
    return finish(std::move(n));
  }
  static Term choice(Term lhs, Term rhs) {
    return binary(TermKind::Choice, std::move(lhs), std::move(rhs));
  }
  static Term par(Term lhs, Term rhs) {
    return binary(TermKind::Par, std::move(lhs), std::move(rhs));
  }
  static Term restrict(Term body, NameSet names) {
    for (const auto& n : names) {
      if (is_reserved_name(n)) {
        throw IllFormedTerm("cannot restrict reserved name '" + n + "'");
      }
    }
    auto node = std::make_shared<Node>(TermKind::Restrict);
    node->names = std::move(names);
    node->children = {std::move(body)};
    return finish(std::move(node));
  }
  static Term relabel(Term body, Relabeling f) {
    for (const auto& [from, to] : f) {
      if (is_reserved_name(from) || is_reserved_name(to)) {
        throw IllFormedTerm("relabeling may not mention reserved names");
      }
    }
    auto node = std::make_shared<Node>(TermKind::Relabel);
    node->relabeling = std::move(f);
    node->children = {std::move(body)};
    return finish(std::move(node));
  }
  static Term rec(std::string name, Term body) {
    auto n = std::make_shared<Node>(TermKind::Rec);
    n->name = std::move(name);
    n->children = {std::move(body)};
    return finish(std::move(n));
  }

  /// Right-associated n-ary choice/parallel. Empty input gives Nil.
  static Term choice_of(const std::vector<Term>& terms) {
    return fold_right(TermKind::Choice, terms);
  }
  static Term par_of(const std::vector<Term>& terms) {
    return fold_right(TermKind::Par, terms);
  }

  /// Prefix chain w_1. ... .w_n.tail
  static Term sequence(const Trace& w, Term tail = Term()) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      tail = prefix(*it, std::move(tail));
    }
    return tail;
  }

  TermKind kind() const { return node_->kind; }
  bool is_nil() const { return kind() == TermKind::Nil; }
  const Label& label() const { return node_->label; }
  const std::string& name() const { return node_->name; }
  const NameSet& restricted() const { return node_->names; }
  const Relabeling& relabeling() const { return node_->relabeling; }
  const Term& body() const { return node_->children.at(0); }
  const Term& lhs() const { return node_->children.at(0); }
  const Term& rhs() const { return node_->children.at(1); }

  /// Unambiguous structural serialization; equal keys iff equal terms.
  const std::string& key() const { return node_->key; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.node_ == b.node_ ||
           (a.node_->hash == b.node_->hash && a.node_->key == b.node_->key);
  }

 private:
  struct Node {
    explicit Node(TermKind k) : kind(k) {}
    TermKind kind;
    Label label;
    std::string name;
    NameSet names;
    Relabeling relabeling;
    std::vector<Term> children;
    std::string key;
    std::size_t hash = 0;
  };

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static const std::shared_ptr<const Node>& nil_node() {
    static const std::shared_ptr<const Node> nil = [] {
      auto n = std::make_shared<Node>(TermKind::Nil);
      n->key = "0";
      n->hash = std::hash<std::string>{}(n->key);
      return std::shared_ptr<const Node>(std::move(n));
    }();
    return nil;
  }

  static Term binary(TermKind k, Term lhs, Term rhs) {
    auto n = std::make_shared<Node>(k);
    n->children = {std::move(lhs), std::move(rhs)};
    return finish(std::move(n));
  }

  static Term fold_right(TermKind k, const std::vector<Term>& terms) {
    if (terms.empty()) return Term();
    Term acc = terms.back();
    for (auto i = terms.size() - 1; i-- > 0;) acc = binary(k, terms[i], acc);
    return acc;
  }

  static Term finish(std::shared_ptr<Node> n) {
    std::string& k = n->key;
    switch (n->kind) {
      case TermKind::Nil: k = "0"; break;
      case TermKind::Var: k = "v:" + n->name + ";"; break;
      case TermKind::Prefix:
        k = "p:" + n->label.str() + ";" + n->children[0].key();
        break;
      case TermKind::Choice:
      case TermKind::Par:
        k = (n->kind == TermKind::Choice ? "+(" : "|(") +
            n->children[0].key() + "," + n->children[1].key() + ")";
        break;
      case TermKind::Restrict: {
        k = "r{";
        for (const auto& s : n->names) k += s + ",";
        k += "}(" + n->children[0].key() + ")";
        break;
      }
      case TermKind::Relabel: {
        k = "f[";
        for (const auto& [from, to] : n->relabeling) k += to + "/" + from + ",";
        k += "](" + n->children[0].key() + ")";
        break;
      }
      case TermKind::Rec:
        k = "m:" + n->name + ";(" + n->children[0].key() + ")";
        break;
    }
    n->hash = std::hash<std::string>{}(k);
    return Term(std::shared_ptr<const Node>(std::move(n)));
  }

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

// Precedence levels of the concrete grammar, loosest first.
enum class Prec { Choice = 0, Par = 1, Postfix = 2, Prefix = 3 };

inline void print_term(const Term& t, Prec ctx, std::string& out) {
  auto wrap = [&](Prec own, auto&& body) {
    bool parens = own < ctx;
    if (parens) out += '(';
    body();
    if (parens) out += ')';
  };
  switch (t.kind()) {
    case TermKind::Nil: out += '0'; return;
    case TermKind::Var: out += t.name(); return;
    case TermKind::Prefix:
      out += t.label().str();
      out += '.';
      print_term(t.body(), Prec::Prefix, out);
      return;
    case TermKind::Rec:
      // A rec body extends as far as a prefix does, so it behaves like a
      // prefix for its parent.
      out += "rec " + t.name() + ". ";
      print_term(t.body(), Prec::Prefix, out);
      return;
    case TermKind::Choice:
      wrap(Prec::Choice, [&] {
        print_term(t.lhs(), Prec::Par, out);
        out += " + ";
        print_term(t.rhs(), Prec::Choice, out);
      });
      return;
    case TermKind::Par:
      wrap(Prec::Par, [&] {
        print_term(t.lhs(), Prec::Postfix, out);
        out += " | ";
        print_term(t.rhs(), Prec::Par, out);
      });
      return;
    case TermKind::Restrict:
    case TermKind::Relabel:
      wrap(Prec::Postfix, [&] {
        // Operand of a postfix operator: a prefix-level term or another
        // postfix application.
        const Term& b = t.body();
        bool chained =
            b.kind() == TermKind::Restrict || b.kind() == TermKind::Relabel;
        print_term(b, chained ? Prec::Postfix : Prec::Prefix, out);
        if (t.kind() == TermKind::Restrict) {
          out += "\\{";
          bool first = true;
          for (const auto& n : t.restricted()) {
            if (!first) out += ',';
            first = false;
            out += n;
          }
          out += '}';
        } else {
          out += '[';
          bool first = true;
          for (const auto& [from, to] : t.relabeling()) {
            if (!first) out += ',';
            first = false;
            out += to + "/" + from;
          }
          out += ']';
        }
      });
      return;
  }
}

}  // namespace detail

/// Concrete syntax with minimal parentheses; parse_term inverts it.
inline std::string print_term(const Term& t) {
  std::string out;
  detail::print_term(t, detail::Prec::Choice, out);
  return out;
}

// ---------------------------------------------------------------------------
// Static checks

struct WellformednessReport {
  bool closed = true;
  bool guarded = true;
  std::vector<std::string> free_variables;
  std::vector<std::string> unguarded_variables;
  bool uses_tick = false;

  bool ok() const { return closed && guarded; }
};

namespace detail {

inline void collect_free(const Term& t, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Nil: return;
    case TermKind::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case TermKind::Rec: {
      bool fresh = bound.insert(t.name()).second;
      collect_free(t.body(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    case TermKind::Choice:
    case TermKind::Par:
      collect_free(t.lhs(), bound, out);
      collect_free(t.rhs(), bound, out);
      return;
    default: collect_free(t.body(), bound, out); return;
  }
}

// Variables in `watch` that occur in t without an enclosing prefix.
inline void collect_unguarded(const Term& t, const std::set<std::string>& watch,
                              std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Nil:
    case TermKind::Prefix: return;
    case TermKind::Var:
      if (watch.count(t.name())) out.insert(t.name());
      return;
    case TermKind::Rec: {
      std::set<std::string> inner = watch;
      inner.erase(t.name());
      collect_unguarded(t.body(), inner, out);
      return;
    }
    case TermKind::Choice:
    case TermKind::Par:
      collect_unguarded(t.lhs(), watch, out);
      collect_unguarded(t.rhs(), watch, out);
      return;
    default: collect_unguarded(t.body(), watch, out); return;
  }
}

inline void check_guarded(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Nil:
    case TermKind::Var: return;
    case TermKind::Rec:
      collect_unguarded(t.body(), {t.name()}, out);
      check_guarded(t.body(), out);
      return;
    case TermKind::Choice:
    case TermKind::Par:
      check_guarded(t.lhs(), out);
      check_guarded(t.rhs(), out);
      return;
    default: check_guarded(t.body(), out); return;
  }
}

inline bool any_tick(const Term& t) {
  switch (t.kind()) {
    case TermKind::Nil:
    case TermKind::Var: return false;
    case TermKind::Prefix: return t.label().is_tick() || any_tick(t.body());
    case TermKind::Choice:
    case TermKind::Par: return any_tick(t.lhs()) || any_tick(t.rhs());
    default: return any_tick(t.body());
  }
}

}  // namespace detail

inline bool uses_tick(const Term& t) { return detail::any_tick(t); }

inline std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> bound, out;
  detail::collect_free(t, bound, out);
  return out;
}

inline WellformednessReport check_wellformed(const Term& t) {
  WellformednessReport r;
  auto free = free_variables(t);
  r.free_variables.assign(free.begin(), free.end());
  r.closed = free.empty();
  std::set<std::string> unguarded;
  detail::check_guarded(t, unguarded);
  r.unguarded_variables.assign(unguarded.begin(), unguarded.end());
  r.guarded = unguarded.empty();
  r.uses_tick = detail::any_tick(t);
  return r;
}

inline void require_wellformed(const Term& t) {
  auto r = check_wellformed(t);
  if (!r.closed) {
    throw IllFormedTerm("term is open (free variable '" +
                        r.free_variables.front() + "')");
  }
  if (!r.guarded) {
    throw IllFormedTerm("unguarded recursion on '" +
                        r.unguarded_variables.front() + "'");
  }
}

namespace detail {

inline bool mentions_var(const Term& t, const std::string& x) {
  switch (t.kind()) {
    case TermKind::Nil: return false;
    case TermKind::Var: return t.name() == x;
    case TermKind::Rec: return t.name() != x && mentions_var(t.body(), x);
    case TermKind::Choice:
    case TermKind::Par: return mentions_var(t.lhs(), x) || mentions_var(t.rhs(), x);
    default: return mentions_var(t.body(), x);
  }
}

// True when every Par/Restrict/Relabel in t is free of the variables
// bound by enclosing recursions.
inline bool regular_under(const Term& t, std::set<std::string>& bound) {
  switch (t.kind()) {
    case TermKind::Nil:
    case TermKind::Var: return true;
    case TermKind::Prefix: return regular_under(t.body(), bound);
    case TermKind::Choice:
      return regular_under(t.lhs(), bound) && regular_under(t.rhs(), bound);
    case TermKind::Rec: {
      bool fresh = bound.insert(t.name()).second;
      bool ok = regular_under(t.body(), bound);
      if (fresh) bound.erase(t.name());
      return ok;
    }
    case TermKind::Par:
    case TermKind::Restrict:
    case TermKind::Relabel:
      for (const auto& x : bound) {
        if (mentions_var(t, x)) return false;
      }
      if (t.kind() == TermKind::Par) {
        return regular_under(t.lhs(), bound) && regular_under(t.rhs(), bound);
      }
      return regular_under(t.body(), bound);
  }
  return true;
}

}  // namespace detail

/// Conservative syntactic finite-state test: no recursion variable occurs
/// inside a parallel, restriction or relabeling operand within its own
/// binder.
inline bool is_regular(const Term& t) {
  std::set<std::string> bound;
  return detail::regular_under(t, bound);
}

/// t[replacement/x]. The replacement must be closed, which holds for every
/// use in the toolkit (unfolding closed recursions), so no capture occurs.
inline Term substitute(const Term& t, const std::string& x,
                       const Term& replacement) {
  switch (t.kind()) {
    case TermKind::Nil: return t;
    case TermKind::Var: return t.name() == x ? replacement : t;
    case TermKind::Prefix:
      return Term::prefix(t.label(), substitute(t.body(), x, replacement));
    case TermKind::Choice:
      return Term::choice(substitute(t.lhs(), x, replacement),
                          substitute(t.rhs(), x, replacement));
    case TermKind::Par:
      return Term::par(substitute(t.lhs(), x, replacement),
                       substitute(t.rhs(), x, replacement));
    case TermKind::Restrict:
      return Term::restrict(substitute(t.body(), x, replacement), t.restricted());
    case TermKind::Relabel:
      return Term::relabel(substitute(t.body(), x, replacement), t.relabeling());
    case TermKind::Rec:
      if (t.name() == x) return t;
      return Term::rec(t.name(), substitute(t.body(), x, replacement));
  }
  return t;
}

/// One unfolding of rec X. P, i.e. P[rec X. P / X].
inline Term unfold(const Term& t) {
  return substitute(t.body(), t.name(), t);
}

/// Channel names mentioned by prefixes of t (ignores tau, t and tick).
inline NameSet channel_names(const Term& t) {
  NameSet out;
  std::function<void(const Term&)> go = [&](const Term& u) {
    switch (u.kind()) {
      case TermKind::Nil:
      case TermKind::Var: return;
      case TermKind::Prefix:
        if (u.label().is_visible()) out.insert(u.label().action().name);
        go(u.body());
        return;
      case TermKind::Choice:
      case TermKind::Par:
        go(u.lhs());
        go(u.rhs());
        return;
      case TermKind::Relabel:
        for (const auto& [from, to] : u.relabeling()) out.insert(to);
        go(u.body());
        return;
      default: go(u.body()); return;
    }
  };
  go(t);
  return out;
}

}  // namespace tpa

#endif  // TPA_TERM_HPP
