/* Copyright 2026 The tlk Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "tlk/ast.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "tlk/error.hpp"

namespace tlk {

// ---------------------------------------------------------------------------
// Signature

void Signature::check_fresh(const std::string& name) const {
  if (name.empty() || name == kEquality) {
    throw InvalidInput("invalid symbol name '" + name + "'");
  }
  if (has_symbol(name)) {
    throw InvalidInput("symbol '" + name + "' declared twice");
  }
}

void Signature::add_relation(const std::string& name, int arity) {
  check_fresh(name);
  if (arity < 1) throw InvalidInput("relation '" + name + "' needs arity >= 1");
  relations_.emplace(name, arity);
}

void Signature::add_function(const std::string& name, int arity) {
  check_fresh(name);
  if (arity < 1) throw InvalidInput("function '" + name + "' needs arity >= 1");
  functions_.emplace(name, arity);
}

void Signature::add_constant(const std::string& name) {
  check_fresh(name);
  constants_.insert(name);
}

std::optional<int> Signature::relation_arity(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Signature::function_arity(const std::string& name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) return std::nullopt;
  return it->second;
}

bool Signature::has_constant(const std::string& name) const {
  return constants_.count(name) != 0;
}

bool Signature::has_symbol(const std::string& name) const {
  return relations_.count(name) || functions_.count(name) ||
         constants_.count(name);
}

// ---------------------------------------------------------------------------
// Terms

Term Term::variable(std::string name) {
  return Term{Kind::Variable, std::move(name), {}};
}

Term Term::constant(std::string name) {
  return Term{Kind::Constant, std::move(name), {}};
}

Term Term::apply(std::string function, std::vector<Term> args) {
  return Term{Kind::Apply, std::move(function), std::move(args)};
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  const std::size_t n = std::min(a.args.size(), b.args.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  }
  return a.args.size() <=> b.args.size();
}

void collect_term_variables(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Variable) {
    out.insert(t.name);
    return;
  }
  for (const Term& a : t.args) collect_term_variables(a, out);
}

std::set<std::string> term_variables(const Term& t) {
  std::set<std::string> out;
  collect_term_variables(t, out);
  return out;
}

AtomicFormula AtomicFormula::equality(Term lhs, Term rhs) {
  return AtomicFormula{kEquality, {std::move(lhs), std::move(rhs)}};
}

AtomicFormula AtomicFormula::relation_atom(std::string name,
                                           std::vector<Term> args) {
  return AtomicFormula{std::move(name), std::move(args)};
}

Term substitute_var(const Term& t, const std::string& var, const Term& by) {
  if (t.kind == Term::Kind::Variable) return t.name == var ? by : t;
  if (t.kind == Term::Kind::Constant) return t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(substitute_var(a, var, by));
  return Term::apply(t.name, std::move(args));
}

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
  Connective kind;
  AtomicFormula atom;
  std::vector<Term> terms;
  std::string var;
  std::optional<Formula> lhs;
  std::optional<Formula> rhs;
};

Formula Formula::atom(AtomicFormula a) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::Atom, std::move(a), {}, {}, {}, {}}));
}

Formula Formula::neg_atom(AtomicFormula a) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::NegAtom, std::move(a), {}, {}, {}, {}}));
}

Formula Formula::dep(std::vector<Term> terms) {
  if (terms.empty()) throw InvalidInput("dependence atom needs a term");
  return Formula(std::make_shared<const Node>(
      Node{Connective::Dep, {}, std::move(terms), {}, {}, {}}));
}

Formula Formula::neg_dep(std::vector<Term> terms) {
  if (terms.empty()) throw InvalidInput("dependence atom needs a term");
  return Formula(std::make_shared<const Node>(
      Node{Connective::NegDep, {}, std::move(terms), {}, {}, {}}));
}

Formula Formula::bottom() {
  static const Formula kBottom(std::make_shared<const Node>(
      Node{Connective::Bottom, {}, {}, {}, {}, {}}));
  return kBottom;
}

Formula Formula::conj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::And, {}, {}, {}, std::move(a), std::move(b)}));
}

Formula Formula::tensor(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::Tensor, {}, {}, {}, std::move(a), std::move(b)}));
}

Formula Formula::ivee(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::IVee, {}, {}, {}, std::move(a), std::move(b)}));
}

Formula Formula::impl(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::Impl, {}, {}, {}, std::move(a), std::move(b)}));
}

Formula Formula::limpl(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::LImpl, {}, {}, {}, std::move(a), std::move(b)}));
}

Formula Formula::forall(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::Forall, {}, {}, std::move(var), std::move(body), {}}));
}

Formula Formula::exists(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::Exists, {}, {}, std::move(var), std::move(body), {}}));
}

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) throw InvalidInput("empty conjunction");
  Formula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(parts[i], acc);
  return acc;
}

Connective Formula::kind() const { return node_->kind; }
const AtomicFormula& Formula::atomic() const { return node_->atom; }
const std::vector<Term>& Formula::dep_terms() const { return node_->terms; }
const Formula& Formula::left() const { return *node_->lhs; }
const Formula& Formula::right() const { return *node_->rhs; }
const std::string& Formula::variable() const { return node_->var; }
const Formula& Formula::body() const { return *node_->lhs; }

bool Formula::is_binary() const {
  switch (kind()) {
    case Connective::And:
    case Connective::Tensor:
    case Connective::IVee:
    case Connective::Impl:
    case Connective::LImpl:
      return true;
    default:
      return false;
  }
}

bool Formula::is_quantifier() const {
  return kind() == Connective::Forall || kind() == Connective::Exists;
}

bool Formula::is_literal() const {
  return kind() == Connective::Atom || kind() == Connective::NegAtom;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Connective::Atom:
    case Connective::NegAtom:
      return a.atomic() == b.atomic();
    case Connective::Dep:
    case Connective::NegDep:
      return a.dep_terms() == b.dep_terms();
    case Connective::Bottom:
      return true;
    case Connective::Forall:
    case Connective::Exists:
      return a.variable() == b.variable() && a.body() == b.body();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------
// SO formula nodes

struct SOFormula::Node {
  SoConnective kind;
  AtomicFormula atom;
  std::string var;
  int arity = 0;
  std::optional<SOFormula> lhs;
  std::optional<SOFormula> rhs;
};

SOFormula SOFormula::atom(AtomicFormula a) {
  return SOFormula(std::make_shared<const Node>(
      Node{SoConnective::Atom, std::move(a), {}, 0, {}, {}}));
}

SOFormula SOFormula::negation(SOFormula a) {
  return SOFormula(std::make_shared<const Node>(
      Node{SoConnective::Not, {}, {}, 0, std::move(a), {}}));
}

SOFormula SOFormula::conj(SOFormula a, SOFormula b) {
  return SOFormula(std::make_shared<const Node>(
      Node{SoConnective::And, {}, {}, 0, std::move(a), std::move(b)}));
}

SOFormula SOFormula::disj(SOFormula a, SOFormula b) {
  return SOFormula(std::make_shared<const Node>(
      Node{SoConnective::Or, {}, {}, 0, std::move(a), std::move(b)}));
}

SOFormula SOFormula::implies(SOFormula a, SOFormula b) {
  return SOFormula(std::make_shared<const Node>(
      Node{SoConnective::Implies, {}, {}, 0, std::move(a), std::move(b)}));
}

SOFormula SOFormula::forall(std::string var, SOFormula body) {
  return SOFormula(std::make_shared<const Node>(
      Node{SoConnective::Forall, {}, std::move(var), 0, std::move(body), {}}));
}

SOFormula SOFormula::exists(std::string var, SOFormula body) {
  return SOFormula(std::make_shared<const Node>(
      Node{SoConnective::Exists, {}, std::move(var), 0, std::move(body), {}}));
}

SOFormula SOFormula::forall_fn(std::string fn, int arity, SOFormula body) {
  if (arity < 1) throw InvalidInput("function variables need arity >= 1");
  return SOFormula(std::make_shared<const Node>(Node{
      SoConnective::ForallFn, {}, std::move(fn), arity, std::move(body), {}}));
}

SOFormula SOFormula::exists_fn(std::string fn, int arity, SOFormula body) {
  if (arity < 1) throw InvalidInput("function variables need arity >= 1");
  return SOFormula(std::make_shared<const Node>(Node{
      SoConnective::ExistsFn, {}, std::move(fn), arity, std::move(body), {}}));
}

SOFormula SOFormula::conj_all(const std::vector<SOFormula>& parts) {
  if (parts.empty()) throw InvalidInput("empty conjunction");
  SOFormula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(parts[i], acc);
  return acc;
}

SOFormula SOFormula::disj_all(const std::vector<SOFormula>& parts) {
  if (parts.empty()) throw InvalidInput("empty disjunction");
  SOFormula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = disj(parts[i], acc);
  return acc;
}

SoConnective SOFormula::kind() const { return node_->kind; }
const AtomicFormula& SOFormula::atomic() const { return node_->atom; }
const SOFormula& SOFormula::operand() const { return *node_->lhs; }
const SOFormula& SOFormula::left() const { return *node_->lhs; }
const SOFormula& SOFormula::right() const { return *node_->rhs; }
const std::string& SOFormula::variable() const { return node_->var; }
int SOFormula::arity() const { return node_->arity; }
const SOFormula& SOFormula::body() const { return *node_->lhs; }

bool SOFormula::is_binary() const {
  return kind() == SoConnective::And || kind() == SoConnective::Or ||
         kind() == SoConnective::Implies;
}

bool SOFormula::is_quantifier() const {
  return kind() == SoConnective::Forall || kind() == SoConnective::Exists ||
         is_fn_quantifier();
}

bool SOFormula::is_fn_quantifier() const {
  return kind() == SoConnective::ForallFn || kind() == SoConnective::ExistsFn;
}

bool operator==(const SOFormula& a, const SOFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case SoConnective::Atom:
      return a.atomic() == b.atomic();
    case SoConnective::Not:
      return a.operand() == b.operand();
    case SoConnective::Forall:
    case SoConnective::Exists:
      return a.variable() == b.variable() && a.body() == b.body();
    case SoConnective::ForallFn:
    case SoConnective::ExistsFn:
      return a.variable() == b.variable() && a.arity() == b.arity() &&
             a.body() == b.body();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_atom_vars(const AtomicFormula& a, std::set<std::string>& out) {
  for (const Term& t : a.args) collect_term_variables(t, out);
}

void free_vars_into(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::NegAtom:
      collect_atom_vars(f.atomic(), out);
      return;
    case Connective::Dep:
    case Connective::NegDep:
      for (const Term& t : f.dep_terms()) collect_term_variables(t, out);
      return;
    case Connective::Bottom:
      return;
    case Connective::Forall:
    case Connective::Exists: {
      std::set<std::string> inner;
      free_vars_into(f.body(), inner);
      inner.erase(f.variable());
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      free_vars_into(f.left(), out);
      free_vars_into(f.right(), out);
      return;
  }
}

void free_vars_into(const SOFormula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case SoConnective::Atom:
      collect_atom_vars(f.atomic(), out);
      return;
    case SoConnective::Not:
      free_vars_into(f.operand(), out);
      return;
    case SoConnective::Forall:
    case SoConnective::Exists: {
      std::set<std::string> inner;
      free_vars_into(f.body(), inner);
      inner.erase(f.variable());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case SoConnective::ForallFn:
    case SoConnective::ExistsFn:
      free_vars_into(f.body(), out);
      return;
    default:
      free_vars_into(f.left(), out);
      free_vars_into(f.right(), out);
      return;
  }
}

void term_fn_names(const Term& t, std::set<std::string>& out) {
  if (t.kind != Term::Kind::Apply) return;
  out.insert(t.name);
  for (const Term& a : t.args) term_fn_names(a, out);
}

void free_fns_into(const SOFormula& f, const Signature& sig,
                   std::set<std::string>& out) {
  switch (f.kind()) {
    case SoConnective::Atom: {
      std::set<std::string> names;
      for (const Term& t : f.atomic().args) term_fn_names(t, names);
      for (const auto& n : names) {
        if (!sig.function_arity(n)) out.insert(n);
      }
      return;
    }
    case SoConnective::Not:
      free_fns_into(f.operand(), sig, out);
      return;
    case SoConnective::Forall:
    case SoConnective::Exists:
      free_fns_into(f.body(), sig, out);
      return;
    case SoConnective::ForallFn:
    case SoConnective::ExistsFn: {
      std::set<std::string> inner;
      free_fns_into(f.body(), sig, inner);
      inner.erase(f.variable());
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      free_fns_into(f.left(), sig, out);
      free_fns_into(f.right(), sig, out);
      return;
  }
}

void all_vars_into(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::NegAtom:
      collect_atom_vars(f.atomic(), out);
      return;
    case Connective::Dep:
    case Connective::NegDep:
      for (const Term& t : f.dep_terms()) collect_term_variables(t, out);
      return;
    case Connective::Bottom:
      return;
    case Connective::Forall:
    case Connective::Exists:
      out.insert(f.variable());
      all_vars_into(f.body(), out);
      return;
    default:
      all_vars_into(f.left(), out);
      all_vars_into(f.right(), out);
      return;
  }
}

void term_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name);
  for (const Term& a : t.args) term_names(a, out);
}

void all_names_into(const SOFormula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case SoConnective::Atom:
      out.insert(f.atomic().relation);
      for (const Term& t : f.atomic().args) term_names(t, out);
      return;
    case SoConnective::Not:
      all_names_into(f.operand(), out);
      return;
    case SoConnective::Forall:
    case SoConnective::Exists:
    case SoConnective::ForallFn:
    case SoConnective::ExistsFn:
      out.insert(f.variable());
      all_names_into(f.body(), out);
      return;
    default:
      all_names_into(f.left(), out);
      all_names_into(f.right(), out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  free_vars_into(f, out);
  return out;
}

std::set<std::string> free_vars(const SOFormula& f) {
  std::set<std::string> out;
  free_vars_into(f, out);
  return out;
}

std::set<std::string> free_function_vars(const SOFormula& f,
                                         const Signature& sig) {
  std::set<std::string> out;
  free_fns_into(f, sig, out);
  return out;
}

std::set<std::string> all_variables(const Formula& f) {
  std::set<std::string> out;
  all_vars_into(f, out);
  return out;
}

std::set<std::string> all_names(const SOFormula& f) {
  std::set<std::string> out;
  all_names_into(f, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

// ---------------------------------------------------------------------------
// Fragments

namespace {

bool admits(const Formula& f, Fragment frag) {
  switch (f.kind()) {
    case Connective::Atom:
      return true;
    case Connective::NegAtom:
      return frag != Fragment::ID;
    case Connective::Dep:
      if (frag == Fragment::FO) return false;
      if (frag == Fragment::ID) return f.dep_terms().size() == 1;
      return true;
    case Connective::NegDep:
      return frag == Fragment::D || frag == Fragment::LD ||
             frag == Fragment::BID;
    case Connective::Bottom:
      return frag == Fragment::ID || frag == Fragment::BID;
    case Connective::And:
      return admits(f.left(), frag) && admits(f.right(), frag);
    case Connective::Tensor:
      return frag != Fragment::ID && admits(f.left(), frag) &&
             admits(f.right(), frag);
    case Connective::IVee:
    case Connective::Impl:
      return (frag == Fragment::ID || frag == Fragment::BID) &&
             admits(f.left(), frag) && admits(f.right(), frag);
    case Connective::LImpl:
      return (frag == Fragment::LD || frag == Fragment::BID) &&
             admits(f.left(), frag) && admits(f.right(), frag);
    case Connective::Forall:
    case Connective::Exists:
      return admits(f.body(), frag);
  }
  return false;
}

}  // namespace

bool in_fragment(const Formula& f, Fragment frag) { return admits(f, frag); }

FragmentInfo fragment_of(const Formula& f) {
  FragmentInfo info;
  for (Fragment frag : {Fragment::FO, Fragment::D, Fragment::ID, Fragment::LD,
                        Fragment::BID}) {
    if (admits(f, frag)) info.members.push_back(frag);
  }
  info.least = info.members.front();  // BID admits everything
  return info;
}

const char* fragment_name(Fragment frag) {
  switch (frag) {
    case Fragment::FO: return "FO";
    case Fragment::D: return "D";
    case Fragment::ID: return "ID";
    case Fragment::LD: return "LD";
    case Fragment::BID: return "BID";
  }
  return "?";
}

std::optional<Fragment> parse_fragment(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "fo") return Fragment::FO;
  if (lower == "d") return Fragment::D;
  if (lower == "id") return Fragment::ID;
  if (lower == "ld") return Fragment::LD;
  if (lower == "bid") return Fragment::BID;
  return std::nullopt;
}

bool is_first_order(const Formula& f) { return admits(f, Fragment::FO); }

bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  if (f.is_binary()) {
    return is_quantifier_free(f.left()) && is_quantifier_free(f.right());
  }
  return true;
}

std::vector<std::string> fresh_vars(const std::string& base, int count,
                                    const std::set<std::string>& avoid) {
  std::vector<std::string> out;
  for (int k = 0; static_cast<int>(out.size()) < count; ++k) {
    std::string name = k == 0 ? base : base + "_" + std::to_string(k);
    if (!avoid.count(name)) out.push_back(std::move(name));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classical conversions

namespace {

SOFormula nnf(const SOFormula& f, bool negate) {
  switch (f.kind()) {
    case SoConnective::Atom:
      return negate ? SOFormula::negation(f) : f;
    case SoConnective::Not:
      return nnf(f.operand(), !negate);
    case SoConnective::And:
      return negate ? SOFormula::disj(nnf(f.left(), true), nnf(f.right(), true))
                    : SOFormula::conj(nnf(f.left(), false),
                                      nnf(f.right(), false));
    case SoConnective::Or:
      return negate ? SOFormula::conj(nnf(f.left(), true), nnf(f.right(), true))
                    : SOFormula::disj(nnf(f.left(), false),
                                      nnf(f.right(), false));
    case SoConnective::Implies:
      return negate ? SOFormula::conj(nnf(f.left(), false),
                                      nnf(f.right(), true))
                    : SOFormula::disj(nnf(f.left(), true),
                                      nnf(f.right(), false));
    case SoConnective::Forall:
      return negate ? SOFormula::exists(f.variable(), nnf(f.body(), true))
                    : SOFormula::forall(f.variable(), nnf(f.body(), false));
    case SoConnective::Exists:
      return negate ? SOFormula::forall(f.variable(), nnf(f.body(), true))
                    : SOFormula::exists(f.variable(), nnf(f.body(), false));
    case SoConnective::ForallFn:
      return negate ? SOFormula::exists_fn(f.variable(), f.arity(),
                                           nnf(f.body(), true))
                    : SOFormula::forall_fn(f.variable(), f.arity(),
                                           nnf(f.body(), false));
    case SoConnective::ExistsFn:
      return negate ? SOFormula::forall_fn(f.variable(), f.arity(),
                                           nnf(f.body(), true))
                    : SOFormula::exists_fn(f.variable(), f.arity(),
                                           nnf(f.body(), false));
  }
  throw InternalError("unreachable SO connective");
}

Formula nnf_to_bid(const SOFormula& f) {
  switch (f.kind()) {
    case SoConnective::Atom:
      return Formula::atom(f.atomic());
    case SoConnective::Not:
      return Formula::neg_atom(f.operand().atomic());
    case SoConnective::And:
      return Formula::conj(nnf_to_bid(f.left()), nnf_to_bid(f.right()));
    case SoConnective::Or:
      return Formula::tensor(nnf_to_bid(f.left()), nnf_to_bid(f.right()));
    case SoConnective::Forall:
      return Formula::forall(f.variable(), nnf_to_bid(f.body()));
    case SoConnective::Exists:
      return Formula::exists(f.variable(), nnf_to_bid(f.body()));
    default:
      break;
  }
  throw InvalidInput(
      "to_nnf expects a first-order formula without function quantifiers");
}

}  // namespace

SOFormula to_nnf_so(const SOFormula& f) { return nnf(f, false); }

Formula to_nnf(const SOFormula& f) { return nnf_to_bid(to_nnf_so(f)); }

SOFormula to_classical(const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom:
      return SOFormula::atom(f.atomic());
    case Connective::NegAtom:
      return SOFormula::negation(SOFormula::atom(f.atomic()));
    case Connective::And:
      return SOFormula::conj(to_classical(f.left()), to_classical(f.right()));
    case Connective::Tensor:
      return SOFormula::disj(to_classical(f.left()), to_classical(f.right()));
    case Connective::Forall:
      return SOFormula::forall(f.variable(), to_classical(f.body()));
    case Connective::Exists:
      return SOFormula::exists(f.variable(), to_classical(f.body()));
    default:
      break;
  }
  throw InvalidInput("only first-order formulas have a classical reading");
}

namespace {

AtomicFormula rename_atom(const AtomicFormula& a, const std::string& from,
                          const Term& to) {
  AtomicFormula out{a.relation, {}};
  for (const Term& t : a.args) out.args.push_back(substitute_var(t, from, to));
  return out;
}

}  // namespace

Formula rename_free(const Formula& f, const std::string& from,
                    const std::string& to) {
  const Term by = Term::variable(to);
  switch (f.kind()) {
    case Connective::Atom:
      return Formula::atom(rename_atom(f.atomic(), from, by));
    case Connective::NegAtom:
      return Formula::neg_atom(rename_atom(f.atomic(), from, by));
    case Connective::Dep:
    case Connective::NegDep: {
      std::vector<Term> ts;
      for (const Term& t : f.dep_terms()) ts.push_back(substitute_var(t, from, by));
      return f.kind() == Connective::Dep ? Formula::dep(std::move(ts))
                                         : Formula::neg_dep(std::move(ts));
    }
    case Connective::Bottom:
      return f;
    case Connective::Forall:
    case Connective::Exists: {
      if (f.variable() == from) return f;
      Formula body = rename_free(f.body(), from, to);
      return f.kind() == Connective::Forall
                 ? Formula::forall(f.variable(), std::move(body))
                 : Formula::exists(f.variable(), std::move(body));
    }
    case Connective::And:
      return Formula::conj(rename_free(f.left(), from, to),
                           rename_free(f.right(), from, to));
    case Connective::Tensor:
      return Formula::tensor(rename_free(f.left(), from, to),
                             rename_free(f.right(), from, to));
    case Connective::IVee:
      return Formula::ivee(rename_free(f.left(), from, to),
                           rename_free(f.right(), from, to));
    case Connective::Impl:
      return Formula::impl(rename_free(f.left(), from, to),
                           rename_free(f.right(), from, to));
    case Connective::LImpl:
      return Formula::limpl(rename_free(f.left(), from, to),
                            rename_free(f.right(), from, to));
  }
  throw InternalError("unreachable connective");
}

}  // namespace tlk
