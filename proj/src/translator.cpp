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

#include "tlk/translator.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "tlk/error.hpp"
#include "tlk/parser.hpp"

namespace tlk {

std::string render_trace(const TranslationTrace& trace) {
  std::ostringstream out;
  for (const TraceStep& s : trace) {
    out << "RULE " << s.rule << " [" << s.citation << "] : " << s.before
        << " ==> " << s.after << "\n";
  }
  return out.str();
}

namespace {

// Appends whole-formula steps. The before side is always the previous
// after, so steps chain even across nested translations.
class Tracer {
 public:
  Tracer(TranslationTrace* trace, std::string initial)
      : trace_(trace), current_(std::move(initial)) {
    if (trace_ && !trace_->empty()) current_ = trace_->back().after;
  }

  bool on() const { return trace_ != nullptr; }

  void step(const char* rule, const char* citation, std::string after) {
    if (!trace_ || after == current_) return;
    trace_->push_back({rule, citation, current_, after});
    current_ = std::move(after);
  }
  void step(const char* rule, const char* citation, const Formula& f) {
    if (on()) step(rule, citation, render(f));
  }
  void step(const char* rule, const char* citation, const SOFormula& f) {
    if (on()) step(rule, citation, render(f));
  }

 private:
  TranslationTrace* trace_;
  std::string current_;
};

// ---------------------------------------------------------------------------
// Rebuilding helpers.

Formula with_children(const Formula& f, Formula l, Formula r) {
  switch (f.kind()) {
    case Connective::And: return Formula::conj(std::move(l), std::move(r));
    case Connective::Tensor: return Formula::tensor(std::move(l), std::move(r));
    case Connective::IVee: return Formula::ivee(std::move(l), std::move(r));
    case Connective::Impl: return Formula::impl(std::move(l), std::move(r));
    case Connective::LImpl: return Formula::limpl(std::move(l), std::move(r));
    default: break;
  }
  throw InternalError("with_children on a non-binary formula");
}

Formula with_body(const Formula& f, Formula body) {
  if (f.kind() == Connective::Forall)
    return Formula::forall(f.variable(), std::move(body));
  return Formula::exists(f.variable(), std::move(body));
}

// Replaces the first node (preorder) with the given identity.
std::optional<Formula> replace_node(const Formula& root, const void* target,
                                    const Formula& by) {
  if (root.id() == target) return by;
  if (root.is_binary()) {
    if (auto l = replace_node(root.left(), target, by))
      return with_children(root, *l, root.right());
    if (auto r = replace_node(root.right(), target, by))
      return with_children(root, root.left(), *r);
  } else if (root.is_quantifier()) {
    if (auto b = replace_node(root.body(), target, by)) return with_body(root, *b);
  }
  return std::nullopt;
}

Formula replace_at(const Formula& root, const void* target, const Formula& by) {
  auto r = replace_node(root, target, by);
  if (!r) throw InternalError("rewrite site vanished");
  return *r;
}

const Formula* find_first(const Formula& f,
                          const std::function<bool(const Formula&)>& pred) {
  if (pred(f)) return &f;
  if (f.is_binary()) {
    if (auto* l = find_first(f.left(), pred)) return l;
    return find_first(f.right(), pred);
  }
  if (f.is_quantifier()) return find_first(f.body(), pred);
  return nullptr;
}

Term map_vars(const Term& t, const std::map<std::string, std::string>& env) {
  switch (t.kind) {
    case Term::Kind::Variable: {
      auto it = env.find(t.name);
      return it == env.end() ? t : Term::variable(it->second);
    }
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Apply: {
      std::vector<Term> args;
      for (const Term& a : t.args) args.push_back(map_vars(a, env));
      auto it = env.find(t.name);
      return Term::apply(it == env.end() ? t.name : it->second, std::move(args));
    }
  }
  return t;
}

AtomicFormula map_atom(const AtomicFormula& a,
                       const std::function<Term(const Term&)>& fn) {
  AtomicFormula out = a;
  for (Term& t : out.args) t = fn(t);
  return out;
}

// ---------------------------------------------------------------------------
// First-order formulas to the intuitionistic fragment.

struct Stage {
  const char* rule;
  const char* citation;
  Formula f;
};

Formula fo_rename_apart(const Formula& f, std::map<std::string, std::string> env,
                        std::set<std::string>& used) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::NegAtom: {
      AtomicFormula a =
          map_atom(f.atomic(), [&](const Term& t) { return map_vars(t, env); });
      return f.kind() == Connective::Atom ? Formula::atom(a) : Formula::neg_atom(a);
    }
    case Connective::Forall:
    case Connective::Exists: {
      std::string name = f.variable();
      if (used.count(name)) name = fresh_vars(name, 1, used)[0];
      used.insert(name);
      env[f.variable()] = name;
      Formula body = fo_rename_apart(f.body(), env, used);
      return f.kind() == Connective::Forall ? Formula::forall(name, body)
                                            : Formula::exists(name, body);
    }
    default:
      if (f.is_binary())
        return with_children(f, fo_rename_apart(f.left(), env, used),
                             fo_rename_apart(f.right(), env, used));
      return f;
  }
}

struct FoQuant {
  bool universal;
  std::string var;
};

Formula fo_pull(const Formula& f, std::vector<FoQuant>& prefix) {
  if (f.is_quantifier()) {
    prefix.push_back({f.kind() == Connective::Forall, f.variable()});
    return fo_pull(f.body(), prefix);
  }
  if (f.is_binary()) {
    Formula l = fo_pull(f.left(), prefix);
    Formula r = fo_pull(f.right(), prefix);
    return with_children(f, l, r);
  }
  return f;
}

Formula fo_prenex(const Formula& f) {
  bool has_inner = false;
  const Formula* m = &f;
  while (m->is_quantifier()) m = &m->body();
  if (!is_quantifier_free(*m)) has_inner = true;
  if (!has_inner) return f;
  std::set<std::string> used = free_vars(f);
  Formula renamed = fo_rename_apart(f, {}, used);
  std::vector<FoQuant> prefix;
  Formula out = fo_pull(renamed, prefix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->universal ? Formula::forall(it->var, out)
                        : Formula::exists(it->var, out);
  return out;
}

constexpr std::size_t kMaxClauses = 1 << 16;

void clause_literals(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Connective::Tensor) {
    clause_literals(f.left(), out);
    clause_literals(f.right(), out);
  } else {
    out.push_back(f);
  }
}

Formula right_nest(const std::vector<Formula>& lits) {
  Formula acc = lits.back();
  for (std::size_t i = lits.size() - 1; i-- > 0;) acc = Formula::tensor(lits[i], acc);
  return acc;
}

std::size_t count_clauses(const Formula& f) {
  return f.kind() == Connective::And ? count_clauses(f.left()) + count_clauses(f.right())
                                     : 1;
}

// Conjunctive normal form of a quantifier free matrix. Conjunctions keep their
// association; each clause is a right-nested split disjunction.
Formula cnf(const Formula& f) {
  switch (f.kind()) {
    case Connective::And:
      return Formula::conj(cnf(f.left()), cnf(f.right()));
    case Connective::Tensor: {
      Formula a = cnf(f.left());
      Formula b = cnf(f.right());
      if (a.kind() == Connective::And) {
        Formula out = Formula::conj(cnf(Formula::tensor(a.left(), b)),
                                    cnf(Formula::tensor(a.right(), b)));
        if (count_clauses(out) > kMaxClauses)
          throw BudgetExceeded("conjunctive normal form exceeds " +
                               std::to_string(kMaxClauses) + " clauses");
        return out;
      }
      if (b.kind() == Connective::And) {
        Formula out = Formula::conj(cnf(Formula::tensor(a, b.left())),
                                    cnf(Formula::tensor(a, b.right())));
        if (count_clauses(out) > kMaxClauses)
          throw BudgetExceeded("conjunctive normal form exceeds " +
                               std::to_string(kMaxClauses) + " clauses");
        return out;
      }
      std::vector<Formula> lits;
      clause_literals(a, lits);
      clause_literals(b, lits);
      return right_nest(lits);
    }
    default:
      return f;
  }
}

Formula with_matrix(const Formula& f, const Formula& matrix) {
  if (f.is_quantifier()) return with_body(f, with_matrix(f.body(), matrix));
  return matrix;
}

const Formula& matrix_of(const Formula& f) {
  return f.is_quantifier() ? matrix_of(f.body()) : f;
}

Formula antecedent_literal(const Formula& l) {
  return l.kind() == Connective::NegAtom ? literal_to_id(l) : l;
}

// Direct version of the clause rewrite, used when no trace is wanted.
Formula clauses_to_id(const Formula& f) {
  switch (f.kind()) {
    case Connective::And:
      return Formula::conj(clauses_to_id(f.left()), clauses_to_id(f.right()));
    case Connective::Tensor:
      return Formula::impl(
          Formula::impl(antecedent_literal(f.left()), Formula::bottom()),
          clauses_to_id(f.right()));
    case Connective::NegAtom:
      return literal_to_id(f);
    default:
      return f;
  }
}

std::vector<Stage> fo_to_id_stages(const Formula& phi, bool stepwise) {
  if (!is_first_order(phi))
    throw InvalidInput("fo_to_id expects a first-order formula");
  std::vector<Stage> stages;
  Formula cur = fo_prenex(phi);
  stages.push_back({"prenex", "prenex-normal-form", cur});
  cur = with_matrix(cur, cnf(matrix_of(cur)));
  stages.push_back({"cnf", "distribute-split-over-conjunction", cur});
  if (!stepwise) {
    cur = with_matrix(cur, clauses_to_id(matrix_of(cur)));
    stages.push_back({"split-as-implication", "split-disjunction-as-implication", cur});
    return stages;
  }
  auto is_tensor = [](const Formula& f) { return f.kind() == Connective::Tensor; };
  while (const Formula* t = find_first(cur, is_tensor)) {
    Formula by = Formula::impl(Formula::impl(t->left(), Formula::bottom()), t->right());
    cur = replace_at(cur, t->id(), by);
    stages.push_back({"split-as-implication", "split-disjunction-as-implication", cur});
  }
  auto is_neg = [](const Formula& f) { return f.kind() == Connective::NegAtom; };
  while (const Formula* n = find_first(cur, is_neg)) {
    cur = replace_at(cur, n->id(), literal_to_id(*n));
    stages.push_back({"negated-atom", "negation-as-implication-to-bottom", cur});
  }
  return stages;
}

// Rewrites the sites of a team formula: maximal first-order subformulas
// through fo_to_id, dependence atoms through expansion.
void collect_id_sites(const Formula& f, bool allow_impl,
                      std::vector<const Formula*>& sites) {
  if (is_first_order(f)) {
    sites.push_back(&f);
    return;
  }
  switch (f.kind()) {
    case Connective::Dep:
      if (f.dep_terms().size() > 1) sites.push_back(&f);
      return;
    case Connective::Bottom:
      return;
    case Connective::And:
      collect_id_sites(f.left(), allow_impl, sites);
      collect_id_sites(f.right(), allow_impl, sites);
      return;
    case Connective::Impl:
      if (!allow_impl) break;
      collect_id_sites(f.left(), allow_impl, sites);
      collect_id_sites(f.right(), allow_impl, sites);
      return;
    case Connective::Forall:
    case Connective::Exists:
      collect_id_sites(f.body(), allow_impl, sites);
      return;
    default:
      break;
  }
  throw InvalidInput("cannot translate '" + render(f) +
                     "' into the intuitionistic fragment");
}

Formula sites_to_id(const Formula& phi, bool allow_impl, Tracer& tr) {
  std::vector<const Formula*> found;
  collect_id_sites(phi, allow_impl, found);
  // Copy the sites: the tree is rebuilt as we go but untouched subtrees keep
  // their identity.
  std::vector<Formula> sites;
  for (const Formula* s : found) sites.push_back(*s);
  Formula root = phi;
  for (const Formula& site : sites) {
    if (site.kind() == Connective::Dep) {
      root = replace_at(root, site.id(), expand_dep_atom(site));
      tr.step("expand-dep", "dependence-atom-expansion", root);
      continue;
    }
    const void* cur = site.id();
    for (const Stage& st : fo_to_id_stages(site, tr.on())) {
      if (st.f.id() == cur) continue;
      root = replace_at(root, cur, st.f);
      cur = st.f.id();
      tr.step(st.rule, st.citation, root);
    }
  }
  return root;
}

// ---------------------------------------------------------------------------
// Second order normal form.

SOFormula so_with_children(const SOFormula& f, SOFormula l, SOFormula r) {
  switch (f.kind()) {
    case SoConnective::And: return SOFormula::conj(std::move(l), std::move(r));
    case SoConnective::Or: return SOFormula::disj(std::move(l), std::move(r));
    case SoConnective::Implies: return SOFormula::implies(std::move(l), std::move(r));
    default: break;
  }
  throw InternalError("so_with_children on a non-binary formula");
}

SOFormula so_with_body(const SOFormula& f, SOFormula body) {
  switch (f.kind()) {
    case SoConnective::Forall: return SOFormula::forall(f.variable(), std::move(body));
    case SoConnective::Exists: return SOFormula::exists(f.variable(), std::move(body));
    case SoConnective::ForallFn:
      return SOFormula::forall_fn(f.variable(), f.arity(), std::move(body));
    case SoConnective::ExistsFn:
      return SOFormula::exists_fn(f.variable(), f.arity(), std::move(body));
    default: break;
  }
  throw InternalError("so_with_body on a non-quantifier");
}

// Applies fn to every atom of a quantifier free formula.
SOFormula map_atoms(const SOFormula& f,
                    const std::function<AtomicFormula(const AtomicFormula&)>& fn) {
  switch (f.kind()) {
    case SoConnective::Atom: return SOFormula::atom(fn(f.atomic()));
    case SoConnective::Not: return SOFormula::negation(map_atoms(f.operand(), fn));
    default: break;
  }
  if (f.is_binary())
    return so_with_children(f, map_atoms(f.left(), fn), map_atoms(f.right(), fn));
  if (f.is_quantifier()) return so_with_body(f, map_atoms(f.body(), fn));
  return f;
}

SOFormula map_terms(const SOFormula& f, const std::function<Term(const Term&)>& fn) {
  return map_atoms(f, [&](const AtomicFormula& a) { return map_atom(a, fn); });
}

void for_each_term(const SOFormula& f, const std::function<void(const Term&)>& fn) {
  switch (f.kind()) {
    case SoConnective::Atom:
      for (const Term& t : f.atomic().args) fn(t);
      return;
    case SoConnective::Not:
      for_each_term(f.operand(), fn);
      return;
    default: break;
  }
  if (f.is_binary()) {
    for_each_term(f.left(), fn);
    for_each_term(f.right(), fn);
  } else if (f.is_quantifier()) {
    for_each_term(f.body(), fn);
  }
}

Term replace_term(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  if (t.kind != Term::Kind::Apply) return t;
  std::vector<Term> args;
  for (const Term& a : t.args) args.push_back(replace_term(a, from, to));
  return Term::apply(t.name, std::move(args));
}

// Rewrites applications of one function name, innermost first.
Term rewrite_apply(const Term& t, const std::string& fn,
                   const std::function<Term(std::vector<Term>)>& by) {
  if (t.kind != Term::Kind::Apply) return t;
  std::vector<Term> args;
  for (const Term& a : t.args) args.push_back(rewrite_apply(a, fn, by));
  if (t.name == fn) return by(std::move(args));
  return Term::apply(t.name, std::move(args));
}

SOFormula rename_apart(const SOFormula& f, std::map<std::string, std::string> env,
                       std::set<std::string>& used) {
  switch (f.kind()) {
    case SoConnective::Atom:
      return SOFormula::atom(
          map_atom(f.atomic(), [&](const Term& t) { return map_vars(t, env); }));
    case SoConnective::Not:
      return SOFormula::negation(rename_apart(f.operand(), env, used));
    default: break;
  }
  if (f.is_binary())
    return so_with_children(f, rename_apart(f.left(), env, used),
                            rename_apart(f.right(), env, used));
  std::string name = f.variable();
  if (used.count(name)) name = fresh_vars(name, 1, used)[0];
  used.insert(name);
  env[f.variable()] = name;
  SOFormula body = rename_apart(f.body(), env, used);
  switch (f.kind()) {
    case SoConnective::Forall: return SOFormula::forall(name, body);
    case SoConnective::Exists: return SOFormula::exists(name, body);
    case SoConnective::ForallFn: return SOFormula::forall_fn(name, f.arity(), body);
    default: return SOFormula::exists_fn(name, f.arity(), body);
  }
}

enum class QKind { FnAll = 0, FnEx = 1, FoEx = 2, FoAll = 3 };

struct Quant {
  QKind kind;
  std::string name;
  int arity = 0;
};

QKind qkind(const SOFormula& f) {
  switch (f.kind()) {
    case SoConnective::ForallFn: return QKind::FnAll;
    case SoConnective::ExistsFn: return QKind::FnEx;
    case SoConnective::Exists: return QKind::FoEx;
    default: return QKind::FoAll;
  }
}

// Prenex form of an NNF formula with bound names apart. Prefixes of the two
// sides of a binary connective are merged by kind: function universals,
// function existentials, first-order existentials, first-order universals;
// ties go left. Each side keeps its own order.
SOFormula so_pull(const SOFormula& f, std::vector<Quant>& prefix) {
  if (f.is_quantifier()) {
    prefix.push_back({qkind(f), f.variable(), f.is_fn_quantifier() ? f.arity() : 0});
    return so_pull(f.body(), prefix);
  }
  if (!f.is_binary()) return f;
  std::vector<Quant> lp, rp;
  SOFormula l = so_pull(f.left(), lp);
  SOFormula r = so_pull(f.right(), rp);
  std::size_t i = 0, j = 0;
  while (i < lp.size() || j < rp.size()) {
    bool take_left =
        j == rp.size() || (i < lp.size() && lp[i].kind <= rp[j].kind);
    prefix.push_back(take_left ? lp[i++] : rp[j++]);
  }
  return so_with_children(f, l, r);
}

SOFormula wrap_prefix(const std::vector<Quant>& prefix, SOFormula m) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    switch (it->kind) {
      case QKind::FnAll: m = SOFormula::forall_fn(it->name, it->arity, m); break;
      case QKind::FnEx: m = SOFormula::exists_fn(it->name, it->arity, m); break;
      case QKind::FoEx: m = SOFormula::exists(it->name, m); break;
      case QKind::FoAll: m = SOFormula::forall(it->name, m); break;
    }
  }
  return m;
}

// Function prefix, first-order universal block, quantifier free matrix.
struct Skeleton {
  explicit Skeleton(SOFormula m) : matrix(std::move(m)) {}

  std::vector<Quant> fns;
  std::vector<std::string> fo_vars;
  SOFormula matrix;
  std::set<std::string> used;

  SOFormula to_so() const {
    SOFormula m = matrix;
    for (auto it = fo_vars.rbegin(); it != fo_vars.rend(); ++it)
      m = SOFormula::forall(*it, m);
    return wrap_prefix(fns, m);
  }

  bool is_fn(const std::string& name) const {
    return std::any_of(fns.begin(), fns.end(),
                       [&](const Quant& q) { return q.name == name; });
  }

  std::string fresh(const std::string& base) {
    std::string n = fresh_vars(base, 1, used)[0];
    used.insert(n);
    return n;
  }
};

Skeleton read_skeleton(const SOFormula& phi) {
  Skeleton sk(phi);
  const SOFormula* f = &phi;
  while (f->is_fn_quantifier()) {
    sk.fns.push_back({qkind(*f), f->variable(), f->arity()});
    f = &f->body();
  }
  while (f->kind() == SoConnective::Forall) {
    sk.fo_vars.push_back(f->variable());
    f = &f->body();
  }
  std::function<bool(const SOFormula&)> qf = [&](const SOFormula& g) {
    if (g.is_quantifier()) return false;
    if (g.kind() == SoConnective::Not) return qf(g.operand());
    if (g.is_binary()) return qf(g.left()) && qf(g.right());
    return true;
  };
  if (!qf(*f))
    throw InvalidInput(
        "expected function quantifiers, then universal quantifiers, then a "
        "quantifier free matrix");
  sk.matrix = *f;
  sk.used = all_names(phi);
  return sk;
}

// First non-variable argument of a function variable application, choosing
// the innermost one.
std::optional<Term> innermost_complex_arg(const Term& t, const Skeleton& sk) {
  if (t.kind != Term::Kind::Apply) return std::nullopt;
  for (const Term& a : t.args)
    if (auto inner = innermost_complex_arg(a, sk)) return inner;
  if (sk.is_fn(t.name))
    for (const Term& a : t.args)
      if (!a.is_variable()) return a;
  return std::nullopt;
}

void flatten_skeleton(Skeleton& sk) {
  for (;;) {
    std::optional<Term> target;
    for_each_term(sk.matrix, [&](const Term& t) {
      if (!target) target = innermost_complex_arg(t, sk);
    });
    if (!target) return;
    std::string z = sk.fresh("z");
    Term zt = Term::variable(z);
    SOFormula body =
        map_terms(sk.matrix, [&](const Term& t) { return replace_term(t, *target, zt); });
    sk.matrix = SOFormula::implies(
        SOFormula::atom(AtomicFormula::equality(*target, zt)), body);
    sk.fo_vars.push_back(z);
  }
}

std::vector<std::string> tuple_names(const std::vector<Term>& args) {
  std::vector<std::string> out;
  for (const Term& a : args) out.push_back(a.name);
  return out;
}

std::vector<Term> tuple_terms(const std::vector<std::string>& names) {
  std::vector<Term> out;
  for (const std::string& n : names) out.push_back(Term::variable(n));
  return out;
}

bool has_repeats(const std::vector<std::string>& v) {
  std::set<std::string> s(v.begin(), v.end());
  return s.size() != v.size();
}

bool overlaps(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const std::string& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

// Argument tuples of each function variable in order of first occurrence.
std::map<std::string, std::vector<std::vector<std::string>>> occurrence_tuples(
    const Skeleton& sk) {
  std::map<std::string, std::vector<std::vector<std::string>>> out;
  std::function<void(const Term&)> visit = [&](const Term& t) {
    if (t.kind != Term::Kind::Apply) return;
    for (const Term& a : t.args) visit(a);
    if (!sk.is_fn(t.name)) return;
    auto tup = tuple_names(t.args);
    auto& list = out[t.name];
    if (std::find(list.begin(), list.end(), tup) == list.end()) list.push_back(tup);
  };
  for_each_term(sk.matrix, visit);
  return out;
}

// Renames one argument tuple of fn to fresh variables z with tuple=z as
// antecedent.
std::vector<std::string> reflatten(Skeleton& sk, const std::string& fn,
                                   const std::vector<std::string>& tuple) {
  std::vector<std::string> zs;
  std::vector<SOFormula> eqs;
  for (const std::string& v : tuple) {
    zs.push_back(sk.fresh("z"));
    eqs.push_back(SOFormula::atom(
        AtomicFormula::equality(Term::variable(v), Term::variable(zs.back()))));
  }
  SOFormula body = map_terms(sk.matrix, [&](const Term& t) {
    return rewrite_apply(t, fn, [&](std::vector<Term> args) {
      if (tuple_names(args) == tuple) return Term::apply(fn, tuple_terms(zs));
      return Term::apply(fn, std::move(args));
    });
  });
  sk.matrix = SOFormula::implies(SOFormula::conj_all(eqs), body);
  for (const std::string& z : zs) sk.fo_vars.push_back(z);
  return zs;
}

void unify_skeleton(Skeleton& sk, std::map<std::string, std::vector<std::string>>& tuple) {
  auto occ = occurrence_tuples(sk);
  std::vector<SOFormula> links;
  std::vector<Quant> copies;
  for (const Quant& q : std::vector<Quant>(sk.fns)) {
    auto it = occ.find(q.name);
    if (it == occ.end()) continue;
    auto tuples = it->second;
    std::vector<std::string> canon = tuples[0];
    if (tuples.size() > 1 && has_repeats(canon)) canon = reflatten(sk, q.name, canon);
    tuple[q.name] = canon;
    for (std::size_t k = 1; k < tuples.size(); ++k) {
      std::vector<std::string> other = tuples[k];
      if (overlaps(other, canon)) other = reflatten(sk, q.name, other);
      std::string copy = sk.fresh(q.name);
      sk.matrix = map_terms(sk.matrix, [&](const Term& t) {
        return rewrite_apply(t, q.name, [&](std::vector<Term> args) {
          if (tuple_names(args) == other) return Term::apply(copy, std::move(args));
          return Term::apply(q.name, std::move(args));
        });
      });
      std::vector<SOFormula> eqs;
      for (std::size_t i = 0; i < canon.size(); ++i)
        eqs.push_back(SOFormula::atom(AtomicFormula::equality(
            Term::variable(canon[i]), Term::variable(other[i]))));
      links.push_back(SOFormula::implies(
          SOFormula::conj_all(eqs),
          SOFormula::atom(AtomicFormula::equality(Term::apply(q.name, tuple_terms(canon)),
                                                  Term::apply(copy, tuple_terms(other))))));
      copies.push_back({QKind::FnEx, copy, q.arity});
      tuple[copy] = other;
    }
  }
  if (links.empty()) return;
  links.insert(links.begin(), sk.matrix);
  sk.matrix = SOFormula::conj_all(links);
  // Copies go at the end of the function prefix, where every original
  // function variable is in scope.
  for (Quant& c : copies) sk.fns.push_back(std::move(c));
}

NiceNormalForm build_nf(const Skeleton& sk,
                        std::map<std::string, std::vector<std::string>> tuple,
                        std::vector<FnBlock> blocks) {
  NiceNormalForm nf(sk.matrix);
  nf.blocks = std::move(blocks);
  for (const Quant& q : sk.fns) nf.arity[q.name] = q.arity;
  nf.fo_vars = sk.fo_vars;
  nf.tuple = std::move(tuple);
  return nf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points.

Formula expand_dep_atom(const Formula& dep) {
  if (dep.kind() != Connective::Dep)
    throw InvalidInput("expand_dep_atom expects a dependence atom");
  const auto& ts = dep.dep_terms();
  if (ts.size() == 1) return dep;
  std::vector<Formula> parts;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) parts.push_back(Formula::dep({ts[i]}));
  return Formula::impl(Formula::conj_all(parts), Formula::dep({ts.back()}));
}

Formula literal_to_id(const Formula& literal) {
  switch (literal.kind()) {
    case Connective::NegAtom:
      return Formula::impl(Formula::atom(literal.atomic()), Formula::bottom());
    case Connective::NegDep:
      return Formula::impl(Formula::dep(literal.dep_terms()), Formula::bottom());
    default:
      break;
  }
  throw InvalidInput("literal_to_id expects a negated atom");
}

Formula fo_to_id(const Formula& phi, TranslationTrace* trace) {
  Tracer tr(trace, render(phi));
  Formula out = phi;
  for (const Stage& st : fo_to_id_stages(phi, tr.on())) {
    out = st.f;
    tr.step(st.rule, st.citation, out);
  }
  return out;
}

Formula split_to_implication(const Formula& phi) {
  if (!is_first_order(phi))
    throw InvalidInput("split_to_implication expects a first-order formula");
  std::function<Formula(const Formula&)> go = [&](const Formula& f) -> Formula {
    if (f.kind() == Connective::Tensor)
      return Formula::impl(Formula::impl(go(f.left()), Formula::bottom()), go(f.right()));
    if (f.is_binary()) return with_children(f, go(f.left()), go(f.right()));
    if (f.is_quantifier()) return with_body(f, go(f.body()));
    return f;
  };
  return go(phi);
}

int NiceNormalForm::block_length() const {
  std::size_t p = 0;
  for (const FnBlock& b : blocks) p = std::max(p, b.fns.size());
  return static_cast<int>(p);
}

int NiceNormalForm::uniform_arity() const {
  int q = -1;
  for (const auto& [name, a] : arity) {
    if (q == -1) q = a;
    else if (q != a) return -1;
  }
  return q;
}

SOFormula NiceNormalForm::to_so() const {
  SOFormula m = matrix;
  for (auto it = fo_vars.rbegin(); it != fo_vars.rend(); ++it)
    m = SOFormula::forall(*it, m);
  for (auto b = blocks.rbegin(); b != blocks.rend(); ++b)
    for (auto f = b->fns.rbegin(); f != b->fns.rend(); ++f)
      m = b->universal ? SOFormula::forall_fn(*f, arity.at(*f), m)
                       : SOFormula::exists_fn(*f, arity.at(*f), m);
  return m;
}

SOFormula flatten_fn_args(const SOFormula& phi) {
  Skeleton sk = read_skeleton(phi);
  flatten_skeleton(sk);
  return sk.to_so();
}

SOFormula unify_fn_occurrences(const SOFormula& phi) {
  Skeleton sk = read_skeleton(phi);
  std::map<std::string, std::vector<std::string>> tuple;
  unify_skeleton(sk, tuple);
  return sk.to_so();
}

NiceNormalForm so_nice_normal_form(const SOFormula& phi, TranslationTrace* trace,
                                   const NormalFormOptions& opts) {
  if (!free_vars(phi).empty())
    throw InvalidInput("normal form needs a sentence; free variables: " +
                       render(phi));
  Tracer tr(trace, render(phi));

  SOFormula cur = to_nnf_so(phi);
  tr.step("nnf", "negation-normal-form", cur);

  Signature sig = signature_of(phi);
  std::set<std::string> used;
  for (const auto& [r, a] : sig.relations()) used.insert(r);
  for (const auto& [f, a] : sig.functions()) used.insert(f);
  for (const auto& c : sig.constants()) used.insert(c);
  cur = rename_apart(cur, {}, used);
  tr.step("rename-apart", "bound-variable-renaming", cur);

  std::vector<Quant> prefix;
  SOFormula matrix = so_pull(cur, prefix);
  tr.step("prenex", "prenex-normal-form", wrap_prefix(prefix, matrix));

  // Skolemize first-order existentials and move first-order universals
  // inward past function quantifiers, raising existential arities.
  Skeleton sk(matrix);
  sk.used = used;
  for (const std::string& n : all_names(cur)) sk.used.insert(n);
  std::vector<std::string> pending;
  std::string dummy;
  for (const Quant& q : prefix) {
    switch (q.kind) {
      case QKind::FoAll:
        pending.push_back(q.name);
        break;
      case QKind::FoEx: {
        std::string fn = sk.fresh("s_" + q.name);
        std::vector<std::string> args = pending;
        if (args.empty()) {
          // A constant becomes a unary function of a fresh universal that
          // occurs nowhere else.
          if (dummy.empty()) dummy = sk.fresh("z");
          args.push_back(dummy);
        }
        Term app = Term::apply(fn, tuple_terms(args));
        sk.matrix = map_terms(sk.matrix, [&](const Term& t) {
          return substitute_var(t, q.name, app);
        });
        sk.fns.push_back({QKind::FnEx, fn, static_cast<int>(args.size())});
        break;
      }
      case QKind::FnEx: {
        if (!pending.empty()) {
          sk.matrix = map_terms(sk.matrix, [&](const Term& t) {
            return rewrite_apply(t, q.name, [&](std::vector<Term> args) {
              std::vector<Term> all = tuple_terms(pending);
              all.insert(all.end(), args.begin(), args.end());
              return Term::apply(q.name, std::move(all));
            });
          });
        }
        sk.fns.push_back({QKind::FnEx, q.name, q.arity + static_cast<int>(pending.size())});
        break;
      }
      case QKind::FnAll:
        sk.fns.push_back(q);
        break;
    }
  }
  sk.fo_vars = pending;
  if (!dummy.empty()) sk.fo_vars.push_back(dummy);
  tr.step("skolemize", "skolem-functions-and-arity-raising", sk.to_so());

  flatten_skeleton(sk);
  sk.matrix = to_nnf_so(sk.matrix);
  tr.step("flatten-fn-args", "function-argument-flattening", sk.to_so());

  std::map<std::string, std::vector<std::string>> tuple;
  unify_skeleton(sk, tuple);
  sk.matrix = to_nnf_so(sk.matrix);
  tr.step("unify-fn-occurrences", "function-occurrence-unification", sk.to_so());

  if (sk.fo_vars.empty()) sk.fo_vars.push_back(sk.fresh("x"));
  const std::string first_var = sk.fo_vars.front();

  int q = 1;
  for (const Quant& f : sk.fns) q = std::max(q, f.arity);
  for (Quant& f : sk.fns) {
    int target = opts.pad ? q : f.arity;
    auto it = tuple.find(f.name);
    if (it == tuple.end()) {
      // Not applied anywhere.
      tuple[f.name] = std::vector<std::string>(target, first_var);
      f.arity = target;
      continue;
    }
    if (f.arity == target) continue;
    std::vector<std::string> padded = it->second;
    while (static_cast<int>(padded.size()) < target) padded.push_back(padded.front());
    sk.matrix = map_terms(sk.matrix, [&](const Term& t) {
      return rewrite_apply(t, f.name, [&](std::vector<Term>) {
        return Term::apply(f.name, tuple_terms(padded));
      });
    });
    it->second = padded;
    f.arity = target;
  }

  std::vector<FnBlock> blocks;
  for (const Quant& f : sk.fns) {
    bool universal = f.kind == QKind::FnAll;
    if (blocks.empty() || blocks.back().universal != universal)
      blocks.push_back({universal, {}});
    blocks.back().fns.push_back(f.name);
  }
  if (opts.pad) {
    if (blocks.empty() || !blocks.front().universal)
      blocks.insert(blocks.begin(), FnBlock{true, {}});
    if (blocks.back().universal) blocks.push_back({false, {}});
    std::size_t p = 1;
    for (const FnBlock& b : blocks) p = std::max(p, b.fns.size());
    std::vector<Quant> fns;
    for (FnBlock& b : blocks) {
      while (b.fns.size() < p) {
        std::string d = sk.fresh("d");
        b.fns.push_back(d);
        tuple[d] = std::vector<std::string>(q, first_var);
      }
      for (const std::string& n : b.fns)
        fns.push_back({b.universal ? QKind::FnAll : QKind::FnEx, n, q});
    }
    sk.fns = fns;
  }
  sk.matrix = to_nnf_so(sk.matrix);
  NiceNormalForm nf = build_nf(sk, std::move(tuple), std::move(blocks));
  tr.step("pad", "dummy-quantifier-padding", nf.to_so());
  return nf;
}

Formula replace_fns_with_vars(const SOFormula& psi,
                              const std::map<std::string, std::string>& fn_to_var) {
  std::map<std::string, std::vector<Term>> seen;
  std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
    if (t.kind != Term::Kind::Apply) return t;
    auto it = fn_to_var.find(t.name);
    if (it == fn_to_var.end()) {
      std::vector<Term> args;
      for (const Term& a : t.args) args.push_back(go(a));
      return Term::apply(t.name, std::move(args));
    }
    auto [pos, fresh] = seen.emplace(t.name, t.args);
    if (!fresh && pos->second != t.args)
      throw InvalidInput("function variable " + t.name +
                         " is applied to different argument tuples");
    return Term::variable(it->second);
  };
  return to_nnf(map_terms(psi, go));
}

Formula sigma11_to_d(const SOFormula& phi, TranslationTrace* trace) {
  NormalFormOptions opts;
  opts.pad = false;
  NiceNormalForm nf = so_nice_normal_form(phi, trace, opts);
  for (const FnBlock& b : nf.blocks)
    if (b.universal)
      throw InvalidInput("sigma11_to_d: prefix not purely existential");
  Tracer tr(trace, render(nf.to_so()));

  std::set<std::string> avoid = all_names(nf.to_so());
  std::map<std::string, std::string> to_var;
  std::vector<std::string> ys;
  std::vector<Formula> parts;
  for (const FnBlock& b : nf.blocks) {
    for (const std::string& f : b.fns) {
      std::string y = fresh_vars("y", 1, avoid)[0];
      avoid.insert(y);
      to_var[f] = y;
      ys.push_back(y);
      std::vector<Term> terms = tuple_terms(nf.tuple.at(f));
      terms.push_back(Term::variable(y));
      parts.push_back(Formula::dep(std::move(terms)));
    }
  }
  parts.push_back(replace_fns_with_vars(nf.matrix, to_var));
  Formula out = Formula::conj_all(parts);
  for (auto it = ys.rbegin(); it != ys.rend(); ++it) out = Formula::exists(*it, out);
  for (auto it = nf.fo_vars.rbegin(); it != nf.fo_vars.rend(); ++it)
    out = Formula::forall(*it, out);
  tr.step("functions-as-dependence", "function-as-dependence-atom", out);
  return out;
}

Formula d_sentence_to_id(const Formula& phi, TranslationTrace* trace) {
  if (!is_sentence(phi)) throw InvalidInput("d_sentence_to_id expects a sentence");
  if (in_fragment(phi, Fragment::ID)) return phi;
  if (!in_fragment(phi, Fragment::D))
    throw InvalidInput("d_sentence_to_id expects a dependence logic sentence");
  Tracer tr(trace, render(phi));
  return sites_to_id(phi, false, tr);
}

Formula pi11_to_id(const SOFormula& psi, TranslationTrace* trace) {
  std::function<bool(const SOFormula&)> has_fn_exists = [&](const SOFormula& f) {
    if (f.kind() == SoConnective::ExistsFn) return true;
    if (f.kind() == SoConnective::Not) return has_fn_exists(f.operand());
    if (f.is_binary()) return has_fn_exists(f.left()) || has_fn_exists(f.right());
    if (f.is_quantifier()) return has_fn_exists(f.body());
    return false;
  };
  if (has_fn_exists(to_nnf_so(psi)))
    throw InvalidInput("pi11_to_id: prefix not purely universal");
  Tracer tr(trace, render(psi));
  SOFormula neg = to_nnf_so(SOFormula::negation(psi));
  tr.step("negate", "classical-negation", neg);
  Formula d = sigma11_to_d(neg, trace);
  Formula id = d_sentence_to_id(d, trace);
  Formula out = Formula::impl(id, Formula::bottom());
  Tracer tail(trace, render(id));
  tail.step("negation-as-implication", "negation-as-implication-to-bottom", out);
  return out;
}

Formula so_to_bid(const SOFormula& phi, TranslationTrace* trace) {
  return so_to_bid(so_nice_normal_form(phi, trace), trace);
}

Formula so_to_bid(const NiceNormalForm& nf, TranslationTrace* trace) {
  const int depth = nf.depth();
  const int p = nf.block_length();
  if (depth < 2 || depth % 2 != 0 || !nf.blocks.front().universal)
    throw InvalidInput("so_to_bid needs an even number of blocks starting universally");
  if (nf.uniform_arity() < 1)
    throw InvalidInput("so_to_bid needs a uniform function arity");
  for (int i = 0; i < depth; ++i) {
    if (static_cast<int>(nf.blocks[i].fns.size()) != p)
      throw InvalidInput("so_to_bid needs blocks of equal length");
    if (nf.blocks[i].universal != (i % 2 == 0))
      throw InvalidInput("so_to_bid needs alternating blocks");
  }
  SOFormula whole = nf.to_so();
  Tracer tr(trace, render(whole));

  std::set<std::string> avoid = all_names(whole);
  std::vector<std::vector<std::string>> u(depth);
  std::map<std::string, std::string> to_var;
  for (int i = 0; i < depth; ++i) {
    for (int j = 0; j < p; ++j) {
      std::string name = fresh_vars("u_" + std::to_string(i + 1) + "_" +
                                        std::to_string(j + 1), 1, avoid)[0];
      avoid.insert(name);
      u[i].push_back(name);
      to_var[nf.blocks[i].fns[j]] = name;
    }
  }
  auto theta = [&](int i) {
    std::vector<Formula> deps;
    for (int j = 0; j < p; ++j) {
      std::vector<Term> terms = tuple_terms(nf.tuple.at(nf.blocks[i].fns[j]));
      terms.push_back(Term::variable(u[i][j]));
      deps.push_back(Formula::dep(std::move(terms)));
    }
    return Formula::conj_all(deps);
  };
  auto exists_block = [&](int i, Formula body) {
    for (int j = p; j-- > 0;) body = Formula::exists(u[i][j], body);
    return body;
  };

  Formula delta = exists_block(depth - 1, Formula::conj(theta(depth - 1),
                                                        replace_fns_with_vars(nf.matrix, to_var)));
  for (int i = depth - 2; i >= 0; --i) {
    if (i % 2 == 0) delta = Formula::impl(theta(i), delta);
    else delta = exists_block(i, Formula::conj(theta(i), delta));
  }
  for (auto it = nf.fo_vars.rbegin(); it != nf.fo_vars.rend(); ++it)
    delta = Formula::forall(*it, delta);
  for (int i = depth - 2; i >= 0; i -= 2)
    for (int j = p; j-- > 0;) delta = Formula::forall(u[i][j], delta);
  tr.step("team-sentence", "theta-delta-construction", delta);
  return delta;
}

Formula bid_sentence_to_id(const Formula& phi_star, TranslationTrace* trace) {
  Tracer tr(trace, render(phi_star));
  return sites_to_id(phi_star, true, tr);
}

Formula so_to_id(const SOFormula& phi, TranslationTrace* trace) {
  return bid_sentence_to_id(so_to_bid(phi, trace), trace);
}

Formula eliminate_ivee(const Formula& ivee) {
  if (ivee.kind() != Connective::IVee)
    throw InvalidInput("eliminate_ivee expects an intuitionistic disjunction");
  const Formula& phi = ivee.left();
  const Formula& psi = ivee.right();
  std::set<std::string> avoid = all_variables(phi);
  for (const std::string& v : all_variables(psi)) avoid.insert(v);
  auto take = [&](const char* base) {
    std::string n = fresh_vars(base, 1, avoid)[0];
    avoid.insert(n);
    return Term::variable(n);
  };
  Term x = take("x"), y = take("y"), w = take("w"), v = take("u");
  auto eq = [](const Term& a, const Term& b) {
    return Formula::atom(AtomicFormula::equality(a, b));
  };
  auto neg = [](Formula f) { return Formula::impl(std::move(f), Formula::bottom()); };

  Formula singleton = Formula::forall(x.name, Formula::forall(y.name, eq(x, y)));
  Formula theta1 = Formula::impl(singleton, Formula::impl(neg(phi), psi));
  Formula two = Formula::forall(x.name, Formula::exists(y.name, neg(eq(x, y))));
  Formula pick = Formula::exists(
      w.name, Formula::exists(
                  v.name, Formula::conj_all({Formula::dep({w}), Formula::dep({v}),
                                             Formula::impl(eq(w, v), phi),
                                             Formula::impl(neg(eq(w, v)), psi)})));
  Formula theta2 = Formula::impl(two, pick);
  return Formula::conj(theta1, theta2);
}

Formula eliminate_all_ivee(const Formula& phi, TranslationTrace* trace) {
  Tracer tr(trace, render(phi));
  Formula cur = phi;
  // Innermost first: an intuitionistic disjunction without one below it.
  std::function<bool(const Formula&)> contains = [&](const Formula& f) {
    if (f.kind() == Connective::IVee) return true;
    if (f.is_binary()) return contains(f.left()) || contains(f.right());
    if (f.is_quantifier()) return contains(f.body());
    return false;
  };
  auto innermost = [&](const Formula& f) {
    return f.kind() == Connective::IVee && !contains(f.left()) && !contains(f.right());
  };
  while (const Formula* site = find_first(cur, innermost)) {
    cur = replace_at(cur, site->id(), eliminate_ivee(*site));
    tr.step("eliminate-ivee", "intuitionistic-disjunction-elimination", cur);
  }
  return cur;
}

Formula impl_to_limpl(const Formula& phi) {
  if (phi.kind() == Connective::Impl)
    return Formula::limpl(impl_to_limpl(phi.left()), impl_to_limpl(phi.right()));
  if (phi.is_binary())
    return with_children(phi, impl_to_limpl(phi.left()), impl_to_limpl(phi.right()));
  if (phi.is_quantifier()) return with_body(phi, impl_to_limpl(phi.body()));
  return phi;
}

Formula so_to_ld(const SOFormula& phi, TranslationTrace* trace) {
  NiceNormalForm nf = so_nice_normal_form(phi, trace);
  if (nf.depth() != 2)
    throw InvalidInput(
        "so_to_ld needs a prefix with one universal and one existential block");
  Formula star = so_to_bid(nf, trace);
  Formula out = impl_to_limpl(star);
  Tracer tr(trace, render(star));
  tr.step("linear-implication", "implication-as-linear-at-empty-team", out);
  return out;
}

}  // namespace tlk
