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

#include "tlk/generate.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "tlk/error.hpp"

namespace tlk {

FormulaGenerator::FormulaGenerator(Signature sig, std::uint64_t seed)
    : sig_(std::move(sig)), rng_(seed) {}

int FormulaGenerator::below(int n) {
  if (n <= 0) throw InvalidInput("below: empty range");
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng_));
}

Term FormulaGenerator::term(const std::vector<std::string>& vars, int depth) {
  std::vector<std::pair<std::string, int>> fns(sig_.functions().begin(),
                                               sig_.functions().end());
  const auto& consts = sig_.constants();
  int choices = 2 + (depth > 0 && !fns.empty() ? 1 : 0) + (consts.empty() ? 0 : 1);
  int pick = below(choices + 1);
  if (pick <= 1 || vars.empty()) {
    if (vars.empty() && !consts.empty()) {
      auto it = consts.begin();
      std::advance(it, below(static_cast<int>(consts.size())));
      return Term::constant(*it);
    }
    if (vars.empty()) throw InvalidInput("no terms available");
    return Term::variable(vars[below(static_cast<int>(vars.size()))]);
  }
  if (pick == 2 && depth > 0 && !fns.empty()) {
    const auto& [name, arity] = fns[below(static_cast<int>(fns.size()))];
    std::vector<Term> args;
    for (int i = 0; i < arity; ++i) args.push_back(term(vars, depth - 1));
    return Term::apply(name, std::move(args));
  }
  if (!consts.empty() && below(2) == 0) {
    auto it = consts.begin();
    std::advance(it, below(static_cast<int>(consts.size())));
    return Term::constant(*it);
  }
  return Term::variable(vars[below(static_cast<int>(vars.size()))]);
}

AtomicFormula FormulaGenerator::atom(const std::vector<std::string>& vars,
                                     int term_depth) {
  const auto& rels = sig_.relations();
  if (!rels.empty() && below(3) != 0) {
    auto it = rels.begin();
    std::advance(it, below(static_cast<int>(rels.size())));
    std::vector<Term> args;
    for (int i = 0; i < it->second; ++i) args.push_back(term(vars, term_depth));
    return AtomicFormula::relation_atom(it->first, std::move(args));
  }
  return AtomicFormula::equality(term(vars, term_depth), term(vars, term_depth));
}

Formula FormulaGenerator::leaf(const GenOptions& opts) {
  const Fragment frag = opts.fragment;
  std::vector<int> kinds{0, 0, 0};  // atoms dominate
  if (frag != Fragment::ID) kinds.push_back(1);
  if (frag != Fragment::FO) kinds.push_back(2);
  if (frag == Fragment::D || frag == Fragment::LD || frag == Fragment::BID)
    kinds.push_back(3);
  if (frag == Fragment::ID || frag == Fragment::BID) kinds.push_back(4);
  const int kind = kinds[below(static_cast<int>(kinds.size()))];
  switch (kind) {
    case 1:
      return Formula::neg_atom(atom(opts.vars, opts.term_depth));
    case 2:
    case 3: {
      bool negated = kind == 3;
      int n = frag == Fragment::ID ? 1 : 1 + below(3);
      std::vector<Term> ts;
      for (int i = 0; i < n; ++i) ts.push_back(term(opts.vars, 0));
      return negated ? Formula::neg_dep(ts) : Formula::dep(ts);
    }
    case 4:
      return Formula::bottom();
    default:
      return Formula::atom(atom(opts.vars, opts.term_depth));
  }
}

Formula FormulaGenerator::node(const GenOptions& opts, int depth) {
  if (depth <= 0 || below(4) == 0) return leaf(opts);
  const Fragment frag = opts.fragment;
  std::vector<int> kinds{0};  // conjunction
  if (frag != Fragment::ID) kinds.push_back(1);
  if (frag == Fragment::ID || frag == Fragment::BID) {
    kinds.push_back(2);
    kinds.push_back(3);
  }
  if (frag == Fragment::LD || frag == Fragment::BID) kinds.push_back(4);
  if (opts.quantifiers && !opts.vars.empty()) {
    kinds.push_back(5);
    kinds.push_back(6);
  }
  int k = kinds[below(static_cast<int>(kinds.size()))];
  if (k >= 5) {
    const std::string& v = opts.vars[below(static_cast<int>(opts.vars.size()))];
    Formula body = node(opts, depth - 1);
    return k == 5 ? Formula::forall(v, body) : Formula::exists(v, body);
  }
  Formula l = node(opts, depth - 1);
  Formula r = node(opts, depth - 1);
  switch (k) {
    case 1: return Formula::tensor(l, r);
    case 2: return Formula::ivee(l, r);
    case 3: return Formula::impl(l, r);
    case 4: return Formula::limpl(l, r);
    default: return Formula::conj(l, r);
  }
}

Formula FormulaGenerator::formula(const GenOptions& opts) {
  return node(opts, opts.max_depth);
}

Formula FormulaGenerator::sentence(const GenOptions& opts) {
  Formula f = formula(opts);
  for (const std::string& v : free_vars(f))
    f = below(2) == 0 ? Formula::forall(v, f) : Formula::exists(v, f);
  return f;
}

SOFormula FormulaGenerator::normal_form_sentence(int blocks, int p, int q,
                                                 int matrix_depth) {
  if (blocks < 2 || blocks % 2 != 0 || p < 1 || q < 1)
    throw InvalidInput("normal_form_sentence: bad shape");
  std::vector<std::string> xs;
  for (int i = 1; i <= q; ++i) xs.push_back("x" + std::to_string(i));
  std::vector<std::string> fns;
  std::vector<Term> apps;
  for (int b = 0; b < blocks; ++b) {
    for (int j = 0; j < p; ++j) {
      std::string name = std::string(b % 2 == 0 ? "f" : "g") + std::to_string(b + 1) +
                         "_" + std::to_string(j + 1);
      fns.push_back(name);
      std::vector<std::string> perm = xs;
      std::shuffle(perm.begin(), perm.end(), rng_);
      std::vector<Term> args;
      for (const std::string& v : perm) args.push_back(Term::variable(v));
      apps.push_back(Term::apply(name, std::move(args)));
    }
  }
  std::vector<Term> pool = apps;
  for (const std::string& v : xs) pool.push_back(Term::variable(v));
  auto pick = [&]() { return pool[below(static_cast<int>(pool.size()))]; };
  auto make_atom = [&]() {
    const auto& rels = sig_.relations();
    if (!rels.empty() && below(3) == 0) {
      auto it = rels.begin();
      std::advance(it, below(static_cast<int>(rels.size())));
      std::vector<Term> args;
      for (int i = 0; i < it->second; ++i) args.push_back(pick());
      return SOFormula::atom(AtomicFormula::relation_atom(it->first, std::move(args)));
    }
    // Favor equations that mention function applications.
    Term a = apps[below(static_cast<int>(apps.size()))];
    return SOFormula::atom(AtomicFormula::equality(a, pick()));
  };
  std::function<SOFormula(int)> build = [&](int depth) -> SOFormula {
    if (depth <= 0 || below(3) == 0) {
      SOFormula a = make_atom();
      return below(3) == 0 ? SOFormula::negation(a) : a;
    }
    SOFormula l = build(depth - 1);
    SOFormula r = build(depth - 1);
    return below(2) == 0 ? SOFormula::conj(l, r) : SOFormula::disj(l, r);
  };
  SOFormula m = build(matrix_depth);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) m = SOFormula::forall(*it, m);
  for (int k = static_cast<int>(fns.size()); k-- > 0;) {
    bool universal = (k / p) % 2 == 0;
    m = universal ? SOFormula::forall_fn(fns[k], q, m)
                  : SOFormula::exists_fn(fns[k], q, m);
  }
  return m;
}

}  // namespace tlk
