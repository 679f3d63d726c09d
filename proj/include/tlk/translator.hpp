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

// Formula to formula translations between second order logic and the team
// logics. Every translation can record a trace of whole-formula rewrite
// steps; consecutive steps chain (after of one is before of the next).

#ifndef TLK_TRANSLATOR_HPP
#define TLK_TRANSLATOR_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlk/ast.hpp"

namespace tlk {

struct TraceStep {
  std::string rule;
  std::string citation;  // name of the law the step applies
  std::string before;
  std::string after;
};

using TranslationTrace = std::vector<TraceStep>;

// One line per step: RULE <name> [<citation>] : <before> ==> <after>
std::string render_trace(const TranslationTrace& trace);

// dep(t1..tn) to (dep(t1) & ... & dep(t(n-1))) -> dep(tn), conjunction
// associated to the right. Constancy atoms are returned unchanged.
Formula expand_dep_atom(const Formula& dep);

// ~a to a -> bot and ndep(..) to dep(..) -> bot.
Formula literal_to_id(const Formula& literal);

// First-order formula to the intuitionistic fragment: prenex, conjunctive
// normal form, then each clause l1 | rest becomes (l1' -> bot) -> rest'
// from the outside in, and finally each negated atom ~a becomes a -> bot.
Formula fo_to_id(const Formula& phi, TranslationTrace* trace = nullptr);

// Rewrite every split disjunction of a first-order formula, keeping the
// clause layout of phi. Exposed for the law suites.
Formula split_to_implication(const Formula& phi);

// Existential second order sentence to dependence logic:
//   A x1..xm. E y1..yk. (dep(x^1,y1) & ... & dep(x^k,yk) & psi')
Formula sigma11_to_d(const SOFormula& phi, TranslationTrace* trace = nullptr);

// Dependence logic sentence of the above shape to the intuitionistic
// fragment: dependence atoms expanded, the first-order matrix through
// fo_to_id. Sentences already in the intuitionistic fragment pass unchanged.
Formula d_sentence_to_id(const Formula& phi, TranslationTrace* trace = nullptr);

// Universal second order sentence: translate the negation and append -> bot.
Formula pi11_to_id(const SOFormula& psi, TranslationTrace* trace = nullptr);

// Nested and non-variable arguments of function variables become fresh
// universally quantified variables: phi(f(t)) to A z. (t=z -> phi(f(z))).
SOFormula flatten_fn_args(const SOFormula& phi);

// Gives every function variable a single argument tuple by introducing
// linked copies g with (x=y -> f(x)=g(y)).
SOFormula unify_fn_occurrences(const SOFormula& phi);

struct FnBlock {
  bool universal = true;
  std::vector<std::string> fns;
};

struct NiceNormalForm {
  explicit NiceNormalForm(SOFormula m) : matrix(std::move(m)) {}

  std::vector<FnBlock> blocks;             // alternating, first universal
  std::map<std::string, int> arity;        // every function variable
  std::vector<std::string> fo_vars;        // universal block A x1..xm
  SOFormula matrix;                        // quantifier free
  std::map<std::string, std::vector<std::string>> tuple;  // argument tuple

  int depth() const { return static_cast<int>(blocks.size()); }
  int block_length() const;  // p
  int uniform_arity() const; // q, or -1 when arities differ
  SOFormula to_so() const;
};

struct NormalFormOptions {
  // Uniform arity, uniform block length, even depth starting universally.
  bool pad = true;
};

NiceNormalForm so_nice_normal_form(const SOFormula& phi,
                                   TranslationTrace* trace = nullptr,
                                   const NormalFormOptions& opts = {});

// Replaces every application of a mapped function variable by its variable.
// All applications of one function variable must share their arguments.
Formula replace_fns_with_vars(const SOFormula& psi,
                              const std::map<std::string, std::string>& fn_to_var);

// The team sentence phi* for phi, built from its nice normal form:
//   delta_2n = E u_2n. (Theta_2n & psi')
//   delta_i  = Theta_i -> delta_i+1           (i odd)
//   delta_i  = E u_i. (Theta_i & delta_i+1)    (i even)
//   phi*     = A u_1. A u_3. ... A x. delta_1
// where Theta_i conjoins dep(x^{i,j}, u_i_j) over the block.
Formula so_to_bid(const SOFormula& phi, TranslationTrace* trace = nullptr);
Formula so_to_bid(const NiceNormalForm& nf, TranslationTrace* trace = nullptr);

// so_to_bid followed by dependence-atom expansion and fo_to_id on psi'.
Formula so_to_id(const SOFormula& phi, TranslationTrace* trace = nullptr);
Formula bid_sentence_to_id(const Formula& phi_star, TranslationTrace* trace = nullptr);

// phi ⊻ psi to theta1 & theta2 with fresh x, y, w, u.
Formula eliminate_ivee(const Formula& ivee);
// Eliminates every ⊻, innermost first.
Formula eliminate_all_ivee(const Formula& phi, TranslationTrace* trace = nullptr);

// For prefixes with one universal and one existential block: phi* with every
// -> replaced by -*. The result is meant to be evaluated at the empty team.
Formula so_to_ld(const SOFormula& phi, TranslationTrace* trace = nullptr);

// Replaces every intuitionistic implication by a linear one.
Formula impl_to_limpl(const Formula& phi);

}  // namespace tlk

#endif  // TLK_TRANSLATOR_HPP
