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

// Concrete syntax.
//
//   term     x | c | f(t1,...,tk)
//   atom     t1=t2 | R(t1,...,tk) | dep(t1,...,tn) | ndep(...) | bot
//   literal  ~atom
//   binary   &  binds tightest, then | (split) and || (intuitionistic),
//            then -> and -* (right associative)
//   quant    A x. phi | E x. phi          (extends as far right as possible)
//   so quant Af f:q. phi | Ef f:q. phi
//
// Second order text uses ~ freely, | for classical disjunction and -> for
// classical implication; dependence atoms, bot, || and -* are rejected there.
//
// Without a signature, symbols are inferred from use: name(args) in term
// position (an argument, or left of '=') is a function, otherwise a relation;
// bare identifiers are variables.

#ifndef TLK_PARSER_HPP
#define TLK_PARSER_HPP

#include <string>
#include <string_view>

#include "tlk/ast.hpp"

namespace tlk {

Formula parse_formula(std::string_view text, const Signature* sig = nullptr);
SOFormula parse_so(std::string_view text, const Signature* sig = nullptr);

std::string render(const Term& t);
std::string render(const AtomicFormula& a);
std::string render(const Formula& f);
std::string render(const SOFormula& f);

// Symbols used by a formula. Bound function variables are excluded.
// Throws InvalidInput if a name is used inconsistently.
Signature signature_of(const Formula& f);
Signature signature_of(const SOFormula& f);
// Union of two signatures; throws InvalidInput on conflicting declarations.
Signature merge_signatures(const Signature& a, const Signature& b);

// {"relations":{"R":2},"functions":{"f":1},"constants":["c"]}
Signature parse_signature_json(std::string_view text);
std::string signature_to_json(const Signature& sig);

}  // namespace tlk

#endif  // TLK_PARSER_HPP
