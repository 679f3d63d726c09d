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

#include <set>
#include <string>

#include "doctest.h"
#include "tlk/ast.hpp"
#include "tlk/error.hpp"
#include "tlk/generate.hpp"
#include "tlk/parser.hpp"

using namespace tlk;

TEST_SUITE("formula_parser") {

TEST_CASE("precedence and associativity") {
  CHECK(render(parse_formula("P(x) & Q(x) | R(x)")) == "((P(x) & Q(x)) | R(x))");
  CHECK(render(parse_formula("P(x) -> Q(x) -> R(x)")) == "(P(x) -> (Q(x) -> R(x)))");
  CHECK(render(parse_formula("P(x) || Q(x) -* R(x)")) == "((P(x) || Q(x)) -* R(x))");
  CHECK(render(parse_formula("A x. P(x) & Q(x)")) == "A x. (P(x) & Q(x))");
}

TEST_CASE("atoms") {
  Formula d = parse_formula("dep(x,f(y),c)");
  REQUIRE(d.kind() == Connective::Dep);
  CHECK(d.dep_terms().size() == 3);
  CHECK(parse_formula("ndep(x,y)").kind() == Connective::NegDep);
  CHECK(parse_formula("bot").kind() == Connective::Bottom);
  CHECK(parse_formula("~(x=y)").kind() == Connective::NegAtom);
  CHECK(parse_formula("~R(x,y)").kind() == Connective::NegAtom);
}

TEST_CASE("symbols inferred from use") {
  Signature s = signature_of(parse_formula("A x. (R(f(x),c) & g(x)=x)"));
  CHECK_FALSE(s.has_constant("c"));  // bare names are variables
  CHECK(s.relation_arity("R") == 2);
  CHECK(s.function_arity("f") == 1);
  CHECK(s.function_arity("g") == 1);
  CHECK(free_vars(parse_formula("A x. R(x,c)")) == std::set<std::string>{"c"});
  Signature with_c = parse_signature_json(R"({"relations":{"R":2},"constants":["c"]})");
  CHECK(free_vars(parse_formula("A x. R(x,c)", &with_c)).empty());
}

TEST_CASE("explicit signature is enforced") {
  Signature s = parse_signature_json(R"({"relations":{"P":1}})");
  CHECK_NOTHROW(parse_formula("A x. P(x)", &s));
  CHECK_THROWS(parse_formula("A x. P(x,x)", &s));
  CHECK_THROWS(parse_formula("A x. Q(x)", &s));
}

TEST_CASE("errors carry a span") {
  try {
    parse_formula("A x. (P(x) & )");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.span().start >= 12);
    CHECK(e.span().start <= 14);
  }
  CHECK_THROWS_AS(parse_formula("P(x"), ParseError);
  CHECK_THROWS_AS(parse_formula("A . P(x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("P(x) # Q(x)"), ParseError);
}

TEST_CASE("second order syntax") {
  SOFormula s = parse_so("Af f:1. Ef g:1. A x. f(x)=g(x)");
  CHECK(s.kind() == SoConnective::ForallFn);
  CHECK(s.arity() == 1);
  CHECK(render(s) == "Af f:1. Ef g:1. A x. f(x)=g(x)");
  CHECK_THROWS_AS(parse_so("Ef f:1. dep(x)"), ParseError);
  CHECK_THROWS_AS(parse_so("Ef f:1. (bot)"), ParseError);
  CHECK_THROWS_AS(parse_so("A x. P(x) || P(x)"), ParseError);
  // classical implication and negation of compound formulas
  CHECK(render(parse_so("~(P(x) -> Q(x))")) == "~(P(x) -> Q(x))");
  // bound function variables are not part of the signature
  Signature sig = signature_of(parse_so("Ef f:1. A x. (P(f(x)) & h(x)=x)"));
  CHECK_FALSE(sig.function_arity("f").has_value());
  CHECK(sig.function_arity("h") == 1);
}

TEST_CASE("signature json") {
  Signature s = parse_signature_json(
      R"({"relations":{"R":2},"functions":{"f":1},"constants":["c"]})");
  CHECK(parse_signature_json(signature_to_json(s)) == s);
  CHECK_THROWS(parse_signature_json(R"({"relations":{"R":-1}})"));
  CHECK_THROWS(parse_signature_json("[1,2]"));
}

TEST_CASE("round trip on generated formulas") {
  Signature sig = parse_signature_json(
      R"({"relations":{"P":1,"R":2},"functions":{"f":1},"constants":["c"]})");
  FormulaGenerator gen(sig, 7);
  for (Fragment fr : {Fragment::FO, Fragment::D, Fragment::ID, Fragment::LD, Fragment::BID}) {
    GenOptions o;
    o.fragment = fr;
    for (int i = 0; i < 60; ++i) {
      Formula f = gen.formula(o);
      Formula back = parse_formula(render(f), &sig);
      CHECK_MESSAGE(back == f, render(f));
    }
  }
}

}  // TEST_SUITE
