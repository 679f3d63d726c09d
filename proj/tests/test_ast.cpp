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
#include "tlk/parser.hpp"

using namespace tlk;

namespace {
Formula P(const char* s) { return parse_formula(s); }
}  // namespace

TEST_SUITE("logic_ast") {

TEST_CASE("structural equality ignores sharing") {
  Formula a = P("A x. (P(x) & dep(x))");
  Formula b = P("A x. (P(x) & dep(x))");
  CHECK(a == b);
  CHECK(a.id() != b.id());
  CHECK_FALSE(a == P("A x. (P(x) & dep(y))"));
}

TEST_CASE("free and bound variables") {
  Formula f = P("(E x. R(x,y)) & dep(z,x)");
  CHECK(free_vars(f) == std::set<std::string>{"x", "y", "z"});
  CHECK(free_vars(P("E x. (R(x,y) & dep(z,x))")) == std::set<std::string>{"y", "z"});
  CHECK(all_variables(f) == std::set<std::string>{"x", "y", "z"});
  CHECK(is_sentence(P("A x. E y. dep(x,y)")));
  CHECK_FALSE(is_sentence(f));
}

TEST_CASE("fragment classification") {
  auto least = [](const char* s) { return fragment_of(P(s)).least; };
  CHECK(least("A x. ~P(x) | x=x") == Fragment::FO);
  CHECK(least("A x. E y. (dep(x,y) & ~(x=y))") == Fragment::D);
  CHECK(least("A x. (P(x) -> dep(x))") == Fragment::ID);
  CHECK(least("(x=x) -* ~(x=x)") == Fragment::LD);
  CHECK(least("dep(x) || dep(y)") == Fragment::ID);
  CHECK(least("ndep(x,y)") == Fragment::D);
  CHECK(least("(dep(x) | dep(y)) -> bot") == Fragment::BID);
  CHECK(least("dep(x) -* (dep(y) -> bot)") == Fragment::BID);

  // ID has no split disjunction, D has no implication.
  CHECK_FALSE(in_fragment(P("dep(x) | dep(y)"), Fragment::ID));
  CHECK_FALSE(in_fragment(P("P(x) -> dep(x)"), Fragment::D));
  CHECK(in_fragment(P("P(x) -> dep(x)"), Fragment::BID));
  for (Fragment fr : {Fragment::FO, Fragment::D, Fragment::ID, Fragment::LD})
    CHECK(in_fragment(P("P(x) & x=y"), fr));
}

TEST_CASE("fragment names round trip") {
  for (Fragment fr : {Fragment::FO, Fragment::D, Fragment::ID, Fragment::LD, Fragment::BID})
    CHECK(parse_fragment(fragment_name(fr)) == fr);
  CHECK_FALSE(parse_fragment("XYZ").has_value());
}

TEST_CASE("first order and quantifier free") {
  CHECK(is_first_order(P("A x. (~P(x) | E y. R(x,y))")));
  CHECK_FALSE(is_first_order(P("A x. dep(x)")));
  CHECK_FALSE(is_first_order(P("bot")));
  CHECK(is_quantifier_free(P("P(x) & dep(x)")));
  CHECK_FALSE(is_quantifier_free(P("E x. P(x)")));
}

TEST_CASE("fresh names skip the avoid set") {
  auto v = fresh_vars("u", 3, {"u", "u_2"});
  CHECK(v == std::vector<std::string>{"u_1", "u_3", "u_4"});
}

TEST_CASE("classical view of first order formulas") {
  SOFormula c = to_classical(P("A x. (~P(x) | E y. R(x,y))"));
  CHECK(render(c) == "A x. (~P(x) | E y. R(x,y))");
  CHECK_THROWS_AS(to_classical(P("dep(x)")), InvalidInput);
}

TEST_CASE("negation normal form of second order formulas") {
  SOFormula s = parse_so("~(Af f:1. A x. (P(x) -> f(x)=x))");
  SOFormula n = to_nnf_so(s);
  CHECK(render(n) == "Ef f:1. E x. (P(x) & ~(f(x)=x))");
}

TEST_CASE("substitution and renaming") {
  Term t = Term::apply("f", {Term::variable("x"), Term::variable("y")});
  CHECK(render(substitute_var(t, "x", Term::constant("c"))) == "f(c,y)");
  Formula f = P("(P(x) & E x. R(x,y))");
  CHECK(render(rename_free(f, "x", "z")) == "(P(z) & E x. R(x,y))");
}

TEST_CASE("signature consistency") {
  Signature s;
  s.add_relation("R", 2);
  CHECK_THROWS_AS(s.add_function("R", 1), InvalidInput);
  CHECK_THROWS_AS(s.add_relation("R", 3), InvalidInput);
  CHECK(s.relation_arity("R") == 2);
  CHECK_FALSE(s.function_arity("R").has_value());
}

}  // TEST_SUITE
