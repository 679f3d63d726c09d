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

#include "doctest.h"
#include "tlk/error.hpp"
#include "tlk/model.hpp"
#include "tlk/parser.hpp"
#include "tlk/so_eval.hpp"

using namespace tlk;

namespace {
bool truth(int n, const char* s) { return so_sentence_true(Model(n, Signature{}), parse_so(s)); }
}  // namespace

TEST_SUITE("so_eval") {

TEST_CASE("function tables are enumerated exhaustively") {
  Model M(3, Signature{});
  CHECK(enumerate_function_tables(M, 1).size() == 27);
  CHECK_THROWS_AS(enumerate_function_tables(M, 0), InvalidInput);
  Model M2(2, Signature{});
  CHECK(enumerate_function_tables(M2, 2).size() == 16);
}

TEST_CASE("basic second order truths") {
  CHECK(truth(2, "Af f:1. Ef g:1. A x. f(x)=g(x)"));
  CHECK(truth(3, "Ef f:1. A x. ~(f(x)=x)"));
  CHECK_FALSE(truth(1, "Ef f:1. A x. ~(f(x)=x)"));
  CHECK(truth(2, "Af f:1. Ef g:1. A x. ~(f(x)=g(x))"));
  CHECK_FALSE(truth(1, "Af f:1. Ef g:1. A x. ~(f(x)=g(x))"));
  CHECK_THROWS_AS(parse_so("Ef c:0. A x. x=c"), ParseError);
}

TEST_CASE("finite domains have no injective non-surjective maps") {
  for (int n = 1; n <= 3; ++n) {
    CHECK_FALSE(truth(n, "Ef f:1. (A x. A y. (f(x)=f(y) -> x=y) & E z. A x. ~(f(x)=z))"));
    CHECK(truth(n, "Af f:1. (E x. E y. (f(x)=f(y) & ~(x=y)) | A z. E x. f(x)=z)"));
  }
}

TEST_CASE("every map has a left inverse only when injective") {
  CHECK_FALSE(truth(2, "Af f:1. Ef g:1. A x. g(f(x))=x"));
  CHECK(truth(1, "Af f:1. Ef g:1. A x. g(f(x))=x"));
}

TEST_CASE("signature symbols are read from the model") {
  Model M = load_model(R"({"domain":2,"relations":{"P":[[0]]}})");
  CHECK(so_sentence_true(M, parse_so("Ef f:1. A x. P(f(x))")));
  CHECK_FALSE(so_sentence_true(M, parse_so("Af f:1. A x. P(f(x))")));
}

TEST_CASE("open formulas under an environment") {
  Model M(2, Signature{});
  FunctionEnvironment env;
  env["f"] = FunctionTable{1, {1, 0}};
  Assignment s{{"x", 0}};
  CHECK(eval_term(M, parse_formula("f(x)=x").atomic().args[0], env, s) == 1);
  CHECK(so_satisfies(M, parse_so("~(f(x)=x)"), env, s));
}

TEST_CASE("budget limits function enumeration") {
  Budget b;
  b.max_functions = 10;
  Model M(3, Signature{});
  CHECK_THROWS_AS(so_sentence_true(M, parse_so("Ef f:1. A x. f(x)=x"), b), BudgetExceeded);
}

}  // TEST_SUITE
