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

#include <string>
#include <vector>

#include "doctest.h"
#include "tlk/error.hpp"
#include "tlk/generate.hpp"
#include "tlk/model.hpp"
#include "tlk/parser.hpp"
#include "tlk/team_eval.hpp"

using namespace tlk;

namespace {

Team team(const std::vector<std::string>& vars, const std::vector<std::vector<int>>& rows) {
  Team X(vars);
  for (const auto& r : rows) X.insert(r);
  return X;
}

bool sat(const Model& M, const Team& X, const char* f, Engine e = Engine::Antichain) {
  EvalOptions o;
  o.engine = e;
  return satisfies(M, X, parse_formula(f, &M.signature()), {}, o);
}

}  // namespace

TEST_SUITE("team_eval") {

TEST_CASE("dependence atoms") {
  Model M(2, Signature{});
  Team X = team({"x", "y"}, {{0, 0}, {1, 1}});
  CHECK(sat(M, X, "dep(x,y)"));
  CHECK_FALSE(sat(M, X, "dep(y)"));
  CHECK(sat(M, team({"x", "y"}, {{0, 1}, {1, 1}}), "dep(y)"));
  CHECK_FALSE(sat(M, team({"x", "y"}, {{0, 0}, {0, 1}}), "dep(x,y)"));
  // negated dependence holds only in the empty team
  CHECK(sat(M, Team({"x", "y"}), "ndep(x,y)"));
  CHECK_FALSE(sat(M, X, "ndep(x,y)"));
}

TEST_CASE("split and intuitionistic disjunction") {
  Model M(2, Signature{});
  Team X = team({"x"}, {{0}, {1}});
  CHECK(sat(M, X, "dep(x) | dep(x)"));
  CHECK_FALSE(sat(M, X, "dep(x) || dep(x)"));
  CHECK(sat(M, X, "x=x || dep(x)"));
}

TEST_CASE("intuitionistic implication quantifies over subteams") {
  Model M(2, Signature{});
  Team X = team({"x", "y"}, {{0, 0}, {1, 1}, {0, 1}});
  CHECK_FALSE(sat(M, X, "dep(x,y)"));
  CHECK(sat(M, X, "x=y -> dep(x,y)"));
  CHECK_FALSE(sat(M, X, "dep(x) -> dep(y)"));
  CHECK(sat(M, X, "bot -> dep(y)"));
}

TEST_CASE("linear implication") {
  Model M(2, Signature{});
  // at the empty team the antecedent is tested on every team
  CHECK_FALSE(sat(M, Team({"x"}), "x=x -* ~(x=x)"));
  CHECK(sat(M, Team({"x"}), "x=x -> ~(x=x)"));
  // only Y = ∅ satisfies bot, and {∅} ∪ ∅ still fails it
  CHECK_FALSE(sat(M, Team::unit(), "bot -* bot"));
  CHECK(sat(M, Team(), "bot -* bot"));
}

TEST_CASE("quantifiers use all or some supplements") {
  Model M(3, Signature{});
  CHECK(sentence_true(M, parse_formula("A x. E y. (dep(x,y) & ~(x=y))")));
  CHECK_FALSE(sentence_true(M, parse_formula("A x. E y. (dep(y) & ~(x=y))")));
  Model M1(1, Signature{});
  CHECK_FALSE(sentence_true(M1, parse_formula("A x. E y. ~(x=y)")));
}

TEST_CASE("relations and functions") {
  Model M = load_model(
      R"({"domain":2,"relations":{"P":[[1]]},"functions":{"f":{"arity":1,"table":[[0,1],[1,0]]}}})");
  CHECK(sentence_true(M, parse_formula("A x. (P(x) | P(f(x)))")));
  CHECK_FALSE(sentence_true(M, parse_formula("A x. P(x)")));
  CHECK(sentence_true(M, parse_formula("A x. dep(x,f(x))")));
}

TEST_CASE("truth values") {
  Model M(2, Signature{});
  CHECK(truth_value(M, parse_formula("A x. x=x")) == TruthValue::True);
  CHECK(truth_value(M, parse_formula("E x. ~(x=x)")) == TruthValue::EmptyOnly);
  CHECK(truth_value(M, parse_formula("A x. ((x=x) -* ~(x=x))")) == TruthValue::False);
  CHECK(std::string(truth_value_name(TruthValue::EmptyOnly)) == "EMPTY_ONLY");
}

TEST_CASE("maximal subteams") {
  Model M(2, Signature{});
  Team X = full_team(M, {"x", "y"});
  auto maxes = maximal_subteams(M, X, parse_formula("dep(x,y)"));
  CHECK(maxes.size() == 4);
  for (const Team& T : maxes) CHECK(T.size() == 2);
}

TEST_CASE("free variables must be in the team") {
  Model M(2, Signature{});
  CHECK_THROWS_AS(satisfies(M, team({"x"}, {{0}}), parse_formula("dep(y)")), InvalidInput);
}

TEST_CASE("engines agree on generated formulas") {
  Signature sig = parse_signature_json(R"({"relations":{"P":1},"functions":{"f":1}})");
  FormulaGenerator gen(sig, 11);
  GenOptions o;
  o.max_depth = 3;
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    Formula phi = gen.formula(o);
    for_each_model(sig, 2, {}, [&](const Model& M) {
      for (const Team& X : enumerate_teams(M, {"x", "y"})) {
        EvalOptions a, b, c;
        a.engine = Engine::Direct;
        b.engine = Engine::Table;
        c.engine = Engine::Antichain;
        const bool va = satisfies(M, X, phi, {}, a);
        CHECK_MESSAGE(va == satisfies(M, X, phi, {}, b), render(phi));
        CHECK_MESSAGE(va == satisfies(M, X, phi, {}, c), render(phi));
        ++checked;
      }
      return i % 4 == 0;  // all models for some formulas, one for the rest
    });
  }
  CHECK(checked > 0);
}

TEST_CASE("satisfying team table matches direct evaluation") {
  Model M(2, Signature{});
  Formula phi = parse_formula("dep(x) -> dep(y)");
  std::vector<bool> table = satisfying_teams(M, {"x", "y"}, phi);
  Team full = full_team(M, {"x", "y"});
  REQUIRE(table.size() == 16);
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    std::vector<bool> keep(full.size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = (mask >> i) & 1;
    CHECK(table[mask] == sat(M, full.subteam(keep), "dep(x) -> dep(y)", Engine::Direct));
  }
}

}  // TEST_SUITE
