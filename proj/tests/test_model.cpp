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

#include "doctest.h"
#include "tlk/error.hpp"
#include "tlk/model.hpp"
#include "tlk/parser.hpp"

using namespace tlk;

TEST_SUITE("finite_model") {

TEST_CASE("model json round trip") {
  const char* text =
      R"({"domain":2,"relations":{"R":[[0,1]]},)"
      R"("functions":{"f":{"arity":1,"table":[[0,1],[1,0]]}},"constants":{"c":1}})";
  Model M = load_model(text);
  CHECK(M.size() == 2);
  CHECK(M.holds("R", {0, 1}));
  CHECK_FALSE(M.holds("R", {1, 0}));
  CHECK(M.apply("f", {0}) == 1);
  CHECK(M.constant("c") == 1);
  CHECK(load_model(model_to_json(M)) == M);
}

TEST_CASE("bad models are rejected") {
  CHECK_THROWS_AS(load_model(R"({"domain":0})"), InvalidInput);
  CHECK_THROWS_AS(load_model(R"({"domain":2,"relations":{"R":[[0,2]]}})"), InvalidInput);
  CHECK_THROWS_AS(load_model(R"({"domain":2,"functions":{"f":{"arity":1,"table":[[0,1]]}}})"),
                  InvalidInput);
  Signature s = parse_signature_json(R"({"relations":{"P":1}})");
  CHECK_THROWS_AS(load_model(R"({"domain":2})", &s), InvalidInput);
}

TEST_CASE("teams are sets") {
  Team X({"y", "x"});
  CHECK(X.vars() == std::vector<std::string>{"x", "y"});
  X.insert({1, 0});
  X.insert({0, 0});
  X.insert({1, 0});
  CHECK(X.size() == 2);
  CHECK(X.rows().front() == std::vector<int>{0, 0});
  CHECK(X.assignment(1).at("x") == 1);
  Team Y = load_team(team_to_json(X), 2);
  CHECK(Y == X);
  CHECK_THROWS_AS(load_team(R"({"vars":["x"],"rows":[[3]]})", 2), InvalidInput);
}

TEST_CASE("unit and empty teams differ") {
  CHECK(Team::unit().size() == 1);
  CHECK(Team().size() == 0);
  CHECK_FALSE(Team::unit() == Team());
}

TEST_CASE("supplement, duplicate, project") {
  Model M(3, Signature{});
  Team X = full_team(M, {"x"});
  CHECK(X.size() == 3);
  Team D = duplicate(X, "y", M);
  CHECK(D.size() == 9);
  Team S = supplement(X, "y", {2, 0, 2});
  CHECK(S.size() == 3);
  CHECK(S.contains({1, 0}));
  CHECK(S.project({"x"}) == X);
}

TEST_CASE("enumeration counts") {
  Signature s = parse_signature_json(R"({"relations":{"P":1},"functions":{"f":1}})");
  CHECK(model_count(s, 2) == 4 * 4);
  int n = 0;
  for_each_model(s, 2, {}, [&](const Model&) { ++n; return true; });
  CHECK(n == 16);

  Model M(2, Signature{});
  CHECK(enumerate_teams(M, {"x", "y"}).size() == 16);
  Team X = full_team(M, {"x"});
  CHECK(enumerate_subteams(X).size() == 4);
  CHECK(enumerate_supplement_functions(X, M).size() == 4);
}

TEST_CASE("budgets stop enumeration") {
  Budget b;
  b.max_models = 3;
  Signature s = parse_signature_json(R"({"functions":{"f":1}})");
  CHECK_THROWS_AS(for_each_model(s, 2, b, [](const Model&) { return true; }), BudgetExceeded);
  Budget t;
  t.max_team_space_rows = 4;
  Model M(3, Signature{});
  CHECK_THROWS_AS(enumerate_teams(M, {"x", "y"}, t), BudgetExceeded);
}

TEST_CASE("visitors may stop early") {
  Model M(2, Signature{});
  int seen = 0;
  for_each_team(M, {"x"}, {}, [&](const Team&) { return ++seen < 2; });
  CHECK(seen == 2);
}

}  // TEST_SUITE
