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
#include "json.hpp"
#include "tlk/equiv.hpp"
#include "tlk/generate.hpp"
#include "tlk/parser.hpp"
#include "tlk/translator.hpp"

using namespace tlk;

namespace {
Formula P(const char* s) { return parse_formula(s); }
}  // namespace

TEST_SUITE("equiv_checker") {

TEST_CASE("equivalent formulas pass") {
  EquivVerdict v = check_equiv(P("dep(x,y)"), P("dep(x) -> dep(y)"), Signature{}, 3);
  CHECK(v.status == Verdict::Pass);
  CHECK(v.max_size == 3);
  CHECK(v.models_checked == 3);
  // 2^1 + 2^4 + 2^9 teams over {x,y}
  CHECK(v.teams_checked == 2 + 16 + 512);
}

TEST_CASE("counterexamples are the first in enumeration order") {
  EquivVerdict v = check_equiv(P("dep(x)"), P("x=x"), Signature{}, 3);
  REQUIRE(v.status == Verdict::Fail);
  REQUIRE(v.model.has_value());
  REQUIRE(v.team.has_value());
  CHECK(v.model->size() == 2);
  CHECK(v.team->size() == 2);
  CHECK(v.lhs == false);
  CHECK(v.rhs == true);
  auto j = nlohmann::json::parse(verdict_json(v));
  CHECK(j["status"] == "FAIL");
  CHECK(j["counterexample"].contains("model"));
  CHECK(j["counterexample"].contains("team"));
  // same call, same answer
  CHECK(verdict_json(check_equiv(P("dep(x)"), P("x=x"), Signature{}, 3)) == verdict_json(v));
}

TEST_CASE("pass is monotone in the size bound") {
  for (int k = 1; k <= 3; ++k)
    CHECK(check_equiv(P("dep(x) || dep(y)"), eliminate_ivee(P("dep(x) || dep(y)")),
                      Signature{}, k).status == Verdict::Pass);
}

TEST_CASE("parallel checking gives the same verdict") {
  CheckOptions one, many;
  many.jobs = 3;
  Signature sig = parse_signature_json(R"({"functions":{"f":1}})");
  EquivVerdict a = check_equiv(P("dep(x,f(x))"), P("dep(f(x))"), sig, 3, one);
  EquivVerdict b = check_equiv(P("dep(x,f(x))"), P("dep(f(x))"), sig, 3, many);
  CHECK(verdict_json(a) == verdict_json(b));
  CHECK(a.status == Verdict::Fail);
}

TEST_CASE("budget verdict instead of a crash") {
  CheckOptions o;
  o.budget.max_team_space_rows = 3;
  o.use_table = false;
  EquivVerdict v = check_equiv(P("dep(x,y)"), P("dep(x) -> dep(y)"), Signature{}, 2, o);
  CHECK(v.status == Verdict::Budget);
  CHECK_FALSE(v.message.empty());
}

TEST_CASE("sentence translations at both teams") {
  SOFormula phi = parse_so("Af f:1. Ef g:1. A x. f(x)=g(x)");
  EquivVerdict v = check_sentence_translation(phi, so_to_id(phi), EvalTeam::Unit, Signature{}, 2);
  CHECK(v.status == Verdict::Pass);
  // a wrong translation is caught with a model
  EquivVerdict w = check_sentence_translation(phi, P("bot"), EvalTeam::Unit, Signature{}, 2);
  CHECK(w.status == Verdict::Fail);
  CHECK(w.model.has_value());
  CHECK_FALSE(w.team.has_value());
  CHECK(w.lhs == true);
  // every sentence of D holds at the empty team
  EquivVerdict e = check_sentence_translation(phi, P("bot"), EvalTeam::Empty, Signature{}, 2);
  CHECK(e.status == Verdict::Pass);
}

TEST_CASE("law suites over the empty signature") {
  LawOptions o;
  o.formulas = 40;
  for (const auto& suite : law_suite_names()) {
    LawReport r = run_law_suite(suite, Signature{}, 2, 5, o);
    CHECK_MESSAGE(r.passed(), r.text());
    CHECK(r.checks > 0);
    auto j = nlohmann::json::parse(r.json());
    CHECK(j["suite"] == suite);
    CHECK(j["seed"] == 5);
  }
}

TEST_CASE("empty suite provokes the linear implication witness") {
  LawOptions o;
  o.formulas = 10;
  LawReport r = run_law_suite("empty", Signature{}, 1, 1, o);
  CHECK(r.passed());
  CHECK(r.expected_failures >= 1);
}

TEST_CASE("unknown suite") {
  CHECK_THROWS(run_law_suite("nonsense", Signature{}, 1, 1));
}

TEST_CASE("generator is deterministic") {
  Signature sig = parse_signature_json(R"({"relations":{"P":1}})");
  FormulaGenerator a(sig, 3), b(sig, 3);
  GenOptions o;
  for (int i = 0; i < 20; ++i) CHECK(render(a.formula(o)) == render(b.formula(o)));
  for (Fragment fr : {Fragment::FO, Fragment::D, Fragment::ID, Fragment::LD}) {
    o.fragment = fr;
    for (int i = 0; i < 20; ++i) CHECK(in_fragment(a.sentence(o), fr));
  }
}

}  // TEST_SUITE
