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

#include <cstring>
#include <string>

#include "doctest.h"
#include "tlk/tlk.h"

namespace {

tlk_formula* parse(const char* text, tlk_logic logic = TLK_LOGIC_BID) {
  tlk_formula* f = nullptr;
  REQUIRE(tlk_formula_parse(text, logic, nullptr, &f) == TLK_OK);
  return f;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  tlk_string_free(s);
  return out;
}

}  // namespace

TEST_SUITE("c_api") {

TEST_CASE("version and defaults") {
  CHECK(std::strlen(tlk_version()) > 0);
  tlk_budget b;
  tlk_budget_default(&b);
  CHECK(b.jobs == 1);
  CHECK(b.max_models > 0);
}

TEST_CASE("parse errors are reported with a message") {
  tlk_formula* f = nullptr;
  CHECK(tlk_formula_parse("A x. (", TLK_LOGIC_BID, nullptr, &f) == TLK_ERR_PARSE);
  CHECK(f == nullptr);
  CHECK(std::strlen(tlk_last_error()) > 0);
  CHECK(tlk_formula_parse("dep(x) -> bot", TLK_LOGIC_D, nullptr, &f) == TLK_ERR_INVALID_INPUT);
  CHECK(tlk_formula_parse(nullptr, TLK_LOGIC_BID, nullptr, &f) == TLK_ERR_INVALID_INPUT);
}

TEST_CASE("render and fragments") {
  tlk_formula* f = parse("dep(x) -> bot");
  char* s = nullptr;
  REQUIRE(tlk_formula_render(f, &s) == TLK_OK);
  CHECK(take(s) == "(dep(x) -> bot)");
  REQUIRE(tlk_formula_fragments(f, &s) == TLK_OK);
  CHECK(take(s).find("\"least\":\"ID\"") != std::string::npos);
  CHECK(tlk_formula_is_second_order(f) == 0);
  tlk_formula_free(f);
}

TEST_CASE("evaluation at teams") {
  tlk_model* m = nullptr;
  REQUIRE(tlk_model_load_json(R"({"domain":2})", nullptr, &m) == TLK_OK);
  CHECK(tlk_model_size(m) == 2);
  tlk_formula* f = parse("A x. E y. x=y");
  int result = -1;
  REQUIRE(tlk_eval(m, nullptr, f, 0, nullptr, &result) == TLK_OK);
  CHECK(result == 1);
  tlk_team* t = nullptr;
  REQUIRE(tlk_team_load_json(R"({"vars":["x","y"],"rows":[[0,0],[0,1]]})", 2, &t) == TLK_OK);
  tlk_formula* d = parse("dep(x,y)");
  REQUIRE(tlk_eval(m, t, d, 0, nullptr, &result) == TLK_OK);
  CHECK(result == 0);
  tlk_formula* w = parse("A x. ((x=x) -* ~(x=x))");
  tlk_truth tv;
  REQUIRE(tlk_truth_value(m, w, nullptr, &tv) == TLK_OK);
  CHECK(tv == TLK_FALSE);
  // free variables with no team
  CHECK(tlk_eval(m, nullptr, d, 0, nullptr, &result) == TLK_ERR_INVALID_INPUT);
  tlk_formula_free(w);
  tlk_formula_free(d);
  tlk_team_free(t);
  tlk_formula_free(f);
  tlk_model_free(m);
}

TEST_CASE("second order evaluation") {
  tlk_model* m = nullptr;
  REQUIRE(tlk_model_load_json(R"({"domain":2})", nullptr, &m) == TLK_OK);
  tlk_formula* f = parse("Af f:1. Ef g:1. A x. ~(f(x)=g(x))", TLK_LOGIC_SO);
  CHECK(tlk_formula_is_second_order(f) == 1);
  int result = -1;
  REQUIRE(tlk_eval(m, nullptr, f, 0, nullptr, &result) == TLK_OK);
  CHECK(result == 1);
  tlk_formula_free(f);
  tlk_model_free(m);
}

TEST_CASE("translate with trace") {
  tlk_formula* f = parse("(a(x) | (~b(x) | c(x))) & d(x)");
  tlk_formula* out = nullptr;
  char* trace = nullptr;
  REQUIRE(tlk_translate(f, "fo2id", &out, &trace) == TLK_OK);
  std::string t = take(trace);
  CHECK(t.find("RULE ") == 0);
  char* s = nullptr;
  REQUIRE(tlk_formula_render(out, &s) == TLK_OK);
  CHECK(take(s) == "(((a(x) -> bot) -> (((b(x) -> bot) -> bot) -> c(x))) & d(x))");
  CHECK(tlk_translate(f, "nowhere", &out, nullptr) != TLK_OK);
  CHECK(tlk_translate(f, "so2id", &out, nullptr) == TLK_ERR_INVALID_INPUT);
  tlk_formula_free(f);
}

TEST_CASE("verify and laws") {
  tlk_formula* f = parse("Af f:1. Ef g:1. A x. f(x)=g(x)", TLK_LOGIC_SO);
  tlk_verdict v;
  char* report = nullptr;
  REQUIRE(tlk_verify(f, "so2id", nullptr, 2, 0, nullptr, &v, &report) == TLK_OK);
  CHECK(v == TLK_PASS);
  CHECK(take(report).find("PASS") != std::string::npos);
  tlk_formula_free(f);

  int failures = -1;
  REQUIRE(tlk_laws("downward", nullptr, 2, 1, 20, nullptr, &failures, &report) == TLK_OK);
  CHECK(failures == 0);
  take(report);
  CHECK(tlk_laws("bogus", nullptr, 2, 1, 20, nullptr, &failures, &report) != TLK_OK);
}

TEST_CASE("budget errors map to their code") {
  tlk_signature* sig = nullptr;
  REQUIRE(tlk_signature_parse_json(R"({"functions":{"f":2}})", &sig) == TLK_OK);
  tlk_budget b;
  tlk_budget_default(&b);
  b.max_models = 10;
  char* out = nullptr;
  CHECK(tlk_models_enumerate(sig, 3, &b, &out) == TLK_ERR_BUDGET);
  REQUIRE(tlk_models_enumerate(sig, 1, &b, &out) == TLK_OK);
  CHECK(take(out).find("\"domain\":1") != std::string::npos);
  tlk_signature_free(sig);
}

TEST_CASE("null handles are tolerated by free") {
  tlk_formula_free(nullptr);
  tlk_model_free(nullptr);
  tlk_team_free(nullptr);
  tlk_signature_free(nullptr);
  tlk_string_free(nullptr);
}

}  // TEST_SUITE
