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
#include "tlk/ast.hpp"
#include "tlk/equiv.hpp"
#include "tlk/error.hpp"
#include "tlk/parser.hpp"
#include "tlk/so_eval.hpp"
#include "tlk/translator.hpp"

using namespace tlk;

namespace {

Formula P(const char* s) { return parse_formula(s); }
std::string R(const Formula& f) { return render(f); }

// Both formulas agree on every model up to n and every team over their variables.
void check_same(const Formula& a, const Formula& b, const Signature& sig, int n) {
  EquivVerdict v = check_equiv(a, b, sig, n);
  CHECK_MESSAGE(v.status == Verdict::Pass, R(a) << " vs " << R(b) << "\n" << verdict_text(v));
}

void check_so_same(const SOFormula& a, const SOFormula& b, const Signature& sig, int n) {
  for (int k = 1; k <= n; ++k)
    for_each_model(sig, k, {}, [&](const Model& M) {
      CHECK_MESSAGE(so_sentence_true(M, a) == so_sentence_true(M, b),
                    render(a) << " vs " << render(b) << " at " << model_to_json(M));
      return true;
    });
}

void check_translation(const char* so, const Formula& team, EvalTeam at, int n) {
  SOFormula phi = parse_so(so);
  EquivVerdict v = check_sentence_translation(phi, team, at, signature_of(phi), n);
  CHECK_MESSAGE(v.status == Verdict::Pass, so << "\n" << verdict_text(v));
}

}  // namespace

TEST_SUITE("translator") {

TEST_CASE("dependence atom expansion") {
  CHECK(R(expand_dep_atom(P("dep(x,y)"))) == "(dep(x) -> dep(y))");
  CHECK(R(expand_dep_atom(P("dep(x,y,z)"))) == "((dep(x) & dep(y)) -> dep(z))");
  CHECK(R(expand_dep_atom(P("dep(x)"))) == "dep(x)");
  check_same(P("dep(x,y,z)"), expand_dep_atom(P("dep(x,y,z)")), Signature{}, 2);
}

TEST_CASE("negated literals") {
  CHECK(R(literal_to_id(P("~b(x)"))) == "(b(x) -> bot)");
  CHECK(R(literal_to_id(P("ndep(x)"))) == "(dep(x) -> bot)");
  CHECK_THROWS_AS(literal_to_id(P("b(x)")), InvalidInput);
}

TEST_CASE("first order to intuitionistic, worked example") {
  Formula out = fo_to_id(P("(a(x) | (~b(x) | c(x))) & d(x)"));
  CHECK(R(out) == "(((a(x) -> bot) -> (((b(x) -> bot) -> bot) -> c(x))) & d(x))");
  CHECK(in_fragment(out, Fragment::ID));
  CHECK(R(fo_to_id(P("a(x)"))) == "a(x)");
}

TEST_CASE("first order to intuitionistic trace chains") {
  TranslationTrace trace;
  Formula out = fo_to_id(P("(a(x) | (~b(x) | c(x))) & d(x)"), &trace);
  REQUIRE(trace.size() >= 2);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i - 1].after == trace[i].before);
  CHECK(trace.back().after == R(out));
  for (const auto& step : trace) {
    CHECK_FALSE(step.rule.empty());
    CHECK_FALSE(step.citation.empty());
  }
  CHECK(render_trace(trace).find("RULE ") == 0);
}

TEST_CASE("first order to intuitionistic with quantifiers") {
  Signature sig = parse_signature_json(R"({"relations":{"P":1,"R":2}})");
  for (const char* s : {"A x. (P(x) | E y. ~R(x,y))", "E x. P(x) | A y. ~P(y)",
                        "~(x=y) | P(x)", "A x. (P(x) | P(y)) & E y. R(y,y)"}) {
    Formula f = parse_formula(s, &sig);
    Formula out = fo_to_id(f);
    CHECK(in_fragment(out, Fragment::ID));
    check_same(f, out, sig, 2);
  }
}

TEST_CASE("existential second order to dependence logic") {
  CHECK(R(sigma11_to_d(parse_so("Ef f:1. A x. R(x,f(x))"))) ==
        "A x. E y. (dep(x,y) & R(x,y))");
  CHECK(R(sigma11_to_d(parse_so("Ef f:1. A x. f(x)=x"))) == "A x. E y. (dep(x,y) & y=x)");
  CHECK_THROWS(sigma11_to_d(parse_so("Af f:1. A x. f(x)=x")));
  for (const char* s : {"Ef f:1. A x. R(x,f(x))", "Ef f:1. A x. ~(f(x)=x)",
                        "Ef f:1. A x. A y. (f(x)=f(y) -> x=y)"}) {
    Formula d = sigma11_to_d(parse_so(s));
    CHECK(in_fragment(d, Fragment::D));
    check_translation(s, d, EvalTeam::Unit, 2);
    Formula id = d_sentence_to_id(d);
    CHECK(in_fragment(id, Fragment::ID));
    check_translation(s, id, EvalTeam::Unit, 2);
  }
}

TEST_CASE("universal second order through negation") {
  const char* s = "Af f:1. E x. E y. (~(x=y) & f(x)=f(y))";
  Formula out = pi11_to_id(parse_so(s));
  CHECK(out.kind() == Connective::Impl);
  CHECK(out.right().kind() == Connective::Bottom);
  check_translation(s, out, EvalTeam::Unit, 2);
  check_translation("Af f:1. A x. f(x)=f(x)", pi11_to_id(parse_so("Af f:1. A x. f(x)=f(x)")),
                    EvalTeam::Unit, 3);
  CHECK_THROWS(pi11_to_id(parse_so("Ef f:1. A x. f(x)=x")));
}

TEST_CASE("flattening function arguments") {
  SOFormula in = parse_so("Af f:1. Af g:1. A x. f(g(x))=x");
  SOFormula out = flatten_fn_args(in);
  CHECK(render(out).find("f(g(") == std::string::npos);
  check_so_same(in, out, Signature{}, 2);
  SOFormula flat = parse_so("Af f:1. A x. f(x)=x");
  CHECK(flatten_fn_args(flat) == flat);
}

TEST_CASE("unifying function occurrences") {
  SOFormula in = parse_so("Af f:1. A x. A y. (f(x)=f(y) -> x=y)");
  SOFormula out = unify_fn_occurrences(in);
  CHECK(render(out).find("Ef") != std::string::npos);
  check_so_same(in, out, Signature{}, 2);
  SOFormula single = parse_so("Af f:1. A x. f(x)=x");
  CHECK(unify_fn_occurrences(single) == single);
}

TEST_CASE("nice normal form shape") {
  for (const char* s : {"Ef f:1. A x. R(x,f(x))", "Af f:1. Ef g:1. A x. g(f(x))=x",
                        "Af f:2. Ef g:1. A x. A y. f(x,y)=g(x)",
                        "Ef f:1. (A x. A y. (f(x)=f(y) -> x=y) & E z. A x. ~(f(x)=z))"}) {
    SOFormula phi = parse_so(s);
    NiceNormalForm nf = so_nice_normal_form(phi);
    CHECK(nf.depth() % 2 == 0);
    CHECK(nf.blocks.front().universal);
    CHECK(nf.uniform_arity() >= 0);
    for (std::size_t i = 0; i < nf.blocks.size(); ++i) {
      CHECK(nf.blocks[i].universal == (i % 2 == 0));
      CHECK(static_cast<int>(nf.blocks[i].fns.size()) == nf.block_length());
      for (const auto& fn : nf.blocks[i].fns) CHECK(nf.tuple.at(fn).size() == std::size_t(nf.uniform_arity()));
    }
    check_so_same(phi, nf.to_so(), signature_of(phi), 2);
  }
}

TEST_CASE("existential prefix gets a dummy universal block") {
  NiceNormalForm nf = so_nice_normal_form(parse_so("Ef f:1. A x. R(x,f(x))"));
  CHECK(nf.depth() == 2);
  CHECK(nf.block_length() == 1);
  CHECK(nf.uniform_arity() == 1);
}

TEST_CASE("replacing functions by variables") {
  Formula out = replace_fns_with_vars(parse_so("f(x)=g(x)"), {{"f", "u1"}, {"g", "u2"}});
  CHECK(R(out) == "u1=u2");
  CHECK(R(replace_fns_with_vars(parse_so("P(x)"), {})) == "P(x)");
  CHECK_THROWS(replace_fns_with_vars(parse_so("f(x)=f(y)"), {{"f", "u"}}));
}

TEST_CASE("team sentence for the basic example") {
  const char* s = "Af f:1. Ef g:1. A x. f(x)=g(x)";
  Formula star = so_to_bid(parse_so(s));
  CHECK(R(star) == "A u_1_1. A x. (dep(x,u_1_1) -> E u_2_1. (dep(x,u_2_1) & u_1_1=u_2_1))");
  Formula id = so_to_id(parse_so(s));
  CHECK(R(id) ==
        "A u_1_1. A x. ((dep(x) -> dep(u_1_1)) -> E u_2_1. ((dep(x) -> dep(u_2_1)) & u_1_1=u_2_1))");
  CHECK(in_fragment(id, Fragment::ID));
  check_translation(s, star, EvalTeam::Unit, 2);
  check_translation(s, id, EvalTeam::Unit, 2);
}

TEST_CASE("second order to intuitionistic on a small corpus") {
  for (const char* s : {"Af f:1. Ef g:1. A x. g(f(x))=x", "Af f:1. Ef g:1. A x. ~(f(x)=g(x))",
                        "Ef f:1. A x. ~(f(x)=x)"}) {
    Formula id = so_to_id(parse_so(s));
    CHECK(in_fragment(id, Fragment::ID));
    check_translation(s, id, EvalTeam::Unit, 2);
  }
}

TEST_CASE("linear implication variant at the empty team") {
  const char* s = "Af f:1. Ef g:1. A x. f(x)=g(x)";
  Formula ld = so_to_ld(parse_so(s));
  CHECK(R(ld) == "A u_1_1. A x. (dep(x,u_1_1) -* E u_2_1. (dep(x,u_2_1) & u_1_1=u_2_1))");
  CHECK(in_fragment(ld, Fragment::LD));
  check_translation(s, ld, EvalTeam::Empty, 2);
  check_translation("Af f:1. Ef g:1. A x. ~(f(x)=g(x))",
                    so_to_ld(parse_so("Af f:1. Ef g:1. A x. ~(f(x)=g(x))")), EvalTeam::Empty, 2);
  CHECK_THROWS(so_to_ld(parse_so("Af f:1. Ef g:1. Af h:1. Ef k:1. A x. f(x)=g(k(h(x)))")));
}

TEST_CASE("intuitionistic disjunction elimination") {
  Formula e = eliminate_ivee(P("dep(x) || dep(y)"));
  CHECK(e.kind() == Connective::And);
  CHECK_FALSE(R(e).find("||") != std::string::npos);
  check_same(P("dep(x) || dep(y)"), e, Signature{}, 3);
  check_same(P("dep(x)"), eliminate_ivee(P("dep(x) || dep(x)")), Signature{}, 2);
  Formula nested = P("(dep(x) || x=y) & (dep(y) || bot)");
  check_same(nested, eliminate_all_ivee(nested), Signature{}, 2);
}

TEST_CASE("implications become linear") {
  CHECK(R(impl_to_limpl(P("dep(x) -> (bot -> dep(y))"))) == "(dep(x) -* (bot -* dep(y)))");
}

}  // TEST_SUITE
