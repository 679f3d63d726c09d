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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Each line carries its counts and wall time.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tlk/ast.hpp"
#include "tlk/equiv.hpp"
#include "tlk/error.hpp"
#include "tlk/generate.hpp"
#include "tlk/model.hpp"
#include "tlk/parser.hpp"
#include "tlk/so_eval.hpp"
#include "tlk/team_eval.hpp"
#include "tlk/translator.hpp"

using namespace tlk;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failures; keeps the first few messages.
struct Tally {
  int checks = 0;
  int failures = 0;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (cond) return;
    ++failures;
    if (notes.size() < 5) notes.push_back(what);
  }
  void verdict(const EquivVerdict& v, const std::string& what) {
    expect(v.status == Verdict::Pass, what + ": " + verdict_text(v));
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << " checks=" << checks << " failures=" << failures;
    for (const auto& n : notes) s << "\n    " << n;
    return {failures == 0, s.str()};
  }
};

Signature sig_of(const char* json) { return parse_signature_json(json); }

const Signature kEmpty;

// ---------------------------------------------------------------------------

Outcome laws() {
  Tally t;
  LawOptions o;
  o.formulas = 500;
  std::ostringstream s;
  for (const Signature& sig : {kEmpty, sig_of(R"({"functions":{"f":1}})")}) {
    for (const char* suite : {"downward", "flat", "empty", "locality"}) {
      LawReport r = run_law_suite(suite, sig, 3, 20261019, o);
      t.expect(r.passed() && r.formulas >= 500, r.text());
    }
  }
  // the linear implication witness, on every model of both signatures
  Formula w = parse_formula("(x=x) -* ~(x=x)");
  for (const Signature& sig : {kEmpty, sig_of(R"({"functions":{"f":1}})")})
    for (int n = 1; n <= 3; ++n)
      for_each_model(sig, n, {}, [&](const Model& M) {
        t.expect(!satisfies(M, Team({"x"}), w), "witness holds at " + model_to_json(M));
        return true;
      });
  return t.outcome("suites=8 formulas/suite=500 n<=3");
}

Outcome eq_bid() {
  Tally t;
  auto item = [&](const char* a, const char* b) {
    t.verdict(check_equiv(parse_formula(a), parse_formula(b), kEmpty, 3),
              std::string(a) + " vs " + b);
  };
  // (1) dependence atoms
  item("dep(x,y)", "dep(x) -> dep(y)");
  item("dep(y,x)", "dep(y) -> dep(x)");
  item("dep(x,y,x)", "(dep(x) & dep(y)) -> dep(x)");
  item("dep(y,x,y)", "(dep(y) & dep(x)) -> dep(y)");
  item("dep(x,x)", "dep(x) -> dep(x)");
  // (2) negated atoms
  for (const char* a : {"x=y", "x=x", "y=x"})
    item((std::string("~(") + a + ")").c_str(), (std::string("(") + a + ") -> bot").c_str());
  item("ndep(x,y)", "dep(x,y) -> bot");
  item("ndep(x)", "dep(x) -> bot");
  item("ndep(y,x,y)", "dep(y,x,y) -> bot");
  // (3) double negation of flat formulas
  for (const char* f : {"x=y", "~(x=y)", "x=y | ~(x=y)", "x=x & ~(y=y)", "x=y | x=x"})
    item((std::string("((") + f + ") -> bot) -> bot").c_str(), f);
  // (4) split disjunction of flat formulas
  const char* flats[] = {"x=y", "~(x=y)", "x=x", "~(x=x)", "(x=y & y=y)"};
  for (const char* a : flats)
    for (const char* b : flats)
      item((std::string("(") + a + ") | (" + b + ")").c_str(),
           (std::string("((") + a + ") -> bot) -> (" + b + ")").c_str());
  // generated instances of (3) and (4)
  LawOptions o;
  o.formulas = 100;
  LawReport r = run_law_suite("eqbid", kEmpty, 3, 7, o);
  t.expect(r.passed(), r.text());
  return t.outcome("vars={x,y} n<=3 all teams");
}

Outcome fo_idl() {
  Tally t;
  Formula ex = fo_to_id(parse_formula("(a(x) | (~b(x) | c(x))) & d(x)"));
  const std::string want = "(((a(x) -> bot) -> (((b(x) -> bot) -> bot) -> c(x))) & d(x))";
  t.expect(render(ex) == want, "worked example gave " + render(ex));

  Signature sig = sig_of(R"({"relations":{"P":1,"Q":1}})");
  FormulaGenerator gen(sig, 3);
  GenOptions g;
  g.fragment = Fragment::FO;
  g.max_depth = 3;
  for (int k = 0; k < 200; ++k) {
    Formula f = gen.formula(g);
    Formula id = fo_to_id(f);
    t.expect(in_fragment(id, Fragment::ID), "not ID: " + render(id));
    t.verdict(check_equiv(f, id, sig, 3), render(f));
  }
  return t.outcome("example exact, generated=200 n<=3");
}

// ---------------------------------------------------------------------------
// Second order corpus

struct CorpusEntry {
  std::string text;
  SOFormula phi;
};

std::vector<CorpusEntry> so_corpus() {
  std::vector<CorpusEntry> out;
  for (const char* s : {
           "Af f:1. Ef g:1. A x. f(x)=g(x)",
           "Ef f:1. (A x. A y. (f(x)=f(y) -> x=y) & E z. A x. ~(f(x)=z))",
           "Af f:1. (E x. E y. (f(x)=f(y) & ~(x=y)) | A z. E x. f(x)=z)",
           "Af f:2. Ef g:1. A x. A y. f(x,y)=g(x)",
       })
    out.push_back({s, parse_so(s)});
  FormulaGenerator gen(sig_of(R"({"relations":{"P":1}})"), 12);
  const int shapes[][3] = {{2, 1, 1}, {2, 1, 2}, {2, 2, 1}, {2, 2, 2},
                           {4, 1, 1}, {4, 1, 1}, {4, 1, 2}, {4, 2, 1}};
  for (const auto& sh : shapes) {
    SOFormula phi = gen.normal_form_sentence(sh[0], sh[1], sh[2], 2);
    out.push_back({render(phi), phi});
  }
  return out;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome corpus_to_id(const std::vector<CorpusEntry>& corpus) {
  Tally t;
  std::vector<std::pair<double, std::size_t>> cost;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& c = corpus[i];
    auto t0 = Clock::now();
    Formula id = so_to_id(c.phi);
    t.expect(in_fragment(id, Fragment::ID), "not ID: " + c.text);
    t.verdict(check_sentence_translation(c.phi, id, EvalTeam::Unit, signature_of(c.phi), 2),
              c.text);
    cost.push_back({seconds_since(t0), i});
  }
  std::sort(cost.begin(), cost.end());
  std::ostringstream at3;
  for (int k = 0; k < 2; ++k) {
    const auto& c = corpus[cost[k].second];
    CheckOptions o;
    o.min_size = 3;
    t.verdict(check_sentence_translation(c.phi, so_to_id(c.phi), EvalTeam::Unit,
                                         signature_of(c.phi), 3, o),
              c.text + " at n=3");
    at3 << (k ? ", " : "") << "#" << cost[k].second + 1;
  }
  return t.outcome("sentences=" + std::to_string(corpus.size()) + " n<=2, n=3 for " + at3.str());
}

// --- mutations of phi*

// Replaces the dependence atom whose last term is the variable u by u=u.
Formula drop_theta(const Formula& f, const std::string& u) {
  switch (f.kind()) {
    case Connective::Dep: {
      const Term& last = f.dep_terms().back();
      if (last.is_variable() && last.name == u)
        return Formula::atom(AtomicFormula::equality(Term::variable(u), Term::variable(u)));
      return f;
    }
    case Connective::Forall: return Formula::forall(f.variable(), drop_theta(f.body(), u));
    case Connective::Exists: return Formula::exists(f.variable(), drop_theta(f.body(), u));
    case Connective::And: return Formula::conj(drop_theta(f.left(), u), drop_theta(f.right(), u));
    case Connective::Impl: return Formula::impl(drop_theta(f.left(), u), drop_theta(f.right(), u));
    default: return f;
  }
}

// Turns the outermost implication into a conjunction.
Formula impl_to_conj(const Formula& f, bool& done) {
  if (done) return f;
  switch (f.kind()) {
    case Connective::Impl: done = true; return Formula::conj(f.left(), f.right());
    case Connective::Forall: return Formula::forall(f.variable(), impl_to_conj(f.body(), done));
    case Connective::Exists: return Formula::exists(f.variable(), impl_to_conj(f.body(), done));
    case Connective::And: {
      Formula l = impl_to_conj(f.left(), done);
      return Formula::conj(l, impl_to_conj(f.right(), done));
    }
    default: return f;
  }
}

// u_i_j for the first function of the normal form whose name starts with prefix.
std::string u_for(const NiceNormalForm& nf, const std::string& prefix) {
  for (std::size_t i = 0; i < nf.blocks.size(); ++i)
    for (std::size_t j = 0; j < nf.blocks[i].fns.size(); ++j)
      if (nf.blocks[i].fns[j].rfind(prefix, 0) == 0)
        return "u_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  throw InternalError("no function named " + prefix + "*");
}

Outcome mutations() {
  Tally t;
  auto detect = [&](const char* text, const Formula& mutant, const std::string& what) {
    SOFormula phi = parse_so(text);
    EquivVerdict v = check_sentence_translation(phi, mutant, EvalTeam::Unit, signature_of(phi), 2);
    t.expect(v.status == Verdict::Fail && v.model.has_value(),
             what + " not detected: " + verdict_text(v));
  };
  {
    const char* s = "Af f:1. Ef g:1. A x. f(x)=g(x)";
    detect(s, drop_theta(so_to_bid(parse_so(s)), "u_1_1"), "drop Theta_1");
  }
  {
    const char* s = "Af f:1. Ef g:1. A x. ~(f(x)=g(x))";
    bool done = false;
    detect(s, impl_to_conj(so_to_bid(parse_so(s)), done), "swap -> for &");
  }
  {
    const char* s = "Ef f:1. (A x. A y. (f(x)=f(y) -> x=y) & E z. A x. ~(f(x)=z))";
    NiceNormalForm nf = so_nice_normal_form(parse_so(s));
    detect(s, drop_theta(so_to_bid(nf), u_for(nf, "s_z")), "drop Skolem constant Theta_2");
  }
  return t.outcome("mutants=3");
}

Outcome negation(const std::vector<CorpusEntry>& corpus) {
  Tally t;
  for (const auto& c : corpus) {
    Formula star = so_to_id(c.phi);
    Formula neg = Formula::impl(star, Formula::bottom());
    for (int n = 1; n <= 2; ++n)
      for_each_model(signature_of(c.phi), n, {}, [&](const Model& M) {
        t.expect(sentence_true(M, neg) == !sentence_true(M, star),
                 c.text + " at " + model_to_json(M));
        return true;
      });
  }
  return t.outcome("sentences=" + std::to_string(corpus.size()) + " n<=2");
}

Outcome ivee() {
  Tally t;
  std::vector<std::pair<Formula, Formula>> pairs{
      {parse_formula("dep(x)"), parse_formula("dep(y)")},
      {parse_formula("dep(x,y)"), parse_formula("x=y")},
      {parse_formula("dep(x)"), parse_formula("dep(x)")},
  };
  FormulaGenerator gen(kEmpty, 21);
  GenOptions g;
  g.fragment = Fragment::ID;
  g.max_depth = 2;
  while (pairs.size() < 20) pairs.push_back({gen.formula(g), gen.formula(g)});
  for (const auto& [a, b] : pairs) {
    Formula v = Formula::ivee(a, b);
    t.verdict(check_equiv(v, eliminate_ivee(v), kEmpty, 3), render(v));
  }
  return t.outcome("pairs=20 n<=3");
}

Outcome ld() {
  Tally t;
  Signature sig = sig_of(R"({"functions":{"f":1}})");
  FormulaGenerator gen(sig, 8);
  GenOptions g;
  g.fragment = Fragment::LD;
  g.max_depth = 3;
  for (int k = 0; k < 500; ++k) {
    Formula f = gen.sentence(g);
    for (int n = 1; n <= 2; ++n)
      for_each_model(sig, n, {}, [&](const Model& M) {
        try {
          TruthValue v = truth_value(M, f);
          t.expect(v == TruthValue::True || v == TruthValue::EmptyOnly || v == TruthValue::False,
                   "bad value");
        } catch (const std::exception& e) {
          t.expect(false, render(f) + ": " + e.what());
        }
        return true;
      });
  }
  for (const char* s : {"Af f:1. Ef g:1. A x. f(x)=g(x)", "Af f:1. Ef g:1. A x. g(f(x))=x",
                        "Af f:1. Ef g:1. A x. ~(f(x)=g(x))",
                        "Af f:2. Ef g:1. A x. A y. f(x,y)=g(x)"}) {
    SOFormula phi = parse_so(s);
    Formula ld = so_to_ld(phi);
    t.expect(in_fragment(ld, Fragment::LD), std::string("not LD: ") + s);
    t.verdict(check_sentence_translation(phi, ld, EvalTeam::Empty, signature_of(phi), 2), s);
  }
  return t.outcome("sentences=500 n<=2, corpus=4 at the empty team");
}

Outcome cross_oracle() {
  Tally t;
  Signature sig = sig_of(R"({"relations":{"P":1},"functions":{"f":1}})");
  FormulaGenerator gen(sig, 9);
  GenOptions g;
  g.fragment = Fragment::FO;
  g.max_depth = 3;
  std::vector<Model> models;
  for (int n = 1; n <= 3; ++n)
    for_each_model(sig, n, {}, [&](const Model& M) {
      models.push_back(M);
      return true;
    });
  for (int k = 0; k < 300; ++k) {
    Formula f = gen.sentence(g);
    SOFormula c = to_classical(f);
    for (const Model& M : models)
      t.expect(sentence_true(M, f) == so_sentence_true(M, c), render(f) + " at " + model_to_json(M));
  }
  return t.outcome("sentences=300 models=" + std::to_string(models.size()));
}

Outcome round_trip() {
  Tally t;
  Signature sig = sig_of(R"({"relations":{"P":1,"R":2},"functions":{"f":1,"h":2},"constants":["c"]})");
  FormulaGenerator gen(sig, 10);
  for (Fragment fr : {Fragment::FO, Fragment::D, Fragment::ID, Fragment::LD, Fragment::BID}) {
    GenOptions g;
    g.fragment = fr;
    g.max_depth = 4;
    g.term_depth = 2;
    for (int k = 0; k < 200; ++k) {
      Formula f = gen.formula(g);
      const std::string text = render(f);
      t.expect(parse_formula(text, &sig) == f, text);
    }
  }
  return t.outcome("asts=1000");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double limit_s;  // 0: no limit
    std::function<Outcome()> run;
  };
  std::vector<CorpusEntry> corpus = so_corpus();
  std::vector<Criterion> criteria{
      {1, "semantic law suites", 180, laws},
      {2, "equivalences of the dependence and negation atoms", 120, eq_bid},
      {3, "first order to intuitionistic", 300, fo_idl},
      {4, "second order corpus to intuitionistic", 600, [&] { return corpus_to_id(corpus); }},
      {5, "mutation sensitivity", 0, mutations},
      {6, "negation as implication to bottom", 0, [&] { return negation(corpus); }},
      {7, "intuitionistic disjunction elimination", 0, ivee},
      {8, "linear implication fragment", 0, ld},
      {9, "team and Tarskian evaluation agree", 0, cross_oracle},
      {10, "parser round trip", 30, round_trip},
  };
  for (std::size_t i = 0; i < corpus.size(); ++i)
    std::cout << "corpus #" << i + 1 << ": " << corpus[i].text << "\n";
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.ok = false;
      o.detail += " over time limit " + std::to_string(static_cast<int>(c.limit_s)) + "s";
    }
    char head[128];
    std::snprintf(head, sizeof head, "CRITERION %d %s [%.1fs] ", c.number,
                  o.ok ? "PASS" : "FAIL", secs);
    std::cout << head << c.name << ": " << o.detail << std::endl;
    if (!o.ok) ++failed;
  }
  std::cout << (failed ? "ACCEPTANCE FAIL " : "ACCEPTANCE PASS ") << 10 - failed << "/10\n";
  return failed ? 1 : 0;
}
