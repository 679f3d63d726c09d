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

// tlk: command line front end over the C API.
//
// Exit status: 0 true/PASS, 1 false/FAIL, 2 usage or parse error,
// 3 budget exceeded, 4 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tlk/tlk.h"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

struct Failure {
  int code;
  std::string message;
};

int exit_for(tlk_status s) {
  switch (s) {
    case TLK_OK: return kExitTrue;
    case TLK_ERR_PARSE:
    case TLK_ERR_INVALID_INPUT: return kExitUsage;
    case TLK_ERR_BUDGET: return kExitBudget;
    default: return kExitInternal;
  }
}

void check(tlk_status s) {
  if (s != TLK_OK) throw Failure{exit_for(s), tlk_last_error()};
}

struct StrDeleter {
  void operator()(char* p) const { tlk_string_free(p); }
};
using Str = std::unique_ptr<char, StrDeleter>;

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using Sig = std::unique_ptr<tlk_signature, HandleDeleter<tlk_signature, tlk_signature_free>>;
using ModelH = std::unique_ptr<tlk_model, HandleDeleter<tlk_model, tlk_model_free>>;
using TeamH = std::unique_ptr<tlk_team, HandleDeleter<tlk_team, tlk_team_free>>;
using Fml = std::unique_ptr<tlk_formula, HandleDeleter<tlk_formula, tlk_formula_free>>;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot read '" + path + "'"};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Inline JSON when it looks like an object, otherwise a file path.
std::string json_arg(const std::string& arg) {
  std::size_t i = arg.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && arg[i] == '{') return arg;
  return read_file(arg);
}

struct Globals {
  std::uint64_t max_team_rows = 0;
  std::uint64_t max_models = 0;
  double timeout_s = 0;
  int jobs = 1;

  tlk_budget budget() const {
    tlk_budget b;
    tlk_budget_default(&b);
    if (max_team_rows) b.max_team_rows = max_team_rows;
    if (max_models) b.max_models = max_models;
    b.timeout_s = timeout_s;
    b.jobs = jobs;
    return b;
  }
};

struct Input {
  std::string expr;
  std::string file;

  std::string text() const {
    if (!expr.empty() && !file.empty())
      throw Failure{kExitUsage, "give either -e EXPR or FILE, not both"};
    if (!expr.empty()) return expr;
    if (!file.empty()) return read_file(file);
    throw Failure{kExitUsage, "missing formula: use -e EXPR or FILE"};
  }
};

void add_input(CLI::App* cmd, Input& in) {
  cmd->add_option("-e,--expr", in.expr, "formula text");
  cmd->add_option("file", in.file, "file holding the formula");
}

Sig load_sig(const std::string& arg) {
  if (arg.empty()) return nullptr;
  tlk_signature* s = nullptr;
  check(tlk_signature_parse_json(json_arg(arg).c_str(), &s));
  return Sig(s);
}

Fml parse(const std::string& text, tlk_logic logic, const tlk_signature* sig) {
  tlk_formula* f = nullptr;
  check(tlk_formula_parse(text.c_str(), logic, sig, &f));
  return Fml(f);
}

std::string render(const tlk_formula* f) {
  char* s = nullptr;
  check(tlk_formula_render(f, &s));
  return Str(s).get();
}

const std::map<std::string, tlk_logic>& logics() {
  static const std::map<std::string, tlk_logic> m{
      {"bid", TLK_LOGIC_BID}, {"d", TLK_LOGIC_D},   {"id", TLK_LOGIC_ID},
      {"ld", TLK_LOGIC_LD},   {"fo", TLK_LOGIC_FO}, {"so", TLK_LOGIC_SO}};
  return m;
}

bool route_is_so(const std::string& r) {
  return r == "s112d" || r == "pi112id" || r == "so2bid" || r == "so2id" ||
         r == "so2ld";
}

// Formulas are read as second order when they contain a function quantifier.
tlk_logic guess_logic(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  while (in >> word)
    if (word == "Af" || word == "Ef") return TLK_LOGIC_SO;
  return TLK_LOGIC_BID;
}

const std::vector<std::string> kRoutes{"fo2id", "s112d",  "d2id",  "pi112id",
                                       "so2bid", "so2id", "so2ld", "novee"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tlk: team semantics logic workbench"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--max-team-rows", g.max_team_rows, "largest team any step may build");
  app.add_option("--max-models", g.max_models, "largest number of models to enumerate");
  app.add_option("--timeout-s", g.timeout_s, "wall clock limit per evaluation, 0 for none");
  app.add_option("--jobs", g.jobs, "worker threads for model enumeration")
      ->check(CLI::PositiveNumber);

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse, classify and render a formula");
  Input parse_in;
  std::string parse_logic = "bid", parse_sig;
  add_input(cmd_parse, parse_in);
  cmd_parse->add_option("--logic", parse_logic, "bid|d|id|ld|fo|so")
      ->check(CLI::IsMember({"bid", "d", "id", "ld", "fo", "so"}));
  cmd_parse->add_option("--sig", parse_sig, "signature JSON or file");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "decide satisfaction in a model");
  Input eval_in;
  std::string eval_model, eval_team, eval_sig;
  bool eval_empty = false;
  add_input(cmd_eval, eval_in);
  cmd_eval->add_option("-m,--model", eval_model, "model JSON or file")->required();
  cmd_eval->add_option("-t,--team", eval_team, "team JSON or file");
  cmd_eval->add_option("--sig", eval_sig, "signature JSON or file");
  cmd_eval->add_flag("--at-empty-team", eval_empty, "evaluate sentences at the empty team");

  // truthvalue
  auto* cmd_tv = app.add_subcommand("truthvalue", "TRUE, EMPTY_ONLY or FALSE for a sentence");
  Input tv_in;
  std::string tv_model;
  add_input(cmd_tv, tv_in);
  cmd_tv->add_option("-m,--model", tv_model, "model JSON or file")->required();

  // translate
  auto* cmd_tr = app.add_subcommand("translate", "run a translation route");
  Input tr_in;
  std::string tr_route;
  bool tr_trace = false;
  add_input(cmd_tr, tr_in);
  cmd_tr->add_option("--route", tr_route, "translation route")
      ->required()
      ->check(CLI::IsMember(kRoutes));
  cmd_tr->add_flag("--trace", tr_trace, "print every rewrite step");

  // verify
  auto* cmd_ver = app.add_subcommand("verify", "translate and check over all small models");
  Input ver_in;
  std::string ver_route, ver_sig;
  int ver_size = 2;
  bool ver_empty = false;
  add_input(cmd_ver, ver_in);
  cmd_ver->add_option("--route", ver_route, "translation route")
      ->required()
      ->check(CLI::IsMember(kRoutes));
  cmd_ver->add_option("--max-size", ver_size, "largest domain size")->check(CLI::PositiveNumber);
  cmd_ver->add_option("--sig", ver_sig, "signature JSON or file");
  cmd_ver->add_flag("--at-empty-team", ver_empty, "compare at the empty team");

  // laws
  auto* cmd_laws = app.add_subcommand("laws", "run a semantic law suite");
  std::string laws_suite, laws_sig;
  int laws_size = 2, laws_formulas = 0;
  std::uint64_t laws_seed = 1;
  cmd_laws->add_option("--suite", laws_suite, "law suite")
      ->required()
      ->check(CLI::IsMember({"downward", "flat", "empty", "eqbid", "adjoint",
                             "negation", "locality"}));
  cmd_laws->add_option("--sig", laws_sig, "signature JSON or file");
  cmd_laws->add_option("--max-size", laws_size, "largest domain size")->check(CLI::PositiveNumber);
  cmd_laws->add_option("--seed", laws_seed, "generator seed");
  cmd_laws->add_option("--formulas", laws_formulas, "generated formulas, 0 for default");

  // models
  auto* cmd_models = app.add_subcommand("models", "list every model of a signature");
  std::string models_sig;
  int models_size = 1;
  cmd_models->add_option("--sig", models_sig, "signature JSON or file")->required();
  cmd_models->add_option("--size", models_size, "domain size")
      ->required()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const tlk_budget budget = g.budget();

    if (cmd_parse->parsed()) {
      Sig sig = load_sig(parse_sig);
      Fml f = parse(parse_in.text(), logics().at(parse_logic), sig.get());
      char* frags = nullptr;
      check(tlk_formula_fragments(f.get(), &frags));
      Str hold(frags);
      std::cout << render(f.get()) << "\n" << frags << "\n";
      return kExitTrue;
    }

    if (cmd_eval->parsed() || cmd_tv->parsed()) {
      const bool tv = cmd_tv->parsed();
      const std::string text = tv ? tv_in.text() : eval_in.text();
      Sig sig = load_sig(tv ? std::string() : eval_sig);
      tlk_model* m = nullptr;
      check(tlk_model_load_json(json_arg(tv ? tv_model : eval_model).c_str(), nullptr, &m));
      ModelH model(m);
      Fml f = parse(text, guess_logic(text), sig.get());
      if (tv) {
        tlk_truth t;
        check(tlk_truth_value(model.get(), f.get(), &budget, &t));
        static const char* names[] = {"TRUE", "EMPTY_ONLY", "FALSE"};
        std::cout << names[t] << "\n";
        return t == TLK_TRUE ? kExitTrue : kExitFalse;
      }
      TeamH team;
      if (!eval_team.empty()) {
        const int n = tlk_model_size(model.get());
        tlk_team* t = nullptr;
        check(tlk_team_load_json(json_arg(eval_team).c_str(), n, &t));
        team.reset(t);
      }
      int result = 0;
      check(tlk_eval(model.get(), team.get(), f.get(), eval_empty ? 1 : 0, &budget, &result));
      std::cout << (result ? "true" : "false") << "\n";
      return result ? kExitTrue : kExitFalse;
    }

    if (cmd_tr->parsed()) {
      const std::string text = tr_in.text();
      Fml f = parse(text, route_is_so(tr_route) ? TLK_LOGIC_SO : TLK_LOGIC_BID, nullptr);
      tlk_formula* out = nullptr;
      char* trace = nullptr;
      check(tlk_translate(f.get(), tr_route.c_str(), &out, tr_trace ? &trace : nullptr));
      Fml result(out);
      Str hold(trace);
      if (trace) std::cout << trace;
      std::cout << render(result.get()) << "\n";
      return kExitTrue;
    }

    if (cmd_ver->parsed()) {
      const std::string text = ver_in.text();
      Sig sig = load_sig(ver_sig);
      Fml f = parse(text, route_is_so(ver_route) ? TLK_LOGIC_SO : TLK_LOGIC_BID, sig.get());
      tlk_verdict v;
      char* report = nullptr;
      check(tlk_verify(f.get(), ver_route.c_str(), sig.get(), ver_size, ver_empty ? 1 : 0,
                       &budget, &v, &report));
      Str hold(report);
      std::cout << report;
      return v == TLK_PASS ? kExitTrue : v == TLK_FAIL ? kExitFalse : kExitBudget;
    }

    if (cmd_laws->parsed()) {
      Sig sig = load_sig(laws_sig);
      int failures = 0;
      char* report = nullptr;
      check(tlk_laws(laws_suite.c_str(), sig.get(), laws_size, laws_seed, laws_formulas,
                     &budget, &failures, &report));
      Str hold(report);
      std::cout << report;
      return failures == 0 ? kExitTrue : kExitFalse;
    }

    if (cmd_models->parsed()) {
      Sig sig = load_sig(models_sig);
      char* out = nullptr;
      check(tlk_models_enumerate(sig.get(), models_size, &budget, &out));
      Str hold(out);
      std::cout << out;
      return kExitTrue;
    }
  } catch (const Failure& f) {
    std::cerr << "tlk: " << f.message << "\n";
    return f.code;
  }
  return kExitUsage;
}
