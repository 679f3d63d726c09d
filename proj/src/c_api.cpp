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

#include "tlk/tlk.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tlk/ast.hpp"
#include "tlk/equiv.hpp"
#include "tlk/error.hpp"
#include "tlk/model.hpp"
#include "tlk/parser.hpp"
#include "tlk/so_eval.hpp"
#include "tlk/team_eval.hpp"
#include "tlk/translator.hpp"

struct tlk_signature {
  tlk::Signature sig;
};
struct tlk_model {
  tlk::Model model;
};
struct tlk_team {
  tlk::Team team;
};
struct tlk_formula {
  std::optional<tlk::Formula> team;
  std::optional<tlk::SOFormula> so;
};

namespace {

thread_local std::string last_error;

template <typename F>
tlk_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return TLK_OK;
  } catch (const tlk::ParseError& e) {
    last_error = e.what();
    return TLK_ERR_PARSE;
  } catch (const tlk::InvalidInput& e) {
    last_error = e.what();
    return TLK_ERR_INVALID_INPUT;
  } catch (const tlk::BudgetExceeded& e) {
    last_error = std::string("budget exceeded: ") + e.what();
    return TLK_ERR_BUDGET;
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return TLK_ERR_PARSE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TLK_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) throw tlk::InvalidInput(std::string(what) + " must not be null");
}

tlk::Budget to_budget(const tlk_budget* b) {
  tlk::Budget out;
  if (!b) return out;
  out.max_team_rows = b->max_team_rows;
  out.max_team_space_rows = b->max_team_space_rows;
  out.max_models = b->max_models;
  out.timeout_s = b->timeout_s;
  return out;
}

int to_jobs(const tlk_budget* b) { return b && b->jobs > 0 ? b->jobs : 1; }

const tlk::Formula& team_formula(const tlk_formula* f) {
  if (!f->team) throw tlk::InvalidInput("expected a team logic formula, got second order");
  return *f->team;
}

const tlk::SOFormula& so_formula(const tlk_formula* f) {
  if (!f->so) throw tlk::InvalidInput("expected a second order formula");
  return *f->so;
}

bool so_route(const std::string& route) {
  return route == "s112d" || route == "pi112id" || route == "so2bid" ||
         route == "so2id" || route == "so2ld";
}

tlk::Formula translate(const tlk_formula* f, const std::string& route,
                       tlk::TranslationTrace* trace) {
  if (route == "fo2id") return tlk::fo_to_id(team_formula(f), trace);
  if (route == "d2id") return tlk::d_sentence_to_id(team_formula(f), trace);
  if (route == "novee") return tlk::eliminate_all_ivee(team_formula(f), trace);
  if (route == "s112d") return tlk::sigma11_to_d(so_formula(f), trace);
  if (route == "pi112id") return tlk::pi11_to_id(so_formula(f), trace);
  if (route == "so2bid") return tlk::so_to_bid(so_formula(f), trace);
  if (route == "so2id") return tlk::so_to_id(so_formula(f), trace);
  if (route == "so2ld") return tlk::so_to_ld(so_formula(f), trace);
  throw tlk::ParseError("unknown route '" + route + "'", {0, route.size()});
}

}  // namespace

extern "C" {

const char* tlk_version(void) { return "1.0.0"; }

const char* tlk_last_error(void) { return last_error.c_str(); }

void tlk_string_free(char* s) { std::free(s); }

void tlk_budget_default(tlk_budget* out) {
  if (!out) return;
  tlk::Budget b;
  out->max_team_rows = b.max_team_rows;
  out->max_team_space_rows = b.max_team_space_rows;
  out->max_models = b.max_models;
  out->timeout_s = b.timeout_s;
  out->jobs = 1;
}

tlk_status tlk_signature_parse_json(const char* json, tlk_signature** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new tlk_signature{tlk::parse_signature_json(json)};
  });
}

tlk_status tlk_signature_to_json(const tlk_signature* sig, char** out) {
  return guarded([&] {
    need(sig, "sig");
    need(out, "out");
    *out = dup(tlk::signature_to_json(sig->sig));
  });
}

void tlk_signature_free(tlk_signature* sig) { delete sig; }

tlk_status tlk_model_load_json(const char* json, const tlk_signature* expected,
                               tlk_model** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new tlk_model{tlk::load_model(json, expected ? &expected->sig : nullptr)};
  });
}

tlk_status tlk_model_to_json(const tlk_model* m, char** out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = dup(tlk::model_to_json(m->model));
  });
}

int tlk_model_size(const tlk_model* m) { return m ? m->model.size() : 0; }

void tlk_model_free(tlk_model* m) { delete m; }

tlk_status tlk_models_enumerate(const tlk_signature* sig, int size,
                                const tlk_budget* budget, char** out) {
  return guarded([&] {
    need(sig, "sig");
    need(out, "out");
    if (size < 1) throw tlk::InvalidInput("domain size must be at least 1");
    std::ostringstream s;
    tlk::for_each_model(sig->sig, size, to_budget(budget), [&](const tlk::Model& M) {
      s << tlk::model_to_json(M) << "\n";
      return true;
    });
    *out = dup(s.str());
  });
}

tlk_status tlk_team_load_json(const char* json, int domain_size, tlk_team** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new tlk_team{tlk::load_team(json, domain_size)};
  });
}

void tlk_team_free(tlk_team* t) { delete t; }

tlk_status tlk_formula_parse(const char* text, tlk_logic logic,
                             const tlk_signature* sig, tlk_formula** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    const tlk::Signature* s = sig ? &sig->sig : nullptr;
    if (logic == TLK_LOGIC_SO) {
      *out = new tlk_formula{std::nullopt, tlk::parse_so(text, s)};
      return;
    }
    tlk::Formula f = tlk::parse_formula(text, s);
    std::optional<tlk::Fragment> frag;
    switch (logic) {
      case TLK_LOGIC_D: frag = tlk::Fragment::D; break;
      case TLK_LOGIC_ID: frag = tlk::Fragment::ID; break;
      case TLK_LOGIC_LD: frag = tlk::Fragment::LD; break;
      case TLK_LOGIC_FO: frag = tlk::Fragment::FO; break;
      case TLK_LOGIC_BID: break;
      default: throw tlk::InvalidInput("unknown logic");
    }
    if (frag && !tlk::in_fragment(f, *frag))
      throw tlk::InvalidInput(std::string("formula is not in ") +
                              tlk::fragment_name(*frag) + ": " + tlk::render(f));
    *out = new tlk_formula{f, std::nullopt};
  });
}

void tlk_formula_free(tlk_formula* f) { delete f; }

int tlk_formula_is_second_order(const tlk_formula* f) {
  return f && f->so ? 1 : 0;
}

tlk_status tlk_formula_render(const tlk_formula* f, char** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    *out = dup(f->so ? tlk::render(*f->so) : tlk::render(*f->team));
  });
}

tlk_status tlk_formula_fragments(const tlk_formula* f, char** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    nlohmann::json j;
    if (f->so) {
      j["least"] = "SO";
      j["members"] = {"SO"};
    } else {
      tlk::FragmentInfo info = tlk::fragment_of(*f->team);
      j["least"] = tlk::fragment_name(info.least);
      j["members"] = nlohmann::json::array();
      for (tlk::Fragment m : info.members) j["members"].push_back(tlk::fragment_name(m));
    }
    *out = dup(j.dump());
  });
}

tlk_status tlk_formula_signature(const tlk_formula* f, tlk_signature** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    *out = new tlk_signature{f->so ? tlk::signature_of(*f->so)
                                   : tlk::signature_of(*f->team)};
  });
}

tlk_status tlk_eval(const tlk_model* m, const tlk_team* team, const tlk_formula* f,
                    int at_empty_team, const tlk_budget* budget, int* result) {
  return guarded([&] {
    need(m, "model");
    need(f, "formula");
    need(result, "result");
    const tlk::Budget b = to_budget(budget);
    if (f->so) {
      *result = tlk::so_sentence_true(m->model, *f->so, b) ? 1 : 0;
      return;
    }
    if (team) {
      *result = tlk::satisfies(m->model, team->team, *f->team, b) ? 1 : 0;
      return;
    }
    if (!tlk::is_sentence(*f->team))
      throw tlk::InvalidInput("formula has free variables; give a team");
    const tlk::Team X = at_empty_team ? tlk::Team() : tlk::Team::unit();
    *result = tlk::satisfies(m->model, X, *f->team, b) ? 1 : 0;
  });
}

tlk_status tlk_truth_value(const tlk_model* m, const tlk_formula* f,
                           const tlk_budget* budget, tlk_truth* result) {
  return guarded([&] {
    need(m, "model");
    need(f, "formula");
    need(result, "result");
    switch (tlk::truth_value(m->model, team_formula(f), to_budget(budget))) {
      case tlk::TruthValue::True: *result = TLK_TRUE; break;
      case tlk::TruthValue::EmptyOnly: *result = TLK_EMPTY_ONLY; break;
      case tlk::TruthValue::False: *result = TLK_FALSE; break;
    }
  });
}

tlk_status tlk_translate(const tlk_formula* f, const char* route, tlk_formula** out,
                         char** trace) {
  return guarded([&] {
    need(f, "formula");
    need(route, "route");
    need(out, "out");
    tlk::TranslationTrace steps;
    tlk::Formula result = translate(f, route, trace ? &steps : nullptr);
    if (trace) *trace = dup(tlk::render_trace(steps));
    *out = new tlk_formula{result, std::nullopt};
  });
}

tlk_status tlk_verify(const tlk_formula* f, const char* route,
                      const tlk_signature* sig, int max_size, int at_empty_team,
                      const tlk_budget* budget, tlk_verdict* verdict, char** report) {
  return guarded([&] {
    need(f, "formula");
    need(route, "route");
    need(verdict, "verdict");
    if (max_size < 1) throw tlk::InvalidInput("max size must be at least 1");
    const std::string r = route;
    tlk::Formula out = translate(f, r, nullptr);
    tlk::CheckOptions opts;
    opts.budget = to_budget(budget);
    opts.jobs = to_jobs(budget);
    tlk::Signature s;
    if (sig) s = sig->sig;
    else s = f->so ? tlk::signature_of(*f->so) : tlk::signature_of(*f->team);
    tlk::EquivVerdict v;
    if (so_route(r)) {
      v = tlk::check_sentence_translation(
          *f->so, out, at_empty_team ? tlk::EvalTeam::Empty : tlk::EvalTeam::Unit,
          s, max_size, opts);
    } else {
      v = tlk::check_equiv(*f->team, out, s, max_size, opts);
    }
    switch (v.status) {
      case tlk::Verdict::Pass: *verdict = TLK_PASS; break;
      case tlk::Verdict::Fail: *verdict = TLK_FAIL; break;
      case tlk::Verdict::Budget: *verdict = TLK_BUDGET; break;
    }
    if (report) *report = dup(tlk::verdict_text(v) + tlk::verdict_json(v) + "\n");
  });
}

tlk_status tlk_laws(const char* suite, const tlk_signature* sig, int max_size,
                    uint64_t seed, int formulas, const tlk_budget* budget,
                    int* failures, char** report) {
  return guarded([&] {
    need(suite, "suite");
    need(failures, "failures");
    if (max_size < 1) throw tlk::InvalidInput("max size must be at least 1");
    tlk::LawOptions opts;
    opts.budget = to_budget(budget);
    opts.jobs = to_jobs(budget);
    if (formulas > 0) opts.formulas = formulas;
    tlk::Signature s;
    if (sig) s = sig->sig;
    tlk::LawReport r = tlk::run_law_suite(suite, s, max_size, seed, opts);
    *failures = r.failures;
    if (report) *report = dup(r.text() + r.json() + "\n");
  });
}

}  // extern "C"
