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

#include "tlk/equiv.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tlk/error.hpp"
#include "tlk/generate.hpp"
#include "tlk/parser.hpp"
#include "tlk/so_eval.hpp"
#include "tlk/translator.hpp"

namespace tlk {

using nlohmann::json;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Budget: return "BUDGET";
  }
  return "?";
}

namespace {

struct Outcome {
  bool fail = false;
  bool budget = false;
  std::uint64_t teams = 0;
  std::optional<Team> team;
  bool lhs = false;
  bool rhs = false;
  std::string message;
};

std::vector<Model> models_of(const Signature& sig, int n, const Budget& budget) {
  std::vector<Model> out;
  for_each_model(sig, n, budget, [&](const Model& M) {
    out.push_back(M);
    return true;
  });
  return out;
}

Team team_from_mask(const Team& full, std::uint64_t mask) {
  std::vector<bool> keep(full.size());
  for (std::size_t r = 0; r < full.size(); ++r) keep[r] = (mask >> r) & 1;
  return full.subteam(keep);
}

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / std::max<std::size_t>(base, 1))
      return std::numeric_limits<std::size_t>::max();
    out *= base;
  }
  return out;
}

// Runs check on every model of one size, in parallel when jobs > 1, and
// folds the outcomes in enumeration order up to the first failure so the
// verdict never depends on scheduling.
void run_models(const std::vector<Model>& models, int jobs,
                const std::function<Outcome(const Model&)>& check,
                EquivVerdict& v) {
  std::vector<Outcome> out(models.size());
  std::atomic<std::size_t> stop{models.size()};
  auto worker = [&](std::size_t start, std::size_t stride) {
    for (std::size_t i = start; i < models.size(); i += stride) {
      if (i > stop.load()) return;
      try {
        out[i] = check(models[i]);
      } catch (const BudgetExceeded& e) {
        out[i].budget = true;
        out[i].message = e.what();
      }
      if (out[i].fail || out[i].budget) {
        std::size_t cur = stop.load();
        while (i < cur && !stop.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(jobs, models.size()));
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Outcome& o = out[i];
    v.teams_checked += o.teams;
    if (o.budget) {
      v.status = Verdict::Budget;
      v.message = o.message;
      return;
    }
    ++v.models_checked;
    if (o.fail) {
      v.status = Verdict::Fail;
      v.model = models[i];
      v.team = o.team;
      v.lhs = o.lhs;
      v.rhs = o.rhs;
      return;
    }
  }
}

Outcome equiv_on_model(const Model& M, const std::vector<std::string>& vars,
                       const Formula& a, const Formula& b, const CheckOptions& opts) {
  Outcome o;
  const std::size_t rows = power(M.size(), vars.size());
  const std::size_t cap = std::min(opts.budget.max_team_space_rows, kTeamSpaceHardCap);
  if (opts.use_table && rows <= cap) {
    std::optional<std::vector<bool>> ta, tb;
    try {
      ta = satisfying_teams(M, vars, a, opts.budget);
      tb = satisfying_teams(M, vars, b, opts.budget);
    } catch (const BudgetExceeded&) {
      ta.reset();
    }
    if (ta) {
      const Team full = full_team(M, vars);
      for (std::size_t i = 0; i < ta->size(); ++i) {
        ++o.teams;
        if ((*ta)[i] != (*tb)[i]) {
          o.fail = true;
          o.team = team_from_mask(full, i);
          o.lhs = (*ta)[i];
          o.rhs = (*tb)[i];
          return o;
        }
      }
      return o;
    }
  }
  if (rows > cap)
    throw BudgetExceeded("team space of " + std::to_string(rows) +
                         " rows exceeds max_team_space_rows");
  for_each_team(M, vars, opts.budget, [&](const Team& X) {
    ++o.teams;
    bool la = satisfies(M, X, a, opts.budget, opts.eval);
    bool lb = satisfies(M, X, b, opts.budget, opts.eval);
    if (la != lb) {
      o.fail = true;
      o.team = X;
      o.lhs = la;
      o.rhs = lb;
      return false;
    }
    return true;
  });
  return o;
}

}  // namespace

EquivVerdict check_equiv(const Formula& a, const Formula& b, const Signature& sig,
                         int max_size, const CheckOptions& opts) {
  std::set<std::string> fv = free_vars(a);
  for (const std::string& v : free_vars(b)) fv.insert(v);
  const std::vector<std::string> vars(fv.begin(), fv.end());
  EquivVerdict v;
  v.max_size = max_size;
  for (int n = std::max(1, opts.min_size); n <= max_size; ++n) {
    std::vector<Model> models;
    try {
      models = models_of(sig, n, opts.budget);
    } catch (const BudgetExceeded& e) {
      v.status = Verdict::Budget;
      v.message = e.what();
      return v;
    }
    run_models(models, opts.jobs,
               [&](const Model& M) { return equiv_on_model(M, vars, a, b, opts); }, v);
    if (v.status != Verdict::Pass) return v;
  }
  return v;
}

EquivVerdict check_sentence_translation(const SOFormula& so,
                                        const Formula& team_sentence,
                                        EvalTeam at, const Signature& sig,
                                        int max_size, const CheckOptions& opts) {
  if (!free_vars(so).empty()) throw InvalidInput("second order input is not a sentence");
  if (!is_sentence(team_sentence)) throw InvalidInput("team formula is not a sentence");
  EquivVerdict v;
  v.max_size = max_size;
  for (int n = std::max(1, opts.min_size); n <= max_size; ++n) {
    std::vector<Model> models;
    try {
      models = models_of(sig, n, opts.budget);
    } catch (const BudgetExceeded& e) {
      v.status = Verdict::Budget;
      v.message = e.what();
      return v;
    }
    run_models(models, opts.jobs, [&](const Model& M) {
      Outcome o;
      o.teams = 1;
      o.lhs = so_sentence_true(M, so, opts.budget);
      o.rhs = at == EvalTeam::Unit
                  ? sentence_true(M, team_sentence, opts.budget, opts.eval)
                  : satisfies(M, Team(), team_sentence, opts.budget, opts.eval);
      o.fail = o.lhs != o.rhs;
      return o;
    }, v);
    if (v.status != Verdict::Pass) return v;
  }
  return v;
}

std::string verdict_text(const EquivVerdict& v) {
  std::ostringstream out;
  out << verdict_name(v.status) << " models=" << v.models_checked
      << " teams=" << v.teams_checked << " max_size=" << v.max_size << "\n";
  if (v.status == Verdict::Budget) out << "budget: " << v.message << "\n";
  if (v.model) {
    out << "counterexample model: " << model_to_json(*v.model) << "\n";
    if (v.team) out << "counterexample team: " << team_to_json(*v.team) << "\n";
    out << "values: " << (v.lhs ? "true" : "false") << " vs "
        << (v.rhs ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string verdict_json(const EquivVerdict& v) {
  json j;
  j["status"] = verdict_name(v.status);
  j["models_checked"] = v.models_checked;
  j["teams_checked"] = v.teams_checked;
  j["max_size"] = v.max_size;
  if (v.status == Verdict::Budget) j["message"] = v.message;
  if (v.model) {
    json cex;
    cex["model"] = json::parse(model_to_json(*v.model));
    if (v.team) cex["team"] = json::parse(team_to_json(*v.team));
    cex["lhs"] = v.lhs;
    cex["rhs"] = v.rhs;
    j["counterexample"] = cex;
  }
  return j.dump();
}

// ---------------------------------------------------------------------------
// Law suites.

std::string LawReport::text() const {
  std::ostringstream out;
  out << "suite " << suite << ": formulas=" << formulas << " checks=" << checks
      << " failures=" << failures << " expected_failures=" << expected_failures
      << " seed=" << seed << " max_size=" << max_size
      << " sig=" << signature_to_json(signature) << "\n";
  for (const std::string& d : details) out << "  " << d << "\n";
  return out.str();
}

std::string LawReport::json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["signature"] = nlohmann::json::parse(signature_to_json(signature));
  j["max_size"] = max_size;
  j["seed"] = seed;
  j["formulas"] = formulas;
  j["checks"] = checks;
  j["failures"] = failures;
  j["expected_failures"] = expected_failures;
  j["counterexamples"] = nlohmann::json::array();
  for (const std::string& d : details)
    j["counterexamples"].push_back(nlohmann::json::parse(d));
  return j.dump();
}

const std::vector<std::string>& law_suite_names() {
  static const std::vector<std::string> names{
      "downward", "flat", "empty", "eqbid", "adjoint", "negation", "locality"};
  return names;
}

namespace {

const std::vector<std::string> kXY{"x", "y"};

class SuiteRunner {
 public:
  SuiteRunner(LawReport& r, const Signature& sig, const LawOptions& opts)
      : r_(r), sig_(sig), opts_(opts), gen_(sig, r.seed) {}

  GenOptions gen(Fragment frag, std::vector<std::string> vars = kXY) const {
    GenOptions g;
    g.fragment = frag;
    g.vars = std::move(vars);
    g.max_depth = opts_.max_depth;
    return g;
  }

  void each_model(const std::function<void(const Model&)>& fn) {
    for (int n = 1; n <= r_.max_size; ++n)
      for_each_model(sig_, n, opts_.budget, [&](const Model& M) {
        fn(M);
        return true;
      });
  }

  void fail(json detail) {
    ++r_.failures;
    if (r_.details.size() < 5) r_.details.push_back(detail.dump());
  }

  json where(const Formula& f, const Model& M) const {
    json d;
    d["formula"] = render(f);
    d["model"] = json::parse(model_to_json(M));
    return d;
  }

  void downward() {
    for (int k = 0; k < opts_.formulas; ++k) {
      Formula f = gen_.formula(gen(Fragment::BID));
      ++r_.formulas;
      each_model([&](const Model& M) {
        std::vector<bool> tab = satisfying_teams(M, kXY, f, opts_.budget);
        for (std::size_t i = 0; i < tab.size(); ++i) {
          if (!tab[i]) continue;
          for (std::size_t b = 1; b <= i; b <<= 1) {
            if (!(i & b)) continue;
            ++r_.checks;
            if (!tab[i & ~b]) {
              json d = where(f, M);
              d["team_mask"] = i;
              d["subteam_mask"] = i & ~b;
              fail(d);
              return;
            }
          }
        }
      });
    }
  }

  void flat() {
    for (int k = 0; k < opts_.formulas; ++k) {
      Formula f = gen_.formula(gen(Fragment::FO));
      ++r_.formulas;
      each_model([&](const Model& M) {
        std::vector<bool> tab = satisfying_teams(M, kXY, f, opts_.budget);
        for (std::size_t i = 0; i < tab.size(); ++i) {
          ++r_.checks;
          bool all = true;
          for (std::size_t b = 0; (std::size_t{1} << b) <= i; ++b)
            if ((i >> b) & 1) all = all && tab[std::size_t{1} << b];
          if (tab[i] != all) {
            json d = where(f, M);
            d["team_mask"] = i;
            fail(d);
            return;
          }
        }
      });
    }
  }

  void empty() {
    for (int k = 0; k < opts_.formulas; ++k) {
      Formula f = gen_.formula(gen(k % 2 == 0 ? Fragment::D : Fragment::ID));
      ++r_.formulas;
      each_model([&](const Model& M) {
        ++r_.checks;
        if (!satisfies(M, Team(kXY), f, opts_.budget, {Engine::Table, false}))
          fail(where(f, M));
      });
    }
    // Linear implication loses the property: ∅ fails (x=x) -* ~(x=x).
    Formula witness = parse_formula("((x=x) -* ~(x=x))");
    bool observed = false;
    each_model([&](const Model& M) {
      if (!satisfies(M, Team({"x"}), witness, opts_.budget)) observed = true;
    });
    if (observed) {
      ++r_.expected_failures;
      json d;
      d["expected"] = true;
      d["formula"] = render(witness);
      d["team"] = "empty";
      r_.details.push_back(d.dump());
    } else {
      json d;
      d["missing_expected_failure"] = render(witness);
      fail(d);
    }
  }

  void locality() {
    for (int k = 0; k < opts_.formulas; ++k) {
      Formula f = gen_.formula(gen(Fragment::BID));
      if (free_vars(f).count("y"))
        f = gen_.below(2) == 0 ? Formula::forall("y", f) : Formula::exists("y", f);
      ++r_.formulas;
      each_model([&](const Model& M) {
        const std::size_t n = M.size();
        std::vector<bool> small = satisfying_teams(M, {"x"}, f, opts_.budget);
        std::vector<bool> big = satisfying_teams(M, kXY, f, opts_.budget);
        for (std::size_t i = 0; i < big.size(); ++i) {
          ++r_.checks;
          std::size_t proj = 0;
          for (std::size_t row = 0; row < n * n; ++row)
            if ((i >> row) & 1) proj |= std::size_t{1} << (row / n);
          if (big[i] != small[proj]) {
            json d = where(f, M);
            d["team_mask"] = i;
            fail(d);
            return;
          }
        }
      });
    }
  }

  void equiv(const Formula& a, const Formula& b) {
    ++r_.formulas;
    CheckOptions co;
    co.budget = opts_.budget;
    co.jobs = opts_.jobs;
    EquivVerdict v = check_equiv(a, b, sig_, r_.max_size, co);
    r_.checks += v.teams_checked;
    if (v.status == Verdict::Budget) throw BudgetExceeded(v.message);
    if (v.status == Verdict::Fail) {
      json d = json::parse(verdict_json(v));
      d["lhs_formula"] = render(a);
      d["rhs_formula"] = render(b);
      fail(d);
    }
  }

  void eqbid() {
    auto P = [](const char* s) { return parse_formula(s); };
    // Dependence atoms as implications between constancy atoms.
    for (const char* s : {"dep(x,y)", "dep(y,x)", "dep(x,x)", "dep(x,y,y)",
                          "dep(y,x,x)", "dep(x,y,x)"}) {
      Formula d = P(s);
      equiv(d, expand_dep_atom(d));
    }
    // Negated atoms as implications to bottom.
    for (const char* s : {"~(x=y)", "~(x=x)", "ndep(x)", "ndep(x,y)", "ndep(y,x,x)"}) {
      Formula l = P(s);
      equiv(l, literal_to_id(l));
    }
    if (sig_.function_arity("f") == 1) {
      Formula d = Formula::dep({Term::apply("f", {Term::variable("x")}),
                                Term::variable("y")});
      equiv(d, expand_dep_atom(d));
      Formula l = Formula::neg_atom(AtomicFormula::equality(
          Term::apply("f", {Term::variable("x")}), Term::variable("y")));
      equiv(l, literal_to_id(l));
    }
    const Formula bot = Formula::bottom();
    for (int k = 0; k < opts_.formulas / 2; ++k) {
      Formula a = gen_.formula(gen(Fragment::FO));
      Formula b = gen_.formula(gen(Fragment::FO));
      equiv(Formula::impl(Formula::impl(a, bot), bot), a);
      equiv(Formula::tensor(a, b), Formula::impl(Formula::impl(a, bot), b));
    }
  }

  // (for all M,X: A(phi,psi) => chi) iff (for all M,X: phi => B(psi,chi))
  void adjoint() {
    const int triples = std::max(1, std::min(opts_.formulas, 100));
    for (int k = 0; k < triples; ++k) {
      Formula a = gen_.formula(gen(Fragment::BID));
      Formula b = gen_.formula(gen(Fragment::BID));
      Formula c = gen_.formula(gen(Fragment::BID));
      ++r_.formulas;
      bool conj_ok = true, impl_ok = true, tensor_ok = true, limpl_ok = true;
      Formula ab = Formula::conj(a, b), bc = Formula::impl(b, c);
      Formula ta = Formula::tensor(a, b), lb = Formula::limpl(b, c);
      each_model([&](const Model& M) {
        auto t_ab = satisfying_teams(M, kXY, ab, opts_.budget);
        auto t_c = satisfying_teams(M, kXY, c, opts_.budget);
        auto t_a = satisfying_teams(M, kXY, a, opts_.budget);
        auto t_bc = satisfying_teams(M, kXY, bc, opts_.budget);
        auto t_ta = satisfying_teams(M, kXY, ta, opts_.budget);
        auto t_lb = satisfying_teams(M, kXY, lb, opts_.budget);
        for (std::size_t i = 0; i < t_c.size(); ++i) {
          r_.checks += 2;
          if (t_ab[i] && !t_c[i]) conj_ok = false;
          if (t_a[i] && !t_bc[i]) impl_ok = false;
          if (t_ta[i] && !t_c[i]) tensor_ok = false;
          if (t_a[i] && !t_lb[i]) limpl_ok = false;
        }
      });
      if (conj_ok != impl_ok || tensor_ok != limpl_ok) {
        json d;
        d["phi"] = render(a);
        d["psi"] = render(b);
        d["chi"] = render(c);
        d["and_vs_implication"] = {conj_ok, impl_ok};
        d["tensor_vs_linear"] = {tensor_ok, limpl_ok};
        fail(d);
      }
    }
  }

  void negation() {
    for (int k = 0; k < opts_.formulas; ++k) {
      Formula f = gen_.sentence(gen(Fragment::BID));
      Formula neg = Formula::impl(f, Formula::bottom());
      ++r_.formulas;
      each_model([&](const Model& M) {
        ++r_.checks;
        auto tf = satisfying_teams(M, {}, f, opts_.budget);
        auto tn = satisfying_teams(M, {}, neg, opts_.budget);
        if (tn[1] == tf[1]) fail(where(f, M));
      });
    }
  }

 private:
  LawReport& r_;
  const Signature& sig_;
  const LawOptions& opts_;
  FormulaGenerator gen_;
};

}  // namespace

LawReport run_law_suite(const std::string& suite, const Signature& sig,
                        int max_size, std::uint64_t seed, const LawOptions& opts) {
  LawReport r;
  r.suite = suite;
  r.signature = sig;
  r.max_size = max_size;
  r.seed = seed;
  SuiteRunner run(r, sig, opts);
  if (suite == "downward") run.downward();
  else if (suite == "flat") run.flat();
  else if (suite == "empty") run.empty();
  else if (suite == "eqbid") run.eqbid();
  else if (suite == "adjoint") run.adjoint();
  else if (suite == "negation") run.negation();
  else if (suite == "locality") run.locality();
  else throw InvalidInput("unknown law suite '" + suite + "'");
  return r;
}

}  // namespace tlk
