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

#include "tlk/so_eval.hpp"

#include <limits>

#include "tlk/error.hpp"

namespace tlk {
namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp, std::uint64_t cap,
                        const char* what) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > cap) throw BudgetExceeded(what);
  }
  return static_cast<std::size_t>(r);
}

// Compiled form: variables and function variables live in numbered slots.
struct STerm {
  enum class K : std::uint8_t { Var, Const, SigFn, FnVar } k = K::Var;
  int index = 0;  // var slot, constant value, or fn-var slot
  const std::vector<int>* table = nullptr;
  std::vector<STerm> args;
};

struct SNode {
  SoConnective kind = SoConnective::Atom;
  int a = -1;
  int b = -1;
  int slot = -1;   // variable or function variable slot
  int arity = 0;
  bool eq = false;
  const std::vector<std::uint8_t>* rel = nullptr;
  std::vector<STerm> terms;
  bool uses_slot = true;  // function quantifier: body applies the variable
};

class Evaluator {
 public:
  Evaluator(const Model& M, const Budget& B) : M_(M), B_(B), deadline_(B.timeout_s) {}

  int compile(const SOFormula& f) {
    SNode nd;
    nd.kind = f.kind();
    switch (f.kind()) {
      case SoConnective::Atom: {
        const AtomicFormula& at = f.atomic();
        nd.eq = at.is_equality();
        if (!nd.eq) {
          const auto arity = M_.signature().relation_arity(at.relation);
          if (!arity || *arity != static_cast<int>(at.args.size())) {
            throw InvalidInput("model does not interpret relation '" + at.relation + "'");
          }
          nd.rel = &M_.relation_table(at.relation);
        }
        for (const Term& t : at.args) nd.terms.push_back(compile_term(t));
        break;
      }
      case SoConnective::Not:
        nd.a = compile(f.operand());
        break;
      case SoConnective::Forall:
      case SoConnective::Exists: {
        nd.slot = var_slot(f.variable());
        auto found = var_scope_.find(f.variable());
        const int saved = found == var_scope_.end() ? -1 : found->second;
        var_scope_[f.variable()] = nd.slot;
        nd.a = compile(f.body());
        var_scope_[f.variable()] = saved;
        break;
      }
      case SoConnective::ForallFn:
      case SoConnective::ExistsFn: {
        nd.slot = static_cast<int>(fn_arity_.size());
        nd.arity = f.arity();
        fn_arity_.push_back(f.arity());
        fn_used_.push_back(false);
        auto it = fn_scope_.find(f.variable());
        const int saved = it == fn_scope_.end() ? -1 : it->second;
        fn_scope_[f.variable()] = nd.slot;
        nd.a = compile(f.body());
        nd.uses_slot = fn_used_[static_cast<std::size_t>(nd.slot)];
        if (saved < 0) {
          fn_scope_.erase(f.variable());
        } else {
          fn_scope_[f.variable()] = saved;
        }
        break;
      }
      default:
        nd.a = compile(f.left());
        nd.b = compile(f.right());
        break;
    }
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size() - 1);
  }

  // Binds free variables and function variables from the caller.
  void bind_free(const FunctionEnvironment& env, const Assignment& s) {
    for (const auto& [name, value] : s) {
      if (value < 0 || value >= M_.size()) throw InvalidInput("assignment value out of range");
      free_values_[name] = value;
    }
    for (const auto& [name, table] : env) {
      const std::size_t size = checked_pow(static_cast<std::size_t>(M_.size()),
                                           static_cast<std::size_t>(table.arity),
                                           std::numeric_limits<std::uint32_t>::max(),
                                           "function table too large");
      if (table.values.size() != size) {
        throw InvalidInput("function table for '" + name + "' is not total");
      }
      free_fns_[name] = &table;
    }
  }

  bool run(int root) {
    vals_.assign(var_names_.size(), 0);
    for (std::size_t i = 0; i < var_names_.size(); ++i) {
      if (free_slot_[i]) vals_[i] = free_values_.at(var_names_[i]);
    }
    fns_.assign(fn_arity_.size() + free_fn_slots_.size(), nullptr);
    for (const auto& [slot, name] : free_fn_slots_) fns_[static_cast<std::size_t>(slot)] = &free_fns_.at(name)->values;
    return eval(root);
  }

 private:
  int var_slot(const std::string& name) {
    var_names_.push_back(name);
    free_slot_.push_back(false);
    return static_cast<int>(var_names_.size() - 1);
  }

  STerm compile_term(const Term& t) {
    STerm out;
    switch (t.kind) {
      case Term::Kind::Variable: {
        auto it = var_scope_.find(t.name);
        if (it != var_scope_.end() && it->second >= 0) {
          out.index = it->second;
        } else {
          if (!free_values_.count(t.name)) {
            throw InvalidInput("unbound variable '" + t.name + "'");
          }
          auto fit = free_var_slot_.find(t.name);
          if (fit == free_var_slot_.end()) {
            const int s = var_slot(t.name);
            free_slot_[static_cast<std::size_t>(s)] = true;
            fit = free_var_slot_.emplace(t.name, s).first;
          }
          out.index = fit->second;
        }
        out.k = STerm::K::Var;
        break;
      }
      case Term::Kind::Constant:
        out.k = STerm::K::Const;
        out.index = M_.constant(t.name);
        break;
      case Term::Kind::Apply: {
        for (const Term& a : t.args) out.args.push_back(compile_term(a));
        auto it = fn_scope_.find(t.name);
        if (it != fn_scope_.end()) {
          if (fn_arity_[static_cast<std::size_t>(it->second)] != static_cast<int>(t.args.size())) {
            throw InvalidInput("arity mismatch for function variable '" + t.name + "'");
          }
          out.k = STerm::K::FnVar;
          out.index = it->second;
          fn_used_[static_cast<std::size_t>(it->second)] = true;
          break;
        }
        const auto arity = M_.signature().function_arity(t.name);
        if (arity) {
          if (*arity != static_cast<int>(t.args.size())) {
            throw InvalidInput("arity mismatch for function '" + t.name + "'");
          }
          out.k = STerm::K::SigFn;
          out.table = &M_.function_table(t.name);
          break;
        }
        auto fit = free_fns_.find(t.name);
        if (fit == free_fns_.end()) {
          throw InvalidInput("unbound function symbol '" + t.name + "'");
        }
        if (fit->second->arity != static_cast<int>(t.args.size())) {
          throw InvalidInput("arity mismatch for function variable '" + t.name + "'");
        }
        out.k = STerm::K::FnVar;
        out.index = free_fn_slot(t.name);
        break;
      }
    }
    return out;
  }

  int free_fn_slot(const std::string& name) {
    for (const auto& [slot, n] : free_fn_slots_) {
      if (n == name) return slot;
    }
    // Slots above any bound slot; offset fixed up when running.
    const int slot = 1'000'000 + static_cast<int>(free_fn_slots_.size());
    free_fn_slots_[slot] = name;
    return slot;
  }

 public:
  // Renumbers free function slots to follow the bound ones.
  void finalize() {
    std::map<int, int> remap;
    std::map<int, std::string> fixed;
    int next = static_cast<int>(fn_arity_.size());
    for (const auto& [slot, name] : free_fn_slots_) {
      remap[slot] = next;
      fixed[next] = name;
      ++next;
    }
    free_fn_slots_ = fixed;
    for (auto& nd : nodes_) {
      for (auto& t : nd.terms) fix(t, remap);
    }
  }

 private:
  static void fix(STerm& t, const std::map<int, int>& remap) {
    if (t.k == STerm::K::FnVar) {
      auto it = remap.find(t.index);
      if (it != remap.end()) t.index = it->second;
    }
    for (auto& a : t.args) fix(a, remap);
  }

  int term_value(const STerm& t) const {
    switch (t.k) {
      case STerm::K::Var:
        return vals_[static_cast<std::size_t>(t.index)];
      case STerm::K::Const:
        return t.index;
      case STerm::K::SigFn:
      case STerm::K::FnVar: {
        std::size_t idx = 0;
        for (const STerm& a : t.args) idx = idx * static_cast<std::size_t>(M_.size()) + static_cast<std::size_t>(term_value(a));
        const std::vector<int>& table =
            t.k == STerm::K::SigFn ? *t.table : *fns_[static_cast<std::size_t>(t.index)];
        return table[idx];
      }
    }
    return 0;
  }

  bool eval(int id) {
    if ((++ticks_ & 0xffffu) == 0) deadline_.check();
    const SNode& nd = nodes_[static_cast<std::size_t>(id)];
    switch (nd.kind) {
      case SoConnective::Atom: {
        if (nd.eq) return term_value(nd.terms[0]) == term_value(nd.terms[1]);
        std::size_t idx = 0;
        for (const STerm& a : nd.terms) idx = idx * static_cast<std::size_t>(M_.size()) + static_cast<std::size_t>(term_value(a));
        return (*nd.rel)[idx] != 0;
      }
      case SoConnective::Not:
        return !eval(nd.a);
      case SoConnective::And:
        return eval(nd.a) && eval(nd.b);
      case SoConnective::Or:
        return eval(nd.a) || eval(nd.b);
      case SoConnective::Implies:
        return !eval(nd.a) || eval(nd.b);
      case SoConnective::Forall:
      case SoConnective::Exists: {
        const bool all = nd.kind == SoConnective::Forall;
        int& v = vals_[static_cast<std::size_t>(nd.slot)];
        for (int a = 0; a < M_.size(); ++a) {
          v = a;
          if (eval(nd.a) != all) return !all;
        }
        return all;
      }
      case SoConnective::ForallFn:
      case SoConnective::ExistsFn: {
        const bool all = nd.kind == SoConnective::ForallFn;
        // A function variable the body never applies cannot matter, and
        // every arity admits at least one table.
        if (!nd.uses_slot) return eval(nd.a);
        const std::size_t size = checked_pow(static_cast<std::size_t>(M_.size()),
                                             static_cast<std::size_t>(nd.arity),
                                             B_.max_functions, "function table too large");
        checked_pow(static_cast<std::size_t>(M_.size()), size, B_.max_functions,
                    "function table enumeration exceeds budget");
        std::vector<int> table(size, 0);
        const std::vector<int>* saved = fns_[static_cast<std::size_t>(nd.slot)];
        fns_[static_cast<std::size_t>(nd.slot)] = &table;
        bool result = all;
        while (true) {
          if (eval(nd.a) != all) {
            result = !all;
            break;
          }
          std::size_t i = size;
          bool done = false;
          while (true) {
            if (i == 0) {
              done = true;
              break;
            }
            --i;
            if (++table[i] < M_.size()) break;
            table[i] = 0;
          }
          if (done) break;
        }
        fns_[static_cast<std::size_t>(nd.slot)] = saved;
        return result;
      }
    }
    throw InternalError("unreachable SO connective");
  }

  const Model& M_;
  const Budget& B_;
  Deadline deadline_;
  std::uint64_t ticks_ = 0;
  std::vector<SNode> nodes_;
  std::vector<std::string> var_names_;
  std::vector<bool> free_slot_;
  std::map<std::string, int> var_scope_;
  std::map<std::string, int> free_var_slot_;
  std::map<std::string, int> fn_scope_;
  std::vector<int> fn_arity_;
  std::vector<bool> fn_used_;
  std::map<std::string, int> free_values_;
  std::map<std::string, const FunctionTable*> free_fns_;
  std::map<int, std::string> free_fn_slots_;
  std::vector<int> vals_;
  std::vector<const std::vector<int>*> fns_;
};

}  // namespace

void for_each_function_table(const Model& M, int arity, const Budget& budget,
                             const std::function<bool(const FunctionTable&)>& visit) {
  if (arity < 1) throw InvalidInput("function tables need arity >= 1");
  const std::size_t size = checked_pow(static_cast<std::size_t>(M.size()),
                                       static_cast<std::size_t>(arity),
                                       budget.max_functions, "function table too large");
  checked_pow(static_cast<std::size_t>(M.size()), size, budget.max_functions,
              "function table enumeration exceeds budget");
  FunctionTable t{arity, std::vector<int>(size, 0)};
  while (true) {
    if (!visit(t)) return;
    std::size_t i = size;
    while (true) {
      if (i == 0) return;
      --i;
      if (++t.values[i] < M.size()) break;
      t.values[i] = 0;
    }
  }
}

std::vector<FunctionTable> enumerate_function_tables(const Model& M, int arity,
                                                     const Budget& budget) {
  std::vector<FunctionTable> out;
  for_each_function_table(M, arity, budget, [&](const FunctionTable& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

int eval_term(const Model& M, const Term& t, const FunctionEnvironment& env,
              const Assignment& s) {
  switch (t.kind) {
    case Term::Kind::Variable: {
      auto it = s.find(t.name);
      if (it == s.end()) throw InvalidInput("unbound variable '" + t.name + "'");
      return it->second;
    }
    case Term::Kind::Constant:
      return M.constant(t.name);
    case Term::Kind::Apply: {
      std::vector<int> args;
      for (const Term& a : t.args) args.push_back(eval_term(M, a, env, s));
      auto it = env.find(t.name);
      if (it != env.end()) {
        if (it->second.arity != static_cast<int>(args.size())) {
          throw InvalidInput("arity mismatch for '" + t.name + "'");
        }
        return it->second.values[M.tuple_index(args)];
      }
      return M.apply(t.name, args);
    }
  }
  return 0;
}

bool so_satisfies(const Model& M, const SOFormula& phi,
                  const FunctionEnvironment& env, const Assignment& s,
                  const Budget& budget) {
  Evaluator e(M, budget);
  e.bind_free(env, s);
  const int root = e.compile(phi);
  e.finalize();
  return e.run(root);
}

bool so_sentence_true(const Model& M, const SOFormula& phi,
                      const Budget& budget) {
  if (!free_vars(phi).empty()) throw InvalidInput("formula is not a sentence");
  return so_satisfies(M, phi, {}, {}, budget);
}

}  // namespace tlk
