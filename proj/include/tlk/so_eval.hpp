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

// Tarskian evaluation of function-quantified second order formulas over
// finite models. Function quantifiers loop over every total table.

#ifndef TLK_SO_EVAL_HPP
#define TLK_SO_EVAL_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tlk/ast.hpp"
#include "tlk/model.hpp"

namespace tlk {

// Values indexed like Model::function_table: arguments read base n, first
// argument most significant.
struct FunctionTable {
  int arity = 1;
  std::vector<int> values;
};

using FunctionEnvironment = std::map<std::string, FunctionTable>;

void for_each_function_table(const Model& M, int arity, const Budget& budget,
                             const std::function<bool(const FunctionTable&)>& visit);
std::vector<FunctionTable> enumerate_function_tables(const Model& M, int arity,
                                                     const Budget& budget = {});

// Value of a term under an environment and assignment.
int eval_term(const Model& M, const Term& t, const FunctionEnvironment& env,
              const Assignment& s);

bool so_satisfies(const Model& M, const SOFormula& phi,
                  const FunctionEnvironment& env, const Assignment& s,
                  const Budget& budget = {});

bool so_sentence_true(const Model& M, const SOFormula& phi,
                      const Budget& budget = {});

}  // namespace tlk

#endif  // TLK_SO_EVAL_HPP
