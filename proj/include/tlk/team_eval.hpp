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

// Team semantics.
//
// Three engines decide M ⊨_X φ:
//
//  Direct     clause by clause over explicit teams: subteams for ->, every
//             team on the domain for -*, every supplement function for E.
//             Split disjunction tries complement pairs (Y, X\Y).
//  Table      computes, bottom up, the set of all satisfying teams over the
//             full team space of each subformula's domain. Exact for every
//             clause (split disjunction checks arbitrary covers) and used as
//             the reference in the law suites. Only small domains fit.
//  Antichain  represents the satisfying subteams of X by their maximal
//             elements, which is complete because satisfaction is downward
//             closed. Existential blocks are searched row by row with
//             pruning. Handles the large teams produced by translations.

#ifndef TLK_TEAM_EVAL_HPP
#define TLK_TEAM_EVAL_HPP

#include <string>
#include <vector>

#include "tlk/ast.hpp"
#include "tlk/model.hpp"

namespace tlk {

enum class Engine { Direct, Table, Antichain };

struct EvalOptions {
  Engine engine = Engine::Antichain;
  // Antichain engine: evaluate first-order subformulas row by row. Off in the
  // flatness and cross-oracle checks so they do not assume what they test.
  bool flat_shortcut = true;
};

const char* engine_name(Engine e);

bool satisfies(const Model& M, const Team& X, const Formula& phi,
               const Budget& budget = {}, const EvalOptions& opts = {});

// M ⊨_{{∅}} φ.
bool sentence_true(const Model& M, const Formula& phi,
                   const Budget& budget = {}, const EvalOptions& opts = {});

enum class TruthValue { True, EmptyOnly, False };

const char* truth_value_name(TruthValue v);

// Evaluates the sentence at ∅ and at {∅}.
TruthValue truth_value(const Model& M, const Formula& phi,
                       const Budget& budget = {}, const EvalOptions& opts = {});

// Table engine: entry i tells whether the team whose rows are picked by the
// bits of i (over full_team(M, vars) in order) satisfies phi.
std::vector<bool> satisfying_teams(const Model& M,
                                   const std::vector<std::string>& vars,
                                   const Formula& phi,
                                   const Budget& budget = {});

// Antichain engine: the maximal subteams of X satisfying phi.
std::vector<Team> maximal_subteams(const Model& M, const Team& X,
                                   const Formula& phi,
                                   const Budget& budget = {},
                                   const EvalOptions& opts = {});

}  // namespace tlk

#endif  // TLK_TEAM_EVAL_HPP
