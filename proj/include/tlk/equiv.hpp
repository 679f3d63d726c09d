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

// Exhaustive checks over all models up to a size: equivalence of team
// formulas, agreement of translations with second order truth, and the
// semantic law suites.

#ifndef TLK_EQUIV_HPP
#define TLK_EQUIV_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlk/ast.hpp"
#include "tlk/model.hpp"
#include "tlk/team_eval.hpp"

namespace tlk {

enum class Verdict { Pass, Fail, Budget };

const char* verdict_name(Verdict v);

struct EquivVerdict {
  Verdict status = Verdict::Pass;
  std::uint64_t models_checked = 0;
  std::uint64_t teams_checked = 0;
  int max_size = 0;
  // Set on Fail. The team is absent for sentence checks.
  std::optional<Model> model;
  std::optional<Team> team;
  bool lhs = false;  // value of the first formula (or the SO sentence)
  bool rhs = false;
  std::string message;  // budget diagnostics
};

struct CheckOptions {
  Budget budget;
  EvalOptions eval;
  int min_size = 1;
  // Try the table engine first when the team space is small.
  bool use_table = true;
  int jobs = 1;
};

// All models of sig with 1..max_size elements, all teams over the union of
// the free variables.
EquivVerdict check_equiv(const Formula& a, const Formula& b, const Signature& sig,
                         int max_size, const CheckOptions& opts = {});

enum class EvalTeam { Unit, Empty };

// so_sentence_true against team satisfaction at {∅} (Unit) or ∅ (Empty).
EquivVerdict check_sentence_translation(const SOFormula& so,
                                        const Formula& team_sentence,
                                        EvalTeam at, const Signature& sig,
                                        int max_size,
                                        const CheckOptions& opts = {});

std::string verdict_text(const EquivVerdict& v);
std::string verdict_json(const EquivVerdict& v);

struct LawOptions {
  int formulas = 500;
  int max_depth = 3;
  Budget budget;
  int jobs = 1;
};

struct LawReport {
  std::string suite;
  Signature signature;
  int max_size = 0;
  std::uint64_t seed = 0;
  int formulas = 0;
  std::uint64_t checks = 0;
  int failures = 0;
  // Failures that the suite deliberately provokes, e.g. the linear
  // implication witness in the empty suite.
  int expected_failures = 0;
  std::vector<std::string> details;  // JSON objects, one per failure

  bool passed() const { return failures == 0; }
  std::string text() const;
  std::string json() const;
};

// downward, flat, empty, eqbid, adjoint, negation, locality
const std::vector<std::string>& law_suite_names();

LawReport run_law_suite(const std::string& suite, const Signature& sig,
                        int max_size, std::uint64_t seed,
                        const LawOptions& opts = {});

}  // namespace tlk

#endif  // TLK_EQUIV_HPP
