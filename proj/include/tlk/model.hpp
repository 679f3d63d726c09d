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

// Finite structures, assignments and teams.

#ifndef TLK_MODEL_HPP
#define TLK_MODEL_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlk/ast.hpp"

namespace tlk {

// Limits for every exhaustive enumeration. Exceeding one throws
// BudgetExceeded; nothing is ever silently truncated.
struct Budget {
  std::size_t max_subteam_rows = 20;      // |X| when enumerating subteams
  std::size_t max_team_space_rows = 12;   // |M^dom| when enumerating teams
  std::uint64_t max_models = 1u << 22;
  std::uint64_t max_functions = 1u << 22; // supplement functions, fn tables
  std::size_t max_antichain = 1u << 16;
  std::size_t max_team_rows = 1u << 20;   // rows of any intermediate team
  int max_depth = 512;
  double timeout_s = 0;                   // 0 disables the deadline
};

// Hard ceiling on max_team_space_rows.
inline constexpr std::size_t kTeamSpaceHardCap = 16;

// Wall clock deadline derived from Budget::timeout_s.
class Deadline {
 public:
  explicit Deadline(double seconds = 0);
  bool expired() const;
  void check() const;  // throws BudgetExceeded once expired

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
};

class Model {
 public:
  // All relations empty, all functions and constants map to 0.
  Model(int size, Signature sig);

  int size() const { return size_; }
  const Signature& signature() const { return sig_; }

  bool holds(const std::string& relation, const std::vector<int>& args) const;
  int apply(const std::string& function, const std::vector<int>& args) const;
  int constant(const std::string& name) const;

  void set_relation(const std::string& relation, const std::vector<int>& args,
                    bool value);
  void set_function(const std::string& function, const std::vector<int>& args,
                    int value);
  void set_constant(const std::string& name, int value);

  // Raw tables, indexed by the argument tuple read as a base-n number with
  // the first argument most significant.
  const std::vector<std::uint8_t>& relation_table(const std::string& r) const;
  const std::vector<int>& function_table(const std::string& f) const;
  std::vector<std::uint8_t>& relation_table(const std::string& r);
  std::vector<int>& function_table(const std::string& f);

  std::size_t tuple_index(const std::vector<int>& args) const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  int size_;
  Signature sig_;
  std::map<std::string, std::vector<std::uint8_t>> relations_;
  std::map<std::string, std::vector<int>> functions_;
  std::map<std::string, int> constants_;
};

using Assignment = std::map<std::string, int>;

// A set of assignments over a common domain. Variables are kept sorted by
// name and rows sorted lexicographically, so equal teams compare and
// serialize identically.
class Team {
 public:
  // The empty team over vars.
  explicit Team(std::vector<std::string> vars = {});
  // The team {s} for the empty assignment s.
  static Team unit();
  static Team from_assignments(const std::vector<std::string>& vars,
                               const std::vector<Assignment>& rows);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<std::vector<int>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Index of a variable in vars(), or -1.
  int column(const std::string& var) const;
  bool has_var(const std::string& var) const { return column(var) >= 0; }

  // Row values are given in vars() order.
  void insert(std::vector<int> row);
  bool contains(const std::vector<int>& row) const;
  Assignment assignment(std::size_t i) const;

  // Keeps rows whose bit is set, in order.
  Team subteam(const std::vector<bool>& keep) const;
  // Restriction of every row to the given variables.
  Team project(const std::vector<std::string>& vars) const;

  friend bool operator==(const Team&, const Team&) = default;

 private:
  std::vector<std::string> vars_;
  std::vector<std::vector<int>> rows_;
};

// F maps the i-th row of X to F[i].
using SupplementFunction = std::vector<int>;

Team supplement(const Team& X, const std::string& x, const SupplementFunction& F);
Team duplicate(const Team& X, const std::string& x, const Model& M);
Team full_team(const Model& M, const std::vector<std::string>& vars);

// Visitors return false to stop early. Enumeration orders are fixed:
// subteams by increasing bitmask over rows (so ∅ first and X last), teams
// likewise over the rows of full_team, models and functions as odometers
// whose last digit moves fastest.
void for_each_subteam(const Team& X, const Budget& budget,
                      const std::function<bool(const Team&)>& visit);
void for_each_team(const Model& M, const std::vector<std::string>& vars,
                   const Budget& budget,
                   const std::function<bool(const Team&)>& visit);
void for_each_model(const Signature& sig, int size, const Budget& budget,
                    const std::function<bool(const Model&)>& visit);
void for_each_supplement_function(
    const Team& X, const Model& M, const Budget& budget,
    const std::function<bool(const SupplementFunction&)>& visit);

std::vector<Team> enumerate_subteams(const Team& X, const Budget& budget = {});
std::vector<Team> enumerate_teams(const Model& M,
                                  const std::vector<std::string>& vars,
                                  const Budget& budget = {});
std::vector<SupplementFunction> enumerate_supplement_functions(
    const Team& X, const Model& M, const Budget& budget = {});

// Number of models of sig over a domain of the given size (saturating).
std::uint64_t model_count(const Signature& sig, int size);

// JSON formats:
//   model {"domain":2,"relations":{"R":[[0,1]]},
//          "functions":{"f":{"arity":1,"table":[[0,1],[1,0]]}},
//          "constants":{"c":0}}
//   an empty relation may be written {"arity":k,"tuples":[]}
//   team  {"vars":["x","y"],"rows":[[0,0],[0,1]]}
// When sig is given, the model must interpret exactly its symbols.
Model load_model(std::string_view text, const Signature* sig = nullptr);
Team load_team(std::string_view text, int domain_size);
std::string model_to_json(const Model& M);
std::string team_to_json(const Team& X);

}  // namespace tlk

#endif  // TLK_MODEL_HPP
