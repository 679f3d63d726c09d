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

#include "tlk/model.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "json.hpp"
#include "tlk/error.hpp"

namespace tlk {

using json = nlohmann::json;

Deadline::Deadline(double seconds) {
  if (seconds > 0) {
    end_ = std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
               std::chrono::duration<double>(seconds));
  }
}

bool Deadline::expired() const {
  return end_ && std::chrono::steady_clock::now() >= *end_;
}

void Deadline::check() const {
  if (expired()) throw BudgetExceeded("timeout reached");
}

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

std::size_t table_size(int n, int arity) {
  const std::uint64_t s = sat_pow(static_cast<std::uint64_t>(n), arity);
  if (s > (1u << 24)) throw BudgetExceeded("symbol table too large");
  return static_cast<std::size_t>(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Model

Model::Model(int size, Signature sig) : size_(size), sig_(std::move(sig)) {
  if (size < 1) throw InvalidInput("models need a non-empty domain");
  for (const auto& [name, arity] : sig_.relations()) {
    relations_[name].assign(table_size(size, arity), 0);
  }
  for (const auto& [name, arity] : sig_.functions()) {
    functions_[name].assign(table_size(size, arity), 0);
  }
  for (const auto& name : sig_.constants()) constants_[name] = 0;
}

std::size_t Model::tuple_index(const std::vector<int>& args) const {
  std::size_t idx = 0;
  for (int a : args) {
    if (a < 0 || a >= size_) throw InvalidInput("element out of range");
    idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(a);
  }
  return idx;
}

const std::vector<std::uint8_t>& Model::relation_table(
    const std::string& r) const {
  auto it = relations_.find(r);
  if (it == relations_.end()) throw InvalidInput("unknown relation '" + r + "'");
  return it->second;
}

std::vector<std::uint8_t>& Model::relation_table(const std::string& r) {
  auto it = relations_.find(r);
  if (it == relations_.end()) throw InvalidInput("unknown relation '" + r + "'");
  return it->second;
}

const std::vector<int>& Model::function_table(const std::string& f) const {
  auto it = functions_.find(f);
  if (it == functions_.end()) throw InvalidInput("unknown function '" + f + "'");
  return it->second;
}

std::vector<int>& Model::function_table(const std::string& f) {
  auto it = functions_.find(f);
  if (it == functions_.end()) throw InvalidInput("unknown function '" + f + "'");
  return it->second;
}

bool Model::holds(const std::string& relation,
                  const std::vector<int>& args) const {
  const auto arity = sig_.relation_arity(relation);
  if (!arity || *arity != static_cast<int>(args.size())) {
    throw InvalidInput("bad relation application '" + relation + "'");
  }
  return relation_table(relation)[tuple_index(args)] != 0;
}

int Model::apply(const std::string& function,
                 const std::vector<int>& args) const {
  const auto arity = sig_.function_arity(function);
  if (!arity || *arity != static_cast<int>(args.size())) {
    throw InvalidInput("bad function application '" + function + "'");
  }
  return function_table(function)[tuple_index(args)];
}

int Model::constant(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) throw InvalidInput("unknown constant '" + name + "'");
  return it->second;
}

void Model::set_relation(const std::string& relation,
                         const std::vector<int>& args, bool value) {
  const auto arity = sig_.relation_arity(relation);
  if (!arity || *arity != static_cast<int>(args.size())) {
    throw InvalidInput("bad relation tuple for '" + relation + "'");
  }
  relation_table(relation)[tuple_index(args)] = value ? 1 : 0;
}

void Model::set_function(const std::string& function,
                         const std::vector<int>& args, int value) {
  const auto arity = sig_.function_arity(function);
  if (!arity || *arity != static_cast<int>(args.size())) {
    throw InvalidInput("bad function tuple for '" + function + "'");
  }
  if (value < 0 || value >= size_) throw InvalidInput("element out of range");
  function_table(function)[tuple_index(args)] = value;
}

void Model::set_constant(const std::string& name, int value) {
  auto it = constants_.find(name);
  if (it == constants_.end()) throw InvalidInput("unknown constant '" + name + "'");
  if (value < 0 || value >= size_) throw InvalidInput("element out of range");
  it->second = value;
}

// ---------------------------------------------------------------------------
// Team

Team::Team(std::vector<std::string> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  if (std::adjacent_find(vars_.begin(), vars_.end()) != vars_.end()) {
    throw InvalidInput("team variables must be distinct");
  }
}

Team Team::unit() {
  Team t;
  t.rows_.emplace_back();
  return t;
}

Team Team::from_assignments(const std::vector<std::string>& vars,
                            const std::vector<Assignment>& rows) {
  Team t(vars);
  for (const Assignment& s : rows) {
    if (s.size() != t.vars_.size()) {
      throw InvalidInput("assignment domain differs from team domain");
    }
    std::vector<int> row;
    for (const auto& v : t.vars_) {
      auto it = s.find(v);
      if (it == s.end()) {
        throw InvalidInput("assignment lacks variable '" + v + "'");
      }
      row.push_back(it->second);
    }
    t.insert(std::move(row));
  }
  return t;
}

int Team::column(const std::string& var) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
  if (it == vars_.end() || *it != var) return -1;
  return static_cast<int>(it - vars_.begin());
}

void Team::insert(std::vector<int> row) {
  if (row.size() != vars_.size()) throw InvalidInput("row width mismatch");
  auto it = std::lower_bound(rows_.begin(), rows_.end(), row);
  if (it != rows_.end() && *it == row) return;
  rows_.insert(it, std::move(row));
}

bool Team::contains(const std::vector<int>& row) const {
  return std::binary_search(rows_.begin(), rows_.end(), row);
}

Assignment Team::assignment(std::size_t i) const {
  Assignment s;
  for (std::size_t c = 0; c < vars_.size(); ++c) s[vars_[c]] = rows_[i][c];
  return s;
}

Team Team::subteam(const std::vector<bool>& keep) const {
  Team t(vars_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (keep[i]) t.rows_.push_back(rows_[i]);
  }
  return t;
}

Team Team::project(const std::vector<std::string>& vars) const {
  Team t(vars);
  std::vector<int> cols;
  for (const auto& v : t.vars_) {
    const int c = column(v);
    if (c < 0) throw InvalidInput("projection onto unknown variable '" + v + "'");
    cols.push_back(c);
  }
  for (const auto& row : rows_) {
    std::vector<int> r;
    for (int c : cols) r.push_back(row[c]);
    t.insert(std::move(r));
  }
  return t;
}

namespace {

// Insert x into the sorted variable list; returns its column and whether it
// was already present.
std::pair<std::vector<std::string>, int> widen(const std::vector<std::string>& vars,
                                               const std::string& x) {
  std::vector<std::string> out = vars;
  auto it = std::lower_bound(out.begin(), out.end(), x);
  const int col = static_cast<int>(it - out.begin());
  if (it == out.end() || *it != x) out.insert(it, x);
  return {out, col};
}

std::vector<int> extend_row(const std::vector<int>& row, int col, bool present,
                            int value) {
  std::vector<int> r = row;
  if (present) {
    r[col] = value;
  } else {
    r.insert(r.begin() + col, value);
  }
  return r;
}

}  // namespace

Team supplement(const Team& X, const std::string& x,
                const SupplementFunction& F) {
  if (F.size() != X.size()) throw InvalidInput("supplement function not total");
  const bool present = X.has_var(x);
  auto [vars, col] = widen(X.vars(), x);
  Team out(vars);
  for (std::size_t i = 0; i < X.size(); ++i) {
    out.insert(extend_row(X.rows()[i], col, present, F[i]));
  }
  return out;
}

Team duplicate(const Team& X, const std::string& x, const Model& M) {
  const bool present = X.has_var(x);
  auto [vars, col] = widen(X.vars(), x);
  Team out(vars);
  for (const auto& row : X.rows()) {
    for (int a = 0; a < M.size(); ++a) out.insert(extend_row(row, col, present, a));
  }
  return out;
}

Team full_team(const Model& M, const std::vector<std::string>& vars) {
  Team out(vars);
  const std::size_t k = out.vars().size();
  std::vector<int> row(k, 0);
  while (true) {
    out.insert(row);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++row[i] < M.size()) break;
      row[i] = 0;
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

void for_each_subteam(const Team& X, const Budget& budget,
                      const std::function<bool(const Team&)>& visit) {
  const std::size_t k = X.size();
  if (k > budget.max_subteam_rows || k >= 63) {
    throw BudgetExceeded("subteam enumeration over " + std::to_string(k) +
                         " rows exceeds budget");
  }
  std::vector<bool> keep(k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (std::size_t i = 0; i < k; ++i) keep[i] = (mask >> i) & 1u;
    if (!visit(X.subteam(keep))) return;
  }
}

void for_each_team(const Model& M, const std::vector<std::string>& vars,
                   const Budget& budget,
                   const std::function<bool(const Team&)>& visit) {
  const std::uint64_t rows = sat_pow(M.size(), vars.size());
  const std::size_t cap = std::min(budget.max_team_space_rows, kTeamSpaceHardCap);
  if (rows > cap) {
    throw BudgetExceeded("team space of " + std::to_string(rows) +
                         " rows exceeds budget");
  }
  Budget inner = budget;
  inner.max_subteam_rows = cap;
  for_each_subteam(full_team(M, vars), inner, visit);
}

std::uint64_t model_count(const Signature& sig, int size) {
  const std::uint64_t n = static_cast<std::uint64_t>(size);
  std::uint64_t total = 1;
  for (const auto& [name, arity] : sig.relations()) {
    total = sat_mul(total, sat_pow(2, sat_pow(n, arity)));
  }
  for (const auto& [name, arity] : sig.functions()) {
    total = sat_mul(total, sat_pow(n, sat_pow(n, arity)));
  }
  for (std::size_t i = 0; i < sig.constants().size(); ++i) total = sat_mul(total, n);
  return total;
}

void for_each_model(const Signature& sig, int size, const Budget& budget,
                    const std::function<bool(const Model&)>& visit) {
  if (model_count(sig, size) > budget.max_models) {
    throw BudgetExceeded("model enumeration exceeds budget");
  }
  Model m(size, sig);
  // Digits in order: relation entries, function entries, constants.
  struct Digit {
    int radix;
    std::uint8_t* rel = nullptr;
    int* fn = nullptr;
    std::string constant;
  };
  std::vector<Digit> digits;
  for (const auto& [name, arity] : sig.relations()) {
    for (auto& cell : m.relation_table(name)) digits.push_back({2, &cell, nullptr, {}});
  }
  for (const auto& [name, arity] : sig.functions()) {
    for (auto& cell : m.function_table(name)) digits.push_back({size, nullptr, &cell, {}});
  }
  for (const auto& name : sig.constants()) digits.push_back({size, nullptr, nullptr, name});
  std::vector<int> value(digits.size(), 0);
  while (true) {
    if (!visit(m)) return;
    std::size_t i = digits.size();
    while (true) {
      if (i == 0) return;
      --i;
      Digit& d = digits[i];
      value[i] = (value[i] + 1) % d.radix;
      if (d.rel) *d.rel = static_cast<std::uint8_t>(value[i]);
      else if (d.fn) *d.fn = value[i];
      else m.set_constant(d.constant, value[i]);
      if (value[i] != 0) break;
    }
  }
}

void for_each_supplement_function(
    const Team& X, const Model& M, const Budget& budget,
    const std::function<bool(const SupplementFunction&)>& visit) {
  if (sat_pow(M.size(), X.size()) > budget.max_functions) {
    throw BudgetExceeded("supplement function enumeration exceeds budget");
  }
  SupplementFunction F(X.size(), 0);
  while (true) {
    if (!visit(F)) return;
    std::size_t i = F.size();
    while (true) {
      if (i == 0) return;
      --i;
      if (++F[i] < M.size()) break;
      F[i] = 0;
    }
  }
}

std::vector<Team> enumerate_subteams(const Team& X, const Budget& budget) {
  std::vector<Team> out;
  for_each_subteam(X, budget, [&](const Team& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::vector<Team> enumerate_teams(const Model& M,
                                  const std::vector<std::string>& vars,
                                  const Budget& budget) {
  std::vector<Team> out;
  for_each_team(M, vars, budget, [&](const Team& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::vector<SupplementFunction> enumerate_supplement_functions(
    const Team& X, const Model& M, const Budget& budget) {
  std::vector<SupplementFunction> out;
  for_each_supplement_function(X, M, budget, [&](const SupplementFunction& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::vector<int> int_tuple(const json& j, int n, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + ": expected an array");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InvalidInput(what + ": expected integers");
    const int x = v.get<int>();
    if (x < 0 || x >= n) {
      throw InvalidInput(what + ": element " + std::to_string(x) +
                         " out of range");
    }
    out.push_back(x);
  }
  return out;
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

Model load_model(std::string_view text, const Signature* expected) {
  const json j = parse_json(text, "model");
  if (!j.is_object() || !j.contains("domain") ||
      !j["domain"].is_number_integer()) {
    throw InvalidInput("model needs an integer \"domain\"");
  }
  const int n = j["domain"].get<int>();
  if (n < 1) throw InvalidInput("model domain must be at least 1");
  for (const auto& [key, value] : j.items()) {
    if (key != "domain" && key != "relations" && key != "functions" &&
        key != "constants") {
      throw InvalidInput("unknown model key '" + key + "'");
    }
  }

  Signature sig;
  std::map<std::string, std::vector<std::vector<int>>> rel_tuples;
  std::map<std::string, std::vector<std::vector<int>>> fn_rows;
  std::map<std::string, int> consts;

  if (j.contains("relations")) {
    if (!j["relations"].is_object()) throw InvalidInput("\"relations\" must be an object");
    for (const auto& [name, value] : j["relations"].items()) {
      const json* tuples = &value;
      int arity = -1;
      if (value.is_object()) {
        if (!value.contains("arity") || !value["arity"].is_number_integer()) {
          throw InvalidInput("relation '" + name + "' needs an arity");
        }
        arity = value["arity"].get<int>();
        if (!value.contains("tuples")) {
          throw InvalidInput("relation '" + name + "' needs tuples");
        }
        tuples = &value["tuples"];
      }
      if (!tuples->is_array()) throw InvalidInput("relation '" + name + "' needs a tuple list");
      auto& list = rel_tuples[name];
      for (const auto& t : *tuples) {
        list.push_back(int_tuple(t, n, "relation '" + name + "'"));
        const int a = static_cast<int>(list.back().size());
        if (arity < 0) arity = a;
        if (a != arity) throw InvalidInput("relation '" + name + "': malformed arity");
      }
      if (arity < 1) {
        throw InvalidInput("relation '" + name +
                           "': arity unknown, use {\"arity\":k,\"tuples\":[]}");
      }
      sig.add_relation(name, arity);
    }
  }
  if (j.contains("functions")) {
    if (!j["functions"].is_object()) throw InvalidInput("\"functions\" must be an object");
    for (const auto& [name, value] : j["functions"].items()) {
      if (!value.is_object() || !value.contains("arity") ||
          !value["arity"].is_number_integer() || !value.contains("table")) {
        throw InvalidInput("function '" + name + "' needs arity and table");
      }
      const int arity = value["arity"].get<int>();
      sig.add_function(name, arity);
      auto& rows = fn_rows[name];
      for (const auto& r : value["table"]) {
        rows.push_back(int_tuple(r, n, "function '" + name + "'"));
        if (static_cast<int>(rows.back().size()) != arity + 1) {
          throw InvalidInput("function '" + name + "': malformed arity");
        }
      }
    }
  }
  if (j.contains("constants")) {
    if (!j["constants"].is_object()) throw InvalidInput("\"constants\" must be an object");
    for (const auto& [name, value] : j["constants"].items()) {
      if (!value.is_number_integer()) throw InvalidInput("constant '" + name + "' needs a value");
      const int v = value.get<int>();
      if (v < 0 || v >= n) throw InvalidInput("constant '" + name + "' out of range");
      sig.add_constant(name);
      consts[name] = v;
    }
  }
  if (expected && !(*expected == sig)) {
    throw InvalidInput("model does not match the expected signature");
  }

  Model m(n, sig);
  for (const auto& [name, tuples] : rel_tuples) {
    for (const auto& t : tuples) m.set_relation(name, t, true);
  }
  for (const auto& [name, rows] : fn_rows) {
    const int arity = *sig.function_arity(name);
    std::vector<std::uint8_t> seen(m.function_table(name).size(), 0);
    for (const auto& r : rows) {
      std::vector<int> args(r.begin(), r.begin() + arity);
      const std::size_t idx = m.tuple_index(args);
      if (seen[idx]) throw InvalidInput("function '" + name + "': duplicate row");
      seen[idx] = 1;
      m.set_function(name, args, r.back());
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw InvalidInput("function '" + name + "': table is not total");
    }
  }
  for (const auto& [name, v] : consts) m.set_constant(name, v);
  return m;
}

Team load_team(std::string_view text, int domain_size) {
  const json j = parse_json(text, "team");
  if (!j.is_object() || !j.contains("vars") || !j.contains("rows") ||
      !j["vars"].is_array() || !j["rows"].is_array()) {
    throw InvalidInput("team needs \"vars\" and \"rows\" arrays");
  }
  std::vector<std::string> vars;
  for (const auto& v : j["vars"]) {
    if (!v.is_string()) throw InvalidInput("team variables must be strings");
    vars.push_back(v.get<std::string>());
  }
  std::vector<Assignment> rows;
  for (const auto& r : j["rows"]) {
    std::vector<int> vals = int_tuple(r, domain_size, "team row");
    if (vals.size() != vars.size()) throw InvalidInput("team row width mismatch");
    Assignment s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = vals[i];
    rows.push_back(std::move(s));
  }
  return Team::from_assignments(vars, rows);
}

std::string model_to_json(const Model& M) {
  nlohmann::ordered_json j;
  j["domain"] = M.size();
  const int n = M.size();
  auto tuple_of = [n](std::size_t idx, int arity) {
    std::vector<int> t(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<int>(idx % n);
      idx /= static_cast<std::size_t>(n);
    }
    return t;
  };
  if (!M.signature().relations().empty()) {
    j["relations"] = nlohmann::ordered_json::object();
    for (const auto& [name, arity] : M.signature().relations()) {
      const auto& table = M.relation_table(name);
      nlohmann::ordered_json tuples = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i]) tuples.push_back(tuple_of(i, arity));
      }
      if (tuples.empty()) {
        j["relations"][name] = {{"arity", arity}, {"tuples", tuples}};
      } else {
        j["relations"][name] = tuples;
      }
    }
  }
  if (!M.signature().functions().empty()) {
    j["functions"] = nlohmann::ordered_json::object();
    for (const auto& [name, arity] : M.signature().functions()) {
      const auto& table = M.function_table(name);
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < table.size(); ++i) {
        auto r = tuple_of(i, arity);
        r.push_back(table[i]);
        rows.push_back(r);
      }
      j["functions"][name] = {{"arity", arity}, {"table", rows}};
    }
  }
  if (!M.signature().constants().empty()) {
    j["constants"] = nlohmann::ordered_json::object();
    for (const auto& name : M.signature().constants()) {
      j["constants"][name] = M.constant(name);
    }
  }
  return j.dump();
}

std::string team_to_json(const Team& X) {
  nlohmann::ordered_json j;
  j["vars"] = X.vars();
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : X.rows()) j["rows"].push_back(r);
  return j.dump();
}

}  // namespace tlk
