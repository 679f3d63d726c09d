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

// Syntax of team logic formulas and of function-quantified second order
// sentences. All formula values are immutable and share structure, so they can
// be copied freely and handed between threads.

#ifndef TLK_AST_HPP
#define TLK_AST_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tlk {

// The equality symbol. It is built in and never part of a Signature.
inline constexpr const char* kEquality = "=";

class Signature {
 public:
  void add_relation(const std::string& name, int arity);
  void add_function(const std::string& name, int arity);
  void add_constant(const std::string& name);

  std::optional<int> relation_arity(const std::string& name) const;
  std::optional<int> function_arity(const std::string& name) const;
  bool has_constant(const std::string& name) const;
  bool has_symbol(const std::string& name) const;

  const std::map<std::string, int>& relations() const { return relations_; }
  const std::map<std::string, int>& functions() const { return functions_; }
  const std::set<std::string>& constants() const { return constants_; }

  bool empty() const {
    return relations_.empty() && functions_.empty() && constants_.empty();
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  void check_fresh(const std::string& name) const;

  std::map<std::string, int> relations_;
  std::map<std::string, int> functions_;
  std::set<std::string> constants_;
};

struct Term {
  enum class Kind : std::uint8_t { Variable, Constant, Apply };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term apply(std::string function, std::vector<Term> args);

  bool is_variable() const { return kind == Kind::Variable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

// Variables occurring in a term (Var(t)).
std::set<std::string> term_variables(const Term& t);
void collect_term_variables(const Term& t, std::set<std::string>& out);

// A relation atom R(t1..tk) or an equality t1=t2 (relation == kEquality).
struct AtomicFormula {
  std::string relation;
  std::vector<Term> args;

  static AtomicFormula equality(Term lhs, Term rhs);
  static AtomicFormula relation_atom(std::string name, std::vector<Term> args);

  bool is_equality() const { return relation == kEquality; }

  friend bool operator==(const AtomicFormula&, const AtomicFormula&) = default;
};

// Connectives of BID formulas in negation normal form.
enum class Connective : std::uint8_t {
  Atom,
  NegAtom,
  Dep,     // dep(t1..tn): tn is determined by t1..t(n-1); n=1 is constancy
  NegDep,
  Bottom,
  And,
  Tensor,  // split disjunction
  IVee,    // intuitionistic disjunction
  Impl,    // intuitionistic implication
  LImpl,   // linear implication
  Forall,
  Exists,
};

class Formula {
 public:
  static Formula atom(AtomicFormula a);
  static Formula neg_atom(AtomicFormula a);
  static Formula dep(std::vector<Term> terms);
  static Formula neg_dep(std::vector<Term> terms);
  static Formula bottom();
  static Formula conj(Formula a, Formula b);
  static Formula tensor(Formula a, Formula b);
  static Formula ivee(Formula a, Formula b);
  static Formula impl(Formula a, Formula b);
  static Formula limpl(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  // Right-associated conjunction of a non-empty list.
  static Formula conj_all(const std::vector<Formula>& parts);

  Connective kind() const;
  const AtomicFormula& atomic() const;          // Atom, NegAtom
  const std::vector<Term>& dep_terms() const;   // Dep, NegDep
  const Formula& left() const;                  // binary connectives
  const Formula& right() const;
  const std::string& variable() const;          // quantifiers
  const Formula& body() const;

  bool is_binary() const;
  bool is_quantifier() const;
  bool is_literal() const;

  // Stable identity of the shared node; equal ids imply equal formulas.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class SoConnective : std::uint8_t {
  Atom,
  Not,
  And,
  Or,
  Implies,
  Forall,
  Exists,
  ForallFn,
  ExistsFn,
};

// Second order formulas whose only second order quantifiers range over
// functions. Function variables occur in terms as applications.
class SOFormula {
 public:
  static SOFormula atom(AtomicFormula a);
  static SOFormula negation(SOFormula a);
  static SOFormula conj(SOFormula a, SOFormula b);
  static SOFormula disj(SOFormula a, SOFormula b);
  static SOFormula implies(SOFormula a, SOFormula b);
  static SOFormula forall(std::string var, SOFormula body);
  static SOFormula exists(std::string var, SOFormula body);
  static SOFormula forall_fn(std::string fn, int arity, SOFormula body);
  static SOFormula exists_fn(std::string fn, int arity, SOFormula body);

  static SOFormula conj_all(const std::vector<SOFormula>& parts);
  static SOFormula disj_all(const std::vector<SOFormula>& parts);

  SoConnective kind() const;
  const AtomicFormula& atomic() const;
  const SOFormula& operand() const;      // Not
  const SOFormula& left() const;
  const SOFormula& right() const;
  const std::string& variable() const;   // FO and function quantifiers
  int arity() const;                     // function quantifiers
  const SOFormula& body() const;

  bool is_binary() const;
  bool is_quantifier() const;
  bool is_fn_quantifier() const;

  const void* id() const { return node_.get(); }

  friend bool operator==(const SOFormula& a, const SOFormula& b);

 private:
  struct Node;
  explicit SOFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Free variables, fragments, fresh names.

std::set<std::string> free_vars(const Formula& f);
// Individual variables free in an SO formula.
std::set<std::string> free_vars(const SOFormula& f);
// Function variables applied but not bound.
std::set<std::string> free_function_vars(const SOFormula& f,
                                         const Signature& sig);
// Every variable name occurring anywhere, free or bound.
std::set<std::string> all_variables(const Formula& f);
std::set<std::string> all_names(const SOFormula& f);

bool is_sentence(const Formula& f);

enum class Fragment : std::uint8_t { FO, D, ID, LD, BID };

struct FragmentInfo {
  Fragment least = Fragment::BID;
  std::vector<Fragment> members;  // every fragment admitting the formula
};

FragmentInfo fragment_of(const Formula& f);
bool in_fragment(const Formula& f, Fragment frag);
const char* fragment_name(Fragment frag);
std::optional<Fragment> parse_fragment(const std::string& name);

// Syntactically first-order: literals, conjunction, split disjunction,
// quantifiers.
bool is_first_order(const Formula& f);
bool is_quantifier_free(const Formula& f);

// Names base, base_1, base_2, ... skipping members of avoid.
std::vector<std::string> fresh_vars(const std::string& base, int count,
                                    const std::set<std::string>& avoid);

// ---------------------------------------------------------------------------
// Classical first-order conversions.

// Negation normal form of an SO formula: negation only on atoms, no Implies.
SOFormula to_nnf_so(const SOFormula& f);

// Classical first-order formula (no function quantifiers) to the first-order
// fragment of BID: negation pushed to atoms, implication expanded, disjunction
// read as split disjunction.
Formula to_nnf(const SOFormula& f);

// The inverse reading: a first-order BID formula as a classical formula.
SOFormula to_classical(const Formula& f);

// ---------------------------------------------------------------------------
// Substitution helpers shared by the translations.

Term substitute_var(const Term& t, const std::string& var, const Term& by);
Formula rename_free(const Formula& f, const std::string& from,
                    const std::string& to);

}  // namespace tlk

#endif  // TLK_AST_HPP
