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

#include "tlk/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tlk/error.hpp"

namespace tlk {
namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  Comma,
  Dot,
  Colon,
  Eq,
  Tilde,
  Amp,
  Bar,
  BarBar,
  Arrow,
  Lolli,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), {i, i + len}});
    i += len;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                              s[j] == '_')) {
        ++j;
      }
      push(Tok::Ident, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::Number, j - i);
      continue;
    }
    const bool has_next = i + 1 < s.size();
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '~': push(Tok::Tilde, 1); continue;
      case '&': push(Tok::Amp, 1); continue;
      case '|':
        if (has_next && s[i + 1] == '|') {
          push(Tok::BarBar, 2);
        } else {
          push(Tok::Bar, 1);
        }
        continue;
      case '-':
        if (has_next && s[i + 1] == '>') {
          push(Tok::Arrow, 2);
          continue;
        }
        if (has_next && s[i + 1] == '*') {
          push(Tok::Lolli, 2);
          continue;
        }
        break;
      default:
        break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'",
                     {i, i + 1});
  }
  out.push_back({Tok::End, "", {s.size(), s.size()}});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "A" || s == "E" || s == "Af" || s == "Ef" || s == "dep" ||
         s == "ndep" || s == "bot";
}

enum class SymKind { Relation, Function, Variable };

class Parser {
 public:
  Parser(std::string_view text, const Signature* sig)
      : toks_(tokenize(text)), sig_(sig) {}

  Formula parse_bid_top() {
    Formula f = bid_formula();
    expect(Tok::End, "end of input");
    return f;
  }

  SOFormula parse_so_top() {
    SOFormula f = so_formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  // -------------------------------------------------------------- tokens
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* word) const {
    return at(Tok::Ident) && peek().text == word;
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return take();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + got, t.span);
  }
  [[noreturn]] static void fail_at(const std::string& msg, SourceSpan span) {
    throw ParseError(msg, span);
  }

  // ------------------------------------------------------------- symbols
  const int* bound_fn(const std::string& name) const {
    for (auto it = fn_scope_.rbegin(); it != fn_scope_.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    return nullptr;
  }

  void declare(const std::string& name, SymKind kind, int arity,
               SourceSpan span) {
    auto it = inferred_.find(name);
    if (it == inferred_.end()) {
      inferred_.emplace(name, std::make_pair(kind, arity));
      return;
    }
    if (it->second.first != kind) {
      fail_at("symbol '" + name + "' used inconsistently", span);
    }
    if (it->second.second != arity) {
      fail_at("arity mismatch for '" + name + "'", span);
    }
  }

  void resolve_function(const std::string& name, int arity, SourceSpan span) {
    if (const int* a = bound_fn(name)) {
      if (*a != arity) fail_at("arity mismatch for '" + name + "'", span);
      return;
    }
    if (sig_) {
      auto a = sig_->function_arity(name);
      if (!a) fail_at("unknown function symbol '" + name + "'", span);
      if (*a != arity) fail_at("arity mismatch for '" + name + "'", span);
      return;
    }
    declare(name, SymKind::Function, arity, span);
  }

  void resolve_relation(const std::string& name, int arity, SourceSpan span) {
    if (bound_fn(name)) {
      fail_at("function variable '" + name + "' used as a relation", span);
    }
    if (sig_) {
      auto a = sig_->relation_arity(name);
      if (!a) fail_at("unknown relation symbol '" + name + "'", span);
      if (*a != arity) fail_at("arity mismatch for '" + name + "'", span);
      return;
    }
    declare(name, SymKind::Relation, arity, span);
  }

  Term resolve_bare(const std::string& name, SourceSpan span) {
    if (bound_fn(name)) {
      fail_at("function variable '" + name + "' used without arguments", span);
    }
    if (sig_) {
      if (sig_->has_constant(name)) return Term::constant(name);
      if (sig_->has_symbol(name)) {
        fail_at("symbol '" + name + "' used without arguments", span);
      }
      return Term::variable(name);
    }
    declare(name, SymKind::Variable, 0, span);
    return Term::variable(name);
  }

  std::string identifier(const char* what) {
    if (!at(Tok::Ident)) fail(std::string("expected ") + what);
    if (is_keyword(peek().text)) fail(std::string("expected ") + what);
    return take().text;
  }

  // --------------------------------------------------------------- terms
  std::vector<Term> term_list() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    args.push_back(term());
    while (at(Tok::Comma)) {
      take();
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Term term() {
    if (!at(Tok::Ident) || is_keyword(peek().text)) fail("expected a term");
    const Token name = take();
    if (at(Tok::LParen)) {
      std::vector<Term> args = term_list();
      SourceSpan span{name.span.start, toks_[pos_ - 1].span.end};
      resolve_function(name.text, static_cast<int>(args.size()), span);
      return Term::apply(name.text, std::move(args));
    }
    return resolve_bare(name.text, name.span);
  }

  // Relation atom or equality.
  AtomicFormula atom() {
    if (!at(Tok::Ident) || is_keyword(peek().text)) fail("expected an atom");
    if (peek(1).kind == Tok::LParen) {
      const std::size_t save = pos_;
      const Token name = take();
      const bool is_fn = bound_fn(name.text) != nullptr ||
                         (sig_ && sig_->function_arity(name.text));
      const bool is_rel = !is_fn && (sig_ ? sig_->relation_arity(name.text)
                                                .has_value()
                                          : true);
      if (is_rel) {
        // Inferred mode: look past the argument list for '='.
        std::vector<Term> args = term_list();
        SourceSpan span{name.span.start, toks_[pos_ - 1].span.end};
        if (!at(Tok::Eq) || sig_) {
          resolve_relation(name.text, static_cast<int>(args.size()), span);
          return AtomicFormula::relation_atom(name.text, std::move(args));
        }
        pos_ = save;
      } else {
        pos_ = save;
      }
    }
    Term lhs = term();
    expect(Tok::Eq, "'='");
    Term rhs = term();
    return AtomicFormula::equality(std::move(lhs), std::move(rhs));
  }

  // ------------------------------------------------------------ BID text
  bool at_quantifier() const {
    return (at_ident("A") || at_ident("E")) && peek(1).kind == Tok::Ident;
  }
  bool at_fn_quantifier() const { return at_ident("Af") || at_ident("Ef"); }

  Formula bid_formula() {
    Formula lhs = bid_disj();
    if (at(Tok::Arrow) || at(Tok::Lolli)) {
      const bool linear = take().kind == Tok::Lolli;
      Formula rhs = bid_formula();
      return linear ? Formula::limpl(lhs, rhs) : Formula::impl(lhs, rhs);
    }
    return lhs;
  }

  Formula bid_disj() {
    Formula acc = bid_conj();
    while (at(Tok::Bar) || at(Tok::BarBar)) {
      const bool ivee = take().kind == Tok::BarBar;
      Formula rhs = bid_conj();
      acc = ivee ? Formula::ivee(acc, rhs) : Formula::tensor(acc, rhs);
    }
    return acc;
  }

  Formula bid_conj() {
    Formula acc = bid_unary();
    while (at(Tok::Amp)) {
      take();
      acc = Formula::conj(acc, bid_unary());
    }
    return acc;
  }

  Formula bid_unary() {
    if (at_fn_quantifier()) {
      fail("function quantifiers are only allowed in second order input");
    }
    if (at_quantifier()) {
      const bool universal = take().text == "A";
      std::string var = identifier("a variable");
      expect(Tok::Dot, "'.'");
      Formula body = bid_formula();
      return universal ? Formula::forall(var, body) : Formula::exists(var, body);
    }
    if (at(Tok::LParen)) {
      take();
      Formula f = bid_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Tilde)) {
      const Token tilde = take();
      Formula inner = bid_unary();
      if (inner.kind() != Connective::Atom) {
        fail_at("negation is only allowed on atoms (use ndep for dependence "
                "atoms)",
                {tilde.span.start, toks_[pos_ - 1].span.end});
      }
      return Formula::neg_atom(inner.atomic());
    }
    if (at_ident("bot")) {
      take();
      return Formula::bottom();
    }
    if (at_ident("dep") || at_ident("ndep")) {
      const bool negated = take().text == "ndep";
      std::vector<Term> ts = term_list();
      return negated ? Formula::neg_dep(std::move(ts))
                     : Formula::dep(std::move(ts));
    }
    return Formula::atom(atom());
  }

  // ------------------------------------------------------------- SO text
  SOFormula so_formula() {
    SOFormula lhs = so_disj();
    if (at(Tok::Lolli)) fail("'-*' is not a second order connective");
    if (at(Tok::Arrow)) {
      take();
      return SOFormula::implies(lhs, so_formula());
    }
    return lhs;
  }

  SOFormula so_disj() {
    SOFormula acc = so_conj();
    while (at(Tok::Bar) || at(Tok::BarBar)) {
      if (at(Tok::BarBar)) fail("'||' is not a second order connective");
      take();
      acc = SOFormula::disj(acc, so_conj());
    }
    return acc;
  }

  SOFormula so_conj() {
    SOFormula acc = so_unary();
    while (at(Tok::Amp)) {
      take();
      acc = SOFormula::conj(acc, so_unary());
    }
    return acc;
  }

  SOFormula so_unary() {
    if (at_fn_quantifier()) {
      const bool universal = take().text == "Af";
      const Token name = peek();
      std::string fn = identifier("a function variable");
      if (sig_ && sig_->has_symbol(fn)) {
        fail_at("function variable '" + fn + "' clashes with a signature symbol",
                name.span);
      }
      expect(Tok::Colon, "':'");
      const Token num = expect(Tok::Number, "an arity");
      const int arity = std::stoi(num.text);
      if (arity < 1) fail_at("function variables need arity >= 1", num.span);
      expect(Tok::Dot, "'.'");
      fn_scope_.emplace_back(fn, arity);
      SOFormula body = so_formula();
      fn_scope_.pop_back();
      return universal ? SOFormula::forall_fn(fn, arity, body)
                       : SOFormula::exists_fn(fn, arity, body);
    }
    if (at_quantifier()) {
      const bool universal = take().text == "A";
      std::string var = identifier("a variable");
      expect(Tok::Dot, "'.'");
      SOFormula body = so_formula();
      return universal ? SOFormula::forall(var, body)
                       : SOFormula::exists(var, body);
    }
    if (at(Tok::LParen)) {
      take();
      SOFormula f = so_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Tilde)) {
      take();
      return SOFormula::negation(so_unary());
    }
    if (at_ident("bot")) fail("'bot' is not a second order formula");
    if (at_ident("dep") || at_ident("ndep")) {
      fail("dependence atoms are not second order formulas");
    }
    return SOFormula::atom(atom());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature* sig_;
  std::map<std::string, std::pair<SymKind, int>> inferred_;
  std::vector<std::pair<std::string, int>> fn_scope_;
};

// ---------------------------------------------------------------- render

void render_into(const Term& t, std::string& out) {
  out += t.name;
  if (t.kind != Term::Kind::Apply) return;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    render_into(t.args[i], out);
  }
  out += ')';
}

void render_atom_into(const AtomicFormula& a, std::string& out) {
  if (a.is_equality()) {
    render_into(a.args[0], out);
    out += '=';
    render_into(a.args[1], out);
    return;
  }
  out += a.relation;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    render_into(a.args[i], out);
  }
  out += ')';
}

void render_negated_atom(const AtomicFormula& a, std::string& out) {
  out += '~';
  if (a.is_equality()) out += '(';
  render_atom_into(a, out);
  if (a.is_equality()) out += ')';
}

const char* op_text(Connective c) {
  switch (c) {
    case Connective::And: return " & ";
    case Connective::Tensor: return " | ";
    case Connective::IVee: return " || ";
    case Connective::Impl: return " -> ";
    case Connective::LImpl: return " -* ";
    default: return " ? ";
  }
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::Atom:
      render_atom_into(f.atomic(), out);
      return;
    case Connective::NegAtom:
      render_negated_atom(f.atomic(), out);
      return;
    case Connective::Dep:
    case Connective::NegDep:
      out += f.kind() == Connective::Dep ? "dep(" : "ndep(";
      for (std::size_t i = 0; i < f.dep_terms().size(); ++i) {
        if (i) out += ',';
        render_into(f.dep_terms()[i], out);
      }
      out += ')';
      return;
    case Connective::Bottom:
      out += "bot";
      return;
    case Connective::Forall:
    case Connective::Exists:
      out += f.kind() == Connective::Forall ? "A " : "E ";
      out += f.variable();
      out += ". ";
      render_into(f.body(), out);
      return;
    default:
      break;
  }
  out += '(';
  const bool wrap = f.left().is_quantifier();
  if (wrap) out += '(';
  render_into(f.left(), out);
  if (wrap) out += ')';
  out += op_text(f.kind());
  render_into(f.right(), out);
  out += ')';
}

void render_into(const SOFormula& f, std::string& out) {
  switch (f.kind()) {
    case SoConnective::Atom:
      render_atom_into(f.atomic(), out);
      return;
    case SoConnective::Not: {
      const SOFormula& g = f.operand();
      if (g.kind() == SoConnective::Atom) {
        render_negated_atom(g.atomic(), out);
      } else if (g.is_quantifier()) {
        out += "~(";
        render_into(g, out);
        out += ')';
      } else {
        out += '~';
        render_into(g, out);
      }
      return;
    }
    case SoConnective::Forall:
    case SoConnective::Exists:
      out += f.kind() == SoConnective::Forall ? "A " : "E ";
      out += f.variable();
      out += ". ";
      render_into(f.body(), out);
      return;
    case SoConnective::ForallFn:
    case SoConnective::ExistsFn:
      out += f.kind() == SoConnective::ForallFn ? "Af " : "Ef ";
      out += f.variable();
      out += ':';
      out += std::to_string(f.arity());
      out += ". ";
      render_into(f.body(), out);
      return;
    default:
      break;
  }
  out += '(';
  const bool wrap = f.left().is_quantifier();
  if (wrap) out += '(';
  render_into(f.left(), out);
  if (wrap) out += ')';
  out += f.kind() == SoConnective::And   ? " & "
         : f.kind() == SoConnective::Or ? " | "
                                        : " -> ";
  render_into(f.right(), out);
  out += ')';
}

// ------------------------------------------------------- signature_of

class SymbolCollector {
 public:
  void term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Variable:
        return;
      case Term::Kind::Constant:
        note(t.name, -1, 'c');
        return;
      case Term::Kind::Apply:
        if (!is_bound(t.name)) note(t.name, static_cast<int>(t.args.size()), 'f');
        for (const Term& a : t.args) term(a);
        return;
    }
  }

  void atom(const AtomicFormula& a) {
    if (!a.is_equality()) note(a.relation, static_cast<int>(a.args.size()), 'r');
    for (const Term& t : a.args) term(t);
  }

  void formula(const Formula& f) {
    switch (f.kind()) {
      case Connective::Atom:
      case Connective::NegAtom:
        atom(f.atomic());
        return;
      case Connective::Dep:
      case Connective::NegDep:
        for (const Term& t : f.dep_terms()) term(t);
        return;
      case Connective::Bottom:
        return;
      case Connective::Forall:
      case Connective::Exists:
        formula(f.body());
        return;
      default:
        formula(f.left());
        formula(f.right());
    }
  }

  void formula(const SOFormula& f) {
    switch (f.kind()) {
      case SoConnective::Atom:
        atom(f.atomic());
        return;
      case SoConnective::Not:
        formula(f.operand());
        return;
      case SoConnective::Forall:
      case SoConnective::Exists:
        formula(f.body());
        return;
      case SoConnective::ForallFn:
      case SoConnective::ExistsFn:
        bound_.push_back(f.variable());
        formula(f.body());
        bound_.pop_back();
        return;
      default:
        formula(f.left());
        formula(f.right());
    }
  }

  Signature build() const {
    Signature sig;
    for (const auto& [name, entry] : seen_) {
      if (entry.first == 'r') sig.add_relation(name, entry.second);
      if (entry.first == 'f') sig.add_function(name, entry.second);
      if (entry.first == 'c') sig.add_constant(name);
    }
    return sig;
  }

 private:
  bool is_bound(const std::string& name) const {
    return std::find(bound_.begin(), bound_.end(), name) != bound_.end();
  }

  void note(const std::string& name, int arity, char kind) {
    auto [it, inserted] = seen_.emplace(name, std::make_pair(kind, arity));
    if (!inserted && it->second != std::make_pair(kind, arity)) {
      throw InvalidInput("symbol '" + name + "' used inconsistently");
    }
  }

  std::map<std::string, std::pair<char, int>> seen_;
  std::vector<std::string> bound_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature* sig) {
  return Parser(text, sig).parse_bid_top();
}

SOFormula parse_so(std::string_view text, const Signature* sig) {
  return Parser(text, sig).parse_so_top();
}

std::string render(const Term& t) {
  std::string out;
  render_into(t, out);
  return out;
}

std::string render(const AtomicFormula& a) {
  std::string out;
  render_atom_into(a, out);
  return out;
}

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

std::string render(const SOFormula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

Signature signature_of(const Formula& f) {
  SymbolCollector c;
  c.formula(f);
  return c.build();
}

Signature signature_of(const SOFormula& f) {
  SymbolCollector c;
  c.formula(f);
  return c.build();
}

Signature merge_signatures(const Signature& a, const Signature& b) {
  Signature out = a;
  for (const auto& [name, arity] : b.relations()) {
    if (auto have = out.relation_arity(name)) {
      if (*have != arity) throw InvalidInput("conflicting arity for '" + name + "'");
    } else {
      out.add_relation(name, arity);
    }
  }
  for (const auto& [name, arity] : b.functions()) {
    if (auto have = out.function_arity(name)) {
      if (*have != arity) throw InvalidInput("conflicting arity for '" + name + "'");
    } else {
      out.add_function(name, arity);
    }
  }
  for (const auto& name : b.constants()) {
    if (!out.has_constant(name)) out.add_constant(name);
  }
  return out;
}

Signature parse_signature_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("signature is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("signature must be a JSON object");
  Signature sig;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "relations") {
        for (const auto& [name, arity] : value.items()) {
          sig.add_relation(name, arity.get<int>());
        }
      } else if (key == "functions") {
        for (const auto& [name, arity] : value.items()) {
          sig.add_function(name, arity.get<int>());
        }
      } else if (key == "constants") {
        for (const auto& name : value) sig.add_constant(name.get<std::string>());
      } else {
        throw InvalidInput("unknown signature key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed signature: ") + e.what());
  }
  return sig;
}

std::string signature_to_json(const Signature& sig) {
  nlohmann::ordered_json j;
  j["relations"] = nlohmann::ordered_json::object();
  for (const auto& [name, arity] : sig.relations()) j["relations"][name] = arity;
  j["functions"] = nlohmann::ordered_json::object();
  for (const auto& [name, arity] : sig.functions()) j["functions"][name] = arity;
  j["constants"] = nlohmann::ordered_json::array();
  for (const auto& name : sig.constants()) j["constants"].push_back(name);
  return j.dump();
}

}  // namespace tlk
