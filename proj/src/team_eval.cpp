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

#include "tlk/team_eval.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>

#include "tlk/error.hpp"

namespace tlk {
namespace {

// Rows are packed into 64 bit codes, one fixed-width field per variable slot.
using Code = std::uint64_t;
using SlotMask = std::uint64_t;

struct CTerm {
  enum class K : std::uint8_t { Var, Const, Fn } k = K::Var;
  int slot = 0;
  int value = 0;
  const std::vector<int>* table = nullptr;
  std::vector<CTerm> args;
};

struct CNode {
  Connective kind = Connective::Bottom;
  int a = -1;  // left operand or quantifier body
  int b = -1;
  int slot = -1;
  bool eq = false;
  const std::vector<std::uint8_t>* rel = nullptr;
  std::vector<CTerm> terms;
  bool fo = false;
  bool qf = false;
  bool has_limpl = false;
  SlotMask fv = 0;
};

// Internal team: the slots of its domain plus sorted, distinct row codes.
struct ITeam {
  SlotMask dom = 0;
  std::vector<Code> rows;
};

class Program {
 public:
  Program(const Model& M, const Formula& f,
          const std::vector<std::string>& extra_vars)
      : M_(M), n_(M.size()) {
    std::set<std::string> names = all_variables(f);
    names.insert(extra_vars.begin(), extra_vars.end());
    names_.assign(names.begin(), names.end());
    width_ = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(n_ - 1))));
    if (names_.size() > 64 || names_.size() * width_ > 64) {
      throw BudgetExceeded("too many variables to encode rows (" +
                           std::to_string(names_.size()) + ")");
    }
    vmask_ = (Code{1} << width_) - 1;
    for (std::size_t i = 0; i < names_.size(); ++i) slot_of_[names_[i]] = static_cast<int>(i);
    root_ = compile(f);
  }

  int n() const { return n_; }
  int root() const { return root_; }
  const CNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  int slot(const std::string& v) const { return slot_of_.at(v); }
  const std::string& name(int slot) const { return names_[static_cast<std::size_t>(slot)]; }
  std::size_t slot_count() const { return names_.size(); }

  int get(Code c, int s) const {
    return static_cast<int>((c >> (s * width_)) & vmask_);
  }
  Code set(Code c, int s, int v) const {
    const int shift = s * width_;
    return (c & ~(vmask_ << shift)) | (static_cast<Code>(v) << shift);
  }

  int eval(const CTerm& t, Code c) const {
    switch (t.k) {
      case CTerm::K::Var:
        return get(c, t.slot);
      case CTerm::K::Const:
        return t.value;
      case CTerm::K::Fn: {
        std::size_t idx = 0;
        for (const CTerm& a : t.args) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(eval(a, c));
        return (*t.table)[idx];
      }
    }
    return 0;
  }

  bool atom_holds(const CNode& nd, Code c) const {
    if (nd.eq) return eval(nd.terms[0], c) == eval(nd.terms[1], c);
    std::size_t idx = 0;
    for (const CTerm& a : nd.terms) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(eval(a, c));
    return (*nd.rel)[idx] != 0;
  }

  // Literal truth on a single row.
  bool literal_holds(const CNode& nd, Code c) const {
    const bool v = atom_holds(nd, c);
    return nd.kind == Connective::Atom ? v : !v;
  }

  // Packs dep-atom key terms (all but the last) into one number.
  std::uint64_t dep_key(const CNode& nd, Code c) const {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i + 1 < nd.terms.size(); ++i) {
      k = k * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(eval(nd.terms[i], c));
    }
    return k;
  }
  int dep_value(const CNode& nd, Code c) const { return eval(nd.terms.back(), c); }

  ITeam to_internal(const Team& X) const {
    ITeam t;
    std::vector<int> slots;
    for (const auto& v : X.vars()) {
      const int s = slot(v);
      slots.push_back(s);
      t.dom |= SlotMask{1} << s;
    }
    for (const auto& row : X.rows()) {
      Code c = 0;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (row[i] < 0 || row[i] >= n_) throw InvalidInput("team value out of range");
        c = set(c, slots[i], row[i]);
      }
      t.rows.push_back(c);
    }
    std::sort(t.rows.begin(), t.rows.end());
    return t;
  }

  Team to_public(const ITeam& X) const {
    std::vector<std::string> vars;
    for (std::size_t s = 0; s < names_.size(); ++s) {
      if ((X.dom >> s) & 1u) vars.push_back(names_[s]);
    }
    Team t(vars);
    for (Code c : X.rows) {
      std::vector<int> row;
      for (const auto& v : t.vars()) row.push_back(get(c, slot(v)));
      t.insert(std::move(row));
    }
    return t;
  }

  // Every row over the slots of dom, sorted.
  std::vector<Code> full_rows(SlotMask dom, std::size_t cap) const {
    std::vector<int> slots;
    for (std::size_t s = 0; s < names_.size(); ++s) {
      if ((dom >> s) & 1u) slots.push_back(static_cast<int>(s));
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      total *= static_cast<std::size_t>(n_);
      if (total > cap) throw BudgetExceeded("full team exceeds row budget");
    }
    std::vector<Code> out{0};
    for (int s : slots) {
      std::vector<Code> next;
      next.reserve(out.size() * static_cast<std::size_t>(n_));
      for (Code c : out) {
        for (int v = 0; v < n_; ++v) next.push_back(set(c, s, v));
      }
      out.swap(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  CTerm compile_term(const Term& t) {
    CTerm out;
    switch (t.kind) {
      case Term::Kind::Variable:
        out.k = CTerm::K::Var;
        out.slot = slot_of_.at(t.name);
        break;
      case Term::Kind::Constant:
        out.k = CTerm::K::Const;
        out.value = M_.constant(t.name);
        break;
      case Term::Kind::Apply: {
        const auto arity = M_.signature().function_arity(t.name);
        if (!arity || *arity != static_cast<int>(t.args.size())) {
          throw InvalidInput("model does not interpret function '" + t.name + "'");
        }
        out.k = CTerm::K::Fn;
        out.table = &M_.function_table(t.name);
        for (const Term& a : t.args) out.args.push_back(compile_term(a));
        break;
      }
    }
    return out;
  }

  SlotMask term_mask(const Term& t) const {
    if (t.kind == Term::Kind::Variable) return SlotMask{1} << slot_of_.at(t.name);
    SlotMask m = 0;
    for (const Term& a : t.args) m |= term_mask(a);
    return m;
  }

  int compile(const Formula& f) {
    CNode nd;
    nd.kind = f.kind();
    switch (f.kind()) {
      case Connective::Atom:
      case Connective::NegAtom: {
        const AtomicFormula& at = f.atomic();
        nd.eq = at.is_equality();
        if (!nd.eq) {
          const auto arity = M_.signature().relation_arity(at.relation);
          if (!arity || *arity != static_cast<int>(at.args.size())) {
            throw InvalidInput("model does not interpret relation '" + at.relation + "'");
          }
          nd.rel = &M_.relation_table(at.relation);
        }
        for (const Term& t : at.args) {
          nd.terms.push_back(compile_term(t));
          nd.fv |= term_mask(t);
        }
        nd.fo = nd.qf = true;
        break;
      }
      case Connective::Dep:
      case Connective::NegDep:
        for (const Term& t : f.dep_terms()) {
          nd.terms.push_back(compile_term(t));
          nd.fv |= term_mask(t);
        }
        nd.qf = true;
        break;
      case Connective::Bottom:
        nd.qf = true;
        break;
      case Connective::Forall:
      case Connective::Exists: {
        nd.slot = slot_of_.at(f.variable());
        nd.a = compile(f.body());
        const CNode& body = nodes_[static_cast<std::size_t>(nd.a)];
        nd.fo = body.fo;
        nd.has_limpl = body.has_limpl;
        nd.fv = body.fv & ~(SlotMask{1} << nd.slot);
        break;
      }
      default: {
        nd.a = compile(f.left());
        nd.b = compile(f.right());
        const CNode& l = nodes_[static_cast<std::size_t>(nd.a)];
        const CNode& r = nodes_[static_cast<std::size_t>(nd.b)];
        nd.fv = l.fv | r.fv;
        nd.qf = l.qf && r.qf;
        nd.has_limpl = l.has_limpl || r.has_limpl || f.kind() == Connective::LImpl;
        nd.fo = l.fo && r.fo &&
                (f.kind() == Connective::And || f.kind() == Connective::Tensor);
        break;
      }
    }
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size() - 1);
  }

  const Model& M_;
  int n_;
  int width_ = 1;
  Code vmask_ = 1;
  std::vector<std::string> names_;
  std::map<std::string, int> slot_of_;
  std::vector<CNode> nodes_;
  int root_ = -1;
};

// Shared pieces of all engines.
class EngineBase {
 public:
  EngineBase(const Program& P, const Budget& B)
      : P_(P), B_(B), deadline_(B.timeout_s) {}

 protected:
  void tick() {
    if ((++ticks_ & 0x3ffu) == 0) deadline_.check();
  }

  void check_rows(std::size_t rows) const {
    if (rows > B_.max_team_rows) {
      throw BudgetExceeded("team of " + std::to_string(rows) +
                           " rows exceeds budget");
    }
  }

  bool dep_holds(const CNode& nd, const std::vector<Code>& rows) const {
    if (nd.terms.size() == 1) {
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (P_.dep_value(nd, rows[i]) != P_.dep_value(nd, rows[0])) return false;
      }
      return true;
    }
    std::unordered_map<std::uint64_t, int> seen;
    for (Code c : rows) {
      auto [it, fresh] = seen.emplace(P_.dep_key(nd, c), P_.dep_value(nd, c));
      if (!fresh && it->second != P_.dep_value(nd, c)) return false;
    }
    return true;
  }

  bool atomic_check(const CNode& nd, const std::vector<Code>& rows) const {
    switch (nd.kind) {
      case Connective::Atom:
      case Connective::NegAtom:
        for (Code c : rows) {
          if (!P_.literal_holds(nd, c)) return false;
        }
        return true;
      case Connective::Dep:
        return dep_holds(nd, rows);
      case Connective::NegDep:
      case Connective::Bottom:
        return rows.empty();
      default:
        throw InternalError("atomic_check on compound node");
    }
  }

  ITeam duplicate_of(const ITeam& X, int slot) const {
    check_rows(X.rows.size() * static_cast<std::size_t>(P_.n()));
    ITeam out{X.dom | (SlotMask{1} << slot), {}};
    out.rows.reserve(X.rows.size() * static_cast<std::size_t>(P_.n()));
    for (Code c : X.rows) {
      for (int v = 0; v < P_.n(); ++v) out.rows.push_back(P_.set(c, slot, v));
    }
    std::sort(out.rows.begin(), out.rows.end());
    out.rows.erase(std::unique(out.rows.begin(), out.rows.end()), out.rows.end());
    return out;
  }

  static std::vector<Code> merge(const std::vector<Code>& a,
                                 const std::vector<Code>& b) {
    std::vector<Code> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  const Program& P_;
  const Budget& B_;
  Deadline deadline_;
  std::uint64_t ticks_ = 0;
};

// ---------------------------------------------------------------------------
// Direct engine

class DirectEngine : public EngineBase {
 public:
  using EngineBase::EngineBase;

  bool sat(int id, const ITeam& X, int depth = 0) {
    tick();
    if (depth > B_.max_depth) throw BudgetExceeded("recursion depth exceeded");
    const CNode& nd = P_.node(id);
    switch (nd.kind) {
      case Connective::Atom:
      case Connective::NegAtom:
      case Connective::Dep:
      case Connective::NegDep:
      case Connective::Bottom:
        return atomic_check(nd, X.rows);
      case Connective::And:
        return sat(nd.a, X, depth + 1) && sat(nd.b, X, depth + 1);
      case Connective::IVee:
        return sat(nd.a, X, depth + 1) || sat(nd.b, X, depth + 1);
      case Connective::Tensor: {
        // Complement pairs suffice by downward closure: any cover (Y, Z)
        // can be shrunk to (Y, X\Y).
        const std::size_t k = subteam_rows(X);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
          ITeam Y = pick(X, mask, false);
          if (!sat(nd.a, Y, depth + 1)) continue;
          if (sat(nd.b, pick(X, mask, true), depth + 1)) return true;
        }
        return false;
      }
      case Connective::Impl: {
        const std::size_t k = subteam_rows(X);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
          ITeam Y = pick(X, mask, false);
          if (sat(nd.a, Y, depth + 1) && !sat(nd.b, Y, depth + 1)) return false;
        }
        return true;
      }
      case Connective::LImpl: {
        const std::size_t cap =
            std::min(B_.max_team_space_rows, kTeamSpaceHardCap);
        ITeam F{X.dom, P_.full_rows(X.dom, cap)};
        const std::size_t k = F.rows.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
          ITeam Y = pick(F, mask, false);
          if (!sat(nd.a, Y, depth + 1)) continue;
          ITeam U{X.dom, merge(X.rows, Y.rows)};
          if (!sat(nd.b, U, depth + 1)) return false;
        }
        return true;
      }
      case Connective::Forall:
        return sat(nd.a, duplicate_of(X, nd.slot), depth + 1);
      case Connective::Exists: {
        const std::size_t k = X.rows.size();
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < k; ++i) {
          total *= static_cast<std::uint64_t>(P_.n());
          if (total > B_.max_functions) {
            throw BudgetExceeded("supplement function enumeration exceeds budget");
          }
        }
        std::vector<int> F(k, 0);
        const SlotMask dom = X.dom | (SlotMask{1} << nd.slot);
        while (true) {
          ITeam Y{dom, {}};
          Y.rows.reserve(k);
          for (std::size_t i = 0; i < k; ++i) Y.rows.push_back(P_.set(X.rows[i], nd.slot, F[i]));
          std::sort(Y.rows.begin(), Y.rows.end());
          Y.rows.erase(std::unique(Y.rows.begin(), Y.rows.end()), Y.rows.end());
          if (sat(nd.a, Y, depth + 1)) return true;
          std::size_t i = k;
          while (true) {
            if (i == 0) return false;
            --i;
            if (++F[i] < P_.n()) break;
            F[i] = 0;
          }
        }
      }
    }
    throw InternalError("unreachable connective");
  }

 private:
  std::size_t subteam_rows(const ITeam& X) const {
    const std::size_t k = X.rows.size();
    if (k > B_.max_subteam_rows || k >= 63) {
      throw BudgetExceeded("subteam enumeration over " + std::to_string(k) +
                           " rows exceeds budget");
    }
    return k;
  }

  static ITeam pick(const ITeam& X, std::uint64_t mask, bool complement) {
    ITeam Y{X.dom, {}};
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
      if ((((mask >> i) & 1u) != 0) != complement) Y.rows.push_back(X.rows[i]);
    }
    return Y;
  }
};

// ---------------------------------------------------------------------------
// Table engine

class TableEngine : public EngineBase {
 public:
  using Table = std::vector<std::uint8_t>;
  using Mask = std::uint32_t;

  TableEngine(const Program& P, const Budget& B) : EngineBase(P, B) {
    cap_ = std::min(B.max_team_space_rows, kTeamSpaceHardCap);
  }

  // Row order of a domain: lexicographic in slot order, i.e. the order of
  // full_team over the sorted variable names.
  struct Domain {
    std::vector<int> slots;
    std::vector<Code> codes;  // by row index
  };

  const Domain& domain(SlotMask dom) {
    auto it = domains_.find(dom);
    if (it != domains_.end()) return it->second;
    Domain d;
    for (std::size_t s = 0; s < P_.slot_count(); ++s) {
      if ((dom >> s) & 1u) d.slots.push_back(static_cast<int>(s));
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < d.slots.size(); ++i) {
      total *= static_cast<std::size_t>(P_.n());
      if (total > cap_) {
        throw BudgetExceeded("table engine: team space of domain exceeds " +
                             std::to_string(cap_) + " rows");
      }
    }
    d.codes.assign(total, 0);
    for (std::size_t r = 0; r < total; ++r) {
      std::size_t rest = r;
      Code c = 0;
      for (std::size_t i = d.slots.size(); i-- > 0;) {
        c = P_.set(c, d.slots[i], static_cast<int>(rest % static_cast<std::size_t>(P_.n())));
        rest /= static_cast<std::size_t>(P_.n());
      }
      d.codes[r] = c;
    }
    return domains_.emplace(dom, std::move(d)).first->second;
  }

  std::size_t index_of(const Domain& d, Code c) const {
    std::size_t idx = 0;
    for (int s : d.slots) idx = idx * static_cast<std::size_t>(P_.n()) + static_cast<std::size_t>(P_.get(c, s));
    return idx;
  }

  const Table& table(int id, SlotMask dom) {
    auto key = std::make_pair(id, dom);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Table t = compute(id, dom);
    return memo_.emplace(key, std::move(t)).first->second;
  }

 private:
  Table compute(int id, SlotMask dom) {
    deadline_.check();
    const CNode& nd = P_.node(id);
    const Domain& d = domain(dom);
    const std::size_t N = d.codes.size();
    const std::size_t T = std::size_t{1} << N;
    Table out(T, 0);
    switch (nd.kind) {
      case Connective::Atom:
      case Connective::NegAtom: {
        Mask good = 0;
        for (std::size_t r = 0; r < N; ++r) {
          if (P_.literal_holds(nd, d.codes[r])) good |= Mask{1} << r;
        }
        for (std::size_t m = 0; m < T; ++m) out[m] = (m & ~good) == 0;
        return out;
      }
      case Connective::Dep: {
        std::vector<std::uint64_t> key(N);
        std::vector<int> val(N);
        for (std::size_t r = 0; r < N; ++r) {
          key[r] = P_.dep_key(nd, d.codes[r]);
          val[r] = P_.dep_value(nd, d.codes[r]);
        }
        // conflict[r]: rows clashing with r.
        std::vector<Mask> conflict(N, 0);
        for (std::size_t r = 0; r < N; ++r) {
          for (std::size_t q = 0; q < N; ++q) {
            if (key[r] == key[q] && val[r] != val[q]) conflict[r] |= Mask{1} << q;
          }
        }
        out[0] = 1;
        for (std::size_t m = 1; m < T; ++m) {
          const std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
          const std::size_t rest = m & (m - 1);
          out[m] = out[rest] && (conflict[low] & rest) == 0;
        }
        return out;
      }
      case Connective::NegDep:
      case Connective::Bottom:
        out[0] = 1;
        return out;
      case Connective::And:
      case Connective::IVee: {
        const Table& l = table(nd.a, dom);
        const Table& r = table(nd.b, dom);
        for (std::size_t m = 0; m < T; ++m) {
          out[m] = nd.kind == Connective::And ? (l[m] && r[m]) : (l[m] || r[m]);
        }
        return out;
      }
      case Connective::Tensor: {
        // X = Y ∪ Z for arbitrary (possibly overlapping) satisfying Y, Z.
        const auto ys = members(table(nd.a, dom));
        const auto zs = members(table(nd.b, dom));
        guard(static_cast<double>(ys.size()) * static_cast<double>(zs.size()));
        for (Mask y : ys) {
          for (Mask z : zs) out[y | z] = 1;
        }
        return out;
      }
      case Connective::Impl: {
        const Table& l = table(nd.a, dom);
        const Table& r = table(nd.b, dom);
        // bad[S] = S satisfies the antecedent but not the consequent; a team
        // fails iff some subteam is bad (subset-sum over the lattice).
        std::vector<std::uint8_t> bad(T);
        for (std::size_t m = 0; m < T; ++m) bad[m] = l[m] && !r[m];
        for (std::size_t bit = 0; bit < N; ++bit) {
          for (std::size_t m = 0; m < T; ++m) {
            if (m & (std::size_t{1} << bit)) bad[m] |= bad[m ^ (std::size_t{1} << bit)];
          }
        }
        for (std::size_t m = 0; m < T; ++m) out[m] = !bad[m];
        return out;
      }
      case Connective::LImpl: {
        const auto ys = members(table(nd.a, dom));
        const Table& r = table(nd.b, dom);
        guard(static_cast<double>(ys.size()) * static_cast<double>(T));
        for (std::size_t m = 0; m < T; ++m) {
          bool ok = true;
          for (Mask y : ys) {
            if (!r[m | y]) {
              ok = false;
              break;
            }
          }
          out[m] = ok;
        }
        return out;
      }
      case Connective::Forall: {
        const SlotMask inner = dom | (SlotMask{1} << nd.slot);
        const Domain& di = domain(inner);
        const Table& body = table(nd.a, inner);
        std::vector<Mask> image(N, 0);
        for (std::size_t r = 0; r < N; ++r) {
          for (int v = 0; v < P_.n(); ++v) {
            image[r] |= Mask{1} << index_of(di, P_.set(d.codes[r], nd.slot, v));
          }
        }
        std::vector<Mask> dup(T, 0);
        for (std::size_t m = 1; m < T; ++m) {
          dup[m] = dup[m & (m - 1)] | image[static_cast<std::size_t>(std::countr_zero(m))];
        }
        for (std::size_t m = 0; m < T; ++m) out[m] = body[dup[m]];
        return out;
      }
      case Connective::Exists:
        return exists_table(nd, dom);
    }
    throw InternalError("unreachable connective");
  }

  // Every supplement team X(F/x), enumerated without repeats: rows of X that
  // agree off x form a class, and a class with k rows can be sent onto any
  // non-empty set of at most k rows of its x-fibre.
  Table exists_table(const CNode& nd, SlotMask dom) {
    const Domain& d = domain(dom);
    const std::size_t N = d.codes.size();
    const std::size_t T = std::size_t{1} << N;
    const SlotMask inner = dom | (SlotMask{1} << nd.slot);
    const Domain& di = domain(inner);
    const Table& body = table(nd.a, inner);
    const bool overwrite = (dom >> nd.slot) & 1u;
    Table out(T, 0);

    // Class of each row, and the fibre (image rows) of each class.
    std::map<Code, int> class_of_key;
    std::vector<int> cls(N);
    std::vector<Mask> fibre;
    for (std::size_t r = 0; r < N; ++r) {
      const Code key = overwrite ? P_.set(d.codes[r], nd.slot, 0) : d.codes[r];
      auto [it, fresh] = class_of_key.emplace(key, static_cast<int>(fibre.size()));
      if (fresh) {
        Mask f = 0;
        for (int v = 0; v < P_.n(); ++v) {
          f |= Mask{1} << index_of(di, P_.set(d.codes[r], nd.slot, v));
        }
        fibre.push_back(f);
      }
      cls[r] = it->second;
    }
    // Non-empty submasks of each fibre, grouped by size.
    std::vector<std::vector<Mask>> options_by_class(fibre.size());
    for (std::size_t c = 0; c < fibre.size(); ++c) {
      for (Mask s = fibre[c]; s; s = (s - 1) & fibre[c]) options_by_class[c].push_back(s);
      std::sort(options_by_class[c].begin(), options_by_class[c].end(),
                [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
    }

    std::vector<int> count(fibre.size());
    std::vector<int> used;
    for (std::size_t m = 0; m < T; ++m) {
      std::fill(count.begin(), count.end(), 0);
      used.clear();
      for (std::size_t r = 0; r < N; ++r) {
        if ((m >> r) & 1u) {
          if (count[static_cast<std::size_t>(cls[r])]++ == 0) used.push_back(cls[r]);
        }
      }
      std::function<bool(std::size_t, Mask)> search = [&](std::size_t i, Mask acc) {
        if (i == used.size()) return body[acc] != 0;
        const std::size_t c = static_cast<std::size_t>(used[i]);
        for (Mask opt : options_by_class[c]) {
          if (std::popcount(opt) > count[c]) break;
          if (search(i + 1, acc | opt)) return true;
        }
        return false;
      };
      tick();
      out[m] = search(0, 0);
    }
    return out;
  }

  static std::vector<Mask> members(const Table& t) {
    std::vector<Mask> out;
    for (std::size_t m = 0; m < t.size(); ++m) {
      if (t[m]) out.push_back(static_cast<Mask>(m));
    }
    return out;
  }

  void guard(double work) const {
    if (work > 4e9) throw BudgetExceeded("table engine: combination too large");
  }

  std::size_t cap_;
  std::map<SlotMask, Domain> domains_;
  std::map<std::pair<int, SlotMask>, Table> memo_;
};

// ---------------------------------------------------------------------------
// Antichain engine

class RowSet {
 public:
  RowSet() = default;
  RowSet(std::size_t n, bool full) : n_(n), w_((n + 63) / 64, full ? ~0ull : 0ull) {
    trim();
  }

  std::size_t universe() const { return n_; }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  bool none() const {
    for (auto x : w_) {
      if (x) return false;
    }
    return true;
  }
  bool full() const { return count() == n_; }
  bool subset_of(const RowSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (w_[i] & ~o.w_[i]) return false;
    }
    return true;
  }
  RowSet operator&(const RowSet& o) const {
    RowSet r = *this;
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] &= o.w_[i];
    return r;
  }
  RowSet operator|(const RowSet& o) const {
    RowSet r = *this;
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] |= o.w_[i];
    return r;
  }
  RowSet complement() const {
    RowSet r = *this;
    for (auto& x : r.w_) x = ~x;
    r.trim();
    return r;
  }
  bool operator==(const RowSet& o) const { return w_ == o.w_; }
  bool operator<(const RowSet& o) const { return w_ < o.w_; }

 private:
  void trim() {
    if (n_ % 64 && !w_.empty()) w_.back() &= (1ull << (n_ % 64)) - 1;
  }
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

using Antichain = std::vector<RowSet>;

class AntichainEngine : public EngineBase {
 public:
  AntichainEngine(const Program& P, const Budget& B, bool flat)
      : EngineBase(P, B), flat_(flat) {}

  bool check(int id, const ITeam& X, int depth = 0) {
    tick();
    if (depth > B_.max_depth) throw BudgetExceeded("recursion depth exceeded");
    const CNode& nd = P_.node(id);
    switch (nd.kind) {
      case Connective::Atom:
      case Connective::NegAtom:
      case Connective::Dep:
      case Connective::NegDep:
      case Connective::Bottom:
        return atomic_check(nd, X.rows);
      case Connective::And:
        return check(nd.a, X, depth + 1) && check(nd.b, X, depth + 1);
      case Connective::IVee:
        return check(nd.a, X, depth + 1) || check(nd.b, X, depth + 1);
      case Connective::Tensor: {
        if (flat_ && nd.fo) return flat_check(id, X, depth);
        // Some maximal Y for the left disjunct leaves a remainder X\Y that
        // satisfies the right one.
        for (const RowSet& A : maxima(nd.a, X, depth + 1)) {
          if (check(nd.b, select(X, A.complement()), depth + 1)) return true;
        }
        return false;
      }
      case Connective::Impl: {
        // Every subteam satisfying the antecedent lies below a maximal one,
        // and the consequent is downward closed.
        Antichain ants;
        try {
          ants = maxima(nd.a, X, depth + 1);
        } catch (const BudgetExceeded&) {
          if (X.rows.size() > 12) throw;
          return impl_by_subteams(nd, X, depth);
        }
        for (const RowSet& A : ants) {
          if (!check(nd.b, select(X, A), depth + 1)) return false;
        }
        return true;
      }
      case Connective::LImpl: {
        ITeam F = full_of(X.dom);
        for (const RowSet& A : maxima(nd.a, F, depth + 1)) {
          ITeam U{X.dom, merge(X.rows, select(F, A).rows)};
          if (!check(nd.b, U, depth + 1)) return false;
        }
        return true;
      }
      case Connective::Forall:
        return check(nd.a, duplicate_of(X, nd.slot), depth + 1);
      case Connective::Exists:
        return exists_check(id, X, depth);
    }
    throw InternalError("unreachable connective");
  }

  // Maximal subteams of U satisfying node id, as row sets over U.
  Antichain maxima(int id, const ITeam& U, int depth = 0) {
    tick();
    if (depth > B_.max_depth) throw BudgetExceeded("recursion depth exceeded");
    const CNode& nd = P_.node(id);
    const std::size_t N = U.rows.size();
    if (flat_ && nd.fo && !nd.qf) {
      RowSet good(N, false);
      for (std::size_t i = 0; i < N; ++i) {
        if (check(id, ITeam{U.dom, {U.rows[i]}}, depth + 1)) good.set(i);
      }
      return {good};
    }
    switch (nd.kind) {
      case Connective::Atom:
      case Connective::NegAtom: {
        RowSet good(N, false);
        for (std::size_t i = 0; i < N; ++i) {
          if (P_.literal_holds(nd, U.rows[i])) good.set(i);
        }
        return {good};
      }
      case Connective::NegDep:
      case Connective::Bottom:
        return {RowSet(N, false)};
      case Connective::Dep:
        return dep_maxima(nd, U);
      case Connective::And: {
        Antichain l = maxima(nd.a, U, depth + 1);
        if (l.empty()) return {};
        Antichain r = maxima(nd.b, U, depth + 1);
        return meet(l, r);
      }
      case Connective::IVee: {
        Antichain l = maxima(nd.a, U, depth + 1);
        Antichain r = maxima(nd.b, U, depth + 1);
        l.insert(l.end(), r.begin(), r.end());
        return maximal(std::move(l));
      }
      case Connective::Tensor: {
        Antichain l = maxima(nd.a, U, depth + 1);
        Antichain r = maxima(nd.b, U, depth + 1);
        guard(l.size() * r.size());
        Antichain out;
        for (const auto& a : l) {
          for (const auto& b : r) out.push_back(a | b);
        }
        return maximal(std::move(out));
      }
      case Connective::Impl: {
        // Y satisfies the implication iff Y∩A lies below a consequent maximum
        // for every antecedent maximum A, i.e. Y ⊆ B ∪ (U\A).
        Antichain ants = maxima(nd.a, U, depth + 1);
        Antichain acc{RowSet(N, true)};
        if (ants.empty()) return acc;
        Antichain cons = maxima(nd.b, U, depth + 1);
        for (const RowSet& A : ants) {
          bool covered = false;
          for (const RowSet& B : cons) {
            if (A.subset_of(B)) {
              covered = true;
              break;
            }
          }
          if (covered) continue;
          const RowSet rest = A.complement();
          Antichain opts;
          for (const RowSet& B : cons) opts.push_back(B | rest);
          acc = meet(acc, maximal(std::move(opts)));
        }
        return acc;
      }
      case Connective::LImpl: {
        // Y satisfies it iff for every antecedent maximum A over the full
        // team some consequent maximum B contains both A and Y.
        ITeam F = full_of(U.dom);
        Antichain ants = maxima(nd.a, F, depth + 1);
        Antichain acc{RowSet(N, true)};
        if (ants.empty()) return acc;
        Antichain cons = maxima(nd.b, F, depth + 1);
        std::vector<std::size_t> pos(N);
        for (std::size_t i = 0; i < N; ++i) {
          pos[i] = static_cast<std::size_t>(
              std::lower_bound(F.rows.begin(), F.rows.end(), U.rows[i]) - F.rows.begin());
        }
        for (const RowSet& A : ants) {
          Antichain opts;
          for (const RowSet& B : cons) {
            if (!A.subset_of(B)) continue;
            RowSet r(N, false);
            for (std::size_t i = 0; i < N; ++i) {
              if (B.test(pos[i])) r.set(i);
            }
            opts.push_back(std::move(r));
          }
          if (opts.empty()) return {};
          acc = meet(acc, maximal(std::move(opts)));
        }
        return acc;
      }
      case Connective::Forall:
      case Connective::Exists: {
        const bool all = nd.kind == Connective::Forall;
        ITeam D = duplicate_of(U, nd.slot);
        std::vector<std::size_t> img(N * static_cast<std::size_t>(P_.n()));
        for (std::size_t i = 0; i < N; ++i) {
          for (int v = 0; v < P_.n(); ++v) {
            const Code c = P_.set(U.rows[i], nd.slot, v);
            img[i * static_cast<std::size_t>(P_.n()) + static_cast<std::size_t>(v)] =
                static_cast<std::size_t>(std::lower_bound(D.rows.begin(), D.rows.end(), c) -
                                         D.rows.begin());
          }
        }
        Antichain out;
        for (const RowSet& C : maxima(nd.a, D, depth + 1)) {
          RowSet r(N, false);
          for (std::size_t i = 0; i < N; ++i) {
            bool any = false;
            bool every = true;
            for (int v = 0; v < P_.n(); ++v) {
              const bool in = C.test(img[i * static_cast<std::size_t>(P_.n()) + static_cast<std::size_t>(v)]);
              any = any || in;
              every = every && in;
            }
            if (all ? every : any) r.set(i);
          }
          out.push_back(std::move(r));
        }
        return maximal(std::move(out));
      }
    }
    throw InternalError("unreachable connective");
  }

 private:
  static ITeam select(const ITeam& X, const RowSet& s) {
    ITeam Y{X.dom, {}};
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
      if (s.test(i)) Y.rows.push_back(X.rows[i]);
    }
    return Y;
  }

  ITeam full_of(SlotMask dom) const {
    return ITeam{dom, P_.full_rows(dom, B_.max_team_rows)};
  }

  void guard(std::size_t candidates) const {
    if (candidates > 8 * B_.max_antichain) {
      throw BudgetExceeded("antichain of " + std::to_string(candidates) +
                           " candidates exceeds budget");
    }
  }

  Antichain maximal(Antichain v) const {
    std::sort(v.begin(), v.end(), [](const RowSet& a, const RowSet& b) {
      const auto ca = a.count();
      const auto cb = b.count();
      return ca != cb ? ca > cb : a < b;
    });
    Antichain out;
    for (auto& s : v) {
      bool dominated = false;
      for (const auto& k : out) {
        if (s.subset_of(k)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) out.push_back(std::move(s));
    }
    if (out.size() > B_.max_antichain) {
      throw BudgetExceeded("antichain of " + std::to_string(out.size()) +
                           " maximal subteams exceeds budget");
    }
    return out;
  }

  Antichain meet(const Antichain& l, const Antichain& r) const {
    guard(l.size() * r.size());
    Antichain out;
    out.reserve(l.size() * r.size());
    for (const auto& a : l) {
      for (const auto& b : r) out.push_back(a & b);
    }
    return maximal(std::move(out));
  }

  Antichain dep_maxima(const CNode& nd, const ITeam& U) const {
    // Per key, rows split by value; a maximal subteam keeps one value class
    // for every key.
    const std::size_t N = U.rows.size();
    std::map<std::uint64_t, std::map<int, RowSet>> groups;
    for (std::size_t i = 0; i < N; ++i) {
      const std::uint64_t k = nd.terms.size() == 1 ? 0 : P_.dep_key(nd, U.rows[i]);
      auto& cls = groups[k];
      auto it = cls.find(P_.dep_value(nd, U.rows[i]));
      if (it == cls.end()) it = cls.emplace(P_.dep_value(nd, U.rows[i]), RowSet(N, false)).first;
      it->second.set(i);
    }
    double total = 1;
    for (const auto& [k, cls] : groups) total *= static_cast<double>(cls.size());
    if (total > static_cast<double>(B_.max_antichain)) {
      throw BudgetExceeded("dependence atom has too many maximal subteams");
    }
    Antichain out{RowSet(N, false)};
    for (const auto& [k, cls] : groups) {
      Antichain next;
      next.reserve(out.size() * cls.size());
      for (const auto& s : out) {
        for (const auto& [v, rows] : cls) next.push_back(s | rows);
      }
      out.swap(next);
    }
    return out;
  }

  bool flat_check(int id, const ITeam& X, int depth) {
    // First-order formulas are flat: check row by row without the shortcut
    // recursing back here.
    const CNode& nd = P_.node(id);
    for (Code c : X.rows) {
      ITeam one{X.dom, {c}};
      if (nd.kind == Connective::Tensor) {
        if (!check(nd.a, one, depth + 1) && !check(nd.b, one, depth + 1)) return false;
      } else if (!check(id, one, depth + 1)) {
        return false;
      }
    }
    return true;
  }

  bool impl_by_subteams(const CNode& nd, const ITeam& X, int depth) {
    const std::size_t k = X.rows.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      ITeam Y{X.dom, {}};
      for (std::size_t i = 0; i < k; ++i) {
        if ((mask >> i) & 1u) Y.rows.push_back(X.rows[i]);
      }
      if (check(nd.a, Y, depth + 1) && !check(nd.b, Y, depth + 1)) return false;
    }
    return true;
  }

  void conjuncts(int id, std::vector<int>& out) const {
    const CNode& nd = P_.node(id);
    if (nd.kind == Connective::And) {
      conjuncts(nd.a, out);
      conjuncts(nd.b, out);
    } else {
      out.push_back(id);
    }
  }

  // A block E x1 ... E xk of distinct variables is assigned jointly, one row
  // at a time. Quantifier-free conjuncts of the body prune partial teams,
  // which is sound by downward closure.
  bool exists_check(int id, const ITeam& X, int depth) {
    std::vector<int> slots;
    int body = id;
    SlotMask block = 0;
    while (P_.node(body).kind == Connective::Exists &&
           !((block >> P_.node(body).slot) & 1u)) {
      slots.push_back(P_.node(body).slot);
      block |= SlotMask{1} << P_.node(body).slot;
      body = P_.node(body).a;
    }
    const SlotMask dom = X.dom | block;
    const std::size_t k = slots.size();
    std::size_t choices = 1;
    for (std::size_t i = 0; i < k; ++i) {
      choices *= static_cast<std::size_t>(P_.n());
      if (choices > (1u << 16)) throw BudgetExceeded("existential block too wide");
    }
    auto assign = [&](Code c, std::size_t choice) {
      for (std::size_t i = 0; i < k; ++i) {
        c = P_.set(c, slots[i], static_cast<int>(choice % static_cast<std::size_t>(P_.n())));
        choice /= static_cast<std::size_t>(P_.n());
      }
      return c;
    };

    const CNode& bn = P_.node(body);
    if (flat_ && bn.fo) {
      for (Code c : X.rows) {
        bool found = false;
        for (std::size_t ch = 0; ch < choices && !found; ++ch) {
          found = check(body, ITeam{dom, {assign(c, ch)}}, depth + 1);
        }
        if (!found) return false;
      }
      return true;
    }

    std::vector<int> parts;
    conjuncts(body, parts);
    std::vector<int> prune;
    const std::vector<Code> none;
    for (int p : parts) {
      const CNode& pn = P_.node(p);
      if ((pn.fv & block) == 0) {
        // Independent of the block: by locality decide it on X itself.
        if (!check(p, ITeam{X.dom & ~block, project_off(X, block)}, depth + 1)) return false;
        continue;
      }
      if (pn.qf && !pn.has_limpl) prune.push_back(p);
    }

    // The body is downward closed, so some X[F/block] satisfies it iff a
    // maximal satisfying subteam of the duplicated team meets every row's
    // block of extensions. The search below is the fallback.
    {
      ITeam D = X;
      for (int s : slots) D = duplicate_of(D, s);
      std::optional<Antichain> ants;
      try {
        ants = maxima(body, D, depth + 1);
      } catch (const BudgetExceeded&) {
        if (deadline_.expired()) throw;
      }
      if (ants) {
        std::vector<std::vector<std::size_t>> ext(X.rows.size());
        for (std::size_t i = 0; i < X.rows.size(); ++i) {
          for (std::size_t ch = 0; ch < choices; ++ch) {
            const Code c = assign(X.rows[i], ch);
            ext[i].push_back(static_cast<std::size_t>(
                std::lower_bound(D.rows.begin(), D.rows.end(), c) - D.rows.begin()));
          }
        }
        for (const RowSet& C : *ants) {
          bool all = true;
          for (std::size_t i = 0; i < X.rows.size() && all; ++i) {
            bool any = false;
            for (std::size_t j : ext[i]) any = any || C.test(j);
            all = any;
          }
          if (all) return true;
        }
        return false;
      }
    }

    std::vector<Code> partial;
    partial.reserve(X.rows.size());
    std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
      tick();
      if (i == X.rows.size()) {
        ITeam Y{dom, partial};
        std::sort(Y.rows.begin(), Y.rows.end());
        Y.rows.erase(std::unique(Y.rows.begin(), Y.rows.end()), Y.rows.end());
        return check(body, Y, depth + 1);
      }
      for (std::size_t ch = 0; ch < choices; ++ch) {
        partial.push_back(assign(X.rows[i], ch));
        bool ok = true;
        if (!prune.empty()) {
          ITeam Y{dom, partial};
          std::sort(Y.rows.begin(), Y.rows.end());
          Y.rows.erase(std::unique(Y.rows.begin(), Y.rows.end()), Y.rows.end());
          for (int p : prune) {
            if (!check(p, Y, depth + 1)) {
              ok = false;
              break;
            }
          }
        }
        if (ok && dfs(i + 1)) return true;
        partial.pop_back();
      }
      return false;
    };
    return dfs(0);
  }

  std::vector<Code> project_off(const ITeam& X, SlotMask block) const {
    std::vector<Code> rows;
    rows.reserve(X.rows.size());
    for (Code c : X.rows) {
      for (std::size_t s = 0; s < P_.slot_count(); ++s) {
        if ((block >> s) & 1u) c = P_.set(c, static_cast<int>(s), 0);
      }
      rows.push_back(c);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
  }

  bool flat_;
};

void check_domain(const Team& X, const Formula& phi) {
  for (const auto& v : free_vars(phi)) {
    if (!X.has_var(v)) {
      throw InvalidInput("team domain lacks free variable '" + v + "'");
    }
  }
}

bool run(const Program& P, const ITeam& X, const Budget& budget,
         const EvalOptions& opts) {
  switch (opts.engine) {
    case Engine::Direct:
      return DirectEngine(P, budget).sat(P.root(), X);
    case Engine::Table: {
      TableEngine t(P, budget);
      const auto& dom = t.domain(X.dom);
      std::size_t mask = 0;
      for (Code c : X.rows) mask |= std::size_t{1} << t.index_of(dom, c);
      return t.table(P.root(), X.dom)[mask] != 0;
    }
    case Engine::Antichain:
      return AntichainEngine(P, budget, opts.flat_shortcut).check(P.root(), X);
  }
  throw InternalError("unknown engine");
}

}  // namespace

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Direct: return "direct";
    case Engine::Table: return "table";
    case Engine::Antichain: return "antichain";
  }
  return "?";
}

const char* truth_value_name(TruthValue v) {
  switch (v) {
    case TruthValue::True: return "TRUE";
    case TruthValue::EmptyOnly: return "EMPTY_ONLY";
    case TruthValue::False: return "FALSE";
  }
  return "?";
}

bool satisfies(const Model& M, const Team& X, const Formula& phi,
               const Budget& budget, const EvalOptions& opts) {
  check_domain(X, phi);
  Program P(M, phi, X.vars());
  return run(P, P.to_internal(X), budget, opts);
}

bool sentence_true(const Model& M, const Formula& phi, const Budget& budget,
                   const EvalOptions& opts) {
  if (!is_sentence(phi)) throw InvalidInput("formula is not a sentence");
  return satisfies(M, Team::unit(), phi, budget, opts);
}

TruthValue truth_value(const Model& M, const Formula& phi,
                       const Budget& budget, const EvalOptions& opts) {
  if (!is_sentence(phi)) throw InvalidInput("formula is not a sentence");
  const bool at_empty = satisfies(M, Team(), phi, budget, opts);
  const bool at_unit = satisfies(M, Team::unit(), phi, budget, opts);
  if (at_unit && !at_empty) {
    throw InternalError("downward closure violated: {∅} satisfies but ∅ does not");
  }
  if (at_unit) return TruthValue::True;
  return at_empty ? TruthValue::EmptyOnly : TruthValue::False;
}

std::vector<bool> satisfying_teams(const Model& M,
                                   const std::vector<std::string>& vars,
                                   const Formula& phi, const Budget& budget) {
  Team probe(vars);
  check_domain(probe, phi);
  Program P(M, phi, probe.vars());
  TableEngine t(P, budget);
  SlotMask dom = 0;
  for (const auto& v : probe.vars()) dom |= SlotMask{1} << P.slot(v);
  const auto& table = t.table(P.root(), dom);
  return std::vector<bool>(table.begin(), table.end());
}

std::vector<Team> maximal_subteams(const Model& M, const Team& X,
                                   const Formula& phi, const Budget& budget,
                                   const EvalOptions& opts) {
  check_domain(X, phi);
  Program P(M, phi, X.vars());
  const ITeam U = P.to_internal(X);
  AntichainEngine e(P, budget, opts.flat_shortcut);
  std::vector<Team> out;
  for (const RowSet& s : e.maxima(P.root(), U)) {
    ITeam Y{U.dom, {}};
    for (std::size_t i = 0; i < U.rows.size(); ++i) {
      if (s.test(i)) Y.rows.push_back(U.rows[i]);
    }
    out.push_back(P.to_public(Y));
  }
  std::sort(out.begin(), out.end(), [](const Team& a, const Team& b) {
    return a.rows() < b.rows();
  });
  return out;
}

}  // namespace tlk
