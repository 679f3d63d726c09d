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

// Seeded random formulas for property checks. The same seed always gives
// the same sequence.

#ifndef TLK_GENERATE_HPP
#define TLK_GENERATE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tlk/ast.hpp"

namespace tlk {

struct GenOptions {
  Fragment fragment = Fragment::BID;
  // Variables used in terms; quantifiers rebind these same names.
  std::vector<std::string> vars{"x", "y"};
  int max_depth = 3;
  bool quantifiers = true;
  int term_depth = 1;  // nesting of signature functions
};

class FormulaGenerator {
 public:
  FormulaGenerator(Signature sig, std::uint64_t seed);

  Term term(const std::vector<std::string>& vars, int depth);
  Formula formula(const GenOptions& opts);
  // A formula whose free variables are closed by random quantifiers.
  Formula sentence(const GenOptions& opts);

  // A second order sentence already in nice normal form over the signature:
  // blocks alternate starting universally, p functions of arity q each,
  // universals x1..xq, each function applied to one permutation of them.
  SOFormula normal_form_sentence(int blocks, int p, int q, int matrix_depth);

  // A uniformly random integer in [0, n).
  int below(int n);
  std::mt19937_64& rng() { return rng_; }

 private:
  Formula leaf(const GenOptions& opts);
  Formula node(const GenOptions& opts, int depth);
  AtomicFormula atom(const std::vector<std::string>& vars, int term_depth);

  Signature sig_;
  std::mt19937_64 rng_;
};

}  // namespace tlk

#endif  // TLK_GENERATE_HPP
