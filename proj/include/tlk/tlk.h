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

/* C interface to the team logic workbench.
 *
 * Every function returns a tlk_status. On failure the message is available
 * from tlk_last_error() on the same thread until the next call. Strings
 * returned through char** are owned by the caller and released with
 * tlk_string_free. Handles are released with their *_free function; passing
 * NULL to a *_free function is a no-op. */

#ifndef TLK_TLK_H
#define TLK_TLK_H

#include <stdint.h>

#if defined(TLK_BUILDING_LIBRARY)
#define TLK_API __attribute__((visibility("default")))
#else
#define TLK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  TLK_OK = 0,
  TLK_ERR_PARSE = 1,         /* malformed text or arguments */
  TLK_ERR_INVALID_INPUT = 2, /* well formed but unusable (wrong fragment...) */
  TLK_ERR_BUDGET = 3,        /* an enumeration limit was hit */
  TLK_ERR_INTERNAL = 4
} tlk_status;

typedef enum {
  TLK_LOGIC_BID = 0,
  TLK_LOGIC_D = 1,
  TLK_LOGIC_ID = 2,
  TLK_LOGIC_LD = 3,
  TLK_LOGIC_FO = 4,
  TLK_LOGIC_SO = 5
} tlk_logic;

typedef enum { TLK_TRUE = 0, TLK_EMPTY_ONLY = 1, TLK_FALSE = 2 } tlk_truth;

typedef enum { TLK_PASS = 0, TLK_FAIL = 1, TLK_BUDGET = 2 } tlk_verdict;

typedef struct tlk_signature tlk_signature;
typedef struct tlk_model tlk_model;
typedef struct tlk_team tlk_team;
typedef struct tlk_formula tlk_formula;

typedef struct {
  uint64_t max_team_rows;
  uint64_t max_team_space_rows;
  uint64_t max_models;
  double timeout_s; /* 0 disables */
  int jobs;
} tlk_budget;

TLK_API const char* tlk_version(void);
TLK_API const char* tlk_last_error(void);
TLK_API void tlk_string_free(char* s);
TLK_API void tlk_budget_default(tlk_budget* out);

/* {"relations":{"R":2},"functions":{"f":1},"constants":["c"]} */
TLK_API tlk_status tlk_signature_parse_json(const char* json, tlk_signature** out);
TLK_API tlk_status tlk_signature_to_json(const tlk_signature* sig, char** out);
TLK_API void tlk_signature_free(tlk_signature* sig);

/* expected may be NULL. */
TLK_API tlk_status tlk_model_load_json(const char* json, const tlk_signature* expected,
                                       tlk_model** out);
TLK_API tlk_status tlk_model_to_json(const tlk_model* m, char** out);
TLK_API int tlk_model_size(const tlk_model* m);
TLK_API void tlk_model_free(tlk_model* m);
/* One model per line, in enumeration order. */
TLK_API tlk_status tlk_models_enumerate(const tlk_signature* sig, int size,
                                        const tlk_budget* budget, char** out);

TLK_API tlk_status tlk_team_load_json(const char* json, int domain_size, tlk_team** out);
TLK_API void tlk_team_free(tlk_team* t);

/* sig may be NULL: symbols are then inferred from use. For D, ID, LD and FO
 * the formula must belong to that fragment. */
TLK_API tlk_status tlk_formula_parse(const char* text, tlk_logic logic,
                                     const tlk_signature* sig, tlk_formula** out);
TLK_API void tlk_formula_free(tlk_formula* f);
TLK_API int tlk_formula_is_second_order(const tlk_formula* f);
TLK_API tlk_status tlk_formula_render(const tlk_formula* f, char** out);
/* {"least":"D","members":["D","LD","BID"]}; SO formulas report "SO". */
TLK_API tlk_status tlk_formula_fragments(const tlk_formula* f, char** out);
TLK_API tlk_status tlk_formula_signature(const tlk_formula* f, tlk_signature** out);

/* team NULL: the formula must be a sentence; it is evaluated at {∅}, or at ∅
 * when at_empty_team is nonzero. Second order formulas ignore the team. */
TLK_API tlk_status tlk_eval(const tlk_model* m, const tlk_team* team,
                            const tlk_formula* f, int at_empty_team,
                            const tlk_budget* budget, int* result);
TLK_API tlk_status tlk_truth_value(const tlk_model* m, const tlk_formula* f,
                                   const tlk_budget* budget, tlk_truth* result);

/* Routes: fo2id s112d d2id pi112id so2bid so2id so2ld novee.
 * trace may be NULL. */
TLK_API tlk_status tlk_translate(const tlk_formula* f, const char* route,
                                 tlk_formula** out, char** trace);

/* Translates, then checks the result against the input over all models up
 * to max_size. sig NULL: the input's own symbols. report receives a text
 * summary followed by one JSON line. */
TLK_API tlk_status tlk_verify(const tlk_formula* f, const char* route,
                              const tlk_signature* sig, int max_size,
                              int at_empty_team, const tlk_budget* budget,
                              tlk_verdict* verdict, char** report);

/* Suites: downward flat empty eqbid adjoint negation locality.
 * formulas <= 0 uses the default count. */
TLK_API tlk_status tlk_laws(const char* suite, const tlk_signature* sig,
                            int max_size, uint64_t seed, int formulas,
                            const tlk_budget* budget, int* failures,
                            char** report);

#ifdef __cplusplus
}
#endif

#endif /* TLK_TLK_H */
