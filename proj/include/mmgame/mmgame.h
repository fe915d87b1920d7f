#ifndef MMGAME_MMGAME_H
#define MMGAME_MMGAME_H

#include <stddef.h>
#include <stdint.h>

#if defined(MMG_BUILDING_LIBRARY)
#define MMG_API __attribute__((visibility("default")))
#else
#define MMG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure mmg_last_error() holds a
 * message for the calling thread until its next failing call. */
typedef enum mmg_status {
  MMG_OK = 0,
  MMG_INVALID_ARGUMENT = 1,
  MMG_DOMAIN = 2,
  MMG_BUDGET = 3,
  MMG_NO_STRATEGY = 4,
  MMG_IO = 5,
  MMG_PARSE = 6,
  MMG_INVARIANT = 7,
  MMG_INTERNAL = 8
} mmg_status;

typedef enum mmg_family { MMG_FAMILY_AB = 0, MMG_FAMILY_Ab = 1, MMG_FAMILY_aB = 2, MMG_FAMILY_ab = 3 } mmg_family;
typedef enum mmg_player { MMG_ALICE = 0, MMG_BOB = 1 } mmg_player;

typedef struct mmg_spec {
  int32_t family;    /* mmg_family */
  int32_t rounds;    /* n; the game has 2n moves */
  int32_t bob_first; /* nonzero for the primed variant */
} mmg_spec;

typedef struct mmg_estimate {
  double value;
  double ci_low;
  double ci_high;
  uint64_t replicas; /* 0 for exact methods */
  uint64_t seed;
} mmg_estimate;

typedef struct mmg_leaves mmg_leaves;
typedef struct mmg_strategy mmg_strategy;
typedef struct mmg_cycle mmg_cycle;
typedef struct mmg_frames mmg_frames;

MMG_API const char* mmg_version(void);
MMG_API const char* mmg_last_error(void);
/* Releases strings and byte buffers returned through out-parameters. */
MMG_API void mmg_string_free(char* s);

MMG_API mmg_status mmg_set_memory_budget(uint64_t bytes);
MMG_API uint64_t mmg_memory_budget(void);

/* Names: AB, Ab, aB, ab, optionally followed by ' for Bob moving first. */
MMG_API mmg_status mmg_spec_parse(const char* name, int32_t rounds, mmg_spec* out);
MMG_API mmg_status mmg_spec_name(mmg_spec spec, char** out);
MMG_API mmg_status mmg_outcome_count(mmg_spec spec, uint64_t* out);
/* Vertex text for the outcome with the given level ordinal. */
MMG_API mmg_status mmg_outcome_name(mmg_spec spec, uint64_t ordinal, char** out);

/* Leaf assignments, indexed by outcome ordinal. */
MMG_API mmg_status mmg_leaves_create(mmg_spec spec, const uint8_t* bits, uint64_t len, mmg_leaves** out);
MMG_API mmg_status mmg_leaves_sample(mmg_spec spec, double p, uint64_t seed, mmg_leaves** out);
MMG_API mmg_status mmg_leaves_bits(const mmg_leaves* x, uint8_t* buf, uint64_t len);
MMG_API mmg_status mmg_leaves_eval(const mmg_leaves* x, int32_t* out);
MMG_API void mmg_leaves_free(mmg_leaves* x);

/* MMG_NO_STRATEGY when `player` does not win on `x`. */
MMG_API mmg_status mmg_strategy_extract(const mmg_leaves* x, int32_t player, mmg_strategy** out);
MMG_API mmg_status mmg_strategy_random(mmg_spec spec, int32_t player, uint64_t seed, mmg_strategy** out);
MMG_API mmg_status mmg_strategy_is_winning(const mmg_strategy* s, const mmg_leaves* x, int32_t* out);
MMG_API void mmg_strategy_free(mmg_strategy* s);

/* Methods: exact, exact-column, recursion, brute-force, mc, payoff-cdf. */
MMG_API mmg_status mmg_win_prob(mmg_spec spec, double p, const char* method, uint64_t replicas, uint64_t seed,
                                mmg_estimate* out);
/* Exact rational "num/den" by enumeration (at most 16 outcomes). */
MMG_API mmg_status mmg_win_prob_rational(mmg_spec spec, double p, char** out);
MMG_API mmg_status mmg_ab_tree_recursion(int32_t n, double p, double* out);
/* Per-iteration column laws of the Ab or aB exact computation as JSON. */
MMG_API mmg_status mmg_column_trace(mmg_spec spec, double p, char** json);

/* Analysis; reports are JSON documents except for the CSV sweep. */
MMG_API mmg_status mmg_threshold(mmg_spec spec, double level, const char* method, double tol, uint64_t replicas,
                                 uint64_t max_replicas, uint64_t seed, char** json);
MMG_API mmg_status mmg_window(mmg_spec spec, double eps, const char* method, double tol, uint64_t replicas,
                              uint64_t seed, char** json);
MMG_API mmg_status mmg_influence(mmg_spec spec, double p, uint64_t replicas, uint64_t seed, double dp, char** json);
/* `specs` is a comma-separated list of spec names. */
MMG_API mmg_status mmg_sweep(const char* specs, const int32_t* ns, uint64_t n_len, const double* ps, uint64_t p_len,
                             const char* method, uint64_t replicas, uint64_t seed, char** csv);
MMG_API mmg_status mmg_bounds_report(int32_t n_threshold, int32_t n_ab, int32_t n_order, uint64_t replicas,
                                     uint64_t seed, char** json);

/* Toom cycles. Construction needs a winning or arbitrary Alice strategy on
 * a spec whose Bob side is the lattice. */
MMG_API mmg_status mmg_cycle_construct(const mmg_strategy* alice, mmg_cycle** out);
MMG_API mmg_status mmg_cycle_from_json(const char* json, mmg_cycle** out);
MMG_API mmg_status mmg_cycle_to_json(const mmg_cycle* c, char** json);
/* *ok = 1 for a valid cycle; otherwise *index is the offending walk index
 * and *reason (optional, may be NULL) describes it. */
MMG_API mmg_status mmg_cycle_validate(const mmg_cycle* c, int32_t* ok, int64_t* index, char** reason);
MMG_API mmg_status mmg_cycle_census(const mmg_cycle* c, char** json);
MMG_API mmg_status mmg_cycle_present(const mmg_cycle* c, const mmg_leaves* x, int32_t* out);
MMG_API void mmg_cycle_free(mmg_cycle* c);
MMG_API mmg_status mmg_toom_enumerate(mmg_spec spec, int32_t m_max, uint64_t node_budget, char** json);
MMG_API mmg_status mmg_toom_false_positive(mmg_spec spec, uint64_t budget, uint64_t seed, char** json);
/* *finite = 0 when the series diverges. */
MMG_API mmg_status mmg_peierls_tail(mmg_spec spec, int32_t n, double p, double* out, int32_t* finite);

/* Cellular automata. Schedules: AB, Ab, aB, ab. */
MMG_API mmg_status mmg_ca_snapshot(const char* schedule, uint64_t width, uint64_t height, const int32_t* times,
                                   uint64_t n_times, uint64_t seed, mmg_frames** out);
MMG_API uint64_t mmg_frames_count(const mmg_frames* f);
MMG_API mmg_status mmg_frame_info(const mmg_frames* f, uint64_t index, int32_t* time, uint64_t* width,
                                  uint64_t* height);
MMG_API mmg_status mmg_frame_pgm(const mmg_frames* f, uint64_t index, char** bytes, uint64_t* len);
MMG_API mmg_status mmg_frame_csv(const mmg_frames* f, uint64_t index, char** csv);
MMG_API void mmg_frames_free(mmg_frames* f);
MMG_API mmg_status mmg_ca_verify(mmg_spec spec, double p, uint64_t trials, uint64_t seed, char** json);

/* Structural claims; the JSON carries "status": holds | violated | inapplicable. */
MMG_API mmg_status mmg_verify_sandwich(mmg_spec spec, char** json);
MMG_API mmg_status mmg_verify_projection(int32_t n, uint64_t trials, uint64_t seed, char** json);
/* L is the game's outcome function when `spec` is given (vars <= 0), or a
 * random monotone function on `vars` variables otherwise. */
MMG_API mmg_status mmg_verify_compar(const mmg_spec* spec, int32_t vars, int32_t generators, double inclusion,
                                     const int32_t* psi, uint64_t psi_len, int32_t targets, double p,
                                     int32_t zero_sets, uint64_t seed, char** json);
MMG_API mmg_status mmg_verify_treeprop(int32_t n, uint64_t samples, uint64_t seed, char** json);

MMG_API mmg_status mmg_write_file_atomic(const char* path, const char* data, uint64_t len);
MMG_API mmg_status mmg_format_double(double v, char** out);

#ifdef __cplusplus
}
#endif

#endif
