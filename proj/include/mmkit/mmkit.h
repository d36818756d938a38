#ifndef MMKIT_H
#define MMKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. All functions returning int use these; 0 means success. */
enum {
  MMK_OK = 0,
  MMK_EINVAL = 1, /* bad argument or unknown name */
  MMK_EDIM = 2,   /* dimension mismatch */
  MMK_ERING = 3,  /* operation unavailable in the requested ring */
  MMK_EPARSE = 4, /* malformed text input */
  MMK_EIO = 5,    /* file could not be read or written */
  MMK_EFAIL = 6   /* computation ran but failed a check */
};

/* An algorithm: an exact bilinear decomposition or an approximate scheme. */
typedef struct mmk_alg mmk_alg;

/* A dense row-major matrix of doubles. */
typedef struct mmk_mat mmk_mat;

/* Last error message for the calling thread. Valid until the next failing
   call on the same thread. Never NULL. */
const char* mmk_last_error(void);

/* --------------------------------------------------------------- algebra */

/* Builds a named builtin, e.g. "strassen2x2" or "aggregation_pair(2,3,4)". */
int mmk_alg_builtin(const char* spec, mmk_alg** out);

/* Reads an algorithm from its text format. */
int mmk_alg_load(const char* path, mmk_alg** out);

/* Writes an algorithm in its text format. */
int mmk_alg_save(const mmk_alg* alg, const char* path);

void mmk_alg_free(mmk_alg* alg);

const char* mmk_alg_name(const mmk_alg* alg);
size_t mmk_alg_rank(const mmk_alg* alg);

/* 1 if the algorithm is approximate (carries an error order), else 0. */
int mmk_alg_is_apa(const mmk_alg* alg);

/* Dimensions of the first (or only) multiplication target. */
int mmk_alg_target_dims(const mmk_alg* alg, size_t* k, size_t* m, size_t* n);

/* Checks the defining equations exactly. Sets *valid to 1 or 0. */
int mmk_alg_validate(const mmk_alg* alg, int* valid);

/* Operation census of the linear parts: additions and scalings by
   constants other than 0 and +-1. */
int mmk_alg_census(const mmk_alg* alg, long long* adds, long long* const_muls);

/* ----------------------------------------------------------- composition */

int mmk_tensor_product(const mmk_alg* a, const mmk_alg* b, mmk_alg** out);

/* mode is "cycle", "cycle2", or "transpose". */
int mmk_dualize(const mmk_alg* alg, const char* mode, mmk_alg** out);

/* Random diagonal change of basis plus a product permutation. */
int mmk_equivalence_random(const mmk_alg* alg, uint64_t seed, mmk_alg** out);

/* ---------------------------------------------------------------- matrices */

int mmk_mat_create(size_t rows, size_t cols, const double* data, mmk_mat** out);

/* Uniform random integer entries in [-9, 9]. */
int mmk_mat_random(size_t rows, size_t cols, uint64_t seed, mmk_mat** out);

void mmk_mat_free(mmk_mat* mat);

int mmk_mat_dims(const mmk_mat* mat, size_t* rows, size_t* cols);
int mmk_mat_get(const mmk_mat* mat, size_t i, size_t j, double* out);

/* Multiplies with the given exact algorithm over doubles. If the operand
   dimensions equal the base case the algorithm is applied once; square
   operands larger than the base case are handled recursively, padding to a
   power of the base size and cutting over to the straightforward method at
   blocks of size cutoff or less. */
int mmk_multiply(const mmk_alg* alg, const mmk_mat* a, const mmk_mat* b,
                 size_t cutoff, mmk_mat** out);

/* ---------------------------------------------------------------- studies */

/* Runs a named study ("multiply", "validate", "tau", ...) with parameters
   given as a JSON object. On success *out receives a malloc'd JSON report;
   free it with mmk_string_free. */
int mmk_run_scenario(const char* name, const char* params_json, char** out);

void mmk_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
