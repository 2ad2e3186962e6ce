#ifndef TALBOT_H
#define TALBOT_H

/* Generated by cbindgen from talbot-ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TalbotStatus {
  TALBOT_STATUS_OK = 0,
  TALBOT_STATUS_NULL_POINTER = 1,
  TALBOT_STATUS_INVALID_ARGUMENT = 2,
  TALBOT_STATUS_OUTSIDE_DOMAIN = 3,
  TALBOT_STATUS_BUDGET_EXCEEDED = 4,
  TALBOT_STATUS_NOT_PRIME = 5,
  TALBOT_STATUS_INTERNAL = 6,
  TALBOT_STATUS_PANIC = 7,
} TalbotStatus;

// Comb datum `f_R` for a power symbol.
typedef struct TalbotDatum TalbotDatum;

// Table of complete exponential sums for one polynomial and prime.
typedef struct TalbotSumTable TalbotSumTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL
// terminated, truncated to `len`) and returns the full message length.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t talbot_last_error(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *talbot_version(void);

// Builds the table of `Š(p)` for the polynomial `poly` (e.g. `"x^3+y^3"`)
// modulo the prime `q`.
//
// # Safety
// `poly` must be a NUL-terminated string and `out` a valid pointer.
enum TalbotStatus talbot_sum_table_new(const char *poly, uint64_t q, struct TalbotSumTable **out);

// Value `Š(p)` for `p = (p₁, p′)` of length `d + 1`.
//
// # Safety
// `table` must come from [`talbot_sum_table_new`]; `p` must hold `len`
// values; `re` and `im` must be valid.
enum TalbotStatus talbot_sum_table_get(const struct TalbotSumTable *table,
                                       const int64_t *p,
                                       size_t len,
                                       double *re,
                                       double *im);

// Density of `G(q) = {|Š(p)| ≥ c1 q^{d/2}}`.
//
// # Safety
// `table` must come from [`talbot_sum_table_new`]; `out` must be valid.
enum TalbotStatus talbot_sum_table_gq_density(const struct TalbotSumTable *table,
                                              double c1,
                                              double *out);

// Releases a table; null is ignored.
//
// # Safety
// `table` must be null or come from [`talbot_sum_table_new`], and not be
// used afterwards.
void talbot_sum_table_free(struct TalbotSumTable *table);

// Builds `f_R` for the symbol `ξ₁^k + W(ξ′)` at scale `r` and `(u1, u2)`.
//
// # Safety
// `w` must be a NUL-terminated string and `out` a valid pointer.
enum TalbotStatus talbot_datum_new(const char *w,
                                   uint32_t k,
                                   double r,
                                   double u1,
                                   double u2,
                                   struct TalbotDatum **out);

// Dimension `n` of the datum.
//
// # Safety
// `datum` must come from [`talbot_datum_new`]; `out` must be valid.
enum TalbotStatus talbot_datum_dim(const struct TalbotDatum *datum, uint32_t *out);

// `‖f_R‖₂`.
//
// # Safety
// `datum` must come from [`talbot_datum_new`]; `out` must be valid.
enum TalbotStatus talbot_datum_norm(const struct TalbotDatum *datum, double *out);

// `T_t f_R(x)` for `x` of length `n`.
//
// # Safety
// `datum` must come from [`talbot_datum_new`]; `x` must hold `len` values;
// `re` and `im` must be valid.
enum TalbotStatus talbot_datum_evolve(const struct TalbotDatum *datum,
                                      const double *x,
                                      size_t len,
                                      double t,
                                      double *re,
                                      double *im);

// Releases a datum; null is ignored.
//
// # Safety
// `datum` must be null or come from [`talbot_datum_new`], and not be used
// afterwards.
void talbot_datum_free(struct TalbotDatum *datum);

// Mass Transference Principle bound for exponents `b` and dilations `a`.
//
// # Safety
// `b` and `a` must hold `len` values; `out` must be valid.
enum TalbotStatus talbot_mtp_lower_bound(const double *b, const double *a, size_t len, double *out);

// `2/τ`.
//
// # Safety
// `out` must be valid.
enum TalbotStatus talbot_jarnik_dim(double tau, double *out);

// Hausdorff dimension of the divergence set at `(u1, u2)`.
//
// # Safety
// `out` must be valid.
enum TalbotStatus talbot_dim_f(double u1, double u2, uint32_t k, uint32_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TALBOT_H */
