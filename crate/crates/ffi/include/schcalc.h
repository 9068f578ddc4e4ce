#ifndef SCHCALC_H
#define SCHCALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every call.
 */
typedef enum SchStatus {
  SCH_STATUS_OK = 0,
  SCH_STATUS_NULL_POINTER = 1,
  SCH_STATUS_INVALID_ARGUMENT = 2,
  SCH_STATUS_CONFIG = 3,
  SCH_STATUS_NUMERICAL = 4,
  SCH_STATUS_BUFFER_TOO_SMALL = 5,
  SCH_STATUS_PANIC = 6,
  SCH_STATUS_IO = 7,
} SchStatus;

/*
 A grid, potential and assembled operator.
 */
typedef struct SchOperator SchOperator;

/*
 Eigenpairs of an operator.
 */
typedef struct SchSpectrum SchSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The message of the last failed call on this thread, or null. The pointer
 stays valid until the next call on the same thread.
 */
const char *sch_last_error_message(void);

/*
 Builds `L = -Δ + V` on `n` points of period `period`. `potential` is a
 spec string such as `"quadratic"`, `"constant:1"` or `"well:4,0.5"`.

 # Safety
 `potential` must be a nul-terminated string and `out_op` a valid pointer.
 */
enum SchStatus sch_operator_new(size_t n,
                                double period,
                                const char *potential,
                                struct SchOperator **out_op);

/*
 # Safety
 `op` must come from [`sch_operator_new`] and not be used afterwards.
 */
void sch_operator_free(struct SchOperator *op);

/*
 Number of grid points.

 # Safety
 `op` must be a live handle.
 */
enum SchStatus sch_operator_len(const struct SchOperator *op, size_t *out_len);

/*
 Critical radius `ρ` at grid node `index`.

 # Safety
 `op` must be a live handle and `out_rho` valid.
 */
enum SchStatus sch_critical_radius(const struct SchOperator *op, size_t index, double *out_rho);

/*
 Diagonalizes the operator.

 # Safety
 `op` must be a live handle and `out_spec` valid.
 */
enum SchStatus sch_spectrum_new(const struct SchOperator *op, struct SchSpectrum **out_spec);

/*
 # Safety
 `spec` must come from [`sch_spectrum_new`] and not be used afterwards.
 */
void sch_spectrum_free(struct SchSpectrum *spec);

/*
 Copies the ascending eigenvalues into `buf`, which must hold `len >= n`.

 # Safety
 `buf` must point to `len` writable doubles.
 */
enum SchStatus sch_spectrum_eigenvalues(const struct SchSpectrum *spec, double *buf, size_t len);

/*
 `out = e^{-tL} f` for real `f` of length `n`.

 # Safety
 `f` and `out` must each point to `len` doubles.
 */
enum SchStatus sch_heat_apply(const struct SchSpectrum *spec,
                              double t,
                              const double *f,
                              double *out,
                              size_t len);

/*
 `out = e^{-t√L} f` for real `f` of length `n`.

 # Safety
 `f` and `out` must each point to `len` doubles.
 */
enum SchStatus sch_poisson_apply(const struct SchSpectrum *spec,
                                 double t,
                                 const double *f,
                                 double *out,
                                 size_t len);

/*
 `∂_t^β e^{-t√L} f` for real `f`; the result is complex for non-integer
 `β` and is split into `out_re` and `out_im`.

 # Safety
 `f`, `out_re` and `out_im` must each point to `len` doubles.
 */
enum SchStatus sch_frac_deriv_apply(const struct SchSpectrum *spec,
                                    double beta,
                                    double t,
                                    const double *f,
                                    double *out_re,
                                    double *out_im,
                                    size_t len);

/*
 Periodic `α`-Hölder seminorm of real samples on `n` points of period
 `period`.

 # Safety
 `f` must point to `n` doubles.
 */
enum SchStatus sch_holder_seminorm(const double *f,
                                   size_t n,
                                   double period,
                                   double alpha,
                                   double *out_value);

/*
 Runs the suites named in a key-value configuration (the same format as
 the `schcalc` config file, `suites = ...` required). On success
 `out_json` receives a JSON array of reports, to be released with
 [`sch_string_free`], and `out_exit` the status the CLI would exit with.

 # Safety
 `config` must be a nul-terminated string; out pointers must be valid.
 */
enum SchStatus sch_run_suites(const char *config, char **out_json, int32_t *out_exit);

/*
 # Safety
 `s` must come from this library and not be used afterwards.
 */
void sch_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHCALC_H */
