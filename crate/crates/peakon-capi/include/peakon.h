/* C interface for the peakon inverse-spectral library. */

#ifndef PEAKON_H
#define PEAKON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; nonzero mirrors the CLI exit codes where applicable.
typedef enum PkStatus {
  PkStatus_Ok = 0,
  PkStatus_VerificationFailed = 1,
  PkStatus_InvalidInput = 2,
  PkStatus_Numerical = 3,
  PkStatus_InadmissibleParameter = 4,
  PkStatus_NullArgument = 5,
  PkStatus_BufferTooSmall = 6,
} PkStatus;

// Opaque spectral chart (roots, actions, angles, residues of one family).
typedef struct PkChart PkChart;

// Opaque rational Herglotz function (Weyl data).
typedef struct PkHerglotz PkHerglotz;

// Opaque peakon configuration (positions, momenta, time label).
typedef struct PkState PkState;

// Opaque discrete string (gaps and point masses on the interval).
typedef struct PkString PkString;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *pk_last_error(void);

// Library version as a static string.
const char *pk_version(void);

// Creates a peakon state from `n` positions and momenta.
//
// # Safety
// `q` and `p` must point to `n` readable doubles; `out` must be a valid
// output slot. The returned handle is freed with `pk_state_free`.
enum PkStatus pk_state_new(const double *q,
                           const double *p,
                           uintptr_t n,
                           double t,
                           struct PkState **out);

// Parses a peakon state from JSON `{"q": [...], "p": [...], "t": ...}`.
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` a valid output slot.
enum PkStatus pk_state_from_json(const char *json, struct PkState **out);

// # Safety
// `state` must be a live handle from this library or null.
void pk_state_free(struct PkState *state);

// Number of peakons.
//
// # Safety
// `state` live handle.
uintptr_t pk_state_len(const struct PkState *state);

// Copies positions into `buf` (capacity `cap`).
//
// # Safety
// `state` live handle; `buf` writable for `cap` doubles.
enum PkStatus pk_state_positions(const struct PkState *state, double *buf, uintptr_t cap);

// Copies momenta into `buf` (capacity `cap`).
//
// # Safety
// `state` live handle; `buf` writable for `cap` doubles.
enum PkStatus pk_state_momenta(const struct PkState *state, double *buf, uintptr_t cap);

// Value of the peakon Hamiltonian.
//
// # Safety
// `state` live handle; `out` writable.
enum PkStatus pk_state_hamiltonian(const struct PkState *state, double *out);

// Serializes a state to JSON; release the string with `pk_string_release`.
//
// # Safety
// `state` live handle; `out` a valid output slot.
enum PkStatus pk_state_to_json(const struct PkState *state, char **out);

// Frees a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void pk_string_release(char *s);

// Builds a string from `n + 1` gaps and `n` masses (gaps sum to 4).
//
// # Safety
// `gaps` points to `n_gaps` doubles, `masses` to `n_masses`; `out` valid.
enum PkStatus pk_string_new(const double *gaps,
                            uintptr_t n_gaps,
                            const double *masses,
                            uintptr_t n_masses,
                            struct PkString **out);

// Liouville map from a peakon state.
//
// # Safety
// `state` live handle; `out` valid output slot.
enum PkStatus pk_string_from_peakons(const struct PkState *state, struct PkString **out);

// Inverse Liouville map.
//
// # Safety
// `string` live handle; `out` valid output slot.
enum PkStatus pk_string_to_peakons(const struct PkString *string, double t, struct PkState **out);

// # Safety
// `string` must be a live handle or null.
void pk_string_free(struct PkString *string);

// Number of point masses.
//
// # Safety
// `string` live handle.
uintptr_t pk_string_n_masses(const struct PkString *string);

// Copies the `n + 1` gaps.
//
// # Safety
// `string` live handle; `buf` writable for `cap` doubles.
enum PkStatus pk_string_gaps(const struct PkString *string, double *buf, uintptr_t cap);

// Copies the `n` masses.
//
// # Safety
// `string` live handle; `buf` writable for `cap` doubles.
enum PkStatus pk_string_masses(const struct PkString *string, double *buf, uintptr_t cap);

// All real roots of `a phi + b psi`, ascending. `*out_len` receives the
// count; pass `buf = NULL, cap = 0` first to size the buffer.
//
// # Safety
// `string` live handle; `buf` writable for `cap` doubles when non-null;
// `out_len` writable or null.
enum PkStatus pk_mixed_spectrum(const struct PkString *string,
                                double a,
                                double b,
                                double *buf,
                                uintptr_t cap,
                                uintptr_t *out_len);

// Weyl function of the free-left-end string (`psi/phi` data).
//
// # Safety
// `string` live handle; `out` valid output slot.
enum PkStatus pk_weyl_omega0(const struct PkString *string, struct PkHerglotz **out);

// Weyl function of the fixed-ends string (`-phi/psi` data).
//
// # Safety
// `string` live handle; `out` valid output slot.
enum PkStatus pk_weyl_e0(const struct PkString *string, struct PkHerglotz **out);

// Builds a Herglotz function from raw pole/residue data.
//
// # Safety
// `poles` and `residues` point to `n` doubles each; `out` valid.
enum PkStatus pk_herglotz_new(double alpha,
                              const double *poles,
                              const double *residues,
                              uintptr_t n,
                              struct PkHerglotz **out);

// # Safety
// `h` must be a live handle or null.
void pk_herglotz_free(struct PkHerglotz *h);

// Number of poles.
//
// # Safety
// `h` live handle.
uintptr_t pk_herglotz_n_poles(const struct PkHerglotz *h);

// Constant term at infinity.
//
// # Safety
// `h` live handle; `out` writable.
enum PkStatus pk_herglotz_alpha(const struct PkHerglotz *h, double *out);

// Copies the poles (requires a pole/residue form).
//
// # Safety
// `h` live handle; `buf` writable for `cap` doubles.
enum PkStatus pk_herglotz_poles(const struct PkHerglotz *h, double *buf, uintptr_t cap);

// Copies the residues (requires a pole/residue form).
//
// # Safety
// `h` live handle; `buf` writable for `cap` doubles.
enum PkStatus pk_herglotz_residues(const struct PkHerglotz *h, double *buf, uintptr_t cap);

// Evaluates the function away from its poles.
//
// # Safety
// `h` live handle; `out` writable.
enum PkStatus pk_herglotz_eval(const struct PkHerglotz *h, double x, double *out);

// Reconstructs the string behind Weyl data (`flavor`: 0 for the `psi/phi`
// normalization with value 4 at zero, 1 for the `-phi/psi` normalization
// with value -1/4).
//
// # Safety
// `h` live handle; `out` valid output slot.
enum PkStatus pk_reconstruct(const struct PkHerglotz *h, int32_t flavor, struct PkString **out);

// Extracts the spectral chart (`kind`: 0 for the C family, 1 for the F
// family) at the given parameter.
//
// # Safety
// `string` live handle; `out` valid output slot.
enum PkStatus pk_chart_extract(const struct PkString *string,
                               int32_t kind,
                               double parameter,
                               struct PkChart **out);

// # Safety
// `ch` must be a live handle or null.
void pk_chart_free(struct PkChart *ch);

// Number of chart points.
//
// # Safety
// `ch` live handle.
uintptr_t pk_chart_n(const struct PkChart *ch);

// Copies roots (0), actions (1), angles (2), or residues (3) into `buf`.
//
// # Safety
// `ch` live handle; `buf` writable for `cap` doubles.
enum PkStatus pk_chart_data(const struct PkChart *ch, int32_t which, double *buf, uintptr_t cap);

// Evolves the chart under a power-sum Hamiltonian of its own actions:
// `h(I) = sum_j coeffs[j] * sum_n I_n^powers[j]`.
//
// # Safety
// `ch` live handle; `powers` and `coeffs` point to `n_coeffs` entries;
// `out` valid output slot.
enum PkStatus pk_chart_evolve(const struct PkChart *ch,
                              const uint32_t *powers,
                              const double *coeffs,
                              uintptr_t n_coeffs,
                              double t,
                              struct PkChart **out);

// Rebuilds the string behind a chart (inverse of extraction).
//
// # Safety
// `ch` live handle; `out` valid output slot.
enum PkStatus pk_chart_to_string(const struct PkChart *ch, struct PkString **out);

// Integrates the peakon system to `t_final`. `out_outcome` receives 0 on
// completion, 1 when a collision halted the run (then `out_event_time` is
// the estimated blow-up time).
//
// # Safety
// `state` live handle; output pointers writable or null.
enum PkStatus pk_simulate(const struct PkState *state,
                          double t_final,
                          double rtol,
                          double atol,
                          double collision_eps,
                          struct PkState **out_state,
                          int32_t *out_outcome,
                          double *out_event_time);

// First and second spectral power sums `sum 1/lambda_k(a,b)` and
// `sum 1/lambda_k(a,b)^2` from the closed-form trace coefficients.
//
// # Safety
// `state` live handle; output pointers writable or null.
enum PkStatus pk_trace_power_sums(const struct PkState *state,
                                  double a,
                                  double b,
                                  double *out_first,
                                  double *out_second);

// Direct-space flow Hamiltonian (`which`: 0 H1(C), 1 H2(C), 2 T1(F), 3 T2(F)).
//
// # Safety
// `state` live handle; `out` writable.
enum PkStatus pk_hamiltonian_direct(const struct PkState *state,
                                    int32_t which,
                                    double parameter,
                                    double *out);

// Runs the randomized verification suites at the given seed (reduced sizes
// when `quick` is nonzero); `Ok` iff every check passed.
enum PkStatus pk_verify(uint64_t seed, int32_t quick);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PEAKON_H */
