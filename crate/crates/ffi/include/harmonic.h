#ifndef HARMONIC_H
#define HARMONIC_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result codes.
 */
typedef enum HarmonicStatus {
  HARMONIC_STATUS_OK = 0,
  HARMONIC_STATUS_NULL_POINTER = 1,
  HARMONIC_STATUS_INVALID_ARGUMENT = 2,
  HARMONIC_STATUS_DOMAIN = 3,
  HARMONIC_STATUS_UNSUPPORTED = 4,
  HARMONIC_STATUS_NUMERICAL = 5,
  HARMONIC_STATUS_BUFFER_TOO_SMALL = 6,
  HARMONIC_STATUS_PANIC = 7,
} HarmonicStatus;

/*
 Exact polynomial in `cos r` with rational coefficients.
 */
typedef struct HarmonicPoly HarmonicPoly;

/*
 Samples of a radial function on a grid.
 */
typedef struct HarmonicProfile HarmonicProfile;

/*
 A rank-one symmetric space or flat space.
 */
typedef struct HarmonicSpace HarmonicSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or NULL. Valid until the next
 failing call on the same thread.
 */
const char *harmonic_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *harmonic_version(void);

/*
 Parses an identifier such as `sphere:3`, `cpn:2` or `op2`.

 # Safety
 `id` must be a NUL-terminated string; `out` must be writable.
 */
enum HarmonicStatus harmonic_space_parse(const char *id, struct HarmonicSpace **out);

/*
 # Safety
 `space` must come from [`harmonic_space_parse`] or be NULL.
 */
void harmonic_space_free(struct HarmonicSpace *space);

/*
 Real dimension `n`.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_space_dimension(const struct HarmonicSpace *space, uint32_t *out_n);

/*
 Density exponents of a compact space.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_space_exponents(const struct HarmonicSpace *space,
                                             double *out_alpha,
                                             double *out_beta);

/*
 Closed-form `r^(n-1) omega(r)`.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_space_density(const struct HarmonicSpace *space,
                                           double r,
                                           double *out);

/*
 Einstein constant of a compact space.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_space_ricci(const struct HarmonicSpace *space, double *out);

/*
 `det J` from Jacobi-tensor integration on `grid_size` uniform points over `[0, r_max]`.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_density_profile(const struct HarmonicSpace *space,
                                             double r_max,
                                             uintptr_t grid_size,
                                             struct HarmonicProfile **out);

/*
 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_profile_len(const struct HarmonicProfile *profile, uintptr_t *out_len);

/*
 Copies grid and values into caller buffers of length `len`, which must be
 at least the profile length. Either buffer may be NULL to skip it.

 # Safety
 Non-null buffers must hold `len` doubles.
 */
enum HarmonicStatus harmonic_profile_copy(const struct HarmonicProfile *profile,
                                          double *grid,
                                          double *values,
                                          uintptr_t len);

/*
 # Safety
 `profile` must come from this library or be NULL.
 */
void harmonic_profile_free(struct HarmonicProfile *profile);

/*
 `lambda_k = k (k + alpha + beta)`.

 # Safety
 `out` must be writable.
 */
enum HarmonicStatus harmonic_spectrum(double alpha, double beta, uint32_t k, double *out);

/*
 Exact radial eigenfunction `Phi_{lambda_k}` as a polynomial in `cos r`.
 Exponents must be nonnegative integers or half-integers.

 # Safety
 `out` must be writable.
 */
enum HarmonicStatus harmonic_phi_polynomial(double alpha,
                                            double beta,
                                            uint32_t k,
                                            struct HarmonicPoly **out);

/*
 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_poly_degree(const struct HarmonicPoly *poly, uintptr_t *out);

/*
 Coefficients in ascending powers of `cos r`, rounded to double.

 # Safety
 `out` must hold `len >= degree + 1` doubles.
 */
enum HarmonicStatus harmonic_poly_coefficients(const struct HarmonicPoly *poly,
                                               double *out,
                                               uintptr_t len);

/*
 Exact coefficient `index` as a string like `3/4`; free with [`harmonic_string_free`].

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_poly_coefficient_string(const struct HarmonicPoly *poly,
                                                     uintptr_t index,
                                                     char **out);

/*
 `Phi(r)` evaluated at a radius.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_poly_eval_radius(const struct HarmonicPoly *poly,
                                              double r,
                                              double *out);

/*
 Whether the roots of the polynomial and its derivative strictly alternate in `(-1, 1)`.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_interlacing_check(const struct HarmonicPoly *poly,
                                               double tol,
                                               bool *out_ok);

/*
 # Safety
 `poly` must come from this library or be NULL.
 */
void harmonic_poly_free(struct HarmonicPoly *poly);

/*
 Radius of the geodesic circles of the first eigenfunction embedding and the
 deviation of its screw function from a circle.

 # Safety
 Pointers must be valid.
 */
enum HarmonicStatus harmonic_circle_check(double alpha,
                                          double beta,
                                          double *out_radius,
                                          double *out_deviation);

/*
 # Safety
 `s` must come from this library or be NULL.
 */
void harmonic_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMONIC_H */
