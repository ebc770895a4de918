/* rpz - random polynomial zeros: sampling, root finding, exact Gaussian
 * intensities, and Monte Carlo zero statistics.
 *
 * C API over an internal C++ core. All handles are opaque; every fallible
 * call returns an rpz_status and writes results through out-pointers. A
 * failing call leaves out-pointers untouched and stores a thread-local
 * message retrievable with rpz_last_error().
 *
 * SPDX-License-Identifier: MIT
 */
#ifndef RPZ_H
#define RPZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RPZ_BUILDING_SHARED)
#    define RPZ_API __declspec(dllexport)
#  else
#    define RPZ_API __declspec(dllimport)
#  endif
#else
#  define RPZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rpz_status {
  RPZ_OK = 0,
  RPZ_ERR_INVALID_ARGUMENT = 1, /* bad parameter or precondition violation */
  RPZ_ERR_INDEX_RANGE = 2,      /* index or buffer capacity out of range */
  RPZ_ERR_NO_CONVERGENCE = 3,   /* iteration budget exhausted */
  RPZ_ERR_CLASSIFICATION = 4,   /* real/complex classification failed */
  RPZ_ERR_DEGENERATE_SPAN = 5,  /* constraint vectors numerically dependent */
  RPZ_ERR_ZERO_VARIANCE = 6,    /* V(z) = 0 at an evaluation point */
  RPZ_ERR_UNSUPPORTED = 7,      /* operation outside implemented range */
  RPZ_ERR_MISSING_DATA = 8      /* required prior step (e.g. classify) absent */
} rpz_status;

typedef struct rpz_complex { double re, im; } rpz_complex;

/* Opaque handles. Free with the matching *_free; NULL is a safe argument
 * to every *_free. Handles are immutable after creation except rpz_rootset
 * (classification fills fields in place) and rpz_source (solver settings). */
typedef struct rpz_scheme rpz_scheme;
typedef struct rpz_atom rpz_atom;
typedef struct rpz_sample rpz_sample;
typedef struct rpz_rootset rpz_rootset;
typedef struct rpz_kernel rpz_kernel;
typedef struct rpz_source rpz_source;

RPZ_API const char* rpz_version(void);
RPZ_API const char* rpz_status_name(rpz_status s);
/* Message from the most recent failing call on this thread ("" if none). */
RPZ_API const char* rpz_last_error(void);

/* ---------------------------------------------------------------- schemes
 * A scheme is the deterministic coefficient sequence c_0..c_n multiplying
 * the iid atoms. Values are served in log-domain so that degrees up to 1e6
 * never overflow; log c_i = -inf encodes c_i = 0 (custom schemes only).
 */
typedef enum rpz_scheme_kind {
  RPZ_SCHEME_FLAT = 0,              /* c_i = sqrt(1/i!) */
  RPZ_SCHEME_ELLIPTIC = 1,          /* c_i = sqrt(binomial(n,i)) */
  RPZ_SCHEME_ELLIPTIC_RESCALED = 2, /* c_i = sqrt(binomial(n,i) n^-i) */
  RPZ_SCHEME_KAC = 3,               /* c_i = 1 */
  RPZ_SCHEME_HYPERBOLIC = 4,        /* c_i = sqrt(L(L+1)...(L+i-1)/i!) */
  RPZ_SCHEME_CUSTOM = 5
} rpz_scheme_kind;

/* kind must not be HYPERBOLIC or CUSTOM here; those have dedicated ctors. */
RPZ_API rpz_status rpz_scheme_create(rpz_scheme_kind kind, uint32_t n,
                                     rpz_scheme** out);
RPZ_API rpz_status rpz_scheme_create_hyperbolic(uint32_t n, double L,
                                                rpz_scheme** out);
/* log_coeffs has n+1 entries; -HUGE_VAL allowed, at least one finite. */
RPZ_API rpz_status rpz_scheme_create_custom(uint32_t n,
                                            const double* log_coeffs,
                                            rpz_scheme** out);
RPZ_API void rpz_scheme_free(rpz_scheme* s);
RPZ_API uint32_t rpz_scheme_n(const rpz_scheme* s);
RPZ_API rpz_scheme_kind rpz_scheme_get_kind(const rpz_scheme* s);
RPZ_API rpz_status rpz_scheme_log_coefficient(const rpz_scheme* s, uint32_t i,
                                              double* out);

/* ------------------------------------------------------------------ atoms
 * Every atom has mean 0 and E|xi|^2 = 1; built-ins are pre-scaled
 * (uniform_real is uniform on [-sqrt(3), sqrt(3)], uniform_complex_disk on
 * the disk of radius sqrt(2)). gaussian_complex has independent real and
 * imaginary parts of variance 1/2 each.
 */
typedef enum rpz_atom_family {
  RPZ_ATOM_GAUSSIAN_REAL = 0,
  RPZ_ATOM_GAUSSIAN_COMPLEX = 1,
  RPZ_ATOM_BERNOULLI = 2, /* +-1, equal probability */
  RPZ_ATOM_UNIFORM_REAL = 3,
  RPZ_ATOM_UNIFORM_COMPLEX_DISK = 4,
  RPZ_ATOM_CUSTOM_DISCRETE = 5
} rpz_atom_family;

RPZ_API rpz_status rpz_atom_create(rpz_atom_family family, rpz_atom** out);
/* Finite support {values[j]} with weights > 0 (normalized internally); the
 * support is shifted and scaled to mean 0, E|xi|^2 = 1. count >= 2 and the
 * distribution must be non-degenerate. */
RPZ_API rpz_status rpz_atom_create_discrete(const rpz_complex* values,
                                            const double* weights,
                                            size_t count, rpz_atom** out);
RPZ_API void rpz_atom_free(rpz_atom* a);
RPZ_API int rpz_atom_is_real(const rpz_atom* a);
/* E[Re(xi)^p Im(xi)^q] for p+q <= 4. */
RPZ_API rpz_status rpz_atom_moment(const rpz_atom* a, unsigned p, unsigned q,
                                   double* out);
/* 1 iff all moments with p+q <= order (order <= 4) agree to 1e-12. */
RPZ_API rpz_status rpz_atom_moments_match(const rpz_atom* a,
                                          const rpz_atom* b, unsigned order,
                                          int* out);

/* ---------------------------------------------------------------- samples
 * One realization f(z) = exp(log_scale) * sum coeffs[i] z^i, degree bound n.
 * coeffs are the stored, range-controlled values; zeros are unaffected by
 * log_scale. Draws are a pure function of (scheme, atom, seed, trial):
 * identical inputs give bit-identical coefficients on any thread count.
 */
RPZ_API rpz_status rpz_sample_draw(const rpz_scheme* s, const rpz_atom* a,
                                   uint64_t master_seed, uint64_t trial_index,
                                   rpz_sample** out);
/* Deterministic polynomial from count = n+1 coefficients (a_0 first). */
RPZ_API rpz_status rpz_sample_fixed(const rpz_complex* coeffs, size_t count,
                                    rpz_sample** out);
RPZ_API void rpz_sample_free(rpz_sample* p);
RPZ_API uint32_t rpz_sample_n(const rpz_sample* p);
RPZ_API double rpz_sample_log_scale(const rpz_sample* p);
/* Writes n+1 scaled coefficients; cap must be >= n+1. */
RPZ_API rpz_status rpz_sample_coefficients(const rpz_sample* p,
                                           rpz_complex* buf, size_t cap);
/* log|f(z)| including log_scale; -HUGE_VAL iff f(z) = 0 exactly. Stable for
 * degrees >= 1e5 via shifted compensated accumulation. */
RPZ_API rpz_status rpz_sample_log_abs(const rpz_sample* p, rpz_complex z,
                                      double* out);

/* ------------------------------------------------------------------ roots
 * All zeros in C union {infinity}: a polynomial of degree bound n with
 * effective degree d carries n - d zeros at infinity; the zero polynomial
 * carries n. Finite roots are found by Aberth-Ehrlich simultaneous
 * iteration (Newton-polygon initial radii, equidistributed phases) with one
 * Newton polish per root. residual_bound is the max over roots of
 * |p(root)| / sum_i |p_i root^i| for the internally rescaled polynomial,
 * a scale-free backward-error measure.
 */
/* rel_tol in (0, 1e-6] (0 selects 1e-10), max_iters >= 1. If the iteration
 * budget runs out the partial result IS written (converged flag cleared)
 * and the call returns RPZ_ERR_NO_CONVERGENCE. */
RPZ_API rpz_status rpz_find_roots(const rpz_sample* p, double rel_tol,
                                  uint32_t max_iters, rpz_rootset** out);
/* Assembles a root set directly (for estimator tests and replay). */
RPZ_API rpz_status rpz_rootset_from_points(const rpz_complex* roots,
                                           size_t count,
                                           uint32_t roots_at_infinity,
                                           rpz_rootset** out);
RPZ_API void rpz_rootset_free(rpz_rootset* r);
RPZ_API size_t rpz_rootset_finite_count(const rpz_rootset* r);
RPZ_API uint32_t rpz_rootset_infinity_count(const rpz_rootset* r);
RPZ_API int rpz_rootset_converged(const rpz_rootset* r);
RPZ_API double rpz_rootset_residual_bound(const rpz_rootset* r);
RPZ_API rpz_status rpz_rootset_finite_roots(const rpz_rootset* r,
                                            rpz_complex* buf, size_t cap);

/* Real/complex split for real-coefficient input. Roots within
 * snap_tol*(1+|root|) of the real axis that have no conjugate partner are
 * snapped to R; remaining roots must pair (root, conj root) or the call
 * fails with RPZ_ERR_CLASSIFICATION. snap_tol <= 0 selects 1e-8. */
RPZ_API rpz_status rpz_rootset_classify_real(rpz_rootset* r, double snap_tol);
RPZ_API int rpz_rootset_is_classified(const rpz_rootset* r);
RPZ_API size_t rpz_rootset_real_count(const rpz_rootset* r);
RPZ_API size_t rpz_rootset_upper_count(const rpz_rootset* r);
RPZ_API rpz_status rpz_rootset_real_roots(const rpz_rootset* r, double* buf,
                                          size_t cap);
/* Strictly-complex roots with Im > 0 (one per conjugate pair). */
RPZ_API rpz_status rpz_rootset_upper_roots(const rpz_rootset* r,
                                           rpz_complex* buf, size_t cap);
/* Open disk |z - center| < radius over finite roots. */
RPZ_API rpz_status rpz_rootset_count_in_disk(const rpz_rootset* r,
                                             rpz_complex center, double radius,
                                             uint32_t* out);
/* Closed interval [a, b] over classified real roots; +-HUGE_VAL allowed. */
RPZ_API rpz_status rpz_rootset_count_in_interval(const rpz_rootset* r,
                                                 double a, double b,
                                                 uint32_t* out);

/* ------------------------------------------------- exact Gaussian oracles
 * For Gaussian coefficients the zero intensities are exact functionals of
 * the variance function V(z) = sum c_i^2 |z|^{2i}: a zero-crossing density
 * times a conditional derivative moment. Everything below is deterministic,
 * quadrature-free where a closed form exists, and stable in log-domain.
 */
RPZ_API rpz_status rpz_log_variance(const rpz_scheme* s, rpz_complex z,
                                    double* out); /* log V(z), -inf if V=0 */

/* (1/4pi) Laplacian of log V at z by a 5-point stencil of spacing h
 * (h <= 0 selects 1e-3*(1+|z|)); closed form for elliptic_rescaled. */
RPZ_API rpz_status rpz_predicted_complex_intensity(const rpz_scheme* s,
                                                   rpz_complex z, double h,
                                                   double* out);

/* Density of real zeros at x for Gaussian coefficients. */
RPZ_API rpz_status rpz_real_intensity_1(const rpz_scheme* s, double x,
                                        double* out);
/* Two-point real-zero correlation density at (x, y), x != y. */
RPZ_API rpz_status rpz_real_intensity_2(const rpz_scheme* s, double x,
                                        double y, double* out);
/* Density of strictly-complex zeros at z (Im z != 0), real Gaussian atoms;
 * symmetric under conjugation. */
RPZ_API rpz_status rpz_complex_intensity_01(const rpz_scheme* s,
                                            rpz_complex z, double* out);
/* Adaptive quadrature of the real-zero density over [a, b]; +-HUGE_VAL
 * endpoints integrate the full tails. rel_tol <= 0 selects 1e-9. */
RPZ_API rpz_status rpz_real_intensity_integral(const rpz_scheme* s, double a,
                                               double b, double rel_tol,
                                               double* out);

/* |v ^ w| = sqrt(|v|^2 |w|^2 - |<v,w>|^2), conjugate-bilinear inner
 * product; equals the direct double-sum definition at O(len) cost. */
RPZ_API rpz_status rpz_wedge_norm(const rpz_complex* v, const rpz_complex* w,
                                  size_t len, double* out);

/* Density at the origin of (X.v_1, ..., X.v_m), X standard Gaussian on
 * R^dim: (2pi)^{-m/2} det(Gram)^{-1/2}. vectors is row-major m x dim,
 * 1 <= m <= 4. */
RPZ_API rpz_status rpz_gauss_zero_density(const double* vectors, size_t m,
                                          size_t dim, double* out);
/* E(|X.v| | X.v_1 = ... = X.v_m = 0) = sqrt(2/pi) dist(v, span). */
RPZ_API rpz_status rpz_conditional_abs_moment(const double* v,
                                              const double* span_vectors,
                                              size_t m, size_t dim,
                                              double* out);
/* E(|X.v|^2 | X.v_1 = ... = X.v_m = 0) = dist(v, span)^2. */
RPZ_API rpz_status rpz_conditional_second_moment(const double* v,
                                                 const double* span_vectors,
                                                 size_t m, size_t dim,
                                                 double* out);

/* Greedy ratio-2 subsequence of a positive nonincreasing sequence whose
 * consecutive ratios are <= ratio_cap (>= 2). Guarantees at least
 * 1 + floor(log(b_0/b_last) / log(2*ratio_cap)) indices. */
RPZ_API rpz_status rpz_lacunary_subsequence(const double* b, size_t len,
                                            double ratio_cap,
                                            size_t* index_buf, size_t buf_cap,
                                            size_t* out_count);

/* Edge intensity profile F(a) = (1 - (a/sinh a)^2) / (4 pi a^2) for a >= 0;
 * F(0) = 1/(12 pi); series evaluation below a = 1e-3. Rescaled complex-zero
 * intensity of the unit-coefficient family near the unit circle:
 * rpz_oracle_predicted_complex_intensity at 1 + a/n approaches n^2 F(a). */
RPZ_API rpz_status rpz_kac_edge_profile(double a, double* out);

/* ---------------------------------------------------------------- kernels
 * Compactly supported test functions: exactly zero outside support_radius
 * around the center, so sums over zeros touch finitely many terms and the
 * value at infinity is 0 by construction.
 *   gaussian_bump   exp(-d^2/(2 bw^2) + 1 - 1/(1-(d/R)^2)), smooth
 *   cosine_bump     cos^2(pi d / (2R)), C^1 (bandwidth unused)
 *   indicator_soft  1 on [0, R-bw], smoothstep ramp down to 0 at R
 * Real kernels live on R and integrate dx; complex kernels live on C and
 * integrate dA. unit_mass != 0 rescales the amplitude so the mass is 1.
 */
typedef enum rpz_kernel_kind {
  RPZ_KERNEL_GAUSSIAN_BUMP = 0,
  RPZ_KERNEL_COSINE_BUMP = 1,
  RPZ_KERNEL_INDICATOR_SOFT = 2
} rpz_kernel_kind;

RPZ_API rpz_status rpz_kernel_create_real(rpz_kernel_kind kind, double center,
                                          double bandwidth,
                                          double support_radius, int unit_mass,
                                          rpz_kernel** out);
RPZ_API rpz_status rpz_kernel_create_complex(rpz_kernel_kind kind,
                                             rpz_complex center,
                                             double bandwidth,
                                             double support_radius,
                                             int unit_mass, rpz_kernel** out);
RPZ_API void rpz_kernel_free(rpz_kernel* k);
/* Real kernels read point.re and ignore point.im. */
RPZ_API double rpz_kernel_eval(const rpz_kernel* k, rpz_complex point);
RPZ_API double rpz_kernel_mass(const rpz_kernel* k);

/* ------------------------------------------------- Monte Carlo estimators
 * A source yields one polynomial per trial: either fresh draws from
 * (scheme, atom) or a fixed polynomial every trial (then every estimate is
 * exact with standard error 0). Trials are independent tasks keyed by
 * (seed, trial_index); aggregation is pairwise in trial order, so results
 * are bit-identical for every thread count (threads = 0 picks a default).
 */
typedef struct rpz_estimate {
  double value;
  double std_error; /* sample standard deviation / sqrt(trials) */
  uint64_t trials;
} rpz_estimate;

RPZ_API rpz_status rpz_source_create_ensemble(const rpz_scheme* s,
                                              const rpz_atom* a,
                                              rpz_source** out);
RPZ_API rpz_status rpz_source_create_fixed(const rpz_complex* coeffs,
                                           size_t count, rpz_source** out);
RPZ_API void rpz_source_free(rpz_source* src);
/* Root solver settings for all estimators on this source
 * (defaults rel_tol = 1e-10, max_iters = 400). */
RPZ_API rpz_status rpz_source_set_solver(rpz_source* src, double rel_tol,
                                         uint32_t max_iters);

/* Mean and sample variance of the zero count in a region across trials;
 * variance_out may be NULL. The variance estimate's std_error comes from
 * the fourth central moment. */
RPZ_API rpz_status rpz_estimate_counts_interval(const rpz_source* src,
                                                double a, double b,
                                                uint64_t trials, uint64_t seed,
                                                uint32_t threads,
                                                rpz_estimate* mean_out,
                                                rpz_estimate* variance_out);
RPZ_API rpz_status rpz_estimate_counts_disk(const rpz_source* src,
                                            rpz_complex center, double radius,
                                            uint64_t trials, uint64_t seed,
                                            uint32_t threads,
                                            rpz_estimate* mean_out,
                                            rpz_estimate* variance_out);

/* Mean over trials of sum_{i_1,...,i_k distinct} prod_j k_j(zeta_{i_j})
 * over finite roots, expanded into products of linear statistics
 * (inclusion-exclusion over set partitions); k <= 4. */
RPZ_API rpz_status rpz_estimate_correlation(const rpz_source* src,
                                            const rpz_kernel* const* kernels,
                                            size_t k, uint64_t trials,
                                            uint64_t seed, uint32_t threads,
                                            rpz_estimate* out);
/* Mixed version: k real kernels over real zeros and l complex kernels over
 * upper-half-plane zeros, distinct indices within each group; requires a
 * real-atom (or real fixed-coefficient) source; k + l >= 1, k, l <= 4. */
RPZ_API rpz_status rpz_estimate_mixed_correlation(
    const rpz_source* src, const rpz_kernel* const* real_kernels, size_t k,
    const rpz_kernel* const* upper_kernels, size_t l, uint64_t trials,
    uint64_t seed, uint32_t threads, rpz_estimate* out);

/* sum over finite roots of kernel(root); roots at infinity contribute 0. */
RPZ_API rpz_status rpz_linear_statistic(const rpz_rootset* r,
                                        const rpz_kernel* k, double* out);

/* Per-trial deviation D = log|f(z)| - (1/2) log V(z). exceed_fraction is
 * the fraction with |D| > exceed_threshold; exact zeros (D = -inf) are
 * tallied separately in zero_fraction and excluded from the quantiles. */
typedef struct rpz_concentration_summary {
  double median;
  double q01;
  double q99;
  double exceed_fraction;
  double zero_fraction;
  uint64_t trials;
} rpz_concentration_summary;

RPZ_API rpz_status rpz_concentration_deviation(const rpz_source* src,
                                               rpz_complex z,
                                               double exceed_threshold,
                                               uint64_t trials, uint64_t seed,
                                               uint32_t threads,
                                               rpz_concentration_summary* out);

/* One scalar observable per trial, for count comparisons across atoms. */
typedef enum rpz_observable_kind {
  RPZ_OBS_COUNT_INTERVAL = 0,  /* uses a, b */
  RPZ_OBS_COUNT_DISK = 1,      /* uses center, radius */
  RPZ_OBS_LINEAR_STATISTIC = 2,/* uses kernel */
  RPZ_OBS_LOG_ABS = 3          /* uses center as the evaluation point */
} rpz_observable_kind;

typedef struct rpz_observable {
  rpz_observable_kind kind;
  double a, b;
  rpz_complex center;
  double radius;
  const rpz_kernel* kernel;
} rpz_observable;

RPZ_API rpz_status rpz_observable_estimate(const rpz_source* src,
                                           const rpz_observable* obs,
                                           uint64_t trials, uint64_t seed,
                                           uint32_t threads,
                                           rpz_estimate* out);

/* Difference of means of the observable under two sources sharing the same
 * seed, with Welch-pooled standard error; within_three_se reports
 * |gap| <= 3 * pooled. */
RPZ_API rpz_status rpz_universality_gap(const rpz_source* src_a,
                                        const rpz_source* src_b,
                                        const rpz_observable* obs,
                                        uint64_t trials, uint64_t seed,
                                        uint32_t threads,
                                        rpz_estimate* gap_out,
                                        int* within_three_se);

/* Empirical average of f over m uniform samples of a region, its standard
 * error, and the empirical second central moment for Chebyshev bounds:
 * P(|S - integral| >= bound(delta)) <= delta with
 * bound(delta) = sqrt(M2 / (m delta)). */
typedef double (*rpz_integrand)(rpz_complex point, void* user);

RPZ_API rpz_status rpz_monte_carlo_integral_interval(
    double a, double b, rpz_integrand f, void* user, uint64_t m,
    uint64_t seed, rpz_estimate* out, double* second_central_moment);
RPZ_API rpz_status rpz_monte_carlo_integral_disk(rpz_complex center,
                                                 double radius,
                                                 rpz_integrand f, void* user,
                                                 uint64_t m, uint64_t seed,
                                                 rpz_estimate* out,
                                                 double* second_central_moment);
RPZ_API double rpz_chebyshev_bound(uint64_t m, double second_central_moment,
                                   double delta);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RPZ_H */
