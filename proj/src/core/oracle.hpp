// Exact Gaussian-case zero intensities from the variance function
// V(z) = sum c_i^2 |z|^{2i}: a zero-crossing density (Gaussian vector
// density identity) times a conditional derivative moment, plus the
// deterministic diagnostics built on the same machinery.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/common.hpp"
#include "core/scheme.hpp"

namespace rpz {

// log V(z); -inf iff V(z) = 0. Closed forms for the elliptic family and
// the geometric (kac) sum; compensated log-sum-exp otherwise.
double log_variance(const Scheme& s, cplx z);

// (1/4pi) * Laplacian of log V at z (5-point stencil, spacing h; h <= 0
// selects 1e-3*(1+|z|)); closed form for elliptic_rescaled.
double predicted_complex_intensity(const Scheme& s, cplx z, double h);

// Normalized evaluation vector at real x: true vector v_i = c_i x^i (or its
// x-derivative) equals exp(log_shift) * entries[i]. The shift keeps the
// largest entry at magnitude 1; any per-point positive scalar cancels in
// every intensity ratio below.
struct EvalVector {
  std::vector<double> entries;
  double log_shift = 0.0;
  double norm_sq = 0.0;  // of entries
};
EvalVector evaluation_vector(const Scheme& s, double x,
                             unsigned derivative_order);

// Density of real zeros at x for Gaussian coefficients:
// (1/pi) * dist(v'(x), span v(x)) / |v(x)|, reduced to the weighted index
// variance of the weights c_i^2 x^{2i}. Closed forms for kac and
// elliptic_rescaled; *_general always takes the O(n) summation path.
double real_intensity_1(const Scheme& s, double x);
double real_intensity_1_general(const Scheme& s, double x);

// Two-point correlation of real zeros at x != y: Gaussian density of
// (f(x), f(y)) at the origin times E(|f'(x) f'(y)| | f(x) = f(y) = 0),
// conditional covariance by orthogonal residuals, E|XY| in closed form.
double real_intensity_2(const Scheme& s, double x, double y);

// Density of strictly-complex zeros at z (Im z != 0), real Gaussian
// coefficients: two real constraints (Re f, Im f) and the conditional
// second moment of |f'|.
double complex_intensity_01(const Scheme& s, cplx z);

// Adaptive quadrature of real_intensity_1 over [a, b] (+-inf allowed),
// split at the scheme's structure points. rel_tol <= 0 selects 1e-9.
double real_intensity_integral(const Scheme& s, double a, double b,
                               double rel_tol);

// |v ^ w| via the Gram identity, conjugate-bilinear inner product.
double wedge_norm(std::span<const cplx> v, std::span<const cplx> w);

// Density at 0 of (X.v_1,...,X.v_m), X standard Gaussian on R^dim:
// (2pi)^{-m/2} det(Gram)^{-1/2}; 1 <= m <= 4.
double gauss_zero_density(std::span<const double> vectors, size_t m,
                          size_t dim);

// E(|X.v| | X.v_j = 0 for all j) = sqrt(2/pi) * dist(v, span);
// the squared version is dist(v, span)^2.
double conditional_abs_moment(std::span<const double> v,
                              std::span<const double> span_vectors, size_t m,
                              size_t dim);
double conditional_second_moment(std::span<const double> v,
                                 std::span<const double> span_vectors,
                                 size_t m, size_t dim);

// Greedy ratio-2 subsequence of a positive nonincreasing sequence with
// consecutive ratios <= ratio_cap (>= 2); the result has at least
// 1 + floor(log(b_front/b_back) / log(2*ratio_cap)) entries.
std::vector<size_t> lacunary_subsequence(std::span<const double> b,
                                         double ratio_cap);

// F(a) = (1 - (a/sinh a)^2) / (4 pi a^2), F(0) = 1/(12 pi); series below
// a = 1e-3 to dodge the cancellation. Rescaled complex-zero intensity of
// the unit-coefficient family near the unit circle:
// predicted_complex_intensity at 1 + a/n approaches n^2 F(a).
double kac_edge_profile(double a);

// E|XY| for a centered bivariate Gaussian with standard deviations
// (sx, sy) and correlation rho:
// (2/pi) sx sy (sqrt(1-rho^2) + rho asin(rho)).
double bivariate_abs_moment(double sx, double sy, double rho);

}  // namespace rpz
