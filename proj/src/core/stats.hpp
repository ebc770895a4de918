// Monte Carlo estimation over the zero point process: compactly supported
// test kernels, distinct-index correlation sums, count statistics,
// concentration and two-ensemble comparison diagnostics. Every estimator is
// deterministic in (seed, trials) regardless of thread count.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "core/atom.hpp"
#include "core/common.hpp"
#include "core/roots.hpp"
#include "core/sample.hpp"
#include "core/scheme.hpp"

namespace rpz {

enum class KernelKind { gaussian_bump, cosine_bump, indicator_soft };

// Radial test kernel, exactly zero outside support_radius. Real-domain
// kernels act on the real part of the argument; complex-domain kernels act
// on the plane. unit_mass rescales so the integral (dx real, dA complex)
// equals 1.
struct Kernel {
  KernelKind kind = KernelKind::gaussian_bump;
  cplx center{0.0, 0.0};
  double bandwidth = 1.0;
  double support_radius = 1.0;
  bool complex_domain = false;
  double scale = 1.0;

  double profile(double d) const;  // radial profile before scaling
  double eval(cplx z) const;
  double mass() const;  // integral of eval over its domain
};

Kernel make_kernel(KernelKind kind, cplx center, double bandwidth,
                   double support_radius, bool complex_domain,
                   bool unit_mass);

struct SolverParams {
  double rel_tol = 1e-10;
  uint32_t max_iters = 400;
};

struct StatEstimate {
  double value = 0.0;
  double se = 0.0;
  uint64_t trials = 0;
};

// A root-set source: either a (scheme, atom) ensemble redrawn per trial, or
// a fixed polynomial replayed identically (estimates then have se = 0).
struct Source {
  std::optional<Scheme> scheme;
  std::optional<Atom> atom;
  std::optional<Sample> fixed_poly;
  SolverParams solver;

  static Source ensemble(Scheme s, Atom a);
  static Source fixed(Sample s);
  bool is_ensemble() const { return scheme.has_value(); }
  bool real_coefficients() const;
  Sample realize(uint64_t master_seed, uint64_t trial) const;
};

struct CountsResult {
  StatEstimate mean;
  StatEstimate variance;  // sample variance, se via fourth central moment
};

struct ConcentrationSummary {
  double median = 0.0;
  double q01 = 0.0;
  double q99 = 0.0;
  double exceed_fraction = 0.0;  // fraction of |D| > threshold
  double zero_fraction = 0.0;    // fraction of exact zeros (D = -inf)
  uint64_t trials = 0;
};

enum class ObservableKind {
  count_interval,
  count_disk,
  linear_statistic,
  log_abs,
};

struct Observable {
  ObservableKind kind = ObservableKind::count_interval;
  double a = 0.0, b = 0.0;  // count_interval (closed)
  cplx point{0.0, 0.0};     // disk center / kernel offset / evaluation point
  double radius = 0.0;      // count_disk (open)
  std::optional<Kernel> kernel;  // linear_statistic (real part is recorded)
};

struct GapResult {
  StatEstimate gap;  // mean_a - mean_b, se pooled (Welch)
  bool within_three_se = false;
  bool moments_matched = true;  // atoms agree to second order
};

struct McIntegral {
  double value = 0.0;
  double second_central_moment = 0.0;
  uint64_t trials = 0;
};

// Exact distinct-index tuple sum sum_{i_1 != ... != i_k} prod_j k_j(pt_{i_j})
// via the partition expansion into power sums; k = ks.size() <= 4.
double distinct_index_sum(std::span<const cplx> pts,
                          std::span<const Kernel> ks);

// X_{z,G} = sum over finite roots of kernel(root - z).
cplx linear_statistic(const RootSet& rs, cplx z, const Kernel& kernel);

StatEstimate estimate_correlation(const Source& src,
                                  std::span<const Kernel> kernels,
                                  uint64_t trials, uint64_t seed,
                                  uint32_t threads);

// Real-coefficient sources only; k real-domain kernels paired with the real
// zeros, l complex-domain kernels with the upper-half-plane zeros (complex
// kernel centers are reflected into the closed upper half-plane, realizing
// conjugation symmetry). k + l <= 4.
StatEstimate estimate_mixed_correlation(const Source& src,
                                        std::span<const Kernel> real_kernels,
                                        std::span<const Kernel> complex_kernels,
                                        uint64_t trials, uint64_t seed,
                                        uint32_t threads);

CountsResult estimate_counts_interval(const Source& src, double a, double b,
                                      uint64_t trials, uint64_t seed,
                                      uint32_t threads);
CountsResult estimate_counts_disk(const Source& src, cplx center,
                                  double radius, uint64_t trials,
                                  uint64_t seed, uint32_t threads);

// Per-trial D = log|f(z)| - (1/2) log V(z); ensemble sources only.
ConcentrationSummary concentration_deviation(const Source& src, cplx z,
                                             double threshold,
                                             uint64_t trials, uint64_t seed,
                                             uint32_t threads);

StatEstimate observable_estimate(const Source& src, const Observable& obs,
                                 uint64_t trials, uint64_t seed,
                                 uint32_t threads);

// Same-observable gap between two ensembles sharing scheme and n.
GapResult universality_gap(const Source& src_a, const Source& src_b,
                           const Observable& obs, uint64_t trials,
                           uint64_t seed, uint32_t threads);

McIntegral monte_carlo_integral_interval(double a, double b,
                                         const std::function<double(double)>& f,
                                         uint64_t m, uint64_t seed);
McIntegral monte_carlo_integral_disk(cplx center, double radius,
                                     const std::function<double(cplx)>& f,
                                     uint64_t m, uint64_t seed);

// P(|S - E| >= bound) <= delta with bound = sqrt(M2 / (m delta)).
double chebyshev_bound(double second_central_moment, uint64_t m,
                       double delta);

}  // namespace rpz
