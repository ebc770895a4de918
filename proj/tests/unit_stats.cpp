// Kernels, distinct-index correlation sums, Monte Carlo estimators, and
// their agreement with the exact Gaussian intensities.
//
// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>
#include <vector>

#include "core/oracle.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace rpz;
using rpz_test::code_of;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Composite Simpson on [a, b].
template <class F>
double simpson(F&& f, double a, double b, int steps) {
  double h = (b - a) / steps;
  double acc = f(a) + f(b);
  for (int i = 1; i < steps; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

Source fixed_source(std::vector<cplx> coeffs) {
  return Source::fixed(fixed_sample(coeffs));
}

}  // namespace

TEST_CASE("kernel masses match hand integrals") {
  Kernel cr = make_kernel(KernelKind::cosine_bump, cplx(0, 0), 1.0, 2.5,
                          false, false);
  CHECK(rel_err(cr.mass(), 2.5) < 1e-10);

  Kernel is = make_kernel(KernelKind::indicator_soft, cplx(1, 0), 0.4, 1.0,
                          false, false);
  CHECK(rel_err(is.mass(), 2.0 - 0.4) < 1e-10);

  double R = 1.7;
  Kernel cc = make_kernel(KernelKind::cosine_bump, cplx(0, 1), 1.0, R, true,
                          false);
  CHECK(rel_err(cc.mass(), 2.0 * kPi * R * R * (0.25 - 1.0 / (kPi * kPi))) <
        1e-10);

  Kernel gb = make_kernel(KernelKind::gaussian_bump, cplx(0, 0), 0.5, 1.0,
                          false, true);
  CHECK(rel_err(gb.mass(), 1.0) < 1e-12);
  Kernel gc = make_kernel(KernelKind::gaussian_bump, cplx(2, 3), 0.5, 1.0,
                          true, true);
  CHECK(rel_err(gc.mass(), 1.0) < 1e-12);
}

TEST_CASE("kernel evaluation geometry") {
  Kernel re = make_kernel(KernelKind::cosine_bump, cplx(2, 0), 1.0, 1.0,
                          false, false);
  // Real-domain kernels see only the real part.
  CHECK(re.eval(cplx(2.0, 50.0)) == re.eval(cplx(2.0, 0.0)));
  CHECK(re.eval(cplx(2.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(re.eval(cplx(3.0, 0.0)) == 0.0);  // support boundary is exact zero
  CHECK(re.eval(cplx(5.0, 0.0)) == 0.0);

  Kernel co = make_kernel(KernelKind::gaussian_bump, cplx(1, 1), 0.7, 0.9,
                          true, false);
  CHECK(co.eval(cplx(1, 1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(co.eval(cplx(1.0, 1.9)) == 0.0);
  CHECK(co.eval(cplx(1.0, 1.89)) > 0.0);
  // Radial symmetry.
  CHECK(co.eval(cplx(1.3, 1.0)) ==
        doctest::Approx(co.eval(cplx(1.0, 1.3))).epsilon(1e-15));

  CHECK(code_of([] {
          make_kernel(KernelKind::cosine_bump, cplx(0, 1), 1.0, 1.0, false,
                      false);
        }) == Code::invalid_argument);
  CHECK(code_of([] {
          make_kernel(KernelKind::cosine_bump, cplx(0, 0), 0.0, 1.0, false,
                      false);
        }) == Code::invalid_argument);
  CHECK(code_of([] {
          make_kernel(KernelKind::cosine_bump, cplx(0, 0), 1.0, -1.0, false,
                      false);
        }) == Code::invalid_argument);
}

TEST_CASE("distinct-index sums against brute-force enumeration") {
  Rng rng(606);
  auto rand_pts = [&](size_t m) {
    std::vector<cplx> pts(m);
    for (auto& p : pts) p = cplx(rng.normal(), rng.normal());
    return pts;
  };
  Kernel k1 = make_kernel(KernelKind::gaussian_bump, cplx(0.2, 0.1), 1.0,
                          3.0, true, false);
  Kernel k2 = make_kernel(KernelKind::cosine_bump, cplx(-0.4, 0.3), 1.0, 2.0,
                          true, false);
  Kernel k3 = make_kernel(KernelKind::indicator_soft, cplx(0.1, -0.2), 0.5,
                          2.5, true, false);
  Kernel k4 = make_kernel(KernelKind::gaussian_bump, cplx(0, 0), 2.0, 4.0,
                          true, false);

  for (int rep = 0; rep < 5; ++rep) {
    auto pts = rand_pts(60);
    std::vector<Kernel> ks{k1};
    double brute1 = 0.0;
    for (auto p : pts) brute1 += k1.eval(p);
    CHECK(rel_err(distinct_index_sum(pts, ks), brute1) < 1e-12);

    std::vector<Kernel> ks2{k1, k2};
    double brute2 = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = 0; j < pts.size(); ++j)
        if (i != j) brute2 += k1.eval(pts[i]) * k2.eval(pts[j]);
    CHECK(rel_err(distinct_index_sum(pts, ks2), brute2) < 1e-11);
  }

  auto pts = rand_pts(12);
  std::vector<Kernel> ks3{k1, k2, k3};
  double brute3 = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < pts.size(); ++j)
      for (size_t l = 0; l < pts.size(); ++l)
        if (i != j && j != l && i != l)
          brute3 += k1.eval(pts[i]) * k2.eval(pts[j]) * k3.eval(pts[l]);
  CHECK(rel_err(distinct_index_sum(pts, ks3), brute3) < 1e-10);

  std::vector<Kernel> ks4{k1, k2, k3, k4};
  double brute4 = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < pts.size(); ++j)
      for (size_t l = 0; l < pts.size(); ++l)
        for (size_t q = 0; q < pts.size(); ++q)
          if (i != j && i != l && i != q && j != l && j != q && l != q)
            brute4 += k1.eval(pts[i]) * k2.eval(pts[j]) * k3.eval(pts[l]) *
                      k4.eval(pts[q]);
  CHECK(rel_err(distinct_index_sum(pts, ks4), brute4) < 1e-9);

  std::vector<Kernel> none;
  CHECK(code_of([&] { distinct_index_sum(pts, none); }) ==
        Code::invalid_argument);
}

TEST_CASE("fixed sources give exact estimates with zero error") {
  // z^3: a triple root at the origin.
  Source cube = fixed_source({{0, 0}, {0, 0}, {0, 0}, {1, 0}});
  Kernel at0 = make_kernel(KernelKind::gaussian_bump, cplx(0, 0), 1.0, 1.0,
                           true, false);
  std::vector<Kernel> ks{at0};
  StatEstimate est = estimate_correlation(cube, ks, 8, 1, 2);
  CHECK(est.value == 3.0);
  CHECK(est.se == 0.0);
  CHECK(est.trials == 8);

  // z^2: the distinct-pair sum over {0, 0} is exactly 2 phi(0) psi(0).
  Source sq = fixed_source({{0, 0}, {0, 0}, {1, 0}});
  Kernel psi = make_kernel(KernelKind::cosine_bump, cplx(0, 0), 1.0, 2.0,
                           true, false);
  std::vector<Kernel> pair{at0, psi};
  CHECK(estimate_correlation(sq, pair, 4, 9, 1).value == 2.0);

  // z^2 - 1: both real roots inside [-2, 2], none beyond.
  Source pm1 = fixed_source({{-1, 0}, {0, 0}, {1, 0}});
  CountsResult cr = estimate_counts_interval(pm1, -2.0, 2.0, 8, 3, 2);
  CHECK(cr.mean.value == 2.0);
  CHECK(cr.mean.se == 0.0);
  CHECK(cr.variance.value == 0.0);
  CHECK(estimate_counts_interval(pm1, 0.5, 2.0, 8, 3, 2).mean.value == 1.0);
  CountsResult cd = estimate_counts_disk(pm1, cplx(0, 0), 1.5, 8, 3, 1);
  CHECK(cd.mean.value == 2.0);

  // (z^2 + 1)(z - 2): one real root and one conjugate pair.
  Source mix = fixed_source({{-2, 0}, {1, 0}, {-2, 0}, {1, 0}});
  Kernel at2 = make_kernel(KernelKind::gaussian_bump, cplx(2, 0), 1.0, 1.0,
                           false, false);
  Kernel ati = make_kernel(KernelKind::gaussian_bump, cplx(0, 1), 1.0, 0.5,
                           true, false);
  std::vector<Kernel> rk{at2}, ck{ati};
  StatEstimate me = estimate_mixed_correlation(mix, rk, ck, 4, 7, 1);
  CHECK(me.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(me.se == 0.0);
  // Reflecting the complex kernel center is a bitwise no-op.
  Kernel atmi = make_kernel(KernelKind::gaussian_bump, cplx(0, -1), 1.0, 0.5,
                            true, false);
  std::vector<Kernel> ckr{atmi};
  CHECK(estimate_mixed_correlation(mix, rk, ckr, 4, 7, 1).value == me.value);
}

TEST_CASE("estimator argument validation") {
  Source src = Source::ensemble(make_scheme(SchemeKind::flat, 10),
                                make_atom(AtomFamily::gaussian_real));
  Kernel realk = make_kernel(KernelKind::cosine_bump, cplx(0, 0), 1.0, 1.0,
                             false, false);
  Kernel cplxk = make_kernel(KernelKind::cosine_bump, cplx(0, 0), 1.0, 1.0,
                             true, false);
  std::vector<Kernel> rk{realk}, ck{cplxk};
  CHECK(code_of([&] { estimate_correlation(src, rk, 4, 1, 1); }) ==
        Code::invalid_argument);
  CHECK(code_of([&] { estimate_correlation(src, ck, 1, 1, 1); }) ==
        Code::invalid_argument);
  CHECK(code_of([&] { estimate_mixed_correlation(src, ck, ck, 4, 1, 1); }) ==
        Code::invalid_argument);
  CHECK(code_of([&] { estimate_mixed_correlation(src, rk, rk, 4, 1, 1); }) ==
        Code::invalid_argument);

  Source cplx_src = Source::ensemble(make_scheme(SchemeKind::flat, 10),
                                     make_atom(AtomFamily::gaussian_complex));
  CHECK(code_of([&] {
          estimate_mixed_correlation(cplx_src, rk, ck, 4, 1, 1);
        }) == Code::invalid_argument);
  CHECK(code_of([&] {
          estimate_counts_interval(cplx_src, 0.0, 1.0, 4, 1, 1);
        }) == Code::invalid_argument);
  CHECK(code_of([&] {
          estimate_counts_disk(src, cplx(0, 0), 0.0, 4, 1, 1);
        }) == Code::invalid_argument);
  CHECK(code_of([&] {
          concentration_deviation(src, cplx(1, 0), -1.0, 4, 1, 1);
        }) == Code::invalid_argument);
  Source fixed = fixed_source({{1, 0}, {1, 0}});
  CHECK(code_of([&] {
          concentration_deviation(fixed, cplx(1, 0), 1.0, 4, 1, 1);
        }) == Code::invalid_argument);
}

TEST_CASE("results are bitwise independent of the thread count") {
  Source src = Source::ensemble(make_scheme(SchemeKind::flat, 50),
                                make_atom(AtomFamily::gaussian_complex));
  Kernel k = make_kernel(KernelKind::gaussian_bump, cplx(2, 1), 1.0, 1.5,
                         true, true);
  std::vector<Kernel> ks{k};
  StatEstimate e1 = estimate_correlation(src, ks, 64, 11, 1);
  StatEstimate e4 = estimate_correlation(src, ks, 64, 11, 4);
  StatEstimate e8 = estimate_correlation(src, ks, 64, 11, 8);
  CHECK(e1.value == e4.value);
  CHECK(e1.se == e4.se);
  CHECK(e1.value == e8.value);
  CHECK(e1.se == e8.se);

  Source rsrc = Source::ensemble(make_scheme(SchemeKind::kac, 24),
                                 make_atom(AtomFamily::bernoulli));
  CountsResult c1 = estimate_counts_interval(rsrc, -1.0, 1.0, 96, 5, 1);
  CountsResult c8 = estimate_counts_interval(rsrc, -1.0, 1.0, 96, 5, 8);
  CHECK(c1.mean.value == c8.mean.value);
  CHECK(c1.mean.se == c8.mean.se);
  CHECK(c1.variance.value == c8.variance.value);
}

TEST_CASE("standard error shrinks like one over sqrt trials") {
  Source src = Source::ensemble(make_scheme(SchemeKind::flat, 40),
                                make_atom(AtomFamily::gaussian_real));
  CountsResult small = estimate_counts_disk(src, cplx(0, 0), 5.0, 200, 21, 0);
  CountsResult big = estimate_counts_disk(src, cplx(0, 0), 5.0, 3200, 21, 0);
  CHECK(small.mean.se > 0.0);
  double ratio = big.mean.se / small.mean.se;  // ideal 1/4
  CHECK(ratio > 0.12);
  CHECK(ratio < 0.55);
}

TEST_CASE("monte carlo count estimate matches the exact density integral") {
  const uint32_t n = 400;
  Source src = Source::ensemble(make_scheme(SchemeKind::flat, n),
                                make_atom(AtomFamily::gaussian_real));
  Scheme s = make_scheme(SchemeKind::flat, n);
  double want = real_intensity_integral(s, 5.0, 15.0, 1e-9);
  CountsResult got = estimate_counts_interval(src, 5.0, 15.0, 400, 2026, 0);
  CHECK(std::abs(got.mean.value - want) < 4.0 * got.mean.se);
  CHECK(got.mean.se < 0.2);
}

TEST_CASE("linear statistic of real zeros matches the density integral") {
  const uint32_t n = 100;
  Scheme s = make_scheme(SchemeKind::elliptic_rescaled, n);
  Source src = Source::ensemble(s, make_atom(AtomFamily::gaussian_real));
  Kernel k = make_kernel(KernelKind::cosine_bump, cplx(3, 0), 1.0, 0.8,
                         false, true);
  double want = simpson(
      [&](double x) { return k.eval(cplx(x, 0.0)) * real_intensity_1(s, x); },
      3.0 - 0.8, 3.0 + 0.8, 2000);
  std::vector<Kernel> rk{k};
  std::vector<Kernel> none;
  StatEstimate got = estimate_mixed_correlation(src, rk, none, 1200, 99, 0);
  CHECK(got.se > 0.0);
  CHECK(std::abs(got.value - want) < 4.0 * got.se);
}

TEST_CASE("linear statistic of complex zeros matches the density integral") {
  const uint32_t n = 60;
  Scheme s = make_scheme(SchemeKind::flat, n);
  Source src = Source::ensemble(s, make_atom(AtomFamily::gaussian_real));
  cplx c(3.0, 1.0);
  double R = 0.8;  // stays off the real axis, so only pairs contribute
  Kernel k = make_kernel(KernelKind::gaussian_bump, c, 0.5, R, true, true);
  // The planar intensity integrated against phi over its support disk is
  // E sum phi(root); the disk stays inside the upper half-plane.
  auto density = [&](cplx z) {
    return complex_intensity_01(s, z) * k.eval(z);
  };
  auto ring = [&](double r) {
    if (r == 0.0) return density(c) * 0.0;
    auto f = [&](double th) {
      return density(c + std::polar(r, th));
    };
    return simpson(f, 0.0, 2.0 * kPi, 160) * r;
  };
  double want = simpson(ring, 0.0, R, 60);
  std::vector<Kernel> ks{k};
  StatEstimate got = estimate_correlation(src, ks, 1500, 4096, 0);
  CHECK(got.se > 0.0);
  CHECK(std::abs(got.value - want) < 4.0 * got.se);
}

TEST_CASE("concentration summary: closed form on a deterministic source") {
  // All-ones kac polynomial, n = 20, z = 2, against the ensemble variance.
  const uint32_t n = 20;
  std::vector<cplx> ones(n + 1, cplx(1, 0));
  Source src = Source::fixed(fixed_sample(ones));
  src.scheme = make_scheme(SchemeKind::kac, n);
  double x = 2.0;
  double logf = std::log((std::pow(x, double(n) + 1.0) - 1.0) / (x - 1.0));
  double logv = std::log((std::pow(x * x, double(n) + 1.0) - 1.0) /
                         (x * x - 1.0));
  double want = logf - 0.5 * logv;
  ConcentrationSummary cs =
      concentration_deviation(src, cplx(x, 0.0), std::abs(want) + 1.0, 64, 4,
                              2);
  CHECK(rel_err(cs.median, want) < 1e-12);
  CHECK(cs.q01 == cs.median);
  CHECK(cs.q99 == cs.median);
  CHECK(cs.exceed_fraction == 0.0);
  CHECK(cs.zero_fraction == 0.0);
  ConcentrationSummary tight =
      concentration_deviation(src, cplx(x, 0.0), std::abs(want) / 2.0, 64, 4,
                              2);
  CHECK(tight.exceed_fraction == 1.0);
}

TEST_CASE("concentration matches direct per-trial recomputation") {
  Scheme s = make_scheme(SchemeKind::flat, 30);
  Atom a = make_atom(AtomFamily::gaussian_real);
  Source src = Source::ensemble(s, a);
  cplx z(2.0, 1.0);
  const uint64_t trials = 33, seed = 123;
  ConcentrationSummary cs =
      concentration_deviation(src, z, 1.0, trials, seed, 3);
  std::vector<double> d(trials);
  double half = 0.5 * log_variance(s, z);
  for (uint64_t t = 0; t < trials; ++t)
    d[t] = evaluate_log_abs(draw_sample(s, a, seed, t), z) - half;
  std::sort(d.begin(), d.end());
  CHECK(cs.median == d[16]);
  CHECK(cs.q01 == d[0]);
  CHECK(cs.q99 == d[32]);
  uint64_t exceed = 0;
  for (double v : d)
    if (std::abs(v) > 1.0) ++exceed;
  CHECK(cs.exceed_fraction == double(exceed) / double(trials));
}

TEST_CASE("exact zero probability of the kac sign polynomial") {
  // f(1) is a sum of 16 independent signs; P(f(1) = 0) = C(16,8) / 2^16.
  const uint32_t n = 15;
  Source src = Source::ensemble(make_scheme(SchemeKind::kac, n),
                                make_atom(AtomFamily::bernoulli));
  ConcentrationSummary cs =
      concentration_deviation(src, cplx(1, 0), 1e9, 20000, 77, 0);
  double exact = 12870.0 / 65536.0;
  CHECK(std::abs(cs.zero_fraction - exact) < 0.012);  // ~4 binomial se
}

TEST_CASE("universality gap: identical ensembles, matched moments") {
  Scheme s = make_scheme(SchemeKind::elliptic, 40);
  Source g = Source::ensemble(s, make_atom(AtomFamily::gaussian_real));
  Source b = Source::ensemble(s, make_atom(AtomFamily::bernoulli));
  Source gc = Source::ensemble(s, make_atom(AtomFamily::gaussian_complex));
  Observable obs;
  obs.kind = ObservableKind::count_interval;
  obs.a = -1.0;
  obs.b = 1.0;

  GapResult same = universality_gap(g, g, obs, 64, 12, 2);
  // Identical ensembles under the same seed produce identical estimates;
  // the pooled se stays positive because the two runs are treated as
  // independent.
  CHECK(same.gap.value == 0.0);
  CHECK(same.gap.se > 0.0);
  CHECK(same.within_three_se);
  CHECK(same.moments_matched);

  GapResult gb = universality_gap(g, b, obs, 400, 12, 0);
  CHECK(gb.moments_matched);
  CHECK(std::abs(gb.gap.value) < 5.0 * std::max(gb.gap.se, 1e-12));

  Observable labs;
  labs.kind = ObservableKind::log_abs;
  labs.point = cplx(0.7, 0.2);
  GapResult gg = universality_gap(g, gc, labs, 64, 12, 2);
  CHECK_FALSE(gg.moments_matched);

  Source other = Source::ensemble(make_scheme(SchemeKind::elliptic, 41),
                                  make_atom(AtomFamily::bernoulli));
  CHECK(code_of([&] { universality_gap(g, other, obs, 16, 1, 1); }) ==
        Code::invalid_argument);
  Source fx = fixed_source({{1, 0}, {1, 0}});
  CHECK(code_of([&] { universality_gap(g, fx, obs, 16, 1, 1); }) ==
        Code::invalid_argument);
}

TEST_CASE("observable estimates on fixed polynomials are exact") {
  Source pm1 = fixed_source({{-1, 0}, {0, 0}, {1, 0}});  // roots +-1
  Observable oc;
  oc.kind = ObservableKind::count_disk;
  oc.point = cplx(1, 0);
  oc.radius = 0.5;
  CHECK(observable_estimate(pm1, oc, 4, 1, 1).value == 1.0);

  Observable ol;
  ol.kind = ObservableKind::log_abs;
  ol.point = cplx(2, 0);
  CHECK(observable_estimate(pm1, ol, 4, 1, 1).value ==
        doctest::Approx(std::log(3.0)).epsilon(1e-14));

  Observable ok;
  ok.kind = ObservableKind::linear_statistic;
  ok.point = cplx(1, 0);  // offset moves the kernel origin onto the root
  ok.kernel = make_kernel(KernelKind::cosine_bump, cplx(0, 0), 1.0, 1.5,
                          true, false);
  // Roots shift to {-2, 0}: phi(-2) = 0 (outside support), phi(0) = 1.
  CHECK(observable_estimate(pm1, ok, 4, 1, 1).value ==
        doctest::Approx(1.0).epsilon(1e-14));

  Observable bad;
  bad.kind = ObservableKind::linear_statistic;
  CHECK(code_of([&] { observable_estimate(pm1, bad, 4, 1, 1); }) ==
        Code::missing_data);
}

TEST_CASE("plain monte carlo integrals and the chebyshev radius") {
  // A constant integrand is recovered exactly with zero spread.
  McIntegral c = monte_carlo_integral_interval(
      -1.0, 3.0, [](double) { return 2.5; }, 1000, 5);
  CHECK(c.value == 2.5);
  CHECK(c.second_central_moment == 0.0);
  CHECK(chebyshev_bound(c.second_central_moment, c.trials, 0.01) == 0.0);

  // Indicator of the upper half of [0, 1]: mean 1/2, M2 = 1/4.
  McIntegral h = monte_carlo_integral_interval(
      0.0, 1.0, [](double x) { return x > 0.5 ? 1.0 : 0.0; }, 40000, 6);
  double bound = chebyshev_bound(h.second_central_moment, h.trials, 0.01);
  CHECK(std::abs(h.value - 0.5) < bound);
  CHECK(bound == doctest::Approx(0.025).epsilon(0.05));
  CHECK(h.second_central_moment == doctest::Approx(0.25).epsilon(0.05));

  // E |Z|^2 over the uniform unit disk is 1/2.
  McIntegral d = monte_carlo_integral_disk(
      cplx(0, 0), 1.0, [](cplx z) { return std::norm(z); }, 40000, 7);
  CHECK(std::abs(d.value - 0.5) <
        chebyshev_bound(d.second_central_moment, d.trials, 0.01));

  CHECK(code_of([&] {
          monte_carlo_integral_interval(1.0, 0.0, [](double) { return 0.0; },
                                        10, 1);
        }) == Code::invalid_argument);
  CHECK(code_of([&] { chebyshev_bound(-1.0, 10, 0.1); }) ==
        Code::invalid_argument);
  CHECK(code_of([&] { chebyshev_bound(1.0, 10, 0.0); }) ==
        Code::invalid_argument);
}
