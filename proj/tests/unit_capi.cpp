// Shared-library C API: lifecycle, error reporting, buffer protocols, and
// agreement with the underlying computations.
//
// SPDX-License-Identifier: MIT
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "rpz/rpz.h"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

rpz_complex C(double re, double im = 0.0) { return rpz_complex{re, im}; }

struct SchemeGuard {
  rpz_scheme* p = nullptr;
  ~SchemeGuard() { rpz_scheme_free(p); }
};
struct AtomGuard {
  rpz_atom* p = nullptr;
  ~AtomGuard() { rpz_atom_free(p); }
};
struct SampleGuard {
  rpz_sample* p = nullptr;
  ~SampleGuard() { rpz_sample_free(p); }
};
struct RootsGuard {
  rpz_rootset* p = nullptr;
  ~RootsGuard() { rpz_rootset_free(p); }
};
struct KernelGuard {
  rpz_kernel* p = nullptr;
  ~KernelGuard() { rpz_kernel_free(p); }
};
struct SourceGuard {
  rpz_source* p = nullptr;
  ~SourceGuard() { rpz_source_free(p); }
};

}  // namespace

TEST_CASE("version and status strings") {
  REQUIRE(rpz_version() != nullptr);
  CHECK(std::strlen(rpz_version()) > 0);
  for (int s = RPZ_OK; s <= RPZ_ERR_MISSING_DATA; ++s) {
    const char* name = rpz_status_name(rpz_status(s));
    REQUIRE(name != nullptr);
    CHECK(std::strlen(name) > 0);
  }
  CHECK(std::string(rpz_status_name(RPZ_OK)) !=
        rpz_status_name(RPZ_ERR_INVALID_ARGUMENT));
}

TEST_CASE("scheme lifecycle and failure reporting") {
  SchemeGuard s;
  REQUIRE(rpz_scheme_create(RPZ_SCHEME_ELLIPTIC, 12, &s.p) == RPZ_OK);
  CHECK(rpz_scheme_n(s.p) == 12);
  CHECK(rpz_scheme_get_kind(s.p) == RPZ_SCHEME_ELLIPTIC);
  double lc = -1.0;
  REQUIRE(rpz_scheme_log_coefficient(s.p, 0, &lc) == RPZ_OK);
  CHECK(lc == 0.0);
  REQUIRE(rpz_scheme_log_coefficient(s.p, 6, &lc) == RPZ_OK);
  CHECK(std::abs(lc - 0.5 * std::log(924.0)) < 1e-12);

  double sentinel = 42.0;
  CHECK(rpz_scheme_log_coefficient(s.p, 13, &sentinel) ==
        RPZ_ERR_INDEX_RANGE);
  CHECK(sentinel == 42.0);  // failing calls leave out-pointers untouched
  CHECK(std::strlen(rpz_last_error()) > 0);

  rpz_scheme* bad = nullptr;
  CHECK(rpz_scheme_create(RPZ_SCHEME_HYPERBOLIC, 5, &bad) ==
        RPZ_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(rpz_scheme_create(RPZ_SCHEME_ELLIPTIC, 5, nullptr) ==
        RPZ_ERR_INVALID_ARGUMENT);

  SchemeGuard h;
  REQUIRE(rpz_scheme_create_hyperbolic(8, 2.0, &h.p) == RPZ_OK);
  REQUIRE(rpz_scheme_log_coefficient(h.p, 3, &lc) == RPZ_OK);
  CHECK(std::abs(lc - 0.5 * std::log(4.0)) < 1e-12);

  double logs[3] = {0.0, -HUGE_VAL, 1.5};
  SchemeGuard c;
  REQUIRE(rpz_scheme_create_custom(2, logs, &c.p) == RPZ_OK);
  REQUIRE(rpz_scheme_log_coefficient(c.p, 1, &lc) == RPZ_OK);
  CHECK(lc == -HUGE_VAL);
  double nan_logs[2] = {0.0, NAN};
  rpz_scheme* oops = nullptr;
  CHECK(rpz_scheme_create_custom(1, nan_logs, &oops) ==
        RPZ_ERR_INVALID_ARGUMENT);
  CHECK(oops == nullptr);

  rpz_scheme_free(nullptr);  // NULL is a no-op
}

TEST_CASE("atoms and moment matching") {
  AtomGuard g, b, gc;
  REQUIRE(rpz_atom_create(RPZ_ATOM_GAUSSIAN_REAL, &g.p) == RPZ_OK);
  REQUIRE(rpz_atom_create(RPZ_ATOM_BERNOULLI, &b.p) == RPZ_OK);
  REQUIRE(rpz_atom_create(RPZ_ATOM_GAUSSIAN_COMPLEX, &gc.p) == RPZ_OK);
  CHECK(rpz_atom_is_real(g.p) == 1);
  CHECK(rpz_atom_is_real(gc.p) == 0);

  double m = 0.0;
  REQUIRE(rpz_atom_moment(g.p, 4, 0, &m) == RPZ_OK);
  CHECK(m == 3.0);
  CHECK(rpz_atom_moment(g.p, 3, 2, &m) == RPZ_ERR_UNSUPPORTED);

  int match = -1;
  REQUIRE(rpz_atom_moments_match(g.p, b.p, 2, &match) == RPZ_OK);
  CHECK(match == 1);
  REQUIRE(rpz_atom_moments_match(g.p, b.p, 4, &match) == RPZ_OK);
  CHECK(match == 0);
  REQUIRE(rpz_atom_moments_match(g.p, gc.p, 2, &match) == RPZ_OK);
  CHECK(match == 0);

  rpz_complex vals[2] = {C(-1.0), C(3.0)};
  double w[2] = {3.0, 1.0};
  AtomGuard d;
  REQUIRE(rpz_atom_create_discrete(vals, w, 2, &d.p) == RPZ_OK);
  REQUIRE(rpz_atom_moment(d.p, 2, 0, &m) == RPZ_OK);
  CHECK(std::abs(m - 1.0) < 1e-14);
  rpz_atom* oops = nullptr;
  CHECK(rpz_atom_create_discrete(vals, w, 1, &oops) ==
        RPZ_ERR_INVALID_ARGUMENT);
  CHECK(oops == nullptr);
}

TEST_CASE("samples: draw determinism, buffers, evaluation") {
  SchemeGuard s;
  AtomGuard a;
  REQUIRE(rpz_scheme_create(RPZ_SCHEME_FLAT, 20, &s.p) == RPZ_OK);
  REQUIRE(rpz_atom_create(RPZ_ATOM_GAUSSIAN_REAL, &a.p) == RPZ_OK);

  SampleGuard p1, p2;
  REQUIRE(rpz_sample_draw(s.p, a.p, 42, 3, &p1.p) == RPZ_OK);
  REQUIRE(rpz_sample_draw(s.p, a.p, 42, 3, &p2.p) == RPZ_OK);
  CHECK(rpz_sample_n(p1.p) == 20);
  std::vector<rpz_complex> c1(21), c2(21);
  REQUIRE(rpz_sample_coefficients(p1.p, c1.data(), c1.size()) == RPZ_OK);
  REQUIRE(rpz_sample_coefficients(p2.p, c2.data(), c2.size()) == RPZ_OK);
  for (int i = 0; i <= 20; ++i) {
    CHECK(c1[i].re == c2[i].re);
    CHECK(c1[i].im == c2[i].im);
  }
  CHECK(rpz_sample_coefficients(p1.p, c1.data(), 5) == RPZ_ERR_INDEX_RANGE);
  CHECK(rpz_sample_log_scale(p1.p) == rpz_sample_log_scale(p2.p));

  rpz_complex quad[3] = {C(1), C(2), C(3)};  // 1 + 2z + 3z^2
  SampleGuard f;
  REQUIRE(rpz_sample_fixed(quad, 3, &f.p) == RPZ_OK);
  double v = 0.0;
  REQUIRE(rpz_sample_log_abs(f.p, C(2.0), &v) == RPZ_OK);
  CHECK(std::abs(v - std::log(17.0)) < 1e-13);

  rpz_complex vanish[3] = {C(1), C(0), C(1)};  // z^2 + 1 at i
  SampleGuard fz;
  REQUIRE(rpz_sample_fixed(vanish, 3, &fz.p) == RPZ_OK);
  REQUIRE(rpz_sample_log_abs(fz.p, C(0.0, 1.0), &v) == RPZ_OK);
  CHECK(v == -HUGE_VAL);
}

TEST_CASE("root finding through the shared library") {
  rpz_complex cubic[4] = {C(-6), C(11), C(-6), C(1)};
  SampleGuard p;
  REQUIRE(rpz_sample_fixed(cubic, 4, &p.p) == RPZ_OK);

  RootsGuard r;
  REQUIRE(rpz_find_roots(p.p, 0.0, 400, &r.p) == RPZ_OK);
  CHECK(rpz_rootset_converged(r.p) == 1);
  CHECK(rpz_rootset_infinity_count(r.p) == 0);
  REQUIRE(rpz_rootset_finite_count(r.p) == 3);
  CHECK(rpz_rootset_residual_bound(r.p) < 1e-12);
  rpz_complex roots[3];
  REQUIRE(rpz_rootset_finite_roots(r.p, roots, 3) == RPZ_OK);
  CHECK(std::abs(roots[0].re - 1.0) < 1e-12);
  CHECK(std::abs(roots[2].re - 3.0) < 1e-12);

  REQUIRE(rpz_rootset_classify_real(r.p, 0.0) == RPZ_OK);
  CHECK(rpz_rootset_is_classified(r.p) == 1);
  CHECK(rpz_rootset_real_count(r.p) == 3);
  CHECK(rpz_rootset_upper_count(r.p) == 0);
  uint32_t cnt = 0;
  // Endpoints clear of the roots: solver output sits within ulps of 1, 2, 3.
  REQUIRE(rpz_rootset_count_in_interval(r.p, 0.5, 2.5, &cnt) == RPZ_OK);
  CHECK(cnt == 2);
  REQUIRE(rpz_rootset_count_in_interval(r.p, -HUGE_VAL, HUGE_VAL, &cnt) ==
          RPZ_OK);
  CHECK(cnt == 3);
  REQUIRE(rpz_rootset_count_in_disk(r.p, C(2.0), 1.5, &cnt) == RPZ_OK);
  CHECK(cnt == 3);

  CHECK(rpz_find_roots(p.p, 1e-3, 400, &r.p) == RPZ_ERR_INVALID_ARGUMENT);
}

TEST_CASE("iteration budget exhaustion still writes the partial result") {
  SchemeGuard s;
  AtomGuard a;
  REQUIRE(rpz_scheme_create(RPZ_SCHEME_KAC, 40, &s.p) == RPZ_OK);
  REQUIRE(rpz_atom_create(RPZ_ATOM_GAUSSIAN_REAL, &a.p) == RPZ_OK);
  SampleGuard p;
  REQUIRE(rpz_sample_draw(s.p, a.p, 7, 0, &p.p) == RPZ_OK);

  RootsGuard r;
  CHECK(rpz_find_roots(p.p, 0.0, 1, &r.p) == RPZ_ERR_NO_CONVERGENCE);
  REQUIRE(r.p != nullptr);
  CHECK(rpz_rootset_converged(r.p) == 0);
  CHECK(rpz_rootset_finite_count(r.p) +
            rpz_rootset_infinity_count(r.p) == 40);
}

TEST_CASE("root sets assembled from points classify by symmetry") {
  rpz_complex sym[4] = {C(0.5), C(0, 1), C(0, -1), C(-2)};
  RootsGuard r;
  REQUIRE(rpz_rootset_from_points(sym, 4, 1, &r.p) == RPZ_OK);
  CHECK(rpz_rootset_infinity_count(r.p) == 1);
  REQUIRE(rpz_rootset_classify_real(r.p, 0.0) == RPZ_OK);
  CHECK(rpz_rootset_real_count(r.p) == 2);
  CHECK(rpz_rootset_upper_count(r.p) == 1);
  rpz_complex up[1];
  REQUIRE(rpz_rootset_upper_roots(r.p, up, 1) == RPZ_OK);
  CHECK(up[0].im == 1.0);
  double reals[2];
  REQUIRE(rpz_rootset_real_roots(r.p, reals, 2) == RPZ_OK);
  CHECK(reals[0] == -2.0);
  CHECK(reals[1] == 0.5);

  rpz_complex asym[2] = {C(0, 1), C(1, 2)};
  RootsGuard r2;
  REQUIRE(rpz_rootset_from_points(asym, 2, 0, &r2.p) == RPZ_OK);
  CHECK(rpz_rootset_classify_real(r2.p, 0.0) == RPZ_ERR_INVALID_ARGUMENT);
  uint32_t cnt = 0;
  CHECK(rpz_rootset_count_in_interval(r2.p, 0.0, 1.0, &cnt) ==
        RPZ_ERR_MISSING_DATA);
  REQUIRE(rpz_rootset_count_in_disk(r2.p, C(0), 10.0, &cnt) == RPZ_OK);
  CHECK(cnt == 2);
}

TEST_CASE("oracle passthroughs") {
  SchemeGuard k, r;
  REQUIRE(rpz_scheme_create(RPZ_SCHEME_KAC, 9, &k.p) == RPZ_OK);
  REQUIRE(rpz_scheme_create(RPZ_SCHEME_ELLIPTIC_RESCALED, 16, &r.p) == RPZ_OK);

  double v = 0.0;
  REQUIRE(rpz_log_variance(k.p, C(1.0), &v) == RPZ_OK);
  CHECK(std::abs(v - std::log(10.0)) < 1e-13);

  REQUIRE(rpz_real_intensity_1(k.p, 0.0, &v) == RPZ_OK);
  CHECK(std::abs(v - 1.0 / kPi) < 1e-14);
  REQUIRE(rpz_real_intensity_2(k.p, 0.3, 0.7, &v) == RPZ_OK);
  CHECK(v > 0.0);
  CHECK(rpz_real_intensity_2(k.p, 0.3, 0.3, &v) == RPZ_ERR_DEGENERATE_SPAN);
  REQUIRE(rpz_complex_intensity_01(k.p, C(0.4, 0.5), &v) == RPZ_OK);
  CHECK(v > 0.0);
  CHECK(rpz_complex_intensity_01(k.p, C(0.4, 0.0), &v) ==
        RPZ_ERR_INVALID_ARGUMENT);
  REQUIRE(rpz_predicted_complex_intensity(r.p, C(1.0, 1.0), 0.0, &v) ==
          RPZ_OK);
  CHECK(std::abs(v - (1.0 / kPi) / ((1.0 + 2.0 / 16) * (1.0 + 2.0 / 16))) <
        1e-12);

  REQUIRE(rpz_real_intensity_integral(r.p, -HUGE_VAL, HUGE_VAL, 0.0, &v) ==
          RPZ_OK);
  CHECK(std::abs(v - 4.0) < 1e-8);

  rpz_complex a[2] = {C(1), C(0)};
  rpz_complex b[2] = {C(0), C(2)};
  REQUIRE(rpz_wedge_norm(a, b, 2, &v) == RPZ_OK);
  CHECK(std::abs(v - 2.0) < 1e-15);

  double vecs[4] = {3.0, 0.0, 0.0, 0.25};
  REQUIRE(rpz_gauss_zero_density(vecs, 2, 2, &v) == RPZ_OK);
  CHECK(std::abs(v - 1.0 / (2.0 * kPi * 0.75)) < 1e-14);
  double dup[4] = {1.0, 2.0, 1.0, 2.0};
  CHECK(rpz_gauss_zero_density(dup, 2, 2, &v) == RPZ_ERR_DEGENERATE_SPAN);

  double u[2] = {0.0, 2.0};
  double sp[2] = {1.0, 0.0};
  REQUIRE(rpz_conditional_abs_moment(u, sp, 1, 2, &v) == RPZ_OK);
  CHECK(std::abs(v - std::sqrt(2.0 / kPi) * 2.0) < 1e-14);
  REQUIRE(rpz_conditional_second_moment(u, sp, 1, 2, &v) == RPZ_OK);
  CHECK(std::abs(v - 4.0) < 1e-14);

  double seq[5] = {16.0, 8.0, 4.0, 2.0, 1.0};
  size_t idx[5];
  size_t count = 0;
  REQUIRE(rpz_lacunary_subsequence(seq, 5, 2.0, idx, 5, &count) == RPZ_OK);
  REQUIRE(count >= 2);
  CHECK(idx[0] == 0);
  CHECK(rpz_lacunary_subsequence(seq, 5, 2.0, idx, 1, &count) ==
        RPZ_ERR_INDEX_RANGE);

  REQUIRE(rpz_kac_edge_profile(0.0, &v) == RPZ_OK);
  CHECK(std::abs(v - 1.0 / (12.0 * kPi)) < 1e-14);
}

TEST_CASE("kernels through the shared library") {
  KernelGuard kr, kc;
  REQUIRE(rpz_kernel_create_real(RPZ_KERNEL_COSINE_BUMP, 2.0, 1.0, 2.5, 0,
                                 &kr.p) == RPZ_OK);
  CHECK(std::abs(rpz_kernel_mass(kr.p) - 2.5) < 1e-9);
  CHECK(rpz_kernel_eval(kr.p, C(2.0, 99.0)) == 1.0);  // im ignored
  CHECK(rpz_kernel_eval(kr.p, C(5.0)) == 0.0);

  REQUIRE(rpz_kernel_create_complex(RPZ_KERNEL_GAUSSIAN_BUMP, C(1, 1), 0.5,
                                    1.0, 1, &kc.p) == RPZ_OK);
  CHECK(std::abs(rpz_kernel_mass(kc.p) - 1.0) < 1e-11);
  CHECK(rpz_kernel_eval(kc.p, C(1.0, 2.5)) == 0.0);

  rpz_kernel* bad = nullptr;
  CHECK(rpz_kernel_create_real(RPZ_KERNEL_COSINE_BUMP, 0.0, 1.0, -1.0, 0,
                               &bad) == RPZ_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
}

TEST_CASE("sources and estimators through the shared library") {
  rpz_complex pm1[3] = {C(-1), C(0), C(1)};  // roots +-1
  SourceGuard fixed;
  REQUIRE(rpz_source_create_fixed(pm1, 3, &fixed.p) == RPZ_OK);

  rpz_estimate mean{}, var{};
  REQUIRE(rpz_estimate_counts_interval(fixed.p, -2.0, 2.0, 8, 1, 2, &mean,
                                       &var) == RPZ_OK);
  CHECK(mean.value == 2.0);
  CHECK(mean.std_error == 0.0);
  CHECK(mean.trials == 8);
  CHECK(var.value == 0.0);
  REQUIRE(rpz_estimate_counts_interval(fixed.p, -2.0, 2.0, 8, 1, 2, &mean,
                                       nullptr) == RPZ_OK);
  REQUIRE(rpz_estimate_counts_disk(fixed.p, C(1.0), 0.5, 8, 1, 1, &mean,
                                   nullptr) == RPZ_OK);
  CHECK(mean.value == 1.0);

  CHECK(rpz_source_set_solver(fixed.p, 1e-9, 200) == RPZ_OK);
  CHECK(rpz_source_set_solver(fixed.p, 2e-6, 200) ==
        RPZ_ERR_INVALID_ARGUMENT);

  KernelGuard at1;
  REQUIRE(rpz_kernel_create_complex(RPZ_KERNEL_GAUSSIAN_BUMP, C(1, 0), 1.0,
                                    0.5, 0, &at1.p) == RPZ_OK);
  const rpz_kernel* ks[1] = {at1.p};
  rpz_estimate corr{};
  REQUIRE(rpz_estimate_correlation(fixed.p, ks, 1, 4, 1, 1, &corr) == RPZ_OK);
  CHECK(corr.value == 1.0);
  CHECK(corr.std_error == 0.0);

  KernelGuard real_at1;
  REQUIRE(rpz_kernel_create_real(RPZ_KERNEL_GAUSSIAN_BUMP, 1.0, 1.0, 0.5, 0,
                                 &real_at1.p) == RPZ_OK);
  const rpz_kernel* rks[1] = {real_at1.p};
  rpz_estimate mixed{};
  REQUIRE(rpz_estimate_mixed_correlation(fixed.p, rks, 1, nullptr, 0, 4, 1, 1,
                                         &mixed) == RPZ_OK);
  CHECK(mixed.value == 1.0);

  RootsGuard rs;
  SampleGuard sp;
  REQUIRE(rpz_sample_fixed(pm1, 3, &sp.p) == RPZ_OK);
  REQUIRE(rpz_find_roots(sp.p, 0.0, 400, &rs.p) == RPZ_OK);
  double lin = 0.0;
  REQUIRE(rpz_linear_statistic(rs.p, at1.p, &lin) == RPZ_OK);
  CHECK(lin == 1.0);

  SchemeGuard s;
  AtomGuard g, b;
  REQUIRE(rpz_scheme_create(RPZ_SCHEME_KAC, 15, &s.p) == RPZ_OK);
  REQUIRE(rpz_atom_create(RPZ_ATOM_GAUSSIAN_REAL, &g.p) == RPZ_OK);
  REQUIRE(rpz_atom_create(RPZ_ATOM_BERNOULLI, &b.p) == RPZ_OK);
  SourceGuard eg, eb;
  REQUIRE(rpz_source_create_ensemble(s.p, g.p, &eg.p) == RPZ_OK);
  REQUIRE(rpz_source_create_ensemble(s.p, b.p, &eb.p) == RPZ_OK);

  rpz_concentration_summary cs{};
  REQUIRE(rpz_concentration_deviation(eb.p, C(1.0), 1e9, 4000, 5, 0, &cs) ==
          RPZ_OK);
  CHECK(cs.trials == 4000);
  CHECK(std::abs(cs.zero_fraction - 12870.0 / 65536.0) < 0.03);
  CHECK(cs.exceed_fraction >= cs.zero_fraction);  // |D| = inf exceeds

  rpz_observable obs{};
  obs.kind = RPZ_OBS_COUNT_INTERVAL;
  obs.a = -1.0;
  obs.b = 1.0;
  rpz_estimate oe{};
  REQUIRE(rpz_observable_estimate(eg.p, &obs, 32, 3, 2, &oe) == RPZ_OK);
  CHECK(oe.trials == 32);
  CHECK(oe.value > 0.0);

  rpz_estimate gap{};
  int within = -1;
  REQUIRE(rpz_universality_gap(eg.p, eg.p, &obs, 32, 3, 2, &gap, &within) ==
          RPZ_OK);
  CHECK(gap.value == 0.0);
  CHECK(within == 1);

  obs.kind = RPZ_OBS_LINEAR_STATISTIC;
  obs.kernel = nullptr;
  CHECK(rpz_observable_estimate(eg.p, &obs, 8, 3, 1, &oe) ==
        RPZ_ERR_MISSING_DATA);
}

TEST_CASE("monte carlo integration callbacks and the chebyshev bound") {
  struct Payload {
    int calls = 0;
  } payload;
  auto f = [](rpz_complex pt, void* user) -> double {
    static_cast<Payload*>(user)->calls += 1;
    return pt.re * pt.re;
  };
  rpz_estimate est{};
  double m2 = -1.0;
  REQUIRE(rpz_monte_carlo_integral_interval(0.0, 1.0, f, &payload, 20000, 9,
                                            &est, &m2) == RPZ_OK);
  CHECK(payload.calls == 20000);
  CHECK(std::abs(est.value - 1.0 / 3.0) < 0.01);
  CHECK(m2 >= 0.0);
  double bound = rpz_chebyshev_bound(est.trials, m2, 0.01);
  CHECK(std::abs(est.value - 1.0 / 3.0) < bound);

  REQUIRE(rpz_monte_carlo_integral_disk(C(0, 0), 1.0, f, &payload, 20000, 9,
                                        &est, nullptr) == RPZ_OK);
  CHECK(std::abs(est.value - 0.25) < 0.01);  // E Re(Z)^2 = 1/4 on the disk

  CHECK(std::isnan(rpz_chebyshev_bound(0, 1.0, 0.01)));
  CHECK(std::isnan(rpz_chebyshev_bound(10, -1.0, 0.01)));
  CHECK(rpz_monte_carlo_integral_interval(1.0, 0.0, f, &payload, 10, 1, &est,
                                          nullptr) ==
        RPZ_ERR_INVALID_ARGUMENT);
}
