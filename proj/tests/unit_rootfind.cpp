// Root solver, real/complex classification, and region counting.
//
// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>
#include <vector>

#include "core/atom.hpp"
#include "core/roots.hpp"
#include "core/rng.hpp"
#include "core/sample.hpp"
#include "core/scheme.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace rpz;
using rpz_test::code_of;

namespace {

constexpr double kTol = 1e-10;
constexpr uint32_t kIters = 400;

Sample poly(std::vector<cplx> c) { return fixed_sample(c); }

std::vector<cplx> sorted_roots(const RootSet& rs) {
  auto v = rs.finite;
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// Expand prod (z - r_k) into monomial coefficients.
std::vector<cplx> from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{cplx(1.0, 0.0)};
  for (cplx r : roots) {
    std::vector<cplx> nc(c.size() + 1, cplx(0.0, 0.0));
    for (size_t i = 0; i < c.size(); ++i) {
      nc[i + 1] += c[i];
      nc[i] -= r * c[i];
    }
    c = std::move(nc);
  }
  return c;
}

}  // namespace

TEST_CASE("cubic with integer roots") {
  RootSet rs = find_roots(poly({{-6, 0}, {11, 0}, {-6, 0}, {1, 0}}),
                          kTol, kIters);
  CHECK(rs.converged);
  CHECK(rs.at_infinity == 0);
  REQUIRE(rs.finite.size() == 3);
  auto v = sorted_roots(rs);
  CHECK(v[0].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1].real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v[2].real() == doctest::Approx(3.0).epsilon(1e-12));
  for (auto z : v) CHECK(z.imag() == 0.0);
  CHECK(rs.residual < 1e-12);
}

TEST_CASE("degree-bound conventions: leading zeros, trailing zeros") {
  // Coefficients (0, 1, 0, 0) with degree bound 3: f(z) = z, so one zero
  // at the origin and two zeros at infinity.
  RootSet rs = find_roots(poly({{0, 0}, {1, 0}, {0, 0}, {0, 0}}),
                          kTol, kIters);
  CHECK(rs.at_infinity == 2);
  REQUIRE(rs.finite.size() == 1);
  CHECK(rs.finite[0] == cplx(0.0, 0.0));

  // z^2 (z - 1): trailing zeros give exact origin roots.
  RootSet rs2 = find_roots(poly({{0, 0}, {0, 0}, {-1, 0}, {1, 0}}),
                           kTol, kIters);
  auto v = sorted_roots(rs2);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == cplx(0.0, 0.0));
  CHECK(v[1] == cplx(0.0, 0.0));
  CHECK(v[2].real() == doctest::Approx(1.0).epsilon(1e-12));

  // The zero polynomial has every zero at infinity.
  RootSet rs3 = find_roots(poly({{0, 0}, {0, 0}, {0, 0}}), kTol, kIters);
  CHECK(rs3.at_infinity == 2);
  CHECK(rs3.finite.empty());

  // A pure monomial: f(z) = z^3 over degree bound 3.
  RootSet rs4 = find_roots(poly({{0, 0}, {0, 0}, {0, 0}, {2, 0}}),
                           kTol, kIters);
  CHECK(rs4.at_infinity == 0);
  REQUIRE(rs4.finite.size() == 3);
  for (auto z : rs4.finite) CHECK(z == cplx(0.0, 0.0));
}

TEST_CASE("argument validation") {
  Sample p = poly({{1, 0}, {1, 0}});
  CHECK(code_of([&] { find_roots(p, 0.0, kIters); }) ==
        Code::invalid_argument);
  CHECK(code_of([&] { find_roots(p, 1e-5, kIters); }) ==
        Code::invalid_argument);
  CHECK(code_of([&] { find_roots(p, kTol, 0); }) == Code::invalid_argument);
}

TEST_CASE("quadruple root: cluster accuracy and exact mean") {
  // (z - 1)^4: individual roots are accurate to about the fourth root of
  // machine epsilon, but their mean recovers the full precision.
  RootSet rs = find_roots(poly({{1, 0}, {-4, 0}, {6, 0}, {-4, 0}, {1, 0}}),
                          kTol, kIters);
  REQUIRE(rs.finite.size() == 4);
  cplx sum = 0.0;
  for (auto z : rs.finite) {
    CHECK(std::abs(z - cplx(1.0, 0.0)) < 0.05);
    sum += z;
  }
  // The mean cancels the leading cluster error but the stopping rule is not
  // angularly symmetric, so only a square-root improvement is guaranteed.
  CHECK(std::abs(sum / 4.0 - cplx(1.0, 0.0)) < 1e-4);
}

TEST_CASE("random degree-30 polynomials: residual and Vieta identities") {
  Scheme s = make_scheme(SchemeKind::kac, 30);
  Atom a = make_atom(AtomFamily::gaussian_complex);
  for (uint64_t trial = 0; trial < 20; ++trial) {
    Sample p = draw_sample(s, a, 555, trial);
    RootSet rs = find_roots(p, kTol, kIters);
    REQUIRE(rs.converged);
    REQUIRE(rs.at_infinity == 0);
    REQUIRE(rs.finite.size() == 30);
    CHECK(rs.residual < 1e-8);

    cplx sum = 0.0, prod = 1.0;
    for (auto z : rs.finite) {
      sum += z;
      prod *= z;
    }
    cplx an = p.coeffs[30], an1 = p.coeffs[29], a0 = p.coeffs[0];
    CHECK(std::abs(sum - (-an1 / an)) <
          1e-8 * (1.0 + std::abs(an1 / an)));
    double want_log = std::log(std::abs(a0 / an));
    CHECK(std::log(std::abs(prod)) ==
          doctest::Approx(want_log).epsilon(1e-7));
  }
}

TEST_CASE("conjugate symmetry for real coefficients is exact") {
  Scheme s = make_scheme(SchemeKind::flat, 60);
  Atom a = make_atom(AtomFamily::gaussian_real);
  Sample p = draw_sample(s, a, 321, 2);
  RootSet rs = find_roots(p, kTol, kIters);
  REQUIRE(rs.converged);
  CHECK(rs.from_real_coeffs);
  // The multiset of roots must equal the multiset of conjugates bitwise.
  auto v = sorted_roots(rs);
  std::vector<cplx> conj(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    conj[i] = cplx(v[i].real(), -v[i].imag());
  std::sort(conj.begin(), conj.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i].real() == conj[i].real());
    CHECK(v[i].imag() == conj[i].imag());
  }
}

TEST_CASE("wilkinson-12 recovers the integer roots") {
  std::vector<cplx> roots;
  for (int k = 1; k <= 12; ++k) roots.push_back(cplx(double(k), 0.0));
  RootSet rs = find_roots(poly(from_roots(roots)), kTol, kIters);
  REQUIRE(rs.converged);
  auto v = sorted_roots(rs);
  REQUIRE(v.size() == 12);
  for (int k = 0; k < 12; ++k)
    CHECK(std::abs(v[k] - cplx(double(k + 1), 0.0)) < 1e-6);
}

TEST_CASE("reconstruction: expanding known roots and re-solving") {
  Rng rng(9001);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> want;
    for (int k = 0; k < 16; ++k)
      want.push_back(cplx(3.0 * (rng.uniform01() - 0.5),
                          3.0 * (rng.uniform01() - 0.5)));
    RootSet rs = find_roots(poly(from_roots(want)), kTol, kIters);
    REQUIRE(rs.converged);
    auto got = sorted_roots(rs);
    std::sort(want.begin(), want.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real()
                                  : a.imag() < b.imag();
    });
    // Greedy nearest matching; random roots are well separated in law.
    double worst = 0.0;
    std::vector<bool> used(want.size(), false);
    for (cplx g : got) {
      double best = kInf;
      size_t bi = 0;
      for (size_t i = 0; i < want.size(); ++i)
        if (!used[i] && std::abs(g - want[i]) < best) {
          best = std::abs(g - want[i]);
          bi = i;
        }
      used[bi] = true;
      worst = std::max(worst, best);
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("flat degree-400 sample solves within tolerance") {
  Scheme s = make_scheme(SchemeKind::flat, 400);
  Atom a = make_atom(AtomFamily::gaussian_real);
  Sample p = draw_sample(s, a, 77, 0);
  RootSet rs = find_roots(p, kTol, kIters);
  REQUIRE(rs.converged);
  CHECK(rs.at_infinity == 0);
  CHECK(rs.finite.size() == 400);
  CHECK(rs.residual < 1e-9);
}

TEST_CASE("solver output is bitwise deterministic") {
  Scheme s = make_scheme(SchemeKind::elliptic, 80);
  Atom a = make_atom(AtomFamily::uniform_real);
  Sample p = draw_sample(s, a, 8, 1);
  RootSet r1 = find_roots(p, kTol, kIters);
  RootSet r2 = find_roots(p, kTol, kIters);
  REQUIRE(r1.finite.size() == r2.finite.size());
  for (size_t i = 0; i < r1.finite.size(); ++i) {
    CHECK(r1.finite[i].real() == r2.finite[i].real());
    CHECK(r1.finite[i].imag() == r2.finite[i].imag());
  }
}

TEST_CASE("iteration budget exhaustion is reported, result still usable") {
  Scheme s = make_scheme(SchemeKind::kac, 50);
  Atom a = make_atom(AtomFamily::gaussian_real);
  Sample p = draw_sample(s, a, 3, 0);
  RootSet rs = find_roots(p, kTol, 1);
  CHECK_FALSE(rs.converged);
  CHECK(rs.finite.size() + rs.at_infinity == 50);
}

TEST_CASE("classification separates reals from conjugate pairs") {
  // (z - 2)(z^2 + 1): one real root, one pair.
  RootSet rs = find_roots(poly({{-2, 0}, {1, 0}, {-2, 0}, {1, 0}}),
                          kTol, kIters);
  classify_real(rs, 0.0);
  REQUIRE(rs.classified);
  REQUIRE(rs.reals.size() == 1);
  CHECK(rs.reals[0] == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(rs.upper.size() == 1);
  CHECK(rs.upper[0].imag() > 0.0);
  CHECK(std::abs(rs.upper[0] - cplx(0.0, 1.0)) < 1e-12);
}

TEST_CASE("a genuine conjugate pair with tiny imaginary part stays complex") {
  RootSet rs;
  rs.finite = {cplx(1.0, 1e-12), cplx(1.0, -1e-12)};
  rs.at_infinity = 0;
  rs.from_real_coeffs = true;
  classify_real(rs, 0.0);
  CHECK(rs.reals.empty());
  REQUIRE(rs.upper.size() == 1);
  CHECK(rs.upper[0].imag() == 1e-12);
}

TEST_CASE("an unpaired near-real root snaps, a far one throws") {
  RootSet near;
  near.finite = {cplx(0.5, 1e-10)};
  near.at_infinity = 0;
  near.from_real_coeffs = true;
  classify_real(near, 0.0);
  REQUIRE(near.reals.size() == 1);
  CHECK(near.reals[0] == 0.5);
  CHECK(near.upper.empty());

  RootSet far;
  far.finite = {cplx(0.0, 0.5)};
  far.at_infinity = 0;
  far.from_real_coeffs = true;
  CHECK(code_of([&] { classify_real(far, 0.0); }) == Code::classification);

  RootSet noreal;
  noreal.finite = {cplx(0.0, 0.5)};
  noreal.from_real_coeffs = false;
  CHECK(code_of([&] { classify_real(noreal, 0.0); }) ==
        Code::invalid_argument);
}

TEST_CASE("interval counting is closed, disk counting is open") {
  RootSet rs = find_roots(poly(from_roots(
                   {cplx(-1, 0), cplx(0, 0), cplx(1, 0), cplx(0, 2),
                    cplx(0, -2)})),
                          kTol, kIters);
  CHECK(code_of([&] { count_in_interval(rs, -1.0, 1.0); }) ==
        Code::missing_data);
  classify_real(rs, 0.0);
  CHECK(count_in_interval(rs, -1.0, 1.0) == 3);  // endpoints included
  CHECK(count_in_interval(rs, -0.5, 0.5) == 1);
  CHECK(count_in_interval(rs, 2.0, 5.0) == 0);
  CHECK(code_of([&] { count_in_interval(rs, 1.0, -1.0); }) ==
        Code::invalid_argument);

  CHECK(count_in_disk(rs, cplx(0, 0), 2.0) == 3);  // |+-2i| = 2 excluded
  CHECK(count_in_disk(rs, cplx(0, 0), 2.0 + 1e-9) == 5);
  CHECK(code_of([&] { count_in_disk(rs, cplx(0, 0), 0.0); }) ==
        Code::invalid_argument);
}

TEST_CASE("classification works on a full random real ensemble draw") {
  Scheme s = make_scheme(SchemeKind::flat, 120);
  Atom a = make_atom(AtomFamily::gaussian_real);
  for (uint64_t t = 0; t < 5; ++t) {
    Sample p = draw_sample(s, a, 2024, t);
    RootSet rs = find_roots(p, kTol, kIters);
    REQUIRE(rs.converged);
    classify_real(rs, 0.0);
    CHECK(rs.reals.size() + 2 * rs.upper.size() + rs.at_infinity == 120);
    for (size_t i = 1; i < rs.reals.size(); ++i)
      CHECK(rs.reals[i - 1] <= rs.reals[i]);
    for (cplx z : rs.upper) CHECK(z.imag() > 0.0);
  }
}
