// SPDX-License-Identifier: MIT
#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rpz {

namespace {

// log|expm1(x)|, stable for every finite x and x = -inf (-> 0).
double log_abs_expm1(double x) {
  if (x > 36.0) return x > 709.0 ? x : x + std::log1p(-std::exp(-x));
  if (x > 0.0) return std::log(std::expm1(x));
  return std::log(-std::expm1(x));  // x < 0, including -inf
}

double compensated_dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum acc;
  for (size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

double norm2(std::span<const double> a) {
  return std::sqrt(std::max(0.0, compensated_dot(a, a)));
}

// Subtract the projection of v onto each orthonormal basis row, twice
// (classical reorthogonalization); v becomes the orthogonal residual.
void project_out(std::span<double> v, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      double coef = compensated_dot(v, q);
      for (size_t i = 0; i < v.size(); ++i) v[i] -= coef * q[i];
    }
  }
}

// Modified Gram-Schmidt with reorthogonalization; throws on rank loss.
std::vector<std::vector<double>> orthonormal_basis(
    std::span<const double> vectors, size_t m, size_t dim) {
  std::vector<std::vector<double>> basis;
  basis.reserve(m);
  for (size_t r = 0; r < m; ++r) {
    std::vector<double> v(vectors.begin() + r * dim,
                          vectors.begin() + (r + 1) * dim);
    double before = norm2(v);
    require(before > 0.0, Code::degenerate_span, "zero constraint vector");
    project_out(v, basis);
    double after = norm2(v);
    require(after > 1e-13 * before, Code::degenerate_span,
            "constraint vectors are numerically dependent");
    for (double& x : v) x /= after;
    basis.push_back(std::move(v));
  }
  return basis;
}

// Weighted index mean/variance of w_i = exp(t_i - shift); the variance is
// computed against the mean in a second pass, which avoids the huge
// cancellation in E[i^2] - (E[i])^2.
struct IndexMoments {
  double mean = 0.0, var = 0.0;
};

IndexMoments index_moments(std::span<const double> w) {
  CompensatedSum s0, s1;
  for (size_t i = 0; i < w.size(); ++i) {
    s0.add(w[i]);
    s1.add(double(i) * w[i]);
  }
  IndexMoments m;
  double total = s0.value();
  m.mean = s1.value() / total;
  CompensatedSum s2;
  for (size_t i = 0; i < w.size(); ++i) s2.add(sqr(double(i) - m.mean) * w[i]);
  m.var = std::max(0.0, s2.value() / total);
  return m;
}

// q(s) = exp(-|s|) / (1 - exp(-|s|))^2 = 1 / (4 sinh^2(s/2)); even; the
// geometric-sum curvature d^2/dt^2 log sum_i e^{it} decomposes into q's.
double geometric_q(double s) {
  s = std::abs(s);
  if (s > 1350.0) return 0.0;
  if (s > 36.0) {
    double e = std::exp(-s);
    return e / sqr(1.0 - e);
  }
  return 0.25 / sqr(std::sinh(0.5 * s));
}

// Weighted index variance for kac weights u^i, i = 0..n, t = log u:
// q(t) - N^2 q(Nt) with N = n+1; series when both q's blow up together.
double kac_index_variance(double n_plus_1, double t) {
  double N = n_plus_1;
  if (std::abs(N * t) < 0.05) {
    double t2 = t * t;
    return (N * N - 1.0) / 12.0 - t2 * (sqr(N * N) - 1.0) / 240.0 +
           t2 * t2 * (N * N * sqr(N * N) - 1.0) / 6048.0;
  }
  return geometric_q(t) - N * N * geometric_q(N * t);
}

double kac_rho1(uint32_t n, double x) {
  if (n == 0) return 0.0;
  double ax = std::abs(x);
  if (ax == 0.0) return 1.0 / kPi;  // limit c_1/(pi c_0)
  double t = 2.0 * std::log(ax);
  // Reversal symmetry: rho(x) = rho(1/x)/x^2, exact for this family.
  if (t > 36.0) return kac_rho1(n, 1.0 / ax) / (x * x);
  if (t < -36.0) {
    // Truncation at n and the u^2 correction are both below double
    // precision here: the infinite geometric sum gives 1/(pi (1-u)).
    return 1.0 / (kPi * (1.0 - ax * ax));
  }
  double var = kac_index_variance(double(n) + 1.0, t);
  return std::sqrt(std::max(var, 0.0)) / (kPi * ax);
}

double sign_pow(double x, size_t i) {
  return (x < 0.0 && i % 2 == 1) ? -1.0 : 1.0;
}

}  // namespace

double log_variance(const Scheme& s, cplx z) {
  require(is_finite(z), Code::invalid_argument, "argument must be finite");
  double u = std::norm(z);  // |z|^2
  switch (s.kind) {
    case SchemeKind::elliptic:
      return double(s.n) * std::log1p(u);
    case SchemeKind::elliptic_rescaled:
      return double(s.n) * std::log1p(u / double(s.n));
    case SchemeKind::kac: {
      double N = double(s.n) + 1.0;
      if (u == 1.0) return std::log(N);
      double t = std::log(u);  // -inf at z = 0 is handled by log_abs_expm1
      return log_abs_expm1(N * t) - log_abs_expm1(t);
    }
    default:
      break;
  }
  if (u == 0.0) return 2.0 * s.log_coeff(0);
  double lu = std::log(u);
  double shift = kNegInf;
  std::vector<double> t(s.n + 1, kNegInf);
  for (uint32_t i = 0; i <= s.n; ++i) {
    double lc = s.log_coeff(i);
    if (lc == kNegInf) continue;
    t[i] = 2.0 * lc + double(i) * lu;
    shift = std::max(shift, t[i]);
  }
  if (shift == kNegInf) return kNegInf;
  CompensatedSum acc;
  for (double ti : t)
    if (ti > kNegInf) acc.add(std::exp(ti - shift));
  return shift + std::log(acc.value());
}

double predicted_complex_intensity(const Scheme& s, cplx z, double h) {
  if (s.kind == SchemeKind::elliptic_rescaled)
    return (1.0 / kPi) / sqr(1.0 + std::norm(z) / double(s.n));
  if (h <= 0.0) h = 1e-3 * (1.0 + std::abs(z));
  double c = log_variance(s, z);
  double stencil[4] = {
      log_variance(s, z + cplx{h, 0.0}), log_variance(s, z - cplx{h, 0.0}),
      log_variance(s, z + cplx{0.0, h}), log_variance(s, z - cplx{0.0, h})};
  require(c > kNegInf && stencil[0] > kNegInf && stencil[1] > kNegInf &&
              stencil[2] > kNegInf && stencil[3] > kNegInf,
          Code::zero_variance, "V vanishes on the Laplacian stencil");
  double lap = (stencil[0] + stencil[1] + stencil[2] + stencil[3] - 4.0 * c) /
               (h * h);
  return lap / (4.0 * kPi);
}

EvalVector evaluation_vector(const Scheme& s, double x,
                             unsigned derivative_order) {
  require(derivative_order <= 1, Code::unsupported,
          "evaluation vectors carry derivative order 0 or 1 only");
  require(std::isfinite(x), Code::invalid_argument,
          "argument must be finite");
  size_t len = s.n + 1;
  std::vector<double> t(len, kNegInf);
  double lax = std::log(std::abs(x));
  double shift = kNegInf;
  for (size_t i = derivative_order; i < len; ++i) {
    double lc = s.log_coeff(uint32_t(i));
    if (lc == kNegInf) continue;
    double power = double(i) - double(derivative_order);
    if (x == 0.0 && power > 0.0) continue;  // only the constant term
    double ti = lc + power * (x == 0.0 ? 0.0 : lax);
    if (derivative_order == 1) ti += std::log(double(i));
    t[i] = ti;
    shift = std::max(shift, ti);
  }
  EvalVector ev;
  ev.entries.assign(len, 0.0);
  ev.log_shift = (shift == kNegInf) ? 0.0 : shift;
  if (shift == kNegInf) return ev;  // identically zero vector
  CompensatedSum nsq;
  for (size_t i = derivative_order; i < len; ++i) {
    if (t[i] == kNegInf) continue;
    double e = std::exp(t[i] - shift) * sign_pow(x, i - derivative_order);
    ev.entries[i] = e;
    nsq.add(e * e);
  }
  ev.norm_sq = nsq.value();
  return ev;
}

double real_intensity_1_general(const Scheme& s, double x) {
  require(std::isfinite(x), Code::invalid_argument,
          "argument must be finite");
  double ax = std::abs(x);
  if (ax == 0.0) {
    double lc0 = s.log_coeff(0);
    require(lc0 > kNegInf, Code::zero_variance, "V(0) = 0 for this scheme");
    if (s.n == 0) return 0.0;
    double lc1 = s.log_coeff(1);
    return (lc1 == kNegInf) ? 0.0 : std::exp(lc1 - lc0) / kPi;
  }
  double lu = 2.0 * std::log(ax);
  size_t len = s.n + 1;
  std::vector<double> w(len, 0.0);
  double shift = kNegInf;
  std::vector<double> t(len, kNegInf);
  for (size_t i = 0; i < len; ++i) {
    double lc = s.log_coeff(uint32_t(i));
    if (lc == kNegInf) continue;
    t[i] = 2.0 * lc + double(i) * lu;
    shift = std::max(shift, t[i]);
  }
  require(shift > kNegInf, Code::zero_variance, "V(x) = 0 for this scheme");
  for (size_t i = 0; i < len; ++i)
    if (t[i] > kNegInf) w[i] = std::exp(t[i] - shift);
  IndexMoments m = index_moments(w);
  return std::sqrt(m.var) / (kPi * ax);
}

double real_intensity_1(const Scheme& s, double x) {
  switch (s.kind) {
    case SchemeKind::kac:
      require(std::isfinite(x), Code::invalid_argument,
              "argument must be finite");
      return kac_rho1(s.n, x);
    case SchemeKind::elliptic_rescaled:
      // Binomial weights make the index variance exact:
      // rho(x) = (1/pi) / (1 + x^2/n).
      require(std::isfinite(x), Code::invalid_argument,
              "argument must be finite");
      return (1.0 / kPi) / (1.0 + x * x / double(s.n));
    case SchemeKind::elliptic:
      require(std::isfinite(x), Code::invalid_argument,
              "argument must be finite");
      return std::sqrt(double(s.n)) / (kPi * (1.0 + x * x));
    default:
      return real_intensity_1_general(s, x);
  }
}

double bivariate_abs_moment(double sx, double sy, double rho) {
  if (sx <= 0.0 || sy <= 0.0) return 0.0;
  rho = std::clamp(rho, -1.0, 1.0);
  return (2.0 / kPi) * sx * sy *
         (std::sqrt(std::max(0.0, 1.0 - rho * rho)) + rho * std::asin(rho));
}

double real_intensity_2(const Scheme& s, double x, double y) {
  require(std::isfinite(x) && std::isfinite(y), Code::invalid_argument,
          "arguments must be finite");
  require(x != y, Code::degenerate_span,
          "two-point intensity needs distinct points");
  if (x > y) std::swap(x, y);  // exact symmetry in the arguments

  EvalVector vx = evaluation_vector(s, x, 0);
  EvalVector vy = evaluation_vector(s, y, 0);
  require(vx.norm_sq > 0.0 && vy.norm_sq > 0.0, Code::zero_variance,
          "V vanishes at an argument");
  EvalVector wx = evaluation_vector(s, x, 1);
  EvalVector wy = evaluation_vector(s, y, 1);

  // MGS residual of vy against vx gives the wedge: |vx ^ vy| = |vx| * beta.
  std::vector<double> r(vy.entries);
  double nx = norm2(vx.entries);
  std::vector<std::vector<double>> basis;
  {
    std::vector<double> q1(vx.entries);
    for (double& e : q1) e /= nx;
    basis.push_back(std::move(q1));
  }
  project_out(r, basis);
  double beta = norm2(r);
  require(beta > 1e-13 * norm2(vy.entries), Code::degenerate_span,
          "evaluation vectors are numerically dependent");
  for (double& e : r) e /= beta;
  basis.push_back(std::move(r));

  std::vector<double> ra(wx.entries), rb(wy.entries);
  project_out(ra, basis);
  project_out(rb, basis);
  double s11 = compensated_dot(ra, ra);
  double s22 = compensated_dot(rb, rb);
  double s12 = compensated_dot(ra, rb);
  double sx = std::sqrt(std::max(0.0, s11));
  double sy = std::sqrt(std::max(0.0, s22));
  double rho = (sx > 0.0 && sy > 0.0) ? s12 / (sx * sy) : 0.0;

  double density = 1.0 / (2.0 * kPi * nx * beta);
  double moment = bivariate_abs_moment(sx, sy, rho);
  // Each derivative vector must carry the same per-point scalar as its
  // constraint vector; the residual shifts restore that pairing.
  double correction = std::exp((wx.log_shift - vx.log_shift) +
                               (wy.log_shift - vy.log_shift));
  return density * moment * correction;
}

double complex_intensity_01(const Scheme& s, cplx z) {
  require(is_finite(z), Code::invalid_argument, "argument must be finite");
  require(z.imag() != 0.0, Code::invalid_argument,
          "strictly-complex intensity needs Im z != 0");
  z = cplx{z.real(), std::abs(z.imag())};  // conjugation symmetry, exact

  double az = std::abs(z);
  double theta = std::arg(z);
  double laz = std::log(az);
  size_t len = s.n + 1;

  double shift0 = kNegInf, shift1 = kNegInf;
  std::vector<double> t0(len, kNegInf), t1(len, kNegInf);
  for (size_t i = 0; i < len; ++i) {
    double lc = s.log_coeff(uint32_t(i));
    if (lc == kNegInf) continue;
    t0[i] = lc + double(i) * laz;
    shift0 = std::max(shift0, t0[i]);
    if (i >= 1) {
      t1[i] = lc + std::log(double(i)) + double(i - 1) * laz;
      shift1 = std::max(shift1, t1[i]);
    }
  }
  require(shift0 > kNegInf, Code::zero_variance, "V(z) = 0 for this scheme");
  if (shift1 == kNegInf) shift1 = 0.0;  // constant polynomial: f' = 0

  std::vector<double> A(len, 0.0), B(len, 0.0), dA(len, 0.0), dB(len, 0.0);
  for (size_t i = 0; i < len; ++i) {
    if (t0[i] > kNegInf) {
      double m = std::exp(t0[i] - shift0);
      A[i] = m * std::cos(double(i) * theta);
      B[i] = m * std::sin(double(i) * theta);
    }
    if (t1[i] > kNegInf) {
      double m = std::exp(t1[i] - shift1);
      dA[i] = m * std::cos(double(i - 1) * theta);
      dB[i] = m * std::sin(double(i - 1) * theta);
    }
  }

  double nA = norm2(A);
  std::vector<std::vector<double>> basis;
  {
    std::vector<double> q1(A);
    for (double& e : q1) e /= nA;
    basis.push_back(std::move(q1));
  }
  std::vector<double> r(B);
  project_out(r, basis);
  double beta = norm2(r);
  require(beta > 1e-13 * norm2(B), Code::degenerate_span,
          "constraint vectors are numerically dependent");
  for (double& e : r) e /= beta;
  basis.push_back(std::move(r));

  project_out(dA, basis);
  project_out(dB, basis);
  double moment = compensated_dot(dA, dA) + compensated_dot(dB, dB);
  double density = 1.0 / (2.0 * kPi * nA * beta);
  return density * moment * std::exp(2.0 * (shift1 - shift0));
}

double real_intensity_integral(const Scheme& s, double a, double b,
                               double rel_tol) {
  require(!std::isnan(a) && !std::isnan(b) && a <= b, Code::invalid_argument,
          "integration endpoints out of order");
  if (rel_tol <= 0.0) rel_tol = 1e-9;
  if (a == b) return 0.0;

  // Split at the density's structure points so the adaptive rule only ever
  // chases an endpoint layer (kac spikes at +-1, flat edge at +-sqrt(n)).
  std::vector<double> pts{a};
  auto add = [&](double p) {
    if (p > a && p < b) pts.push_back(p);
  };
  double xc = 0.0;
  switch (s.kind) {
    case SchemeKind::flat:
      xc = std::sqrt(double(s.n));
      break;
    case SchemeKind::kac:
    case SchemeKind::hyperbolic:
    case SchemeKind::custom:
      xc = 1.0;
      break;
    default:
      break;
  }
  if (xc > 0.0) {
    add(-xc);
    add(xc);
  }
  add(0.0);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  auto f = [&](double x) { return real_intensity_1(s, x); };
  double total = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, pts[k], pts[k + 1], 20, rel_tol);
  }
  return total;
}

double wedge_norm(std::span<const cplx> v, std::span<const cplx> w) {
  require(v.size() == w.size(), Code::invalid_argument,
          "wedge factors must have equal length");
  CompensatedSum vv, ww;
  CompensatedComplexSum vw;
  for (size_t i = 0; i < v.size(); ++i) {
    vv.add(std::norm(v[i]));
    ww.add(std::norm(w[i]));
    vw.add(v[i] * std::conj(w[i]));
  }
  double g = vv.value() * ww.value() - std::norm(vw.value());
  return std::sqrt(std::max(0.0, g));
}

double gauss_zero_density(std::span<const double> vectors, size_t m,
                          size_t dim) {
  require(m >= 1 && m <= 4, Code::unsupported,
          "density implemented for 1 to 4 constraints");
  require(dim >= 1 && vectors.size() == m * dim, Code::invalid_argument,
          "vector block must be m x dim");

  double gram[4][4];
  double diag_product = 1.0;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i; j < m; ++j) {
      gram[i][j] = gram[j][i] = compensated_dot(
          vectors.subspan(i * dim, dim), vectors.subspan(j * dim, dim));
    }
    diag_product *= gram[i][i];
  }
  // Cholesky; det(Gram) = prod L_kk^2.
  double det = 1.0;
  for (size_t k = 0; k < m; ++k) {
    double pivot = gram[k][k];
    for (size_t j = 0; j < k; ++j) pivot -= sqr(gram[k][j]);
    require(pivot > 0.0, Code::degenerate_span,
            "constraint vectors are numerically dependent");
    double lkk = std::sqrt(pivot);
    det *= pivot;
    gram[k][k] = lkk;
    for (size_t i = k + 1; i < m; ++i) {
      double v = gram[i][k];
      for (size_t j = 0; j < k; ++j) v -= gram[i][j] * gram[k][j];
      gram[i][k] = v / lkk;
    }
  }
  require(det > 1e-14 * diag_product, Code::degenerate_span,
          "Gram determinant below the dependence threshold");
  return std::pow(2.0 * kPi, -0.5 * double(m)) / std::sqrt(det);
}

double conditional_second_moment(std::span<const double> v,
                                 std::span<const double> span_vectors,
                                 size_t m, size_t dim) {
  require(m >= 1 && m <= 4, Code::unsupported,
          "conditioning implemented for 1 to 4 constraints");
  require(v.size() == dim && span_vectors.size() == m * dim,
          Code::invalid_argument, "vector block must be m x dim");
  auto basis = orthonormal_basis(span_vectors, m, dim);
  std::vector<double> r(v.begin(), v.end());
  project_out(r, basis);
  return compensated_dot(r, r);
}

double conditional_abs_moment(std::span<const double> v,
                              std::span<const double> span_vectors, size_t m,
                              size_t dim) {
  double second = conditional_second_moment(v, span_vectors, m, dim);
  return std::sqrt(2.0 / kPi) * std::sqrt(std::max(0.0, second));
}

std::vector<size_t> lacunary_subsequence(std::span<const double> b,
                                         double ratio_cap) {
  require(ratio_cap >= 2.0, Code::invalid_argument,
          "ratio cap must be at least 2");
  require(!b.empty(), Code::invalid_argument, "empty sequence");
  for (size_t i = 0; i < b.size(); ++i) {
    require(b[i] > 0.0 && std::isfinite(b[i]), Code::invalid_argument,
            "sequence must be strictly positive");
    if (i + 1 < b.size()) {
      require(b[i + 1] <= b[i], Code::invalid_argument,
              "sequence must be nonincreasing");
      require(b[i] <= ratio_cap * b[i + 1], Code::invalid_argument,
              "consecutive ratio exceeds the cap");
    }
  }
  std::vector<size_t> sel{0};
  double cur = b[0];
  for (size_t j = 1; j < b.size(); ++j) {
    if (2.0 * b[j] <= cur) {
      sel.push_back(j);
      cur = b[j];
    }
  }
  return sel;
}

double kac_edge_profile(double a) {
  require(a >= 0.0 && !std::isnan(a), Code::invalid_argument,
          "profile argument must be nonnegative");
  if (a < 1e-3) {
    // (a/sinh a)^2 = 1 - a^2/3 + a^4/15 - 2a^6/189 + ...
    double a2 = a * a;
    return (1.0 / (4.0 * kPi)) *
           (1.0 / 3.0 - a2 / 15.0 + 2.0 * a2 * a2 / 189.0);
  }
  double sh = std::sinh(a);
  double ratio_sq = std::isinf(sh) ? 0.0 : sqr(a / sh);
  return (1.0 - ratio_sq) / (4.0 * kPi * a * a);
}

}  // namespace rpz
