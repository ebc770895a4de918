// SPDX-License-Identifier: MIT
#include "core/roots.hpp"

#include <algorithm>
#include <cmath>

namespace rpz {

namespace {

// Horner evaluation of p and p' at w.
struct PolyVal {
  cplx p, dp;
};

PolyVal horner(std::span<const cplx> b, cplx w) {
  cplx p = b.back();
  cplx dp{0.0, 0.0};
  for (size_t k = b.size() - 1; k-- > 0;) {
    dp = dp * w + p;
    p = p * w + b[k];
  }
  return {p, dp};
}

// |p(w)| relative to the evaluation scale sum_k |b_k| |w|^k.
double backward_error(std::span<const cplx> b, cplx w, double abs_p) {
  double aw = std::abs(w);
  double scale = 0.0;
  for (size_t k = b.size(); k-- > 0;) scale = scale * aw + std::abs(b[k]);
  return scale > 0.0 ? abs_p / scale : abs_p;
}

// Newton ratio p/p' and relative backward error at w. For |w| > 1 both are
// computed from the reversed polynomial at 1/w: p(w) = w^d q(1/w), so
// p/p' = w^2 q / (d w q - q') and the two backward errors coincide. Direct
// Horner overflows once |w|^d saturates; this form stays finite for any w.
struct EvalResult {
  cplx newton;
  double be = 0.0;
  bool p_zero = false;
  bool dp_zero = false;
};

EvalResult eval_newton(std::span<const cplx> b, std::span<const cplx> br,
                       cplx w) {
  if (std::abs(w) <= 1.0) {
    PolyVal v = horner(b, w);
    if (v.p == cplx{0.0, 0.0}) return {{}, 0.0, true, false};
    double be = backward_error(b, w, std::abs(v.p));
    if (v.dp == cplx{0.0, 0.0}) return {{}, be, false, true};
    cplx ratio = v.p / v.dp;
    if (!is_finite(ratio)) return {{}, be, false, true};
    return {ratio, be, false, false};
  }
  cplx u = 1.0 / w;
  PolyVal q = horner(br, u);
  if (q.p == cplx{0.0, 0.0}) return {{}, 0.0, true, false};
  double be = backward_error(br, u, std::abs(q.p));
  cplx denom = double(b.size() - 1) * w * q.p - q.dp;
  if (denom == cplx{0.0, 0.0}) return {{}, be, false, true};
  cplx ratio = w * w * q.p / denom;
  if (!is_finite(ratio)) return {{}, be, false, true};
  return {ratio, be, false, false};
}

// Upper convex hull (Newton polygon) of the finite points (j, lw[j]);
// returns vertex indices in increasing j. Endpoints are always finite here.
std::vector<size_t> upper_hull(std::span<const double> lw) {
  std::vector<size_t> hull;
  for (size_t j = 0; j < lw.size(); ++j) {
    if (lw[j] == kNegInf) continue;
    while (hull.size() >= 2) {
      size_t a = hull[hull.size() - 2], m = hull.back();
      // Keep the chain convex from above: drop m if it lies on or below
      // the segment (a, j).
      double cross = (lw[m] - lw[a]) * double(j - a) -
                     (lw[j] - lw[a]) * double(m - a);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(j);
  }
  return hull;
}

// Starting points: moduli from the Newton polygon of the w-domain
// log-magnitudes, phases equidistributed per hull edge with a fixed offset.
std::vector<cplx> initial_points(std::span<const double> lw) {
  std::vector<size_t> hull = upper_hull(lw);
  std::vector<cplx> w;
  w.reserve(lw.size() - 1);
  for (size_t e = 0; e + 1 < hull.size(); ++e) {
    size_t k1 = hull[e], k2 = hull[e + 1];
    size_t mult = k2 - k1;
    double r = std::exp((lw[k1] - lw[k2]) / double(mult));
    // Clamp: pathological custom schemes can push radii out of range.
    r = std::clamp(r, 1e-150, 1e150);
    for (size_t t = 0; t < mult; ++t) {
      double theta = 2.0 * kPi * (double(t) + 0.5) / double(mult) +
                     0.539012 * double(e + 1);
      w.push_back(cplx{r * std::cos(theta), r * std::sin(theta)});
    }
  }
  return w;
}

}  // namespace

RootSet find_roots(const Sample& p, double rel_tol, uint32_t max_iters) {
  require(rel_tol > 0.0 && rel_tol <= 1e-6, Code::invalid_argument,
          "rel_tol must lie in (0, 1e-6]");
  require(max_iters >= 1, Code::invalid_argument, "max_iters must be >= 1");

  RootSet rs;
  rs.from_real_coeffs = p.real_coeffs;

  // Degree conventions: n - deg(f) zeros at infinity; all n for f = 0.
  size_t hi = p.lc.size();
  while (hi > 0 && p.lc[hi - 1].lm == kNegInf) --hi;
  if (hi == 0) {
    rs.at_infinity = p.n;
    return rs;
  }
  --hi;  // index of the leading nonzero coefficient
  rs.at_infinity = uint32_t(p.n - hi);

  size_t lo = 0;
  while (p.lc[lo].lm == kNegInf) ++lo;
  rs.finite.assign(lo, cplx{0.0, 0.0});  // z^lo factor: zeros at the origin
  size_t d = hi - lo;
  if (d == 0) return rs;

  // Substitute z = s*w with log s chosen to equalize the endpoint
  // magnitudes; this centers the huge dynamic range of flat/elliptic
  // coefficients into a representable band.
  double log_s = (p.lc[lo].lm - p.lc[hi].lm) / double(d);
  std::vector<double> lw(d + 1, kNegInf);
  double shift = kNegInf;
  for (size_t j = 0; j <= d; ++j) {
    if (p.lc[lo + j].lm == kNegInf) continue;
    lw[j] = p.lc[lo + j].lm + double(j) * log_s;
    shift = std::max(shift, lw[j]);
  }
  std::vector<cplx> b(d + 1);
  for (size_t j = 0; j <= d; ++j) {
    lw[j] -= shift;
    b[j] = (lw[j] == kNegInf) ? cplx{0.0, 0.0}
                              : p.lc[lo + j].phase * std::exp(lw[j]);
  }

  std::vector<cplx> w = initial_points(lw);
  std::vector<cplx> br(d + 1);
  for (size_t j = 0; j <= d; ++j) br[j] = b[d - j];
  std::vector<char> locked(d, 0);
  size_t locked_count = 0;
  // Step tolerance in the w-domain equivalent to rel_tol*(1+|z|) in z.
  double s_inv = std::exp(-log_s);
  if (!std::isfinite(s_inv)) s_inv = 0.0;
  auto step_tol = [&](double aw) { return rel_tol * (s_inv + aw); };
  // Backward-stable iterates are as good as double precision allows even
  // when ill-conditioning keeps the Newton correction above step_tol.
  const double be_lock =
      std::numeric_limits<double>::epsilon() * (8.0 + 2.0 * std::sqrt(double(d)));

  for (uint32_t iter = 0; iter < max_iters && locked_count < d; ++iter) {
    for (size_t j = 0; j < d; ++j) {
      if (locked[j]) continue;
      EvalResult v = eval_newton(b, br, w[j]);
      if (v.p_zero || v.be <= be_lock) {
        locked[j] = 1;
        ++locked_count;
        continue;
      }
      if (v.dp_zero) {
        w[j] *= cplx{1.0 + 1e-8, 1e-8};  // off a critical point
        continue;
      }
      cplx rsum{0.0, 0.0};
      bool collision = false;
      for (size_t k = 0; k < d; ++k) {
        if (k == j) continue;
        cplx diff = w[j] - w[k];
        if (diff == cplx{0.0, 0.0}) {
          collision = true;
          break;
        }
        rsum += 1.0 / diff;
      }
      if (collision) {
        w[j] += cplx{1e-6, 1e-6} * (1.0 + std::abs(w[j]));
        continue;
      }
      cplx denom = cplx{1.0, 0.0} - v.newton * rsum;
      cplx step = (denom == cplx{0.0, 0.0}) ? v.newton : v.newton / denom;
      if (!is_finite(step)) {
        w[j] *= cplx{-0.7, 0.1};  // shrink and rotate off the bad point
        continue;
      }
      // A near-singular correction must not teleport the root out of the
      // inclusion region; damped moves keep every iterate evaluable.
      double cap = 0.5 * (1.0 + std::abs(w[j]));
      double astep = std::abs(step);
      if (astep > cap) step *= cap / astep;
      w[j] -= step;
      if (std::abs(step) <= step_tol(std::abs(w[j]))) {
        locked[j] = 1;
        ++locked_count;
      }
    }
  }
  rs.converged = (locked_count == d);

  // One guarded Newton polish per root, judged by backward error.
  for (size_t j = 0; j < d; ++j) {
    EvalResult v = eval_newton(b, br, w[j]);
    if (v.p_zero || v.dp_zero || !is_finite(v.newton)) continue;
    if (std::abs(v.newton) <= 0.1 * (1.0 + std::abs(w[j]))) {
      cplx cand = w[j] - v.newton;
      if (eval_newton(b, br, cand).be <= v.be) w[j] = cand;
    }
  }

  // Zeros of real polynomials come in conjugate pairs; rebuild that
  // structure exactly. Clustered roots carry O(residual^(1/mult)) noise, so
  // the matching tolerance sits far above the step tolerance. Paired roots
  // are averaged; unpaired near-real roots get their spurious imaginary
  // part cleared.
  if (p.real_coeffs) {
    auto sym_tol = [&](double aw) { return 1e-4 * (s_inv + aw); };
    std::vector<size_t> neg;
    for (size_t j = 0; j < d; ++j)
      if (w[j].imag() < 0.0) neg.push_back(j);
    std::vector<char> used(neg.size(), 0);
    for (size_t j = 0; j < d; ++j) {
      if (!(w[j].imag() > 0.0)) continue;
      cplx target = std::conj(w[j]);
      double best = kInf;
      size_t best_k = neg.size();
      for (size_t k = 0; k < neg.size(); ++k) {
        if (used[k]) continue;
        double dist = std::abs(w[neg[k]] - target);
        if (dist < best) {
          best = dist;
          best_k = k;
        }
      }
      if (best_k < neg.size() && best <= sym_tol(std::abs(w[j]))) {
        used[best_k] = 1;
        cplx m = 0.5 * (w[j] + std::conj(w[neg[best_k]]));
        w[j] = m;  // Im m > 0: mean of two positives
        w[neg[best_k]] = std::conj(m);
      } else if (std::abs(w[j].imag()) <= sym_tol(std::abs(w[j]))) {
        w[j].imag(0.0);
      }
    }
    for (size_t k = 0; k < neg.size(); ++k) {
      size_t j = neg[k];
      if (!used[k] && std::abs(w[j].imag()) <= sym_tol(std::abs(w[j])))
        w[j].imag(0.0);
    }
  }

  double worst = 0.0;
  for (size_t j = 0; j < d; ++j)
    worst = std::max(worst, eval_newton(b, br, w[j]).be);
  rs.residual = worst;

  double s = std::exp(log_s);
  for (size_t j = 0; j < d; ++j) {
    cplx z = s * w[j];
    if (p.real_coeffs && z.imag() == -0.0) z.imag(0.0);
    rs.finite.push_back(z);
  }
  // Deterministic presentation order.
  std::sort(rs.finite.begin(), rs.finite.end(), [](cplx a, cplx b2) {
    return a.real() != b2.real() ? a.real() < b2.real()
                                 : a.imag() < b2.imag();
  });
  return rs;
}

void classify_real(RootSet& rs, double snap_tol) {
  require(rs.from_real_coeffs, Code::invalid_argument,
          "classification requires real-coefficient input");
  if (snap_tol <= 0.0) snap_tol = 1e-8;
  rs.reals.clear();
  rs.upper.clear();

  std::vector<cplx> pos, neg;
  for (cplx z : rs.finite) {
    if (z.imag() == 0.0)
      rs.reals.push_back(z.real());
    else if (z.imag() > 0.0)
      pos.push_back(z);
    else
      neg.push_back(z);
  }

  // Greedy nearest-conjugate pairing; a genuine pair (z, conj z) matches at
  // distance ~0 even when |Im z| is far below snap_tol.
  std::vector<char> used(neg.size(), 0);
  std::vector<cplx> unpaired;
  for (cplx pz : pos) {
    cplx target = std::conj(pz);
    double best = kInf;
    size_t best_k = neg.size();
    for (size_t k = 0; k < neg.size(); ++k) {
      if (used[k]) continue;
      double dist = std::abs(neg[k] - target);
      if (dist < best) {
        best = dist;
        best_k = k;
      }
    }
    if (best_k < neg.size() && best <= snap_tol * (1.0 + std::abs(pz))) {
      used[best_k] = 1;
      rs.upper.push_back(pz);
    } else {
      unpaired.push_back(pz);
    }
  }
  for (size_t k = 0; k < neg.size(); ++k)
    if (!used[k]) unpaired.push_back(neg[k]);

  for (cplx z : unpaired) {
    if (std::abs(z.imag()) <= snap_tol * (1.0 + std::abs(z))) {
      rs.reals.push_back(z.real());  // solver noise on a real root
    } else {
      rs.reals.clear();
      rs.upper.clear();
      fail(Code::classification,
           "unpaired root too far from the real axis (solver accuracy loss)");
    }
  }

  std::sort(rs.reals.begin(), rs.reals.end());
  std::sort(rs.upper.begin(), rs.upper.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  rs.classified = true;
}

uint32_t count_in_disk(const RootSet& rs, cplx center, double radius) {
  require(radius > 0.0, Code::invalid_argument, "radius must be positive");
  uint32_t count = 0;
  for (cplx z : rs.finite)
    if (std::abs(z - center) < radius) ++count;
  return count;
}

uint32_t count_in_interval(const RootSet& rs, double a, double b) {
  require(rs.classified, Code::missing_data,
          "interval counting requires classify_real first");
  require(a <= b, Code::invalid_argument, "interval endpoints out of order");
  uint32_t count = 0;
  for (double x : rs.reals)
    if (x >= a && x <= b) ++count;
  return count;
}

}  // namespace rpz
