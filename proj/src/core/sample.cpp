// SPDX-License-Identifier: MIT
#include "core/sample.hpp"

#include <algorithm>
#include <cmath>

namespace rpz {

namespace {

void finalize(Sample& s) {
  double ls = kNegInf;
  for (const auto& c : s.lc) ls = std::max(ls, c.lm);
  s.log_scale = (ls == kNegInf) ? 0.0 : ls;  // zero polynomial: scale 1
  s.coeffs.resize(s.lc.size());
  for (size_t i = 0; i < s.lc.size(); ++i) {
    double mag = std::exp(s.lc[i].lm - s.log_scale);  // exp(-inf) = 0
    s.coeffs[i] = s.lc[i].phase * mag;
  }
}

}  // namespace

Sample draw_sample(const Scheme& scheme, const Atom& atom,
                   uint64_t master_seed, uint64_t trial_index) {
  Rng rng = Rng::for_trial(master_seed, trial_index);
  Sample s;
  s.n = scheme.n;
  s.real_coeffs = atom.is_real;
  s.lc.resize(scheme.n + 1);
  for (uint32_t i = 0; i <= scheme.n; ++i) {
    cplx xi = atom.draw(rng);
    double logc = scheme.log_coeff(i);
    LogCoeff& c = s.lc[i];
    if (xi == cplx{0.0, 0.0} || logc == kNegInf) {
      c.lm = kNegInf;
      c.phase = {1.0, 0.0};
    } else if (xi.imag() == 0.0) {
      c.lm = logc + std::log(std::abs(xi.real()));
      c.phase = {xi.real() > 0.0 ? 1.0 : -1.0, 0.0};
    } else {
      double mag = std::abs(xi);
      c.lm = logc + std::log(mag);
      c.phase = xi / mag;
    }
  }
  finalize(s);
  return s;
}

Sample fixed_sample(std::span<const cplx> coeffs) {
  require(!coeffs.empty(), Code::invalid_argument,
          "fixed sample needs at least one coefficient");
  for (cplx a : coeffs)
    require(is_finite(a), Code::invalid_argument,
            "fixed sample coefficients must be finite");
  Sample s;
  s.n = uint32_t(coeffs.size() - 1);
  s.real_coeffs = true;
  s.lc.resize(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) {
    cplx a = coeffs[i];
    s.real_coeffs &= (a.imag() == 0.0);
    LogCoeff& c = s.lc[i];
    if (a == cplx{0.0, 0.0}) {
      c.lm = kNegInf;
      c.phase = {1.0, 0.0};
    } else if (a.imag() == 0.0) {
      c.lm = std::log(std::abs(a.real()));
      c.phase = {a.real() > 0.0 ? 1.0 : -1.0, 0.0};
    } else {
      double mag = std::abs(a);
      c.lm = std::log(mag);
      c.phase = a / mag;
    }
  }
  finalize(s);
  return s;
}

double evaluate_log_abs(const Sample& p, cplx z) {
  require(is_finite(z), Code::invalid_argument,
          "evaluation point must be finite");
  // lc[i].lm is the true log|a_i|, so no log_scale correction applies here.
  if (z == cplx{0.0, 0.0}) return p.lc[0].lm;

  double az = std::abs(z);
  double lz = std::log(az);
  double shift = kNegInf;  // max_i log|a_i z^i|
  for (size_t i = 0; i < p.lc.size(); ++i)
    if (p.lc[i].lm > kNegInf)
      shift = std::max(shift, p.lc[i].lm + double(i) * lz);
  if (shift == kNegInf) return kNegInf;  // zero polynomial

  bool real_axis = (z.imag() == 0.0);
  bool neg = real_axis && z.real() < 0.0;
  cplx w = real_axis ? cplx{1.0, 0.0} : z / az;  // unit phase of z
  cplx upow{1.0, 0.0};
  CompensatedComplexSum acc;
  for (size_t i = 0; i < p.lc.size(); ++i) {
    if (i > 0 && !real_axis) {
      upow *= w;
      if (i % 256 == 0) upow /= std::abs(upow);  // keep |w^i| = 1
    }
    if (p.lc[i].lm == kNegInf) continue;
    double t = p.lc[i].lm + double(i) * lz - shift;
    if (t < -745.0) continue;  // below double underflow after the shift
    double mag = std::exp(t);
    cplx term = p.lc[i].phase * mag;
    if (real_axis) {
      if (neg && i % 2 == 1) term = -term;  // exact sign of z^i for real z
    } else {
      term *= upow;
    }
    acc.add(term);
  }
  cplx total = acc.value();
  if (total == cplx{0.0, 0.0}) return kNegInf;  // exact cancellation
  return std::log(std::abs(total)) + shift;
}

}  // namespace rpz
