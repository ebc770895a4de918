// One polynomial realization. Coefficients are kept in log-magnitude +
// unit-phase form (the flat scheme underflows doubles past degree ~340),
// and also materialized with a common log_scale divided out; zeros are
// unaffected by the scale.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "core/atom.hpp"
#include "core/common.hpp"
#include "core/scheme.hpp"

namespace rpz {

struct LogCoeff {
  double lm = kNegInf;   // log|a_i|; -inf iff a_i = 0
  cplx phase{1.0, 0.0};  // a_i / |a_i| (exact +-1 for real coefficients)
};

struct Sample {
  uint32_t n = 0;          // degree bound: n+1 coefficients
  double log_scale = 0.0;  // true f = exp(log_scale) * sum coeffs[i] z^i
  std::vector<LogCoeff> lc;
  std::vector<cplx> coeffs;  // materialized: exp(lm - log_scale) * phase
  bool real_coeffs = true;
};

Sample draw_sample(const Scheme& scheme, const Atom& atom,
                   uint64_t master_seed, uint64_t trial_index);
Sample fixed_sample(std::span<const cplx> coeffs);

// log|f(z)| of the true (unscaled) polynomial; -inf iff f(z) = 0 exactly.
// Max-shifted compensated accumulation, stable for degrees >= 1e5.
double evaluate_log_abs(const Sample& p, cplx z);

}  // namespace rpz
