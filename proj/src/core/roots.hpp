// All zeros of a sampled polynomial in C union {infinity}, plus
// real/complex classification and region counting.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "core/common.hpp"
#include "core/sample.hpp"

namespace rpz {

struct RootSet {
  std::vector<cplx> finite;   // |finite| + at_infinity = degree bound
  uint32_t at_infinity = 0;
  bool converged = true;
  double residual = 0.0;      // max over roots of |p(w)| / sum |p_i w^i|
  bool from_real_coeffs = false;

  bool classified = false;
  std::vector<double> reals;  // ascending
  std::vector<cplx> upper;    // Im > 0, one per conjugate pair
};

// rel_tol in (0, 1e-6], max_iters >= 1. A result is always produced; if the
// iteration budget runs out it is flagged converged = false.
RootSet find_roots(const Sample& p, double rel_tol, uint32_t max_iters);

// snap_tol <= 0 selects 1e-8. Throws Code::classification if an unpairable
// root farther than snap_tol*(1+|root|) from the real axis remains.
void classify_real(RootSet& rs, double snap_tol);

uint32_t count_in_disk(const RootSet& rs, cplx center, double radius);
// Closed interval over classified real roots; throws if not classified.
uint32_t count_in_interval(const RootSet& rs, double a, double b);

}  // namespace rpz
