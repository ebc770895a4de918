// Deterministic coefficient sequences c_0..c_n, served in log-domain so no
// intermediate overflows for degrees up to at least 1e6.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "core/common.hpp"

namespace rpz {

enum class SchemeKind {
  flat,              // c_i = sqrt(1/i!)
  elliptic,          // c_i = sqrt(C(n,i))
  elliptic_rescaled, // c_i = sqrt(C(n,i) n^-i)
  kac,               // c_i = 1
  hyperbolic,        // c_i = sqrt(L(L+1)...(L+i-1)/i!)
  custom,
};

struct Scheme {
  SchemeKind kind = SchemeKind::kac;
  uint32_t n = 0;
  double L = 1.0;                       // hyperbolic only
  std::vector<double> custom_log_coeffs; // custom only, n+1 entries

  // log c_i; -inf iff c_i = 0 (custom schemes only). Throws on i > n.
  double log_coeff(uint32_t i) const;
};

Scheme make_scheme(SchemeKind kind, uint32_t n);
Scheme make_hyperbolic_scheme(uint32_t n, double L);
Scheme make_custom_scheme(std::vector<double> log_coeffs);

}  // namespace rpz
