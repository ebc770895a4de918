// SPDX-License-Identifier: MIT
#include "core/scheme.hpp"

#include <cmath>

namespace rpz {

double Scheme::log_coeff(uint32_t i) const {
  require(i <= n, Code::index_range, "coefficient index exceeds degree bound");
  double di = double(i);
  switch (kind) {
    case SchemeKind::flat:
      return -0.5 * std::lgamma(di + 1.0);
    case SchemeKind::elliptic:
      return 0.5 * (std::lgamma(double(n) + 1.0) - std::lgamma(di + 1.0) -
                    std::lgamma(double(n - i) + 1.0));
    case SchemeKind::elliptic_rescaled: {
      double log_binom = std::lgamma(double(n) + 1.0) -
                         std::lgamma(di + 1.0) -
                         std::lgamma(double(n - i) + 1.0);
      return 0.5 * (log_binom - di * std::log(double(n)));
    }
    case SchemeKind::kac:
      return 0.0;
    case SchemeKind::hyperbolic:
      // L(L+1)...(L+i-1) = Gamma(L+i)/Gamma(L)
      return 0.5 * (std::lgamma(L + di) - std::lgamma(L) -
                    std::lgamma(di + 1.0));
    case SchemeKind::custom:
      return custom_log_coeffs[i];
  }
  fail(Code::invalid_argument, "unknown scheme kind");
}

Scheme make_scheme(SchemeKind kind, uint32_t n) {
  require(kind != SchemeKind::hyperbolic && kind != SchemeKind::custom,
          Code::invalid_argument,
          "hyperbolic and custom schemes need their dedicated constructors");
  require(kind != SchemeKind::elliptic_rescaled || n >= 1,
          Code::invalid_argument, "rescaled elliptic scheme needs n >= 1");
  Scheme s;
  s.kind = kind;
  s.n = n;
  return s;
}

Scheme make_hyperbolic_scheme(uint32_t n, double L) {
  require(L > 0.0 && std::isfinite(L), Code::invalid_argument,
          "hyperbolic parameter L must be positive and finite");
  Scheme s;
  s.kind = SchemeKind::hyperbolic;
  s.n = n;
  s.L = L;
  return s;
}

Scheme make_custom_scheme(std::vector<double> log_coeffs) {
  require(!log_coeffs.empty(), Code::invalid_argument,
          "custom scheme needs at least one coefficient");
  bool any_positive = false;
  for (double lc : log_coeffs) {
    require(!std::isnan(lc) && lc != kInf, Code::invalid_argument,
            "custom log-coefficients must be finite or -inf");
    any_positive |= (lc > kNegInf);
  }
  require(any_positive, Code::invalid_argument,
          "custom scheme needs at least one strictly positive coefficient");
  Scheme s;
  s.kind = SchemeKind::custom;
  s.n = uint32_t(log_coeffs.size() - 1);
  s.custom_log_coeffs = std::move(log_coeffs);
  return s;
}

}  // namespace rpz
