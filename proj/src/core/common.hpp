// Shared numeric helpers: compensated and pairwise summation, log-domain
// accumulation, small utilities. Header-only.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpz {

using cplx = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class Code {
  invalid_argument,
  index_range,
  no_convergence,
  classification,
  degenerate_span,
  zero_variance,
  unsupported,
  missing_data,
};

struct Error : std::runtime_error {
  Code code;
  Error(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail(Code c, const std::string& msg) {
  throw Error(c, msg);
}

inline void require(bool ok, Code c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

// Neumaier variant of Kahan summation; robust when terms exceed the sum.
struct CompensatedSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct CompensatedComplexSum {
  CompensatedSum re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Deterministic order-independent reduction base: fixed recursive splitting,
// so the result depends only on the element order, never on the schedule.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 32) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
  }
  size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct MeanSe {
  double mean = 0.0, se = 0.0;
};

// Sample mean and standard error (sdev / sqrt(m)); se = 0 when m < 2.
inline MeanSe mean_and_se(std::span<const double> xs) {
  MeanSe r;
  size_t m = xs.size();
  if (m == 0) return r;
  r.mean = pairwise_sum(xs) / double(m);
  if (m < 2) return r;
  std::vector<double> d2(m);
  for (size_t i = 0; i < m; ++i) {
    double d = xs[i] - r.mean;
    d2[i] = d * d;
  }
  double var = pairwise_sum(d2) / double(m - 1);
  r.se = std::sqrt(std::max(0.0, var) / double(m));
  return r;
}

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline double sqr(double x) { return x * x; }

}  // namespace rpz
