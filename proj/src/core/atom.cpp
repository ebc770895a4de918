// SPDX-License-Identifier: MIT
#include "core/atom.hpp"

#include <cmath>

namespace rpz {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415058724;
constexpr double kSqrt2 = 1.4142135623730950488016887242096981;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210484904;

// Central moment of N(0, 1/2): E X^p = (p-1)!! / 2^{p/2} for even p.
double half_gaussian_moment(unsigned p) {
  if (p % 2 == 1) return 0.0;
  double m = 1.0;
  for (unsigned k = 1; k < p; k += 2) m *= double(k);
  return m / std::pow(2.0, double(p) / 2.0);
}

}  // namespace

cplx Atom::draw(Rng& rng) const {
  switch (family) {
    case AtomFamily::gaussian_real:
      return {rng.normal(), 0.0};
    case AtomFamily::gaussian_complex: {
      double re = rng.normal();
      double im = rng.normal();
      return {re * kInvSqrt2, im * kInvSqrt2};
    }
    case AtomFamily::bernoulli:
      return {rng.sign(), 0.0};
    case AtomFamily::uniform_real:
      return {rng.uniform(-kSqrt3, kSqrt3), 0.0};
    case AtomFamily::uniform_complex_disk: {
      // Uniform on the disk of radius sqrt(2): E|xi|^2 = 1.
      double r = kSqrt2 * std::sqrt(rng.uniform01());
      double theta = 2.0 * kPi * rng.uniform01();
      return {r * std::cos(theta), r * std::sin(theta)};
    }
    case AtomFamily::custom_discrete: {
      double u = rng.uniform01();
      size_t lo = 0;
      while (lo + 1 < cdf.size() && u >= cdf[lo]) ++lo;
      return support[lo];
    }
  }
  fail(Code::invalid_argument, "unknown atom family");
}

double Atom::moment(unsigned p, unsigned q) const {
  require(p + q <= 4, Code::unsupported, "moments stored up to order 4 only");
  switch (family) {
    case AtomFamily::gaussian_real: {
      if (q > 0) return 0.0;
      if (p % 2 == 1) return 0.0;
      double m = 1.0;  // (p-1)!!
      for (unsigned k = 1; k < p; k += 2) m *= double(k);
      return m;
    }
    case AtomFamily::gaussian_complex:
      return half_gaussian_moment(p) * half_gaussian_moment(q);
    case AtomFamily::bernoulli:
      if (q > 0) return 0.0;
      return (p % 2 == 0) ? 1.0 : 0.0;
    case AtomFamily::uniform_real:
      if (q > 0) return 0.0;
      if (p % 2 == 1) return 0.0;
      // E X^p = sqrt(3)^p / (p+1) on [-sqrt(3), sqrt(3)].
      return std::pow(kSqrt3, double(p)) / double(p + 1);
    case AtomFamily::uniform_complex_disk: {
      if (p % 2 == 1 || q % 2 == 1) return 0.0;
      // E Re^p Im^q = E r^{p+q} * angular average of cos^p sin^q.
      // E r^{2k} = R^{2k}/(k+1) with R^2 = 2; averages: cos^2 -> 1/2,
      // cos^4 -> 3/8, cos^2 sin^2 -> 1/8.
      unsigned k = (p + q) / 2;
      double radial = std::pow(2.0, double(k)) / double(k + 1);
      double angular = 1.0;
      if (p + q == 2) angular = 0.5;
      if (p + q == 4) angular = (p == 4 || q == 4) ? 3.0 / 8.0 : 1.0 / 8.0;
      return radial * angular;
    }
    case AtomFamily::custom_discrete: {
      CompensatedSum acc;
      double prev = 0.0;
      for (size_t j = 0; j < support.size(); ++j) {
        double w = cdf[j] - prev;
        prev = cdf[j];
        acc.add(w * std::pow(support[j].real(), double(p)) *
                std::pow(support[j].imag(), double(q)));
      }
      return acc.value();
    }
  }
  fail(Code::invalid_argument, "unknown atom family");
}

Atom make_atom(AtomFamily family) {
  require(family != AtomFamily::custom_discrete, Code::invalid_argument,
          "custom discrete atoms need the dedicated constructor");
  Atom a;
  a.family = family;
  a.is_real = family == AtomFamily::gaussian_real ||
              family == AtomFamily::bernoulli ||
              family == AtomFamily::uniform_real;
  return a;
}

Atom make_discrete_atom(std::span<const cplx> values,
                        std::span<const double> weights) {
  require(values.size() == weights.size() && values.size() >= 2,
          Code::invalid_argument,
          "discrete atom needs >= 2 support points with matching weights");
  double total = 0.0;
  for (double w : weights) {
    require(w > 0.0 && std::isfinite(w), Code::invalid_argument,
            "discrete atom weights must be positive");
    total += w;
  }
  for (cplx v : values)
    require(is_finite(v), Code::invalid_argument,
            "discrete atom support must be finite");

  // Shift to mean zero, then scale to E|xi|^2 = 1.
  cplx mean{0.0, 0.0};
  for (size_t j = 0; j < values.size(); ++j)
    mean += values[j] * (weights[j] / total);
  double second = 0.0;
  for (size_t j = 0; j < values.size(); ++j)
    second += std::norm(values[j] - mean) * (weights[j] / total);
  require(second > 0.0, Code::invalid_argument,
          "discrete atom is degenerate (zero variance)");
  double scale = 1.0 / std::sqrt(second);

  Atom a;
  a.family = AtomFamily::custom_discrete;
  a.is_real = true;
  a.support.reserve(values.size());
  a.cdf.reserve(values.size());
  double run = 0.0;
  for (size_t j = 0; j < values.size(); ++j) {
    cplx v = (values[j] - mean) * scale;
    a.support.push_back(v);
    a.is_real &= (v.imag() == 0.0);
    run += weights[j] / total;
    a.cdf.push_back(run);
  }
  a.cdf.back() = 1.0;
  return a;
}

bool moments_match(const Atom& a, const Atom& b, unsigned order) {
  require(order <= 4, Code::unsupported, "moments stored up to order 4 only");
  for (unsigned p = 0; p <= order; ++p)
    for (unsigned q = 0; p + q <= order; ++q)
      if (std::abs(a.moment(p, q) - b.moment(p, q)) > 1e-12) return false;
  return true;
}

}  // namespace rpz
