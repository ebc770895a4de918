// Atom distributions: mean-zero, unit second absolute moment laws for the
// iid coefficients, with samplers and exact moment tables up to order 4.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "core/common.hpp"
#include "core/rng.hpp"

namespace rpz {

enum class AtomFamily {
  gaussian_real,
  gaussian_complex,
  bernoulli,
  uniform_real,
  uniform_complex_disk,
  custom_discrete,
};

struct Atom {
  AtomFamily family = AtomFamily::gaussian_real;
  bool is_real = true;
  // custom_discrete only: normalized support and cumulative weights.
  std::vector<cplx> support;
  std::vector<double> cdf;

  cplx draw(Rng& rng) const;
  // E[Re(xi)^p Im(xi)^q], p + q <= 4.
  double moment(unsigned p, unsigned q) const;
};

Atom make_atom(AtomFamily family);
Atom make_discrete_atom(std::span<const cplx> values,
                        std::span<const double> weights);
bool moments_match(const Atom& a, const Atom& b, unsigned order);

}  // namespace rpz
