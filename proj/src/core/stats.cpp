// SPDX-License-Identifier: MIT
#include "core/stats.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core/oracle.hpp"
#include "core/rng.hpp"

namespace rpz {

namespace {

// Trials write into private slots; any schedule yields the same slots, and
// the serial pairwise reduction afterwards fixes the result bit-for-bit.
template <class F>
void run_trials(uint64_t trials, uint32_t threads, F&& fn) {
  if (threads == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? hw : 1;
  }
  threads = uint32_t(std::min<uint64_t>(threads, trials));
  if (threads <= 1) {
    for (uint64_t i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<uint64_t> next{0};
  std::mutex err_mx;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (uint32_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= trials) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mx);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

bool all_equal(std::span<const double> xs) {
  for (double x : xs)
    if (x != xs.front()) return false;
  return true;
}

StatEstimate estimate_from_slots(std::span<const double> slots) {
  require(slots.size() >= 2, Code::invalid_argument,
          "estimators need trials >= 2");
  StatEstimate est;
  est.trials = slots.size();
  if (all_equal(slots)) {  // deterministic input: exact value, zero error
    est.value = slots.front();
    return est;
  }
  MeanSe ms = mean_and_se(slots);
  est.value = ms.mean;
  est.se = ms.se;
  return est;
}

CountsResult counts_from_slots(std::span<const double> slots) {
  CountsResult r;
  r.mean = estimate_from_slots(slots);
  uint64_t m = slots.size();
  r.variance.trials = m;
  if (r.mean.se == 0.0 && all_equal(slots)) return r;  // variance exactly 0
  std::vector<double> d2(m), d4(m);
  for (uint64_t i = 0; i < m; ++i) {
    double d = slots[i] - r.mean.value;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  double s2 = pairwise_sum(d2) / double(m - 1);
  double m4 = pairwise_sum(d4) / double(m);
  r.variance.value = s2;
  // Delta method: Var(s^2) ~ (m4 - s^4)/m.
  r.variance.se = std::sqrt(std::max(0.0, m4 - s2 * s2) / double(m));
  return r;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  size_t idx = size_t(std::llround(p * double(sorted.size() - 1)));
  return sorted[std::min(idx, sorted.size() - 1)];
}

// Visit every set partition of {0..k-1}; blocks are bitmasks over slots.
template <class Emit>
void for_each_partition_rec(unsigned k, unsigned elem,
                            std::vector<unsigned>& blocks, Emit&& emit) {
  if (elem == k) {
    emit(blocks);
    return;
  }
  for (size_t b = 0; b < blocks.size(); ++b) {
    blocks[b] |= 1u << elem;
    for_each_partition_rec(k, elem + 1, blocks, emit);
    blocks[b] &= ~(1u << elem);
  }
  blocks.push_back(1u << elem);
  for_each_partition_rec(k, elem + 1, blocks, emit);
  blocks.pop_back();
}

RootSet solve(const Source& src, const Sample& s) {
  return find_roots(s, src.solver.rel_tol, src.solver.max_iters);
}

RootSet solve_classified(const Source& src, const Sample& s) {
  RootSet rs = solve(src, s);
  classify_real(rs, 0.0);
  return rs;
}

void validate_observable(const Observable& obs) {
  switch (obs.kind) {
    case ObservableKind::count_interval:
      require(!std::isnan(obs.a) && !std::isnan(obs.b) && obs.a <= obs.b,
              Code::invalid_argument, "interval endpoints out of order");
      break;
    case ObservableKind::count_disk:
      require(is_finite(obs.point) && obs.radius > 0.0 &&
                  std::isfinite(obs.radius),
              Code::invalid_argument,
              "disk must have finite center, positive radius");
      break;
    case ObservableKind::linear_statistic:
      require(obs.kernel.has_value(), Code::missing_data,
              "linear statistic needs a kernel");
      require(is_finite(obs.point), Code::invalid_argument,
              "offset must be finite");
      break;
    case ObservableKind::log_abs:
      require(is_finite(obs.point), Code::invalid_argument,
              "evaluation point must be finite");
      break;
  }
}

double eval_observable(const Source& src, const Observable& obs,
                       const Sample& s) {
  switch (obs.kind) {
    case ObservableKind::count_interval: {
      RootSet rs = solve_classified(src, s);
      return double(count_in_interval(rs, obs.a, obs.b));
    }
    case ObservableKind::count_disk: {
      RootSet rs = solve(src, s);
      return double(count_in_disk(rs, obs.point, obs.radius));
    }
    case ObservableKind::linear_statistic: {
      RootSet rs = solve(src, s);
      return linear_statistic(rs, obs.point, *obs.kernel).real();
    }
    case ObservableKind::log_abs:
      return evaluate_log_abs(s, obs.point);
  }
  fail(Code::unsupported, "unknown observable");
}

bool same_scheme(const Scheme& x, const Scheme& y) {
  return x.kind == y.kind && x.n == y.n && x.L == y.L &&
         x.custom_log_coeffs == y.custom_log_coeffs;
}

double kernel_raw_mass(const Kernel& k) {
  using boost::math::quadrature::gauss_kronrod;
  if (k.complex_domain) {
    auto g = [&](double r) { return k.profile(r) * r; };
    return 2.0 * kPi *
           gauss_kronrod<double, 31>::integrate(g, 0.0, k.support_radius, 12,
                                                1e-12);
  }
  auto f = [&](double r) { return k.profile(r); };
  return 2.0 * gauss_kronrod<double, 31>::integrate(f, 0.0, k.support_radius,
                                                    12, 1e-12);
}

}  // namespace

double Kernel::profile(double d) const {
  d = std::abs(d);
  if (d >= support_radius) return 0.0;
  switch (kind) {
    case KernelKind::gaussian_bump: {
      double t = d / support_radius;
      // Smooth cutoff exp(1 - 1/(1-t^2)) equals 1 at 0, vanishes flat at R.
      return std::exp(-0.5 * sqr(d / bandwidth) + 1.0 - 1.0 / (1.0 - t * t));
    }
    case KernelKind::cosine_bump: {
      double c = std::cos(0.5 * kPi * d / support_radius);
      return c * c;
    }
    case KernelKind::indicator_soft: {
      double ramp = std::min(bandwidth, support_radius);
      if (d <= support_radius - ramp) return 1.0;
      double t = (support_radius - d) / ramp;
      return t * t * (3.0 - 2.0 * t);
    }
  }
  return 0.0;
}

double Kernel::eval(cplx z) const {
  double d = complex_domain ? std::abs(z - center)
                            : std::abs(z.real() - center.real());
  return scale * profile(d);
}

double Kernel::mass() const { return scale * kernel_raw_mass(*this); }

Kernel make_kernel(KernelKind kind, cplx center, double bandwidth,
                   double support_radius, bool complex_domain,
                   bool unit_mass) {
  require(is_finite(center), Code::invalid_argument,
          "kernel center must be finite");
  require(complex_domain || center.imag() == 0.0, Code::invalid_argument,
          "real-domain kernel center must be real");
  require(std::isfinite(bandwidth) && bandwidth > 0.0, Code::invalid_argument,
          "bandwidth must be positive");
  require(std::isfinite(support_radius) && support_radius > 0.0,
          Code::invalid_argument, "support radius must be positive");
  Kernel k;
  k.kind = kind;
  k.center = center;
  k.bandwidth = bandwidth;
  k.support_radius = support_radius;
  k.complex_domain = complex_domain;
  if (unit_mass) {
    double m = kernel_raw_mass(k);
    require(m > 0.0 && std::isfinite(m), Code::invalid_argument,
            "kernel mass is not positive");
    k.scale = 1.0 / m;
  }
  return k;
}

Source Source::ensemble(Scheme s, Atom a) {
  Source src;
  src.scheme = std::move(s);
  src.atom = std::move(a);
  return src;
}

Source Source::fixed(Sample s) {
  Source src;
  src.fixed_poly = std::move(s);
  return src;
}

bool Source::real_coefficients() const {
  if (atom.has_value()) return atom->is_real;
  require(fixed_poly.has_value(), Code::missing_data, "empty source");
  return fixed_poly->real_coeffs;
}

Sample Source::realize(uint64_t master_seed, uint64_t trial) const {
  if (fixed_poly.has_value()) return *fixed_poly;
  require(scheme.has_value() && atom.has_value(), Code::missing_data,
          "empty source");
  return draw_sample(*scheme, *atom, master_seed, trial);
}

double distinct_index_sum(std::span<const cplx> pts,
                          std::span<const Kernel> ks) {
  size_t k = ks.size();
  require(k >= 1, Code::invalid_argument, "needs at least one kernel");
  require(k <= 4, Code::unsupported,
          "inclusion-exclusion table covers k <= 4");
  size_t nmask = size_t(1) << k;
  std::vector<CompensatedSum> power(nmask);
  double prod[16];
  double vals[4];
  for (cplx p : pts) {
    bool any = false;
    for (size_t j = 0; j < k; ++j) {
      vals[j] = ks[j].eval(p);
      any = any || vals[j] != 0.0;
    }
    if (!any) continue;
    prod[0] = 1.0;
    for (size_t mask = 1; mask < nmask; ++mask) {
      unsigned low = unsigned(mask) & -unsigned(mask);
      prod[mask] = prod[mask ^ low] * vals[std::countr_zero(low)];
      power[mask].add(prod[mask]);
    }
  }
  double X[16];
  for (size_t mask = 1; mask < nmask; ++mask) X[mask] = power[mask].value();
  // Distinct-index sum = sum over set partitions of prod over blocks of
  // (-1)^(|B|-1) (|B|-1)! X_B.
  static constexpr double kMu[5] = {0.0, 1.0, -1.0, 2.0, -6.0};
  CompensatedSum total;
  std::vector<unsigned> blocks;
  for_each_partition_rec(unsigned(k), 0, blocks,
                         [&](const std::vector<unsigned>& bs) {
                           double term = 1.0;
                           for (unsigned b : bs)
                             term *= kMu[std::popcount(b)] * X[b];
                           total.add(term);
                         });
  return total.value();
}

cplx linear_statistic(const RootSet& rs, cplx z, const Kernel& kernel) {
  require(is_finite(z), Code::invalid_argument, "offset must be finite");
  CompensatedSum acc;
  for (cplx root : rs.finite) acc.add(kernel.eval(root - z));
  return cplx{acc.value(), 0.0};
}

StatEstimate estimate_correlation(const Source& src,
                                  std::span<const Kernel> kernels,
                                  uint64_t trials, uint64_t seed,
                                  uint32_t threads) {
  require(!kernels.empty(), Code::invalid_argument,
          "needs at least one kernel");
  require(kernels.size() <= 4, Code::unsupported,
          "inclusion-exclusion table covers k <= 4");
  for (const Kernel& k : kernels)
    require(k.complex_domain, Code::invalid_argument,
            "correlation kernels act on the plane");
  require(trials >= 2, Code::invalid_argument, "estimators need trials >= 2");
  std::vector<double> slots(trials);
  run_trials(trials, threads, [&](uint64_t i) {
    Sample s = src.realize(seed, i);
    RootSet rs = solve(src, s);
    slots[i] = distinct_index_sum(rs.finite, kernels);
  });
  return estimate_from_slots(slots);
}

StatEstimate estimate_mixed_correlation(const Source& src,
                                        std::span<const Kernel> real_kernels,
                                        std::span<const Kernel> complex_kernels,
                                        uint64_t trials, uint64_t seed,
                                        uint32_t threads) {
  size_t k = real_kernels.size(), l = complex_kernels.size();
  require(k + l >= 1, Code::invalid_argument, "needs at least one kernel");
  require(k + l <= 4, Code::unsupported,
          "inclusion-exclusion table covers k + l <= 4");
  require(src.real_coefficients(), Code::invalid_argument,
          "mixed correlation needs real coefficients");
  for (const Kernel& kr : real_kernels)
    require(!kr.complex_domain, Code::invalid_argument,
            "real slots take real-domain kernels");
  require(trials >= 2, Code::invalid_argument, "estimators need trials >= 2");
  // The upper-half enumeration together with radial kernels makes center
  // reflection a no-op in law; canonicalize so it is a no-op bit-for-bit.
  std::vector<Kernel> ck(complex_kernels.begin(), complex_kernels.end());
  for (Kernel& kc : ck) {
    require(kc.complex_domain, Code::invalid_argument,
            "complex slots take complex-domain kernels");
    if (kc.center.imag() < 0.0) kc.center = std::conj(kc.center);
  }
  std::vector<double> slots(trials);
  run_trials(trials, threads, [&](uint64_t i) {
    Sample s = src.realize(seed, i);
    RootSet rs = solve_classified(src, s);
    double real_part = 1.0, complex_part = 1.0;
    if (k > 0) {
      std::vector<cplx> pts(rs.reals.begin(), rs.reals.end());
      real_part = distinct_index_sum(pts, real_kernels);
    }
    if (l > 0) complex_part = distinct_index_sum(rs.upper, ck);
    slots[i] = real_part * complex_part;
  });
  return estimate_from_slots(slots);
}

CountsResult estimate_counts_interval(const Source& src, double a, double b,
                                      uint64_t trials, uint64_t seed,
                                      uint32_t threads) {
  require(!std::isnan(a) && !std::isnan(b) && a <= b, Code::invalid_argument,
          "interval endpoints out of order");
  require(src.real_coefficients(), Code::invalid_argument,
          "interval counting needs real coefficients");
  require(trials >= 2, Code::invalid_argument, "estimators need trials >= 2");
  std::vector<double> slots(trials);
  run_trials(trials, threads, [&](uint64_t i) {
    Sample s = src.realize(seed, i);
    RootSet rs = solve_classified(src, s);
    slots[i] = double(count_in_interval(rs, a, b));
  });
  return counts_from_slots(slots);
}

CountsResult estimate_counts_disk(const Source& src, cplx center,
                                  double radius, uint64_t trials,
                                  uint64_t seed, uint32_t threads) {
  require(is_finite(center) && std::isfinite(radius) && radius > 0.0,
          Code::invalid_argument,
          "disk must have finite center, positive radius");
  require(trials >= 2, Code::invalid_argument, "estimators need trials >= 2");
  std::vector<double> slots(trials);
  run_trials(trials, threads, [&](uint64_t i) {
    Sample s = src.realize(seed, i);
    RootSet rs = solve(src, s);
    slots[i] = double(count_in_disk(rs, center, radius));
  });
  return counts_from_slots(slots);
}

ConcentrationSummary concentration_deviation(const Source& src, cplx z,
                                             double threshold,
                                             uint64_t trials, uint64_t seed,
                                             uint32_t threads) {
  require(is_finite(z), Code::invalid_argument,
          "evaluation point must be finite");
  require(!std::isnan(threshold) && threshold >= 0.0, Code::invalid_argument,
          "threshold must be nonnegative");
  require(src.scheme.has_value(), Code::invalid_argument,
          "deviation is measured against an ensemble variance");
  require(trials >= 2, Code::invalid_argument, "estimators need trials >= 2");
  double half_log_v = 0.5 * log_variance(*src.scheme, z);
  require(half_log_v > kNegInf, Code::zero_variance, "V(z) = 0");
  std::vector<double> slots(trials);
  run_trials(trials, threads, [&](uint64_t i) {
    Sample s = src.realize(seed, i);
    slots[i] = evaluate_log_abs(s, z) - half_log_v;
  });
  // Exact zeros (D = -inf) are tallied separately and excluded from the
  // quantiles.
  std::vector<double> sorted;
  sorted.reserve(trials);
  for (double d : slots)
    if (d > kNegInf) sorted.push_back(d);
  std::sort(sorted.begin(), sorted.end());
  ConcentrationSummary cs;
  cs.trials = trials;
  double nan = std::numeric_limits<double>::quiet_NaN();
  cs.median = sorted.empty() ? nan : quantile_sorted(sorted, 0.5);
  cs.q01 = sorted.empty() ? nan : quantile_sorted(sorted, 0.01);
  cs.q99 = sorted.empty() ? nan : quantile_sorted(sorted, 0.99);
  uint64_t exceed = 0, zeros = 0;
  for (double d : slots) {
    if (std::abs(d) > threshold) ++exceed;
    if (d == kNegInf) ++zeros;
  }
  cs.exceed_fraction = double(exceed) / double(trials);
  cs.zero_fraction = double(zeros) / double(trials);
  return cs;
}

StatEstimate observable_estimate(const Source& src, const Observable& obs,
                                 uint64_t trials, uint64_t seed,
                                 uint32_t threads) {
  validate_observable(obs);
  require(trials >= 2, Code::invalid_argument, "estimators need trials >= 2");
  std::vector<double> slots(trials);
  run_trials(trials, threads, [&](uint64_t i) {
    Sample s = src.realize(seed, i);
    slots[i] = eval_observable(src, obs, s);
  });
  return estimate_from_slots(slots);
}

GapResult universality_gap(const Source& src_a, const Source& src_b,
                           const Observable& obs, uint64_t trials,
                           uint64_t seed, uint32_t threads) {
  require(src_a.scheme.has_value() && src_a.atom.has_value() &&
              src_b.scheme.has_value() && src_b.atom.has_value(),
          Code::invalid_argument, "gap comparison needs two ensembles");
  require(same_scheme(*src_a.scheme, *src_b.scheme), Code::invalid_argument,
          "gap comparison needs matching scheme and degree");
  GapResult r;
  r.moments_matched = moments_match(*src_a.atom, *src_b.atom, 2);
  StatEstimate ea = observable_estimate(src_a, obs, trials, seed, threads);
  StatEstimate eb = observable_estimate(src_b, obs, trials, seed, threads);
  r.gap.value = ea.value - eb.value;
  r.gap.se = std::hypot(ea.se, eb.se);  // Welch pooling
  r.gap.trials = trials;
  r.within_three_se = std::abs(r.gap.value) <= 3.0 * r.gap.se;
  return r;
}

McIntegral monte_carlo_integral_interval(double a, double b,
                                         const std::function<double(double)>& f,
                                         uint64_t m, uint64_t seed) {
  require(std::isfinite(a) && std::isfinite(b) && a <= b,
          Code::invalid_argument, "interval endpoints out of order");
  require(m >= 1, Code::invalid_argument, "needs at least one sample");
  require(f != nullptr, Code::missing_data, "integrand is empty");
  Rng rng(seed);
  std::vector<double> vals(m);
  for (uint64_t i = 0; i < m; ++i) vals[i] = f(rng.uniform(a, b));
  McIntegral r;
  r.trials = m;
  r.value = pairwise_sum(vals) / double(m);
  for (double& v : vals) v = sqr(v - r.value);
  r.second_central_moment = pairwise_sum(vals) / double(m);
  return r;
}

McIntegral monte_carlo_integral_disk(cplx center, double radius,
                                     const std::function<double(cplx)>& f,
                                     uint64_t m, uint64_t seed) {
  require(is_finite(center) && std::isfinite(radius) && radius >= 0.0,
          Code::invalid_argument, "disk must have finite center, radius");
  require(m >= 1, Code::invalid_argument, "needs at least one sample");
  require(f != nullptr, Code::missing_data, "integrand is empty");
  Rng rng(seed);
  std::vector<double> vals(m);
  for (uint64_t i = 0; i < m; ++i) {
    double r = radius * std::sqrt(rng.uniform01());
    double th = 2.0 * kPi * rng.uniform01();
    vals[i] = f(center + std::polar(r, th));
  }
  McIntegral res;
  res.trials = m;
  res.value = pairwise_sum(vals) / double(m);
  for (double& v : vals) v = sqr(v - res.value);
  res.second_central_moment = pairwise_sum(vals) / double(m);
  return res;
}

double chebyshev_bound(double second_central_moment, uint64_t m,
                       double delta) {
  require(second_central_moment >= 0.0 && std::isfinite(second_central_moment),
          Code::invalid_argument, "moment must be nonnegative");
  require(m >= 1, Code::invalid_argument, "needs at least one sample");
  require(delta > 0.0 && std::isfinite(delta), Code::invalid_argument,
          "tail probability must be positive");
  return std::sqrt(second_central_moment / (double(m) * delta));
}

}  // namespace rpz
