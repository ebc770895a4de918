// C ABI wrapper over the core: opaque handles, status codes, thread-local
// error text. No exception escapes an exported function.
//
// SPDX-License-Identifier: MIT
#include "rpz/rpz.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "core/atom.hpp"
#include "core/common.hpp"
#include "core/oracle.hpp"
#include "core/roots.hpp"
#include "core/sample.hpp"
#include "core/scheme.hpp"
#include "core/stats.hpp"

struct rpz_scheme {
  rpz::Scheme impl;
};
struct rpz_atom {
  rpz::Atom impl;
};
struct rpz_sample {
  rpz::Sample impl;
};
struct rpz_rootset {
  rpz::RootSet impl;
};
struct rpz_kernel {
  rpz::Kernel impl;
};
struct rpz_source {
  rpz::Source impl;
};

namespace {

thread_local std::string g_last_error;

rpz_status to_status(rpz::Code c) {
  switch (c) {
    case rpz::Code::invalid_argument:
      return RPZ_ERR_INVALID_ARGUMENT;
    case rpz::Code::index_range:
      return RPZ_ERR_INDEX_RANGE;
    case rpz::Code::no_convergence:
      return RPZ_ERR_NO_CONVERGENCE;
    case rpz::Code::classification:
      return RPZ_ERR_CLASSIFICATION;
    case rpz::Code::degenerate_span:
      return RPZ_ERR_DEGENERATE_SPAN;
    case rpz::Code::zero_variance:
      return RPZ_ERR_ZERO_VARIANCE;
    case rpz::Code::unsupported:
      return RPZ_ERR_UNSUPPORTED;
    case rpz::Code::missing_data:
      return RPZ_ERR_MISSING_DATA;
  }
  return RPZ_ERR_INVALID_ARGUMENT;
}

template <class F>
rpz_status guarded(F&& f) noexcept {
  try {
    f();
    return RPZ_OK;
  } catch (const rpz::Error& e) {
    g_last_error = e.what();
    return to_status(e.code);
  } catch (const std::bad_alloc&) {
    g_last_error = "allocation failed";
    return RPZ_ERR_UNSUPPORTED;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RPZ_ERR_INVALID_ARGUMENT;
  }
}

rpz_status fail_status(rpz_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

rpz_status null_arg(const char* what) {
  return fail_status(RPZ_ERR_INVALID_ARGUMENT,
                     (std::string("null argument: ") + what).c_str());
}

rpz::cplx to_cpp(rpz_complex z) { return {z.re, z.im}; }
rpz_complex to_c(rpz::cplx z) { return {z.real(), z.imag()}; }

rpz_estimate to_c(const rpz::StatEstimate& e) {
  return {e.value, e.se, e.trials};
}

double pick_rel_tol(double rel_tol) {
  return rel_tol == 0.0 ? 1e-10 : rel_tol;
}

// Exact conjugation symmetry of a finite multiset decides whether an
// assembled root set may be classified as real-coefficient output.
bool conjugation_symmetric(std::vector<rpz::cplx> pts) {
  std::vector<rpz::cplx> conj(pts);
  for (rpz::cplx& z : conj) z = std::conj(z);
  auto less = [](rpz::cplx a, rpz::cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  for (rpz::cplx& z : pts)
    if (z.imag() == 0.0) z = {z.real(), 0.0};  // normalize -0
  for (rpz::cplx& z : conj)
    if (z.imag() == 0.0) z = {z.real(), 0.0};
  std::sort(pts.begin(), pts.end(), less);
  std::sort(conj.begin(), conj.end(), less);
  return pts == conj;
}

}  // namespace

extern "C" {

const char* rpz_version(void) { return "0.1.0"; }

const char* rpz_status_name(rpz_status s) {
  switch (s) {
    case RPZ_OK:
      return "ok";
    case RPZ_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case RPZ_ERR_INDEX_RANGE:
      return "index_range";
    case RPZ_ERR_NO_CONVERGENCE:
      return "no_convergence";
    case RPZ_ERR_CLASSIFICATION:
      return "classification";
    case RPZ_ERR_DEGENERATE_SPAN:
      return "degenerate_span";
    case RPZ_ERR_ZERO_VARIANCE:
      return "zero_variance";
    case RPZ_ERR_UNSUPPORTED:
      return "unsupported";
    case RPZ_ERR_MISSING_DATA:
      return "missing_data";
  }
  return "unknown";
}

const char* rpz_last_error(void) { return g_last_error.c_str(); }

/* ----------------------------------------------------------------- scheme */

rpz_status rpz_scheme_create(rpz_scheme_kind kind, uint32_t n,
                             rpz_scheme** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    rpz::require(kind == RPZ_SCHEME_FLAT || kind == RPZ_SCHEME_ELLIPTIC ||
                     kind == RPZ_SCHEME_ELLIPTIC_RESCALED ||
                     kind == RPZ_SCHEME_KAC,
                 rpz::Code::invalid_argument,
                 "hyperbolic and custom schemes have dedicated constructors");
    auto s = std::make_unique<rpz_scheme>();
    s->impl = rpz::make_scheme(static_cast<rpz::SchemeKind>(kind), n);
    *out = s.release();
  });
}

rpz_status rpz_scheme_create_hyperbolic(uint32_t n, double L,
                                        rpz_scheme** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    auto s = std::make_unique<rpz_scheme>();
    s->impl = rpz::make_hyperbolic_scheme(n, L);
    *out = s.release();
  });
}

rpz_status rpz_scheme_create_custom(uint32_t n, const double* log_coeffs,
                                    rpz_scheme** out) {
  if (!out) return null_arg("out");
  if (!log_coeffs) return null_arg("log_coeffs");
  return guarded([&] {
    std::vector<double> lc(log_coeffs, log_coeffs + size_t(n) + 1);
    auto s = std::make_unique<rpz_scheme>();
    s->impl = rpz::make_custom_scheme(std::move(lc));
    *out = s.release();
  });
}

void rpz_scheme_free(rpz_scheme* s) { delete s; }

uint32_t rpz_scheme_n(const rpz_scheme* s) { return s ? s->impl.n : 0; }

rpz_scheme_kind rpz_scheme_get_kind(const rpz_scheme* s) {
  return s ? static_cast<rpz_scheme_kind>(s->impl.kind) : RPZ_SCHEME_FLAT;
}

rpz_status rpz_scheme_log_coefficient(const rpz_scheme* s, uint32_t i,
                                      double* out) {
  if (!s) return null_arg("scheme");
  if (!out) return null_arg("out");
  return guarded([&] {
    rpz::require(i <= s->impl.n, rpz::Code::index_range,
                 "coefficient index exceeds degree bound");
    *out = s->impl.log_coeff(i);
  });
}

/* ------------------------------------------------------------------- atom */

rpz_status rpz_atom_create(rpz_atom_family family, rpz_atom** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    rpz::require(family != RPZ_ATOM_CUSTOM_DISCRETE,
                 rpz::Code::invalid_argument,
                 "discrete atoms have a dedicated constructor");
    rpz::require(family >= RPZ_ATOM_GAUSSIAN_REAL &&
                     family <= RPZ_ATOM_UNIFORM_COMPLEX_DISK,
                 rpz::Code::invalid_argument, "unknown atom family");
    auto a = std::make_unique<rpz_atom>();
    a->impl = rpz::make_atom(static_cast<rpz::AtomFamily>(family));
    *out = a.release();
  });
}

rpz_status rpz_atom_create_discrete(const rpz_complex* values,
                                    const double* weights, size_t count,
                                    rpz_atom** out) {
  if (!out) return null_arg("out");
  if (!values) return null_arg("values");
  if (!weights) return null_arg("weights");
  return guarded([&] {
    std::vector<rpz::cplx> vs(count);
    for (size_t i = 0; i < count; ++i) vs[i] = to_cpp(values[i]);
    auto a = std::make_unique<rpz_atom>();
    a->impl = rpz::make_discrete_atom(vs, {weights, count});
    *out = a.release();
  });
}

void rpz_atom_free(rpz_atom* a) { delete a; }

int rpz_atom_is_real(const rpz_atom* a) {
  return (a && a->impl.is_real) ? 1 : 0;
}

rpz_status rpz_atom_moment(const rpz_atom* a, unsigned p, unsigned q,
                           double* out) {
  if (!a) return null_arg("atom");
  if (!out) return null_arg("out");
  return guarded([&] { *out = a->impl.moment(p, q); });
}

rpz_status rpz_atom_moments_match(const rpz_atom* a, const rpz_atom* b,
                                  unsigned order, int* out) {
  if (!a || !b) return null_arg("atom");
  if (!out) return null_arg("out");
  return guarded([&] { *out = rpz::moments_match(a->impl, b->impl, order); });
}

/* ----------------------------------------------------------------- sample */

rpz_status rpz_sample_draw(const rpz_scheme* s, const rpz_atom* a,
                           uint64_t master_seed, uint64_t trial_index,
                           rpz_sample** out) {
  if (!s) return null_arg("scheme");
  if (!a) return null_arg("atom");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto p = std::make_unique<rpz_sample>();
    p->impl = rpz::draw_sample(s->impl, a->impl, master_seed, trial_index);
    *out = p.release();
  });
}

rpz_status rpz_sample_fixed(const rpz_complex* coeffs, size_t count,
                            rpz_sample** out) {
  if (!coeffs) return null_arg("coeffs");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::vector<rpz::cplx> cs(count);
    for (size_t i = 0; i < count; ++i) cs[i] = to_cpp(coeffs[i]);
    auto p = std::make_unique<rpz_sample>();
    p->impl = rpz::fixed_sample(cs);
    *out = p.release();
  });
}

void rpz_sample_free(rpz_sample* p) { delete p; }

uint32_t rpz_sample_n(const rpz_sample* p) { return p ? p->impl.n : 0; }

double rpz_sample_log_scale(const rpz_sample* p) {
  return p ? p->impl.log_scale : 0.0;
}

rpz_status rpz_sample_coefficients(const rpz_sample* p, rpz_complex* buf,
                                   size_t cap) {
  if (!p) return null_arg("sample");
  if (!buf) return null_arg("buf");
  return guarded([&] {
    rpz::require(cap >= p->impl.coeffs.size(), rpz::Code::index_range,
                 "buffer smaller than n+1");
    for (size_t i = 0; i < p->impl.coeffs.size(); ++i)
      buf[i] = to_c(p->impl.coeffs[i]);
  });
}

rpz_status rpz_sample_log_abs(const rpz_sample* p, rpz_complex z,
                              double* out) {
  if (!p) return null_arg("sample");
  if (!out) return null_arg("out");
  return guarded([&] { *out = rpz::evaluate_log_abs(p->impl, to_cpp(z)); });
}

/* ------------------------------------------------------------------ roots */

rpz_status rpz_find_roots(const rpz_sample* p, double rel_tol,
                          uint32_t max_iters, rpz_rootset** out) {
  if (!p) return null_arg("sample");
  if (!out) return null_arg("out");
  bool incomplete = false;
  rpz_status st = guarded([&] {
    auto r = std::make_unique<rpz_rootset>();
    r->impl = rpz::find_roots(p->impl, pick_rel_tol(rel_tol), max_iters);
    incomplete = !r->impl.converged;
    *out = r.release();
  });
  if (st != RPZ_OK) return st;
  if (incomplete)
    return fail_status(RPZ_ERR_NO_CONVERGENCE,
                       "iteration budget exhausted; partial result written");
  return RPZ_OK;
}

rpz_status rpz_rootset_from_points(const rpz_complex* roots, size_t count,
                                   uint32_t roots_at_infinity,
                                   rpz_rootset** out) {
  if (!out) return null_arg("out");
  if (!roots && count > 0) return null_arg("roots");
  return guarded([&] {
    rpz::require(count <= 0xFFFFFFFFu - roots_at_infinity,
                 rpz::Code::invalid_argument, "degree bound exceeds 2^32");
    auto r = std::make_unique<rpz_rootset>();
    r->impl.finite.resize(count);
    for (size_t i = 0; i < count; ++i) {
      r->impl.finite[i] = to_cpp(roots[i]);
      rpz::require(rpz::is_finite(r->impl.finite[i]),
                   rpz::Code::invalid_argument, "roots must be finite");
    }
    r->impl.at_infinity = roots_at_infinity;
    r->impl.converged = true;
    r->impl.residual = 0.0;
    r->impl.from_real_coeffs = conjugation_symmetric(r->impl.finite);
    std::sort(r->impl.finite.begin(), r->impl.finite.end(),
              [](rpz::cplx a, rpz::cplx b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
              });
    *out = r.release();
  });
}

void rpz_rootset_free(rpz_rootset* r) { delete r; }

size_t rpz_rootset_finite_count(const rpz_rootset* r) {
  return r ? r->impl.finite.size() : 0;
}

uint32_t rpz_rootset_infinity_count(const rpz_rootset* r) {
  return r ? r->impl.at_infinity : 0;
}

int rpz_rootset_converged(const rpz_rootset* r) {
  return (r && r->impl.converged) ? 1 : 0;
}

double rpz_rootset_residual_bound(const rpz_rootset* r) {
  return r ? r->impl.residual : 0.0;
}

rpz_status rpz_rootset_finite_roots(const rpz_rootset* r, rpz_complex* buf,
                                    size_t cap) {
  if (!r) return null_arg("rootset");
  if (!buf && !r->impl.finite.empty()) return null_arg("buf");
  return guarded([&] {
    rpz::require(cap >= r->impl.finite.size(), rpz::Code::index_range,
                 "buffer smaller than the root count");
    for (size_t i = 0; i < r->impl.finite.size(); ++i)
      buf[i] = to_c(r->impl.finite[i]);
  });
}

rpz_status rpz_rootset_classify_real(rpz_rootset* r, double snap_tol) {
  if (!r) return null_arg("rootset");
  return guarded([&] { rpz::classify_real(r->impl, snap_tol); });
}

int rpz_rootset_is_classified(const rpz_rootset* r) {
  return (r && r->impl.classified) ? 1 : 0;
}

size_t rpz_rootset_real_count(const rpz_rootset* r) {
  return (r && r->impl.classified) ? r->impl.reals.size() : 0;
}

size_t rpz_rootset_upper_count(const rpz_rootset* r) {
  return (r && r->impl.classified) ? r->impl.upper.size() : 0;
}

rpz_status rpz_rootset_real_roots(const rpz_rootset* r, double* buf,
                                  size_t cap) {
  if (!r) return null_arg("rootset");
  return guarded([&] {
    rpz::require(r->impl.classified, rpz::Code::missing_data,
                 "classify the root set first");
    rpz::require(cap >= r->impl.reals.size(), rpz::Code::index_range,
                 "buffer smaller than the real-root count");
    if (!r->impl.reals.empty()) {
      rpz::require(buf != nullptr, rpz::Code::invalid_argument,
                   "null argument: buf");
      std::copy(r->impl.reals.begin(), r->impl.reals.end(), buf);
    }
  });
}

rpz_status rpz_rootset_upper_roots(const rpz_rootset* r, rpz_complex* buf,
                                   size_t cap) {
  if (!r) return null_arg("rootset");
  return guarded([&] {
    rpz::require(r->impl.classified, rpz::Code::missing_data,
                 "classify the root set first");
    rpz::require(cap >= r->impl.upper.size(), rpz::Code::index_range,
                 "buffer smaller than the upper-root count");
    if (!r->impl.upper.empty())
      rpz::require(buf != nullptr, rpz::Code::invalid_argument,
                   "null argument: buf");
    for (size_t i = 0; i < r->impl.upper.size(); ++i)
      buf[i] = to_c(r->impl.upper[i]);
  });
}

rpz_status rpz_rootset_count_in_disk(const rpz_rootset* r, rpz_complex center,
                                     double radius, uint32_t* out) {
  if (!r) return null_arg("rootset");
  if (!out) return null_arg("out");
  return guarded(
      [&] { *out = rpz::count_in_disk(r->impl, to_cpp(center), radius); });
}

rpz_status rpz_rootset_count_in_interval(const rpz_rootset* r, double a,
                                         double b, uint32_t* out) {
  if (!r) return null_arg("rootset");
  if (!out) return null_arg("out");
  return guarded([&] { *out = rpz::count_in_interval(r->impl, a, b); });
}

/* ---------------------------------------------------------------- oracles */

rpz_status rpz_log_variance(const rpz_scheme* s, rpz_complex z, double* out) {
  if (!s) return null_arg("scheme");
  if (!out) return null_arg("out");
  return guarded([&] { *out = rpz::log_variance(s->impl, to_cpp(z)); });
}

rpz_status rpz_predicted_complex_intensity(const rpz_scheme* s, rpz_complex z,
                                           double h, double* out) {
  if (!s) return null_arg("scheme");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = rpz::predicted_complex_intensity(s->impl, to_cpp(z), h);
  });
}

rpz_status rpz_real_intensity_1(const rpz_scheme* s, double x, double* out) {
  if (!s) return null_arg("scheme");
  if (!out) return null_arg("out");
  return guarded([&] { *out = rpz::real_intensity_1(s->impl, x); });
}

rpz_status rpz_real_intensity_2(const rpz_scheme* s, double x, double y,
                                double* out) {
  if (!s) return null_arg("scheme");
  if (!out) return null_arg("out");
  return guarded([&] { *out = rpz::real_intensity_2(s->impl, x, y); });
}

rpz_status rpz_complex_intensity_01(const rpz_scheme* s, rpz_complex z,
                                    double* out) {
  if (!s) return null_arg("scheme");
  if (!out) return null_arg("out");
  return guarded(
      [&] { *out = rpz::complex_intensity_01(s->impl, to_cpp(z)); });
}

rpz_status rpz_real_intensity_integral(const rpz_scheme* s, double a, double b,
                                       double rel_tol, double* out) {
  if (!s) return null_arg("scheme");
  if (!out) return null_arg("out");
  return guarded(
      [&] { *out = rpz::real_intensity_integral(s->impl, a, b, rel_tol); });
}

rpz_status rpz_wedge_norm(const rpz_complex* v, const rpz_complex* w,
                          size_t len, double* out) {
  if (!v || !w) return null_arg("vector");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::vector<rpz::cplx> vv(len), ww(len);
    for (size_t i = 0; i < len; ++i) {
      vv[i] = to_cpp(v[i]);
      ww[i] = to_cpp(w[i]);
    }
    *out = rpz::wedge_norm(vv, ww);
  });
}

rpz_status rpz_gauss_zero_density(const double* vectors, size_t m, size_t dim,
                                  double* out) {
  if (!vectors) return null_arg("vectors");
  if (!out) return null_arg("out");
  return guarded(
      [&] { *out = rpz::gauss_zero_density({vectors, m * dim}, m, dim); });
}

rpz_status rpz_conditional_abs_moment(const double* v,
                                      const double* span_vectors, size_t m,
                                      size_t dim, double* out) {
  if (!v || !span_vectors) return null_arg("vectors");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = rpz::conditional_abs_moment({v, dim}, {span_vectors, m * dim}, m,
                                       dim);
  });
}

rpz_status rpz_conditional_second_moment(const double* v,
                                         const double* span_vectors, size_t m,
                                         size_t dim, double* out) {
  if (!v || !span_vectors) return null_arg("vectors");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = rpz::conditional_second_moment({v, dim}, {span_vectors, m * dim}, m,
                                          dim);
  });
}

rpz_status rpz_lacunary_subsequence(const double* b, size_t len,
                                    double ratio_cap, size_t* index_buf,
                                    size_t buf_cap, size_t* out_count) {
  if (!b) return null_arg("sequence");
  if (!index_buf) return null_arg("index_buf");
  if (!out_count) return null_arg("out_count");
  return guarded([&] {
    std::vector<size_t> sel = rpz::lacunary_subsequence({b, len}, ratio_cap);
    rpz::require(buf_cap >= sel.size(), rpz::Code::index_range,
                 "index buffer smaller than the selection");
    std::copy(sel.begin(), sel.end(), index_buf);
    *out_count = sel.size();
  });
}

rpz_status rpz_kac_edge_profile(double a, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = rpz::kac_edge_profile(a); });
}

/* ---------------------------------------------------------------- kernels */

rpz_status rpz_kernel_create_real(rpz_kernel_kind kind, double center,
                                  double bandwidth, double support_radius,
                                  int unit_mass, rpz_kernel** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    rpz::require(kind >= RPZ_KERNEL_GAUSSIAN_BUMP &&
                     kind <= RPZ_KERNEL_INDICATOR_SOFT,
                 rpz::Code::invalid_argument, "unknown kernel kind");
    auto k = std::make_unique<rpz_kernel>();
    k->impl = rpz::make_kernel(static_cast<rpz::KernelKind>(kind),
                               {center, 0.0}, bandwidth, support_radius,
                               false, unit_mass != 0);
    *out = k.release();
  });
}

rpz_status rpz_kernel_create_complex(rpz_kernel_kind kind, rpz_complex center,
                                     double bandwidth, double support_radius,
                                     int unit_mass, rpz_kernel** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    rpz::require(kind >= RPZ_KERNEL_GAUSSIAN_BUMP &&
                     kind <= RPZ_KERNEL_INDICATOR_SOFT,
                 rpz::Code::invalid_argument, "unknown kernel kind");
    auto k = std::make_unique<rpz_kernel>();
    k->impl = rpz::make_kernel(static_cast<rpz::KernelKind>(kind),
                               to_cpp(center), bandwidth, support_radius,
                               true, unit_mass != 0);
    *out = k.release();
  });
}

void rpz_kernel_free(rpz_kernel* k) { delete k; }

double rpz_kernel_eval(const rpz_kernel* k, rpz_complex point) {
  if (!k) return 0.0;
  return k->impl.eval(to_cpp(point));
}

double rpz_kernel_mass(const rpz_kernel* k) {
  if (!k) return 0.0;
  return k->impl.mass();
}

/* ------------------------------------------------------------- estimators */

rpz_status rpz_source_create_ensemble(const rpz_scheme* s, const rpz_atom* a,
                                      rpz_source** out) {
  if (!s) return null_arg("scheme");
  if (!a) return null_arg("atom");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto src = std::make_unique<rpz_source>();
    src->impl = rpz::Source::ensemble(s->impl, a->impl);
    *out = src.release();
  });
}

rpz_status rpz_source_create_fixed(const rpz_complex* coeffs, size_t count,
                                   rpz_source** out) {
  if (!coeffs) return null_arg("coeffs");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::vector<rpz::cplx> cs(count);
    for (size_t i = 0; i < count; ++i) cs[i] = to_cpp(coeffs[i]);
    auto src = std::make_unique<rpz_source>();
    src->impl = rpz::Source::fixed(rpz::fixed_sample(cs));
    *out = src.release();
  });
}

void rpz_source_free(rpz_source* src) { delete src; }

rpz_status rpz_source_set_solver(rpz_source* src, double rel_tol,
                                 uint32_t max_iters) {
  if (!src) return null_arg("source");
  return guarded([&] {
    double rt = pick_rel_tol(rel_tol);
    rpz::require(rt > 0.0 && rt <= 1e-6, rpz::Code::invalid_argument,
                 "rel_tol must lie in (0, 1e-6]");
    rpz::require(max_iters >= 1, rpz::Code::invalid_argument,
                 "max_iters must be at least 1");
    src->impl.solver.rel_tol = rt;
    src->impl.solver.max_iters = max_iters;
  });
}

rpz_status rpz_estimate_counts_interval(const rpz_source* src, double a,
                                        double b, uint64_t trials,
                                        uint64_t seed, uint32_t threads,
                                        rpz_estimate* mean_out,
                                        rpz_estimate* variance_out) {
  if (!src) return null_arg("source");
  if (!mean_out) return null_arg("mean_out");
  return guarded([&] {
    rpz::CountsResult r = rpz::estimate_counts_interval(src->impl, a, b,
                                                        trials, seed, threads);
    *mean_out = to_c(r.mean);
    if (variance_out) *variance_out = to_c(r.variance);
  });
}

rpz_status rpz_estimate_counts_disk(const rpz_source* src, rpz_complex center,
                                    double radius, uint64_t trials,
                                    uint64_t seed, uint32_t threads,
                                    rpz_estimate* mean_out,
                                    rpz_estimate* variance_out) {
  if (!src) return null_arg("source");
  if (!mean_out) return null_arg("mean_out");
  return guarded([&] {
    rpz::CountsResult r = rpz::estimate_counts_disk(
        src->impl, to_cpp(center), radius, trials, seed, threads);
    *mean_out = to_c(r.mean);
    if (variance_out) *variance_out = to_c(r.variance);
  });
}

rpz_status rpz_estimate_correlation(const rpz_source* src,
                                    const rpz_kernel* const* kernels, size_t k,
                                    uint64_t trials, uint64_t seed,
                                    uint32_t threads, rpz_estimate* out) {
  if (!src) return null_arg("source");
  if (!kernels) return null_arg("kernels");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::vector<rpz::Kernel> ks;
    ks.reserve(k);
    for (size_t i = 0; i < k; ++i) {
      rpz::require(kernels[i] != nullptr, rpz::Code::invalid_argument,
                   "null kernel");
      ks.push_back(kernels[i]->impl);
    }
    *out = to_c(rpz::estimate_correlation(src->impl, ks, trials, seed,
                                          threads));
  });
}

rpz_status rpz_estimate_mixed_correlation(const rpz_source* src,
                                          const rpz_kernel* const* real_kernels,
                                          size_t k,
                                          const rpz_kernel* const* upper_kernels,
                                          size_t l, uint64_t trials,
                                          uint64_t seed, uint32_t threads,
                                          rpz_estimate* out) {
  if (!src) return null_arg("source");
  if (!real_kernels && k > 0) return null_arg("real_kernels");
  if (!upper_kernels && l > 0) return null_arg("upper_kernels");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::vector<rpz::Kernel> rks, cks;
    for (size_t i = 0; i < k; ++i) {
      rpz::require(real_kernels[i] != nullptr, rpz::Code::invalid_argument,
                   "null kernel");
      rks.push_back(real_kernels[i]->impl);
    }
    for (size_t i = 0; i < l; ++i) {
      rpz::require(upper_kernels[i] != nullptr, rpz::Code::invalid_argument,
                   "null kernel");
      cks.push_back(upper_kernels[i]->impl);
    }
    *out = to_c(rpz::estimate_mixed_correlation(src->impl, rks, cks, trials,
                                                seed, threads));
  });
}

rpz_status rpz_linear_statistic(const rpz_rootset* r, const rpz_kernel* k,
                                double* out) {
  if (!r) return null_arg("rootset");
  if (!k) return null_arg("kernel");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = rpz::linear_statistic(r->impl, {0.0, 0.0}, k->impl).real();
  });
}

rpz_status rpz_concentration_deviation(const rpz_source* src, rpz_complex z,
                                       double exceed_threshold,
                                       uint64_t trials, uint64_t seed,
                                       uint32_t threads,
                                       rpz_concentration_summary* out) {
  if (!src) return null_arg("source");
  if (!out) return null_arg("out");
  return guarded([&] {
    rpz::ConcentrationSummary cs = rpz::concentration_deviation(
        src->impl, to_cpp(z), exceed_threshold, trials, seed, threads);
    out->median = cs.median;
    out->q01 = cs.q01;
    out->q99 = cs.q99;
    out->exceed_fraction = cs.exceed_fraction;
    out->zero_fraction = cs.zero_fraction;
    out->trials = cs.trials;
  });
}

namespace {

rpz::Observable to_obs(const rpz_observable* o) {
  rpz::require(o->kind >= RPZ_OBS_COUNT_INTERVAL &&
                   o->kind <= RPZ_OBS_LOG_ABS,
               rpz::Code::invalid_argument, "unknown observable kind");
  rpz::Observable obs;
  switch (o->kind) {
    case RPZ_OBS_COUNT_INTERVAL:
      obs.kind = rpz::ObservableKind::count_interval;
      obs.a = o->a;
      obs.b = o->b;
      break;
    case RPZ_OBS_COUNT_DISK:
      obs.kind = rpz::ObservableKind::count_disk;
      obs.point = to_cpp(o->center);
      obs.radius = o->radius;
      break;
    case RPZ_OBS_LINEAR_STATISTIC:
      obs.kind = rpz::ObservableKind::linear_statistic;
      rpz::require(o->kernel != nullptr, rpz::Code::missing_data,
                   "linear statistic needs a kernel");
      obs.kernel = o->kernel->impl;
      break;
    case RPZ_OBS_LOG_ABS:
      obs.kind = rpz::ObservableKind::log_abs;
      obs.point = to_cpp(o->center);
      break;
  }
  return obs;
}

}  // namespace

rpz_status rpz_observable_estimate(const rpz_source* src,
                                   const rpz_observable* obs, uint64_t trials,
                                   uint64_t seed, uint32_t threads,
                                   rpz_estimate* out) {
  if (!src) return null_arg("source");
  if (!obs) return null_arg("observable");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = to_c(rpz::observable_estimate(src->impl, to_obs(obs), trials, seed,
                                         threads));
  });
}

rpz_status rpz_universality_gap(const rpz_source* src_a,
                                const rpz_source* src_b,
                                const rpz_observable* obs, uint64_t trials,
                                uint64_t seed, uint32_t threads,
                                rpz_estimate* gap_out,
                                int* within_three_se) {
  if (!src_a || !src_b) return null_arg("source");
  if (!obs) return null_arg("observable");
  if (!gap_out) return null_arg("gap_out");
  return guarded([&] {
    rpz::GapResult r = rpz::universality_gap(src_a->impl, src_b->impl,
                                             to_obs(obs), trials, seed,
                                             threads);
    *gap_out = to_c(r.gap);
    if (within_three_se) *within_three_se = r.within_three_se ? 1 : 0;
  });
}

rpz_status rpz_monte_carlo_integral_interval(double a, double b,
                                             rpz_integrand f, void* user,
                                             uint64_t m, uint64_t seed,
                                             rpz_estimate* out,
                                             double* second_central_moment) {
  if (!f) return null_arg("integrand");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto g = [&](double x) { return f(rpz_complex{x, 0.0}, user); };
    rpz::McIntegral r = rpz::monte_carlo_integral_interval(a, b, g, m, seed);
    out->value = r.value;
    out->std_error = std::sqrt(r.second_central_moment / double(r.trials));
    out->trials = r.trials;
    if (second_central_moment) *second_central_moment = r.second_central_moment;
  });
}

rpz_status rpz_monte_carlo_integral_disk(rpz_complex center, double radius,
                                         rpz_integrand f, void* user,
                                         uint64_t m, uint64_t seed,
                                         rpz_estimate* out,
                                         double* second_central_moment) {
  if (!f) return null_arg("integrand");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto g = [&](rpz::cplx z) { return f(to_c(z), user); };
    rpz::McIntegral r =
        rpz::monte_carlo_integral_disk(to_cpp(center), radius, g, m, seed);
    out->value = r.value;
    out->std_error = std::sqrt(r.second_central_moment / double(r.trials));
    out->trials = r.trials;
    if (second_central_moment) *second_central_moment = r.second_central_moment;
  });
}

double rpz_chebyshev_bound(uint64_t m, double second_central_moment,
                           double delta) {
  try {
    return rpz::chebyshev_bound(second_central_moment, m, delta);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

} /* extern "C" */
