// SPDX-License-Identifier: MIT
#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>

#include "json.hpp"
#include "rpz/rpz.h"

namespace cli {

namespace {

using nlohmann::json;

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string lib_msg(rpz_status st) {
  return std::string(rpz_status_name(st)) + ": " + rpz_last_error();
}

// Setup failures name the config field; evaluation failures either reflect
// an invalid statistic request (usage) or a genuine compute error.
void chk_setup(rpz_status st, const std::string& field) {
  if (st != RPZ_OK) throw ConfigError(field, lib_msg(st));
}
void chk_run(rpz_status st, const std::string& context) {
  if (st == RPZ_OK) return;
  if (st == RPZ_ERR_INVALID_ARGUMENT) throw ConfigError(context, lib_msg(st));
  throw ComputeError(context + ": " + lib_msg(st));
}

template <class T, void (*F)(T*)>
struct H {
  T* p = nullptr;
  H() = default;
  H(const H&) = delete;
  H& operator=(const H&) = delete;
  H(H&& o) noexcept : p(o.p) { o.p = nullptr; }
  H& operator=(H&& o) noexcept {
    if (this != &o) {
      F(p);
      p = o.p;
      o.p = nullptr;
    }
    return *this;
  }
  ~H() { F(p); }
  operator T*() const { return p; }
};
using SchemeH = H<rpz_scheme, rpz_scheme_free>;
using AtomH = H<rpz_atom, rpz_atom_free>;
using SampleH = H<rpz_sample, rpz_sample_free>;
using RootsH = H<rpz_rootset, rpz_rootset_free>;
using KernelH = H<rpz_kernel, rpz_kernel_free>;
using SourceH = H<rpz_source, rpz_source_free>;

SchemeH make_scheme(const SchemeSpec& s) {
  SchemeH h;
  rpz_status st;
  if (s.kind == RPZ_SCHEME_HYPERBOLIC)
    st = rpz_scheme_create_hyperbolic(s.n, s.L, &h.p);
  else if (s.kind == RPZ_SCHEME_CUSTOM)
    st = rpz_scheme_create_custom(s.n, s.log_coeffs.data(), &h.p);
  else
    st = rpz_scheme_create(s.kind, s.n, &h.p);
  chk_setup(st, "scheme");
  return h;
}

AtomH make_atom(const AtomSpec& a, const char* field) {
  AtomH h;
  rpz_status st;
  if (a.family == RPZ_ATOM_CUSTOM_DISCRETE)
    st = rpz_atom_create_discrete(a.values.data(), a.weights.data(),
                                  a.values.size(), &h.p);
  else
    st = rpz_atom_create(a.family, &h.p);
  chk_setup(st, field);
  return h;
}

KernelH make_kernel(const KernelSpec& k, const std::string& field) {
  KernelH h;
  rpz_status st;
  if (k.complex_center)
    st = rpz_kernel_create_complex(k.kind, k.center_z, k.bandwidth,
                                   k.support_radius, k.unit_mass ? 1 : 0,
                                   &h.p);
  else
    st = rpz_kernel_create_real(k.kind, k.center_x, k.bandwidth,
                                k.support_radius, k.unit_mass ? 1 : 0, &h.p);
  chk_setup(st, field);
  return h;
}

SourceH make_source(const Config& cfg, const AtomSpec& atom,
                    const char* field) {
  SchemeH s = make_scheme(cfg.scheme);
  AtomH a = make_atom(atom, field);
  SourceH src;
  chk_setup(rpz_source_create_ensemble(s, a, &src.p), "source");
  chk_setup(rpz_source_set_solver(src, cfg.solver_rel_tol,
                                  cfg.solver_max_iters),
            "solver");
  return src;
}

std::string fmtv(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double nan_val() { return std::nan(""); }

Row scalar_row(const std::string& label, double v) {
  return {label, v, nan_val(), 0};
}

Row estimate_row(const std::string& label, const rpz_estimate& e) {
  return {label, e.value, e.std_error, e.trials};
}

// ---------------------------------------------------------------------------
// Expectation checking.

struct Verdict {
  bool pass = true;
  std::string measured;
  std::string constraint;
};

const Row* find_row(const std::vector<Row>& rows, const std::string& label) {
  if (label.empty()) return rows.empty() ? nullptr : &rows.front();
  for (const auto& r : rows)
    if (r.label == label) return &r;
  return nullptr;
}

Verdict apply_expect(const Expect& e, const std::vector<Row>& rows,
                     const std::vector<GridRow>& grid) {
  Verdict v;
  if (!grid.empty()) {
    if (e.three_se || e.within_three_se || e.rel_tol)
      throw ConfigError("expect",
                        "only value/abs_tol/min/max apply to grid output");
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (const auto& g : grid) {
      lo = std::min(lo, g.value);
      hi = std::max(hi, g.value);
    }
    v.measured = "grid values in [" + fmtv(lo) + ", " + fmtv(hi) + "]";
    if (e.value && e.abs_tol) {
      v.constraint = "all within " + fmtv(*e.abs_tol) + " of " + fmtv(*e.value);
      if (lo < *e.value - *e.abs_tol || hi > *e.value + *e.abs_tol)
        v.pass = false;
    }
    if (e.min) {
      v.constraint += (v.constraint.empty() ? "" : "; ") + std::string(">= ") +
                      fmtv(*e.min);
      if (lo < *e.min) v.pass = false;
    }
    if (e.max) {
      v.constraint += (v.constraint.empty() ? "" : "; ") + std::string("<= ") +
                      fmtv(*e.max);
      if (hi > *e.max) v.pass = false;
    }
    return v;
  }

  const Row* r = find_row(rows, e.label);
  if (!r)
    throw ConfigError("expect.label", "no result row named \"" + e.label + "\"");
  v.measured = r->label + " = " + fmtv(r->value);
  if (!std::isnan(r->std_error)) v.measured += " +- " + fmtv(r->std_error);

  if (e.value && e.abs_tol) {
    v.constraint = "within " + fmtv(*e.abs_tol) + " of " + fmtv(*e.value);
    if (!(std::abs(r->value - *e.value) <= *e.abs_tol)) v.pass = false;
  }
  if (e.value && e.rel_tol) {
    v.constraint += (v.constraint.empty() ? "" : "; ") + std::string("within ") +
                    fmtv(100.0 * *e.rel_tol) + "% of " + fmtv(*e.value);
    if (!(std::abs(r->value - *e.value) <= *e.rel_tol * std::abs(*e.value)))
      v.pass = false;
  }
  if (e.three_se) {
    if (std::isnan(r->std_error))
      throw ConfigError("expect.three_se", "row has no standard error");
    v.constraint += (v.constraint.empty() ? "" : "; ") +
                    std::string("within 3 se of ") + fmtv(*e.value);
    if (!(std::abs(r->value - *e.value) <= 3.0 * r->std_error)) v.pass = false;
  }
  if (e.min) {
    v.constraint +=
        (v.constraint.empty() ? "" : "; ") + std::string(">= ") + fmtv(*e.min);
    if (!(r->value >= *e.min)) v.pass = false;
  }
  if (e.max) {
    v.constraint +=
        (v.constraint.empty() ? "" : "; ") + std::string("<= ") + fmtv(*e.max);
    if (!(r->value <= *e.max)) v.pass = false;
  }
  if (e.within_three_se) {
    const Row* w = find_row(rows, "within_three_se");
    if (!w)
      throw ConfigError("expect.within_three_se",
                        "statistic produces no within_three_se row");
    v.constraint += (v.constraint.empty() ? "" : "; ") +
                    std::string("gap within 3 pooled se");
    if (w->value == 0.0) v.pass = false;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Oracle evaluation shared by oracle_point and oracle_grid.

double eval_oracle(rpz_scheme* s, const StatisticSpec& st, double x) {
  double v = 0.0;
  if (st.oracle == "rho10") {
    chk_run(rpz_real_intensity_1(s, x, &v), "statistic.oracle");
  } else if (st.oracle == "rho01") {
    chk_run(rpz_complex_intensity_01(s, {x, st.imag}, &v), "statistic.oracle");
  } else if (st.oracle == "rho2") {
    chk_run(rpz_real_intensity_2(s, x, x + st.delta, &v), "statistic.oracle");
  } else if (st.oracle == "predicted") {
    chk_run(rpz_predicted_complex_intensity(s, {x, st.imag}, st.stencil, &v),
            "statistic.oracle");
  } else {  // log_variance
    chk_run(rpz_log_variance(s, {x, st.imag}, &v), "statistic.oracle");
  }
  return v;
}

}  // namespace

RunOutput run_config(const Config& cfg) {
  RunOutput out;
  const StatisticSpec& st = cfg.statistic;

  if (st.kind == "counts_interval" || st.kind == "counts_disk") {
    SourceH src = make_source(cfg, cfg.atom, "atom");
    rpz_estimate mean{}, var{};
    if (st.kind == "counts_interval")
      chk_run(rpz_estimate_counts_interval(src, st.a, st.b, cfg.trials,
                                           cfg.master_seed, cfg.threads, &mean,
                                           &var),
              "statistic");
    else
      chk_run(rpz_estimate_counts_disk(src, st.center, st.radius, cfg.trials,
                                       cfg.master_seed, cfg.threads, &mean,
                                       &var),
              "statistic");
    out.rows.push_back(estimate_row("count_mean", mean));
    out.rows.push_back(estimate_row("count_variance", var));
  } else if (st.kind == "correlation") {
    SourceH src = make_source(cfg, cfg.atom, "atom");
    std::vector<KernelH> hs;
    std::vector<const rpz_kernel*> ks;
    for (size_t i = 0; i < st.kernels.size(); ++i) {
      hs.push_back(make_kernel(st.kernels[i],
                               "statistic.kernels[" + std::to_string(i) + "]"));
      ks.push_back(hs.back().p);
    }
    rpz_estimate e{};
    chk_run(rpz_estimate_correlation(src, ks.data(), ks.size(), cfg.trials,
                                     cfg.master_seed, cfg.threads, &e),
            "statistic");
    out.rows.push_back(estimate_row("correlation", e));
  } else if (st.kind == "mixed_correlation") {
    SourceH src = make_source(cfg, cfg.atom, "atom");
    std::vector<KernelH> hs;
    std::vector<const rpz_kernel*> rks, uks;
    for (size_t i = 0; i < st.real_kernels.size(); ++i) {
      hs.push_back(make_kernel(
          st.real_kernels[i],
          "statistic.real_kernels[" + std::to_string(i) + "]"));
      rks.push_back(hs.back().p);
    }
    for (size_t i = 0; i < st.upper_kernels.size(); ++i) {
      hs.push_back(make_kernel(
          st.upper_kernels[i],
          "statistic.upper_kernels[" + std::to_string(i) + "]"));
      uks.push_back(hs.back().p);
    }
    rpz_estimate e{};
    chk_run(rpz_estimate_mixed_correlation(
                src, rks.empty() ? nullptr : rks.data(), rks.size(),
                uks.empty() ? nullptr : uks.data(), uks.size(), cfg.trials,
                cfg.master_seed, cfg.threads, &e),
            "statistic");
    out.rows.push_back(estimate_row("mixed_correlation", e));
  } else if (st.kind == "concentration") {
    SourceH src = make_source(cfg, cfg.atom, "atom");
    rpz_concentration_summary cs{};
    chk_run(rpz_concentration_deviation(src, st.point, st.threshold,
                                        cfg.trials, cfg.master_seed,
                                        cfg.threads, &cs),
            "statistic");
    out.rows.push_back({"median", cs.median, nan_val(), cs.trials});
    out.rows.push_back({"q01", cs.q01, nan_val(), cs.trials});
    out.rows.push_back({"q99", cs.q99, nan_val(), cs.trials});
    out.rows.push_back(
        {"exceed_fraction", cs.exceed_fraction, nan_val(), cs.trials});
    out.rows.push_back(
        {"zero_fraction", cs.zero_fraction, nan_val(), cs.trials});
  } else if (st.kind == "gap") {
    SourceH src_a = make_source(cfg, cfg.atom, "atom");
    SourceH src_b = make_source(cfg, *cfg.atom_b, "atom_b");
    const ObservableSpec& os = *st.observable;
    KernelH kh;
    rpz_observable obs{};
    obs.kind = os.kind;
    obs.a = os.a;
    obs.b = os.b;
    obs.center = os.center;
    obs.radius = os.radius;
    if (os.kernel) {
      kh = make_kernel(*os.kernel, "statistic.observable.kernel");
      obs.kernel = kh.p;
    }
    rpz_estimate gap{};
    int within = 0;
    chk_run(rpz_universality_gap(src_a, src_b, &obs, cfg.trials,
                                 cfg.master_seed, cfg.threads, &gap, &within),
            "statistic");
    out.rows.push_back(estimate_row("gap", gap));
    out.rows.push_back(
        {"within_three_se", within ? 1.0 : 0.0, nan_val(), gap.trials});
  } else if (st.kind == "oracle_integral_real_intensity") {
    SchemeH s = make_scheme(cfg.scheme);
    double v = 0.0;
    chk_run(rpz_real_intensity_integral(s, st.a, st.b, st.rel_tol, &v),
            "statistic");
    out.rows.push_back(scalar_row("real_intensity_integral", v));
  } else if (st.kind == "oracle_point") {
    SchemeH s = make_scheme(cfg.scheme);
    out.rows.push_back(scalar_row(st.oracle, eval_oracle(s, st, st.x)));
  } else if (st.kind == "oracle_grid") {
    SchemeH s = make_scheme(cfg.scheme);
    for (uint32_t i = 0; i < st.grid.points; ++i) {
      double x = st.grid.points == 1
                     ? st.grid.from
                     : st.grid.from + (st.grid.to - st.grid.from) * i /
                                          double(st.grid.points - 1);
      out.grid.push_back({x, eval_oracle(s, st, x), nan_val(), nan_val()});
    }
    if (st.mc_trials > 0) {
      // Smoothed real-zero density at each grid point: the expectation of a
      // unit-mass bump summed over real zeros.
      SourceH src = make_source(cfg, cfg.atom, "atom");
      for (auto& g : out.grid) {
        KernelSpec ks;
        ks.kind = RPZ_KERNEL_COSINE_BUMP;
        ks.center_x = g.x;
        ks.bandwidth = st.mc_bandwidth;
        ks.support_radius = st.mc_bandwidth;
        ks.unit_mass = true;
        KernelH k = make_kernel(ks, "statistic.mc_bandwidth");
        const rpz_kernel* arr[1] = {k.p};
        rpz_estimate e{};
        chk_run(rpz_estimate_mixed_correlation(src, arr, 1, nullptr, 0,
                                               st.mc_trials, cfg.master_seed,
                                               cfg.threads, &e),
                "statistic");
        g.mc = e.value;
        g.mc_se = e.std_error;
      }
    }
  } else if (st.kind == "edge_profile") {
    for (uint32_t i = 0; i < st.grid.points; ++i) {
      double a = st.grid.points == 1
                     ? st.grid.from
                     : st.grid.from + (st.grid.to - st.grid.from) * i /
                                          double(st.grid.points - 1);
      double v = 0.0;
      chk_run(rpz_kac_edge_profile(a, &v), "statistic");
      out.grid.push_back({a, v, nan_val(), nan_val()});
    }
  }

  if (cfg.expect) {
    Verdict v = apply_expect(*cfg.expect, out.rows, out.grid);
    out.pass = v.pass;
    out.verdict = v.measured +
                  (v.constraint.empty() ? "" : " :: " + v.constraint) +
                  (v.pass ? " [pass]" : " [FAIL]");
  } else if (!out.rows.empty()) {
    out.verdict = out.rows.front().label + " = " + fmtv(out.rows.front().value);
  } else {
    out.verdict = std::to_string(out.grid.size()) + " grid points";
  }
  return out;
}

SampleOutput draw_sample(const Config& cfg) {
  SchemeH s = make_scheme(cfg.scheme);
  AtomH a = make_atom(cfg.atom, "atom");
  SampleH p;
  chk_run(rpz_sample_draw(s, a, cfg.master_seed, 0, &p.p), "sample");
  SampleOutput out;
  out.coeffs.resize(size_t(rpz_sample_n(p)) + 1);
  chk_run(rpz_sample_coefficients(p, out.coeffs.data(), out.coeffs.size()),
          "sample");
  out.log_scale = rpz_sample_log_scale(p);
  return out;
}

RootsOutput solve_roots(const Config& cfg) {
  SchemeH s = make_scheme(cfg.scheme);
  AtomH a = make_atom(cfg.atom, "atom");
  SampleH p;
  chk_run(rpz_sample_draw(s, a, cfg.master_seed, 0, &p.p), "sample");
  RootsH r;
  chk_run(rpz_find_roots(p, cfg.solver_rel_tol, cfg.solver_max_iters, &r.p),
          "roots");
  RootsOutput out;
  out.residual = rpz_rootset_residual_bound(r);
  out.infinity_count = rpz_rootset_infinity_count(r);
  if (rpz_atom_is_real(a)) {
    // Classification may snap near-axis roots, so fetch points afterwards.
    chk_run(rpz_rootset_classify_real(r, 0.0), "classification");
    out.classified = true;
    out.real_count = rpz_rootset_real_count(r);
    out.upper_count = rpz_rootset_upper_count(r);
  }
  std::vector<rpz_complex> roots(rpz_rootset_finite_count(r));
  if (!roots.empty())
    chk_run(rpz_rootset_finite_roots(r, roots.data(), roots.size()), "roots");
  for (auto z : roots)
    out.points.push_back({z.re, z.im, out.classified && z.im == 0.0});
  return out;
}

// ---------------------------------------------------------------------------
// Reproduction registry.

namespace {

// Runs one canned config and folds its outcome into the report.
RunOutput run_sub(ReproReport& rep, std::string& digest_acc, const json& cj,
                  const std::string& prefix, const std::string& claim) {
  Config cfg = parse_config(cj);
  digest_acc += cfg.digest;
  RunOutput out = run_config(cfg);
  Verdict v;
  if (cfg.expect) v = apply_expect(*cfg.expect, out.rows, out.grid);
  ReproLine line;
  line.claim = claim;
  line.measured = v.measured;
  line.tolerance = v.constraint.empty() ? "none declared" : v.constraint;
  line.pass = out.pass;
  rep.lines.push_back(line);
  rep.pass = rep.pass && out.pass;
  for (auto r : out.rows) {
    r.label = prefix.empty() ? r.label : prefix + "." + r.label;
    rep.rows.push_back(r);
  }
  return out;
}

void direct_line(ReproReport& rep, const std::string& claim,
                 const std::string& measured, const std::string& tolerance,
                 bool pass) {
  rep.lines.push_back({claim, measured, tolerance, pass});
  rep.pass = rep.pass && pass;
}

void finish_digest(ReproReport& rep, const std::string& digest_acc) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                (unsigned long long)fnv1a64(rep.id + (":" + digest_acc)));
  rep.digest = hex;
}

json scheme_j(const char* kind, uint32_t n) {
  return json{{"kind", kind}, {"n", n}};
}

// --- individual experiments -----------------------------------------------

ReproReport repro_elliptic_exact() {
  ReproReport rep;
  rep.id = "elliptic-exact";
  std::string acc;
  for (uint32_t n : {16u, 100u, 400u}) {
    double root = std::sqrt(double(n));
    json cfg{{"scheme", scheme_j("elliptic_rescaled", n)},
             {"statistic", {{"kind", "oracle_integral_real_intensity"}}},
             {"expect", {{"value", root}, {"rel_tol", 1e-6}}}};
    run_sub(rep, acc, cfg, "n" + std::to_string(n),
            "exact real-zero mass at n=" + std::to_string(n) +
                " equals sqrt(n) = " + fmtv(root));
  }
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_elliptic_count() {
  ReproReport rep;
  rep.id = "elliptic-count";
  std::string acc;
  json cfg{{"scheme", scheme_j("elliptic", 100)},
           {"atom", {{"family", "gaussian_real"}}},
           {"trials", 500},
           {"master_seed", 42001},
           {"statistic", {{"kind", "counts_interval"}}},
           {"expect", {{"value", 10.0}, {"three_se", true}}}};
  run_sub(rep, acc, cfg, "",
          "mean real-zero count at n=100 equals sqrt(n) = 10");
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_flat_real_count() {
  ReproReport rep;
  rep.id = "flat-real-count";
  std::string acc;
  // Exact gaussian mass of the degree-400 real intensity; the classical
  // large-n approximation (2/pi) sqrt(n) = 12.732 still sits 9.8% below it.
  const double exact = 13.9812253885;
  for (auto [fam, seed] : {std::pair{"gaussian_real", 43001},
                           std::pair{"bernoulli", 43002}}) {
    json cfg{{"scheme", scheme_j("flat", 400)},
             {"atom", {{"family", fam}}},
             {"trials", 300},
             {"master_seed", seed},
             {"statistic", {{"kind", "counts_interval"}}},
             {"expect", {{"value", exact}, {"rel_tol", 0.05}}}};
    run_sub(rep, acc, cfg, fam,
            std::string("mean real-zero count (") + fam +
                ") near (2/pi) sqrt(n); exact n=400 mass " + fmtv(exact));
  }
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_flat_bulk_intensity() {
  ReproReport rep;
  rep.id = "flat-bulk-intensity";
  std::string acc;
  for (double x : {5.0, 10.0, 15.0}) {
    json cfg{{"scheme", scheme_j("flat", 400)},
             {"statistic",
              {{"kind", "oracle_point"}, {"oracle", "rho10"}, {"x", x}}},
             {"expect", {{"value", 1.0 / kPi}, {"abs_tol", 1e-3}}}};
    run_sub(rep, acc, cfg, "x" + fmtv(x),
            "bulk real intensity at x=" + fmtv(x) + " equals 1/pi");
  }
  // Kernel-smoothed Monte Carlo against the quadrature of the exact
  // intensity; the target is computed here, not pinned.
  {
    SchemeH s = make_scheme({RPZ_SCHEME_FLAT, 400, 0.0, {}});
    KernelH k = make_kernel(
        {RPZ_KERNEL_COSINE_BUMP, false, 10.0, {0, 0}, 1.0, 0.5, false},
        "kernel");
    const int panels = 1000;
    double a = 9.5, b = 10.5, h = (b - a) / (2.0 * panels);
    auto f = [&](double x) {
      double rho = 0.0;
      chk_run(rpz_real_intensity_1(s, x, &rho), "oracle");
      return rpz_kernel_eval(k, {x, 0.0}) * rho;
    };
    double accu = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i)
      accu += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    double target = accu * h / 3.0;
    json cfg{{"scheme", scheme_j("flat", 400)},
             {"atom", {{"family", "gaussian_real"}}},
             {"trials", 800},
             {"master_seed", 44001},
             {"statistic",
              {{"kind", "mixed_correlation"},
               {"real_kernels",
                json::array({{{"kind", "cosine_bump"},
                              {"center", 10.0},
                              {"bandwidth", 1.0},
                              {"support_radius", 0.5}}})}}},
             {"expect", {{"value", target}, {"three_se", true}}}};
    run_sub(rep, acc, cfg, "kernel",
            "kernel-smoothed count at x=10 matches the exact intensity "
            "integral " +
                fmtv(target));
  }
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_circular_law() {
  ReproReport rep;
  rep.id = "circular-law";
  std::string acc;
  for (auto [radius, min_mean] : {std::pair{22.0, 394.0},
                                  std::pair{24.0, 396.0}}) {
    json cfg{{"scheme", scheme_j("flat", 400)},
             {"atom", {{"family", "gaussian_real"}}},
             {"trials", 100},
             {"master_seed", 45001},
             {"statistic",
              {{"kind", "counts_disk"},
               {"center", json::array({0.0, 0.0})},
               {"radius", radius}}},
             {"expect", {{"min", min_mean}}}};
    run_sub(rep, acc, cfg, "r" + fmtv(radius),
            "mean zero count in |z| < " + fmtv(radius) + " (= " +
                fmtv(radius / 20.0) + " sqrt(n)) is at least " +
                fmtv(min_mean) + " of 400");
  }
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_kac_log_growth() {
  ReproReport rep;
  rep.id = "kac-log-growth";
  std::string acc;
  double prev = HUGE_VAL;
  bool decreasing = true;
  for (uint32_t n : {1000u, 10000u, 100000u}) {
    json cfg{{"scheme", scheme_j("kac", n)},
             {"statistic", {{"kind", "oracle_integral_real_intensity"}}}};
    RunOutput out = run_sub(rep, acc, cfg, "n" + std::to_string(n),
                            "exact real-zero mass of the unit-coefficient "
                            "family at n=" +
                                std::to_string(n));
    double mass = out.rows.front().value;
    double ratio = mass / ((2.0 / kPi) * std::log(double(n)));
    bool ok = ratio >= 0.9 && ratio <= 1.4;
    decreasing = decreasing && ratio < prev;
    prev = ratio;
    rep.rows.push_back(scalar_row("n" + std::to_string(n) + ".ratio", ratio));
    rep.lines.back().measured = "mass " + fmtv(mass) + ", ratio to (2/pi) "
                                "log n: " + fmtv(ratio);
    rep.lines.back().tolerance = "ratio in [0.9, 1.4]";
    rep.lines.back().pass = ok;
    rep.pass = rep.pass && ok;
  }
  direct_line(rep, "the ratio decreases toward 1 as n grows",
              decreasing ? "strictly decreasing" : "not decreasing",
              "strictly decreasing", decreasing);
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_gaussian_identities() {
  ReproReport rep;
  rep.id = "gaussian-identities";
  std::string acc = "instances=6;samples=300000;box=0.1sigma;seed=0xCAFE0007";
  std::mt19937_64 rng(0xCAFE0007u);
  std::normal_distribution<double> normal(0.0, 1.0);
  const uint64_t N = 300000;
  double worst_d = 0.0, worst_c = 0.0;
  bool ok = true;
  for (int inst = 0; inst < 6; ++inst) {
    size_t m = inst < 3 ? 1 : 2;
    size_t dim = m + 2 + size_t(rng() % (8 - m - 1));
    std::vector<double> span(m * dim), target(dim);
    for (double& x : span) x = normal(rng);
    for (double& x : target) x = normal(rng);
    double density = 0.0, cond = 0.0;
    chk_run(rpz_gauss_zero_density(span.data(), m, dim, &density), "oracle");
    chk_run(rpz_conditional_abs_moment(target.data(), span.data(), m, dim,
                                       &cond),
            "oracle");
    std::vector<double> hw(m);
    double vol = 1.0;
    for (size_t i = 0; i < m; ++i) {
      double s2 = 0.0;
      for (size_t j = 0; j < dim; ++j)
        s2 += span[i * dim + j] * span[i * dim + j];
      hw[i] = 0.1 * std::sqrt(s2);
      vol *= 2.0 * hw[i];
    }
    uint64_t hits = 0;
    double sum_abs = 0.0;
    std::vector<double> x(dim);
    for (uint64_t it = 0; it < N; ++it) {
      for (size_t j = 0; j < dim; ++j) x[j] = normal(rng);
      bool in = true;
      for (size_t i = 0; i < m && in; ++i) {
        double dot = 0.0;
        for (size_t j = 0; j < dim; ++j) dot += span[i * dim + j] * x[j];
        in = std::abs(dot) <= hw[i];
      }
      if (!in) continue;
      ++hits;
      double dot = 0.0;
      for (size_t j = 0; j < dim; ++j) dot += target[j] * x[j];
      sum_abs += std::abs(dot);
    }
    double p = double(hits) / double(N);
    double mc_density = p / vol;
    double se_density = std::sqrt(p * (1.0 - p) / double(N)) / vol;
    double dd = std::abs(density - mc_density);
    ok = ok && dd <= std::max(3.0 * se_density, 1e-3);
    worst_d = std::max(worst_d, dd / std::max(se_density, 1e-12));
    double mc_cond = sum_abs / double(hits);
    double dc = std::abs(cond - mc_cond);
    // crude se for |<t, x>| under the conditioned law
    double se_cond = mc_cond / std::sqrt(double(hits));
    ok = ok && dc <= std::max(3.0 * se_cond, 1e-3);
    worst_c = std::max(worst_c, dc / std::max(se_cond, 1e-12));
  }
  rep.rows.push_back(scalar_row("density_worst_pull", worst_d));
  rep.rows.push_back(scalar_row("conditional_worst_pull", worst_c));
  direct_line(rep,
              "joint zero density and conditional absolute moment match "
              "brute-force Monte Carlo on 6 gaussian instances",
              "worst pulls " + fmtv(worst_d) + " / " + fmtv(worst_c) + " se",
              "within 3 se or 1e-3", ok);
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_repulsion_profile() {
  ReproReport rep;
  rep.id = "repulsion-profile";
  std::string acc;
  const double bound = 1.0;
  for (double d : {0.2, 0.1, 0.05}) {
    json cfg2{{"scheme", scheme_j("flat", 100)},
              {"statistic",
               {{"kind", "oracle_point"},
                {"oracle", "rho2"},
                {"x", 5.0},
                {"delta", d}}}};
    json cfg01{{"scheme", scheme_j("flat", 100)},
               {"statistic",
                {{"kind", "oracle_point"},
                 {"oracle", "rho01"},
                 {"x", 5.0},
                 {"imag", d}}}};
    RunOutput o2 = run_sub(rep, acc, cfg2, "d" + fmtv(d),
                           "pair intensity rho2(5, 5+d)/d at d=" + fmtv(d));
    rep.lines.pop_back();  // replaced by the ratio line below
    RunOutput o01 = run_sub(rep, acc, cfg01, "d" + fmtv(d),
                            "planar intensity rho01(5+id)/d at d=" + fmtv(d));
    rep.lines.pop_back();
    double q2 = o2.rows.front().value / d;
    double q01 = o01.rows.front().value / d;
    bool ok = q2 > 0.0 && q2 <= bound && q01 > 0.0 && q01 <= bound &&
              std::isfinite(q2) && std::isfinite(q01);
    rep.rows.push_back(scalar_row("rho2_ratio_d" + fmtv(d), q2));
    rep.rows.push_back(scalar_row("rho01_ratio_d" + fmtv(d), q01));
    direct_line(rep,
                "near-axis repulsion at d=" + fmtv(d) +
                    ": rho2(5, 5+d)/d and rho01(5+id)/d vanish linearly",
                "ratios " + fmtv(q2) + " and " + fmtv(q01),
                "positive, bounded by " + fmtv(bound), ok);
  }
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_concentration() {
  ReproReport rep;
  rep.id = "concentration";
  std::string acc;
  {
    double c = 10.0 / std::sqrt(2.0);
    json cfg{{"scheme", scheme_j("flat", 400)},
             {"atom", {{"family", "gaussian_real"}}},
             {"trials", 400},
             {"master_seed", 49001},
             {"statistic",
              {{"kind", "concentration"},
               {"point", json::array({c, c})},
               {"threshold", 5.0}}},
             {"expect", {{"label", "exceed_fraction"}, {"max", 0.01}}}};
    run_sub(rep, acc, cfg, "flat",
            "log|f| concentrates around (1/2) log V at |z| = 10: "
            "|deviation| > 5 is rare");
  }
  {
    // Exact-zero frequency of the +-1 sum at z=1 against the local normal
    // approximation 2 / sqrt(2 pi (n+1)).
    const double target = 0.19947114020071635;
    json cfg{{"scheme", scheme_j("kac", 15)},
             {"atom", {{"family", "bernoulli"}}},
             {"trials", 100000},
             {"master_seed", 49002},
             {"statistic",
              {{"kind", "concentration"},
               {"point", json::array({1.0, 0.0})},
               {"threshold", 5.0}}},
             {"expect",
              {{"label", "zero_fraction"},
               {"min", 0.5 * target},
               {"max", 2.0 * target}}}};
    run_sub(rep, acc, cfg, "kac",
            "P(f(1) = 0) for the n=15 sign sum is within a factor 2 of the "
            "normal approximation " +
                fmtv(target));
  }
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_solver_identities() {
  ReproReport rep;
  rep.id = "solver-identities";
  std::string acc = "instances=100;enumsets=20;threads=1,4;seed=0x501DE7";
  std::mt19937_64 rng(0x501DE7u);
  const rpz_scheme_kind kinds[4] = {RPZ_SCHEME_FLAT, RPZ_SCHEME_ELLIPTIC,
                                    RPZ_SCHEME_ELLIPTIC_RESCALED,
                                    RPZ_SCHEME_KAC};
  const rpz_atom_family fams[4] = {RPZ_ATOM_GAUSSIAN_REAL,
                                   RPZ_ATOM_GAUSSIAN_COMPLEX,
                                   RPZ_ATOM_BERNOULLI, RPZ_ATOM_UNIFORM_REAL};
  double worst_res = 0.0, worst_sum = 0.0;
  bool solver_ok = true, conj_ok = true;
  for (int inst = 0; inst < 100; ++inst) {
    uint32_t n = 1 + uint32_t(rng() % 64);
    SchemeH s;
    chk_setup(rpz_scheme_create(kinds[rng() % 4], n, &s.p), "scheme");
    AtomH a;
    chk_setup(rpz_atom_create(fams[rng() % 4], &a.p), "atom");
    SampleH p;
    chk_run(rpz_sample_draw(s, a, 50001, uint64_t(inst), &p.p), "draw");
    RootsH r;
    rpz_status st = rpz_find_roots(p, 1e-10, 400, &r.p);
    if (st != RPZ_OK) {
      solver_ok = false;
      continue;
    }
    double res = rpz_rootset_residual_bound(r);
    worst_res = std::max(worst_res, res);
    solver_ok = solver_ok && res <= 1e-10;
    std::vector<rpz_complex> cf(n + 1);
    chk_run(rpz_sample_coefficients(p, cf.data(), cf.size()), "coefficients");
    size_t lo = 0, hi = n;
    while (cf[lo].re == 0.0 && cf[lo].im == 0.0) ++lo;
    while (cf[hi].re == 0.0 && cf[hi].im == 0.0) --hi;
    std::vector<rpz_complex> roots(rpz_rootset_finite_count(r));
    chk_run(rpz_rootset_finite_roots(r, roots.data(), roots.size()), "roots");
    if (hi - lo >= 1) {
      double sr = 0.0, si = 0.0;
      for (auto z : roots) {
        sr += z.re;
        si += z.im;
      }
      double cr = cf[hi].re, ci = cf[hi].im;
      double den = cr * cr + ci * ci;
      double wr = -(cf[hi - 1].re * cr + cf[hi - 1].im * ci) / den;
      double wi = -(cf[hi - 1].im * cr - cf[hi - 1].re * ci) / den;
      double err = std::hypot(sr - wr, si - wi) / (1.0 + std::hypot(wr, wi));
      worst_sum = std::max(worst_sum, err);
      solver_ok = solver_ok && err <= 1e-6;
    }
    if (rpz_atom_is_real(a)) {
      auto lex = [](const rpz_complex& u, const rpz_complex& v) {
        return u.re != v.re ? u.re < v.re : u.im < v.im;
      };
      std::vector<rpz_complex> conj = roots;
      for (auto& z : conj) z.im = (z.im == 0.0) ? 0.0 : -z.im;
      std::sort(conj.begin(), conj.end(), lex);
      std::vector<rpz_complex> sorted = roots;
      std::sort(sorted.begin(), sorted.end(), lex);
      conj_ok = conj_ok &&
                std::memcmp(sorted.data(), conj.data(),
                            sorted.size() * sizeof(rpz_complex)) == 0;
    }
  }
  rep.rows.push_back(scalar_row("worst_residual", worst_res));
  rep.rows.push_back(scalar_row("worst_root_sum_err", worst_sum));
  direct_line(rep,
              "100 random solves of degree <= 64 converge with small backward "
              "error and satisfy the root-sum identity",
              "worst residual " + fmtv(worst_res) + ", worst sum err " +
                  fmtv(worst_sum),
              "residual <= 1e-10, sum err <= 1e-6", solver_ok);
  direct_line(rep, "real-coefficient root sets are conjugation-symmetric",
              conj_ok ? "bitwise symmetric" : "asymmetry found",
              "bitwise equality after conjugation", conj_ok);

  // Distinct-index estimator against direct enumeration on fixed root sets.
  std::mt19937_64 rng2(0x501DE8u);
  auto uni = [&](double a2, double b2) {
    return a2 + (b2 - a2) * (double(rng2() >> 11) * 0x1.0p-53);
  };
  double worst_enum = 0.0;
  bool enum_ok = true;
  for (int t = 0; t < 20; ++t) {
    size_t k = 1 + size_t(t % 3);
    uint32_t deg = 8 + uint32_t(t % 17);
    std::vector<rpz_complex> cf(deg + 1);
    for (auto& c : cf) c = {uni(-1.0, 1.0), uni(-1.0, 1.0)};
    SourceH src;
    chk_setup(rpz_source_create_fixed(cf.data(), cf.size(), &src.p), "source");
    std::vector<KernelH> kh(k);
    std::vector<const rpz_kernel*> ks(k);
    for (size_t j = 0; j < k; ++j) {
      chk_setup(rpz_kernel_create_complex(
                    j % 2 ? RPZ_KERNEL_COSINE_BUMP : RPZ_KERNEL_GAUSSIAN_BUMP,
                    {uni(-1.5, 1.5), uni(-1.5, 1.5)}, 0.7, 1.5, 0, &kh[j].p),
                "kernel");
      ks[j] = kh[j].p;
    }
    rpz_estimate est{};
    chk_run(rpz_estimate_correlation(src, ks.data(), k, 2, 1, 1, &est),
            "correlation");
    SampleH p;
    chk_run(rpz_sample_fixed(cf.data(), cf.size(), &p.p), "sample");
    RootsH r;
    chk_run(rpz_find_roots(p, 1e-10, 400, &r.p), "roots");
    std::vector<rpz_complex> roots(rpz_rootset_finite_count(r));
    chk_run(rpz_rootset_finite_roots(r, roots.data(), roots.size()), "roots");
    std::vector<size_t> idx(k);
    double direct = 0.0;
    std::function<void(size_t, double)> rec = [&](size_t depth, double prod) {
      if (depth == k) {
        direct += prod;
        return;
      }
      for (size_t i = 0; i < roots.size(); ++i) {
        bool used = false;
        for (size_t d2 = 0; d2 < depth; ++d2) used = used || idx[d2] == i;
        if (used) continue;
        idx[depth] = i;
        double v = rpz_kernel_eval(ks[depth], roots[i]);
        if (v != 0.0) rec(depth + 1, prod * v);
      }
    };
    rec(0, 1.0);
    double err = std::abs(est.value - direct) / (1.0 + std::abs(direct));
    worst_enum = std::max(worst_enum, err);
    enum_ok = enum_ok && err <= 1e-9;
  }
  rep.rows.push_back(scalar_row("worst_enumeration_err", worst_enum));
  direct_line(rep,
              "the distinct-index correlation estimator equals direct tuple "
              "enumeration on 20 fixed root sets",
              "worst relative error " + fmtv(worst_enum), "<= 1e-9", enum_ok);

  // Thread invariance of the estimators.
  bool thread_ok = true;
  {
    SchemeH s;
    chk_setup(rpz_scheme_create(RPZ_SCHEME_FLAT, 100, &s.p), "scheme");
    AtomH a;
    chk_setup(rpz_atom_create(RPZ_ATOM_GAUSSIAN_REAL, &a.p), "atom");
    SourceH src;
    chk_setup(rpz_source_create_ensemble(s, a, &src.p), "source");
    rpz_estimate base{};
    for (uint32_t threads : {1u, 4u}) {
      rpz_estimate e{};
      chk_run(rpz_estimate_counts_interval(src, -1.0, 1.0, 48, 7001, threads,
                                           &e, nullptr),
              "counts");
      if (threads == 1)
        base = e;
      else
        thread_ok = std::memcmp(&e, &base, sizeof e) == 0;
    }
  }
  direct_line(rep, "estimates are byte-identical across thread counts",
              thread_ok ? "threads {1, 4} agree bitwise" : "bytes differ",
              "bitwise equality", thread_ok);
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_universality_gap() {
  ReproReport rep;
  rep.id = "universality-gap";
  std::string acc;
  json cfg{{"scheme", scheme_j("elliptic", 100)},
           {"atom", {{"family", "gaussian_real"}}},
           {"atom_b", {{"family", "bernoulli"}}},
           {"trials", 600},
           {"master_seed", 51001},
           {"statistic",
            {{"kind", "gap"},
             {"observable", {{"kind", "count_interval"}}}}},
           {"expect", {{"within_three_se", true}}}};
  run_sub(rep, acc, cfg, "",
          "gaussian and bernoulli coefficients give the same mean real-zero "
          "count (universality)");
  finish_digest(rep, acc);
  return rep;
}

ReproReport repro_kac_edge() {
  ReproReport rep;
  rep.id = "kac-edge";
  std::string acc = "n=4000;stencil=1e-6;points=0.2,0.7,2.0";
  SchemeH s;
  chk_setup(rpz_scheme_create(RPZ_SCHEME_KAC, 4000, &s.p), "scheme");
  const double n = 4000.0;
  for (double a : {0.2, 0.7, 2.0}) {
    double profile = 0.0, intensity = 0.0;
    chk_run(rpz_kac_edge_profile(a, &profile), "edge profile");
    chk_run(rpz_predicted_complex_intensity(s, {1.0 + a / n, 0.0}, 1e-6,
                                            &intensity),
            "predicted intensity");
    double scaled = intensity / (n * n);
    double rel = std::abs(scaled - profile) / profile;
    bool ok = rel < 5e-3;
    rep.rows.push_back(scalar_row("F_a" + fmtv(a), profile));
    rep.rows.push_back(scalar_row("scaled_intensity_a" + fmtv(a), scaled));
    direct_line(rep,
                "the rescaled planar intensity at radius 1 + a/n matches the "
                "edge profile F(a) at a=" + fmtv(a),
                "F = " + fmtv(profile) + ", n^-2 intensity = " + fmtv(scaled),
                "relative error < 5e-3", ok);
  }
  finish_digest(rep, acc);
  return rep;
}

struct RegistryRow {
  const char* id;
  const char* summary;
  ReproReport (*run)();
};

const RegistryRow kRegistry[] = {
    {"elliptic-exact",
     "exact total real-zero mass of the rescaled family equals sqrt(n)",
     repro_elliptic_exact},
    {"elliptic-count",
     "Monte Carlo mean real-zero count at elliptic n=100 equals 10",
     repro_elliptic_count},
    {"flat-real-count",
     "mean real-zero count of the flat family at n=400, both atoms",
     repro_flat_real_count},
    {"flat-bulk-intensity",
     "flat bulk real intensity is 1/pi and matches kernel-smoothed counts",
     repro_flat_bulk_intensity},
    {"circular-law",
     "zeros of the flat family cluster inside the critical disk",
     repro_circular_law},
    {"kac-log-growth",
     "unit-coefficient real-zero mass grows like (2/pi) log n",
     repro_kac_log_growth},
    {"gaussian-identities",
     "gaussian zero-density and conditional-moment formulas match Monte Carlo",
     repro_gaussian_identities},
    {"repulsion-profile",
     "pair and planar intensities vanish linearly near the real axis",
     repro_repulsion_profile},
    {"concentration",
     "log-magnitude concentration and the exact-zero frequency of sign sums",
     repro_concentration},
    {"solver-identities",
     "solver residual/Vieta/conjugation checks, enumeration equality, thread "
     "invariance",
     repro_solver_identities},
    {"universality-gap",
     "count observables agree across atoms with matching moments",
     repro_universality_gap},
    {"kac-edge",
     "rescaled planar intensity near the unit circle follows the edge profile",
     repro_kac_edge},
};

}  // namespace

std::vector<RegistryEntry> registry_entries() {
  std::vector<RegistryEntry> out;
  for (const auto& r : kRegistry) out.push_back({r.id, r.summary});
  return out;
}

ReproReport reproduce(const std::string& id) {
  for (const auto& r : kRegistry)
    if (id == r.id) return r.run();
  std::string known;
  for (const auto& r : kRegistry) known += std::string("\n  ") + r.id;
  throw ConfigError("id", "unknown experiment \"" + id +
                              "\"; available ids:" + known);
}

}  // namespace cli
