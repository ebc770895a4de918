// SPDX-License-Identifier: MIT
#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  throw ConfigError(field, msg);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(path, "must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      bad(path + "." + it.key(), "unknown field");
}

const json& req(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing required field");
  return *it;
}

double num(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "must be a number");
  return j.get<double>();
}

// A number, or the strings "inf" / "+inf" / "-inf" (JSON has no infinities).
double num_or_inf(const json& j, const std::string& field) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    bad(field, "string value must be \"inf\", \"+inf\" or \"-inf\"");
  }
  return num(j, field);
}

uint64_t uint_field(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer() && j.get<int64_t>() >= 0)
    return uint64_t(j.get<int64_t>());
  bad(field, "must be a nonnegative integer");
}

rpz_complex complex_field(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2)
    bad(field, "must be a number or an [re, im] pair");
  return {num(j[0], field + "[0]"), num(j[1], field + "[1]")};
}

json complex_json(rpz_complex z) { return json::array({z.re, z.im}); }

json inf_json(double v) {
  if (v == HUGE_VAL) return "inf";
  if (v == -HUGE_VAL) return "-inf";
  return v;
}

template <class T>
T enum_field(const json& j, const std::string& field,
             const std::map<std::string, T>& table) {
  if (!j.is_string()) bad(field, "must be a string");
  std::string s = j.get<std::string>();
  auto it = table.find(s);
  if (it == table.end()) {
    std::string options;
    for (const auto& [k, v] : table) options += (options.empty() ? "" : ", ") + k;
    bad(field, "unknown value \"" + s + "\" (expected one of: " + options + ")");
  }
  return it->second;
}

const std::map<std::string, rpz_scheme_kind> kSchemeKinds = {
    {"flat", RPZ_SCHEME_FLAT},
    {"elliptic", RPZ_SCHEME_ELLIPTIC},
    {"elliptic_rescaled", RPZ_SCHEME_ELLIPTIC_RESCALED},
    {"kac", RPZ_SCHEME_KAC},
    {"hyperbolic", RPZ_SCHEME_HYPERBOLIC},
    {"custom", RPZ_SCHEME_CUSTOM},
};
const std::map<std::string, rpz_atom_family> kAtomFamilies = {
    {"gaussian_real", RPZ_ATOM_GAUSSIAN_REAL},
    {"gaussian_complex", RPZ_ATOM_GAUSSIAN_COMPLEX},
    {"bernoulli", RPZ_ATOM_BERNOULLI},
    {"uniform_real", RPZ_ATOM_UNIFORM_REAL},
    {"uniform_complex_disk", RPZ_ATOM_UNIFORM_COMPLEX_DISK},
    {"custom_discrete", RPZ_ATOM_CUSTOM_DISCRETE},
};
const std::map<std::string, rpz_kernel_kind> kKernelKinds = {
    {"gaussian_bump", RPZ_KERNEL_GAUSSIAN_BUMP},
    {"cosine_bump", RPZ_KERNEL_COSINE_BUMP},
    {"indicator_soft", RPZ_KERNEL_INDICATOR_SOFT},
};
const std::map<std::string, rpz_observable_kind> kObservableKinds = {
    {"count_interval", RPZ_OBS_COUNT_INTERVAL},
    {"count_disk", RPZ_OBS_COUNT_DISK},
    {"linear_statistic", RPZ_OBS_LINEAR_STATISTIC},
    {"log_abs", RPZ_OBS_LOG_ABS},
};

std::string scheme_kind_name(rpz_scheme_kind k) {
  for (const auto& [name, v] : kSchemeKinds)
    if (v == k) return name;
  return "?";
}
std::string atom_family_name(rpz_atom_family f) {
  for (const auto& [name, v] : kAtomFamilies)
    if (v == f) return name;
  return "?";
}
std::string kernel_kind_name(rpz_kernel_kind k) {
  for (const auto& [name, v] : kKernelKinds)
    if (v == k) return name;
  return "?";
}
std::string observable_kind_name(rpz_observable_kind k) {
  for (const auto& [name, v] : kObservableKinds)
    if (v == k) return name;
  return "?";
}

SchemeSpec parse_scheme(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "n", "L", "log_coeffs"});
  SchemeSpec s;
  s.kind = enum_field(req(j, path, "kind"), path + ".kind", kSchemeKinds);
  uint64_t n = uint_field(req(j, path, "n"), path + ".n");
  if (n < 1 || n > 0xffffffffu) bad(path + ".n", "must be in [1, 2^32)");
  s.n = uint32_t(n);
  if (s.kind == RPZ_SCHEME_HYPERBOLIC) {
    s.L = num(req(j, path, "L"), path + ".L");
    if (!(s.L > 0.0)) bad(path + ".L", "must be positive");
  } else if (j.count("L")) {
    bad(path + ".L", "only valid for the hyperbolic scheme");
  }
  if (s.kind == RPZ_SCHEME_CUSTOM) {
    const json& lc = req(j, path, "log_coeffs");
    if (!lc.is_array() || lc.size() != size_t(s.n) + 1)
      bad(path + ".log_coeffs", "must be an array of length n + 1");
    for (size_t i = 0; i < lc.size(); ++i)
      s.log_coeffs.push_back(num_or_inf(
          lc[i], path + ".log_coeffs[" + std::to_string(i) + "]"));
  } else if (j.count("log_coeffs")) {
    bad(path + ".log_coeffs", "only valid for the custom scheme");
  }
  return s;
}

AtomSpec parse_atom(const json& j, const std::string& path) {
  check_keys(j, path, {"family", "values", "weights"});
  AtomSpec a;
  a.family = enum_field(req(j, path, "family"), path + ".family",
                        kAtomFamilies);
  if (a.family == RPZ_ATOM_CUSTOM_DISCRETE) {
    const json& vals = req(j, path, "values");
    const json& wts = req(j, path, "weights");
    if (!vals.is_array() || vals.empty())
      bad(path + ".values", "must be a nonempty array");
    if (!wts.is_array() || wts.size() != vals.size())
      bad(path + ".weights", "must match values in length");
    for (size_t i = 0; i < vals.size(); ++i) {
      a.values.push_back(complex_field(
          vals[i], path + ".values[" + std::to_string(i) + "]"));
      double w = num(wts[i], path + ".weights[" + std::to_string(i) + "]");
      if (!(w > 0.0))
        bad(path + ".weights[" + std::to_string(i) + "]", "must be positive");
      a.weights.push_back(w);
    }
  } else if (j.count("values") || j.count("weights")) {
    bad(path + ".values", "only valid for the custom_discrete family");
  }
  return a;
}

KernelSpec parse_kernel(const json& j, const std::string& path,
                        bool want_complex) {
  check_keys(j, path,
             {"kind", "center", "bandwidth", "support_radius", "unit_mass"});
  KernelSpec k;
  k.kind = enum_field(req(j, path, "kind"), path + ".kind", kKernelKinds);
  const json& c = req(j, path, "center");
  if (c.is_array()) {
    k.complex_center = true;
    k.center_z = complex_field(c, path + ".center");
  } else {
    k.complex_center = false;
    k.center_x = num(c, path + ".center");
  }
  if (k.complex_center != want_complex)
    bad(path + ".center",
        want_complex ? "must be an [re, im] pair for a planar kernel"
                     : "must be a real number for an axis kernel");
  k.bandwidth = num(req(j, path, "bandwidth"), path + ".bandwidth");
  if (!(k.bandwidth > 0.0)) bad(path + ".bandwidth", "must be positive");
  k.support_radius =
      num(req(j, path, "support_radius"), path + ".support_radius");
  if (!(k.support_radius > 0.0))
    bad(path + ".support_radius", "must be positive");
  if (j.count("unit_mass")) {
    if (!j["unit_mass"].is_boolean())
      bad(path + ".unit_mass", "must be a boolean");
    k.unit_mass = j["unit_mass"].get<bool>();
  }
  return k;
}

std::vector<KernelSpec> parse_kernel_array(const json& j,
                                           const std::string& path,
                                           bool want_complex, size_t min_len) {
  if (!j.is_array() || j.size() < min_len || j.size() > 4)
    bad(path, "must be an array of " + std::to_string(min_len) +
                  " to 4 kernels");
  std::vector<KernelSpec> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_kernel(j[i], path + "[" + std::to_string(i) + "]",
                               want_complex));
  return out;
}

ObservableSpec parse_observable(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "a", "b", "center", "radius", "kernel"});
  ObservableSpec o;
  o.kind = enum_field(req(j, path, "kind"), path + ".kind", kObservableKinds);
  switch (o.kind) {
    case RPZ_OBS_COUNT_INTERVAL:
      o.a = j.count("a") ? num_or_inf(j["a"], path + ".a") : -HUGE_VAL;
      o.b = j.count("b") ? num_or_inf(j["b"], path + ".b") : HUGE_VAL;
      if (!(o.a <= o.b)) bad(path + ".a", "must satisfy a <= b");
      break;
    case RPZ_OBS_COUNT_DISK:
      o.center = j.count("center")
                     ? complex_field(j["center"], path + ".center")
                     : rpz_complex{0.0, 0.0};
      o.radius = num(req(j, path, "radius"), path + ".radius");
      if (!(o.radius > 0.0)) bad(path + ".radius", "must be positive");
      break;
    case RPZ_OBS_LINEAR_STATISTIC: {
      const json& k = req(j, path, "kernel");
      bool complex_center = k.is_object() && k.count("center") &&
                            (*k.find("center")).is_array();
      o.kernel = parse_kernel(k, path + ".kernel", complex_center);
      break;
    }
    case RPZ_OBS_LOG_ABS:
      o.center = complex_field(req(j, path, "center"), path + ".center");
      break;
  }
  return o;
}

GridSpec parse_grid(const json& j, const std::string& path) {
  check_keys(j, path, {"from", "to", "points"});
  GridSpec g;
  g.from = num(req(j, path, "from"), path + ".from");
  g.to = num(req(j, path, "to"), path + ".to");
  uint64_t p = uint_field(req(j, path, "points"), path + ".points");
  if (p < 1 || p > 100000) bad(path + ".points", "must be in [1, 100000]");
  if (!(g.from <= g.to)) bad(path + ".from", "must satisfy from <= to");
  g.points = uint32_t(p);
  return g;
}

const std::set<std::string> kOracleNames = {"rho10", "rho01", "rho2",
                                            "predicted", "log_variance"};

StatisticSpec parse_statistic(const json& j, const std::string& path) {
  check_keys(j, path,
             {"kind", "a", "b", "center", "radius", "kernels", "real_kernels",
              "upper_kernels", "point", "threshold", "observable", "oracle",
              "grid", "x", "imag", "delta", "stencil", "rel_tol", "mc_trials",
              "mc_bandwidth"});
  StatisticSpec st;
  const json& kj = req(j, path, "kind");
  if (!kj.is_string()) bad(path + ".kind", "must be a string");
  st.kind = kj.get<std::string>();

  auto reject = [&](const char* key, const json& owner) {
    if (owner.count(key))
      bad(path + "." + key, "not valid for statistic kind " + st.kind);
  };
  auto reject_all_but = [&](const std::set<std::string>& keep) {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "kind" && !keep.count(it.key()))
        bad(path + "." + it.key(), "not valid for statistic kind " + st.kind);
  };

  if (st.kind == "counts_interval") {
    reject_all_but({"a", "b"});
    st.a = j.count("a") ? num_or_inf(j["a"], path + ".a") : -HUGE_VAL;
    st.b = j.count("b") ? num_or_inf(j["b"], path + ".b") : HUGE_VAL;
    if (!(st.a <= st.b)) bad(path + ".a", "must satisfy a <= b");
  } else if (st.kind == "counts_disk") {
    reject_all_but({"center", "radius"});
    st.center = j.count("center")
                    ? complex_field(j["center"], path + ".center")
                    : rpz_complex{0.0, 0.0};
    st.radius = num(req(j, path, "radius"), path + ".radius");
    if (!(st.radius > 0.0)) bad(path + ".radius", "must be positive");
  } else if (st.kind == "correlation") {
    reject_all_but({"kernels"});
    st.kernels =
        parse_kernel_array(req(j, path, "kernels"), path + ".kernels",
                           /*want_complex=*/true, 1);
  } else if (st.kind == "mixed_correlation") {
    reject_all_but({"real_kernels", "upper_kernels"});
    if (j.count("real_kernels"))
      st.real_kernels = parse_kernel_array(j["real_kernels"],
                                           path + ".real_kernels",
                                           /*want_complex=*/false, 1);
    if (j.count("upper_kernels"))
      st.upper_kernels = parse_kernel_array(j["upper_kernels"],
                                            path + ".upper_kernels",
                                            /*want_complex=*/true, 1);
    if (st.real_kernels.empty() && st.upper_kernels.empty())
      bad(path + ".real_kernels",
          "at least one of real_kernels / upper_kernels is required");
  } else if (st.kind == "concentration") {
    reject_all_but({"point", "threshold"});
    st.point = complex_field(req(j, path, "point"), path + ".point");
    st.threshold = num(req(j, path, "threshold"), path + ".threshold");
    if (!(st.threshold > 0.0)) bad(path + ".threshold", "must be positive");
  } else if (st.kind == "gap") {
    reject_all_but({"observable"});
    st.observable =
        parse_observable(req(j, path, "observable"), path + ".observable");
  } else if (st.kind == "oracle_grid" || st.kind == "oracle_point") {
    bool grid = st.kind == "oracle_grid";
    reject_all_but(grid ? std::set<std::string>{"oracle", "grid", "imag",
                                                "delta", "stencil",
                                                "mc_trials", "mc_bandwidth"}
                        : std::set<std::string>{"oracle", "x", "imag", "delta",
                                                "stencil"});
    const json& oj = req(j, path, "oracle");
    if (!oj.is_string() || !kOracleNames.count(oj.get<std::string>()))
      bad(path + ".oracle",
          "must be one of: log_variance, predicted, rho01, rho10, rho2");
    st.oracle = oj.get<std::string>();
    if (grid)
      st.grid = parse_grid(req(j, path, "grid"), path + ".grid");
    else
      st.x = num(req(j, path, "x"), path + ".x");
    if (j.count("imag")) st.imag = num(j["imag"], path + ".imag");
    if (j.count("delta")) {
      st.delta = num(j["delta"], path + ".delta");
      if (!(st.delta > 0.0)) bad(path + ".delta", "must be positive");
    }
    if (j.count("stencil")) {
      st.stencil = num(j["stencil"], path + ".stencil");
      if (st.stencil < 0.0) bad(path + ".stencil", "must be nonnegative");
    }
    if (st.oracle != "rho2") reject("delta", j);
    if (st.oracle != "predicted") reject("stencil", j);
    if (j.count("mc_trials")) {
      if (st.oracle != "rho10")
        bad(path + ".mc_trials", "overlay is only defined for rho10");
      st.mc_trials = uint_field(j["mc_trials"], path + ".mc_trials");
      if (st.mc_trials < 1) bad(path + ".mc_trials", "must be >= 1");
    }
    if (j.count("mc_bandwidth")) {
      st.mc_bandwidth = num(j["mc_bandwidth"], path + ".mc_bandwidth");
      if (!(st.mc_bandwidth > 0.0))
        bad(path + ".mc_bandwidth", "must be positive");
    }
  } else if (st.kind == "oracle_integral_real_intensity") {
    reject_all_but({"a", "b", "rel_tol"});
    st.a = j.count("a") ? num_or_inf(j["a"], path + ".a") : -HUGE_VAL;
    st.b = j.count("b") ? num_or_inf(j["b"], path + ".b") : HUGE_VAL;
    if (!(st.a <= st.b)) bad(path + ".a", "must satisfy a <= b");
    if (j.count("rel_tol")) {
      st.rel_tol = num(j["rel_tol"], path + ".rel_tol");
      if (!(st.rel_tol > 0.0)) bad(path + ".rel_tol", "must be positive");
    }
  } else if (st.kind == "edge_profile") {
    reject_all_but({"grid"});
    st.grid = parse_grid(req(j, path, "grid"), path + ".grid");
    if (st.grid.from < 0.0) bad(path + ".grid.from", "must be >= 0");
  } else {
    bad(path + ".kind",
        "unknown statistic \"" + st.kind +
            "\" (expected one of: concentration, correlation, counts_disk, "
            "counts_interval, edge_profile, gap, mixed_correlation, "
            "oracle_grid, oracle_integral_real_intensity, oracle_point)");
  }
  return st;
}

Expect parse_expect(const json& j, const std::string& path) {
  check_keys(j, path, {"value", "abs_tol", "rel_tol", "min", "max", "three_se",
                       "within_three_se", "label"});
  Expect e;
  if (j.count("value")) e.value = num(j["value"], path + ".value");
  if (j.count("abs_tol")) {
    e.abs_tol = num(j["abs_tol"], path + ".abs_tol");
    if (!(*e.abs_tol > 0.0)) bad(path + ".abs_tol", "must be positive");
  }
  if (j.count("rel_tol")) {
    e.rel_tol = num(j["rel_tol"], path + ".rel_tol");
    if (!(*e.rel_tol > 0.0)) bad(path + ".rel_tol", "must be positive");
  }
  if (j.count("min")) e.min = num(j["min"], path + ".min");
  if (j.count("max")) e.max = num(j["max"], path + ".max");
  if (j.count("three_se")) {
    if (!j["three_se"].is_boolean()) bad(path + ".three_se", "must be a boolean");
    e.three_se = j["three_se"].get<bool>();
  }
  if (j.count("within_three_se")) {
    if (!j["within_three_se"].is_boolean())
      bad(path + ".within_three_se", "must be a boolean");
    e.within_three_se = j["within_three_se"].get<bool>();
  }
  if (j.count("label")) {
    if (!j["label"].is_string()) bad(path + ".label", "must be a string");
    e.label = j["label"].get<std::string>();
  }
  bool targeted = e.abs_tol || e.rel_tol || e.three_se;
  if (targeted && !e.value)
    bad(path + ".value", "required by abs_tol / rel_tol / three_se");
  if (!targeted && !e.min && !e.max && !e.within_three_se)
    bad(path, "declares no check");
  return e;
}

json scheme_json(const SchemeSpec& s) {
  json j{{"kind", scheme_kind_name(s.kind)}, {"n", s.n}};
  if (s.kind == RPZ_SCHEME_HYPERBOLIC) j["L"] = s.L;
  if (s.kind == RPZ_SCHEME_CUSTOM) {
    json lc = json::array();
    for (double v : s.log_coeffs) lc.push_back(inf_json(v));
    j["log_coeffs"] = lc;
  }
  return j;
}

json atom_json(const AtomSpec& a) {
  json j{{"family", atom_family_name(a.family)}};
  if (a.family == RPZ_ATOM_CUSTOM_DISCRETE) {
    json vals = json::array(), wts = json::array();
    for (auto v : a.values) vals.push_back(complex_json(v));
    for (double w : a.weights) wts.push_back(w);
    j["values"] = vals;
    j["weights"] = wts;
  }
  return j;
}

json kernel_json(const KernelSpec& k) {
  json j{{"kind", kernel_kind_name(k.kind)},
         {"bandwidth", k.bandwidth},
         {"support_radius", k.support_radius},
         {"unit_mass", k.unit_mass}};
  j["center"] = k.complex_center ? complex_json(k.center_z) : json(k.center_x);
  return j;
}

json observable_json(const ObservableSpec& o) {
  json j{{"kind", observable_kind_name(o.kind)}};
  switch (o.kind) {
    case RPZ_OBS_COUNT_INTERVAL:
      j["a"] = inf_json(o.a);
      j["b"] = inf_json(o.b);
      break;
    case RPZ_OBS_COUNT_DISK:
      j["center"] = complex_json(o.center);
      j["radius"] = o.radius;
      break;
    case RPZ_OBS_LINEAR_STATISTIC:
      j["kernel"] = kernel_json(*o.kernel);
      break;
    case RPZ_OBS_LOG_ABS:
      j["center"] = complex_json(o.center);
      break;
  }
  return j;
}

json statistic_json(const StatisticSpec& st) {
  json j{{"kind", st.kind}};
  auto kernel_array = [](const std::vector<KernelSpec>& ks) {
    json a = json::array();
    for (const auto& k : ks) a.push_back(kernel_json(k));
    return a;
  };
  if (st.kind == "counts_interval" ||
      st.kind == "oracle_integral_real_intensity") {
    j["a"] = inf_json(st.a);
    j["b"] = inf_json(st.b);
    if (st.kind == "oracle_integral_real_intensity") j["rel_tol"] = st.rel_tol;
  } else if (st.kind == "counts_disk") {
    j["center"] = complex_json(st.center);
    j["radius"] = st.radius;
  } else if (st.kind == "correlation") {
    j["kernels"] = kernel_array(st.kernels);
  } else if (st.kind == "mixed_correlation") {
    if (!st.real_kernels.empty()) j["real_kernels"] = kernel_array(st.real_kernels);
    if (!st.upper_kernels.empty())
      j["upper_kernels"] = kernel_array(st.upper_kernels);
  } else if (st.kind == "concentration") {
    j["point"] = complex_json(st.point);
    j["threshold"] = st.threshold;
  } else if (st.kind == "gap") {
    j["observable"] = observable_json(*st.observable);
  } else if (st.kind == "oracle_grid" || st.kind == "oracle_point") {
    j["oracle"] = st.oracle;
    if (st.kind == "oracle_grid")
      j["grid"] = json{{"from", st.grid.from},
                       {"to", st.grid.to},
                       {"points", st.grid.points}};
    else
      j["x"] = st.x;
    if (st.oracle == "rho01" || st.oracle == "predicted" ||
        st.oracle == "log_variance")
      j["imag"] = st.imag;
    if (st.oracle == "rho2") j["delta"] = st.delta;
    if (st.oracle == "predicted") j["stencil"] = st.stencil;
    if (st.mc_trials > 0) {
      j["mc_trials"] = st.mc_trials;
      j["mc_bandwidth"] = st.mc_bandwidth;
    }
  } else if (st.kind == "edge_profile") {
    j["grid"] = json{{"from", st.grid.from},
                     {"to", st.grid.to},
                     {"points", st.grid.points}};
  }
  return j;
}

json expect_json(const Expect& e) {
  json j = json::object();
  if (e.value) j["value"] = *e.value;
  if (e.abs_tol) j["abs_tol"] = *e.abs_tol;
  if (e.rel_tol) j["rel_tol"] = *e.rel_tol;
  if (e.min) j["min"] = *e.min;
  if (e.max) j["max"] = *e.max;
  if (e.three_se) j["three_se"] = true;
  if (e.within_three_se) j["within_three_se"] = true;
  if (!e.label.empty()) j["label"] = e.label;
  return j;
}

}  // namespace

bool statistic_needs_trials(const std::string& kind) {
  return kind == "counts_interval" || kind == "counts_disk" ||
         kind == "correlation" || kind == "mixed_correlation" ||
         kind == "concentration" || kind == "gap";
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Config parse_config(const nlohmann::json& j) {
  check_keys(j, "config",
             {"scheme", "atom", "atom_b", "trials", "master_seed", "threads",
              "solver", "statistic", "expect", "out"});
  Config c;
  c.scheme = parse_scheme(req(j, "config", "scheme"), "scheme");
  if (j.count("atom")) c.atom = parse_atom(j["atom"], "atom");
  if (j.count("atom_b")) c.atom_b = parse_atom(j["atom_b"], "atom_b");
  if (j.count("trials")) {
    c.trials = uint_field(j["trials"], "trials");
    if (c.trials < 1) bad("trials", "must be >= 1");
  }
  if (j.count("master_seed"))
    c.master_seed = uint_field(j["master_seed"], "master_seed");
  if (j.count("threads")) {
    uint64_t t = uint_field(j["threads"], "threads");
    if (t > 1024) bad("threads", "must be in [0, 1024]");
    c.threads = uint32_t(t);
  }
  if (j.count("solver")) {
    const json& s = j["solver"];
    check_keys(s, "solver", {"rel_tol", "max_iters"});
    if (s.count("rel_tol")) {
      c.solver_rel_tol = num(s["rel_tol"], "solver.rel_tol");
      if (!(c.solver_rel_tol > 0.0 && c.solver_rel_tol <= 1e-6))
        bad("solver.rel_tol", "must be in (0, 1e-6]");
    }
    if (s.count("max_iters")) {
      uint64_t it = uint_field(s["max_iters"], "solver.max_iters");
      if (it < 1 || it > 1000000) bad("solver.max_iters", "must be in [1, 1e6]");
      c.solver_max_iters = uint32_t(it);
    }
  }
  c.statistic = parse_statistic(req(j, "config", "statistic"), "statistic");
  if (j.count("expect")) c.expect = parse_expect(j["expect"], "expect");
  if (j.count("out")) {
    if (!j["out"].is_string()) bad("out", "must be a string");
    c.out_dir = j["out"].get<std::string>();
  }

  if (statistic_needs_trials(c.statistic.kind) && c.trials == 0)
    bad("trials", "required (>= 1) for statistic kind " + c.statistic.kind);
  if (c.statistic.kind == "gap" && !c.atom_b)
    bad("atom_b", "required for the gap statistic");
  if (c.statistic.kind == "oracle_grid" && c.statistic.mc_trials > 0)
    c.trials = std::max<uint64_t>(c.trials, 1);  // overlay draws its own trials

  // Effective configuration with defaults materialized; key order is the
  // canonical (sorted) order, so the dump below is the canonical form.
  json canon{{"scheme", scheme_json(c.scheme)},
             {"atom", atom_json(c.atom)},
             {"master_seed", c.master_seed},
             {"solver", json{{"rel_tol", c.solver_rel_tol},
                             {"max_iters", c.solver_max_iters}}},
             {"statistic", statistic_json(c.statistic)}};
  if (c.atom_b) canon["atom_b"] = atom_json(*c.atom_b);
  if (c.trials > 0) canon["trials"] = c.trials;
  if (c.expect) canon["expect"] = expect_json(*c.expect);
  c.canonical = canon;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                (unsigned long long)fnv1a64(canon.dump()));
  c.digest = hex;
  return c;
}

nlohmann::json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("config", "cannot open file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad("config", std::string("parse error in ") + path + ": " + e.what());
  }
}

Config load_config_file(const std::string& path) {
  return parse_config(load_config_json(path));
}

}  // namespace cli
