// SPDX-License-Identifier: MIT
// Experiment configuration: JSON parsing with field-naming errors, default
// materialization, canonical serialization, and a stable digest. The digest
// covers everything that determines results; output paths and thread counts
// are excluded so replayed runs compare byte-identical.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpz/rpz.h"

namespace cli {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field(field) {}
  std::string field;
};

struct SchemeSpec {
  rpz_scheme_kind kind = RPZ_SCHEME_KAC;
  uint32_t n = 0;
  double L = 0.0;                  // hyperbolic only
  std::vector<double> log_coeffs;  // custom only, length n+1
};

struct AtomSpec {
  rpz_atom_family family = RPZ_ATOM_GAUSSIAN_REAL;
  std::vector<rpz_complex> values;  // custom_discrete only
  std::vector<double> weights;
};

struct KernelSpec {
  rpz_kernel_kind kind = RPZ_KERNEL_GAUSSIAN_BUMP;
  bool complex_center = false;
  double center_x = 0.0;
  rpz_complex center_z{0.0, 0.0};
  double bandwidth = 0.0;
  double support_radius = 0.0;
  bool unit_mass = false;
};

struct ObservableSpec {
  rpz_observable_kind kind = RPZ_OBS_COUNT_INTERVAL;
  double a = 0.0, b = 0.0;
  rpz_complex center{0.0, 0.0};
  double radius = 0.0;
  std::optional<KernelSpec> kernel;
};

struct GridSpec {
  double from = 0.0, to = 0.0;
  uint32_t points = 0;
};

// Declared expectation against the primary (or named) result row.
struct Expect {
  std::optional<double> value;    // target for abs_tol / rel_tol / three_se
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
  std::optional<double> min;
  std::optional<double> max;
  bool three_se = false;           // |row - value| <= 3 * row std error
  bool within_three_se = false;    // gap statistic's built-in verdict
  std::string label;               // row to test; empty = first row
};

struct StatisticSpec {
  std::string kind;
  // counts_interval / oracle_integral_real_intensity
  double a = -HUGE_VAL, b = HUGE_VAL;
  // counts_disk
  rpz_complex center{0.0, 0.0};
  double radius = 0.0;
  // correlation / mixed_correlation
  std::vector<KernelSpec> kernels;
  std::vector<KernelSpec> real_kernels;
  std::vector<KernelSpec> upper_kernels;
  // concentration
  rpz_complex point{0.0, 0.0};
  double threshold = 0.0;
  // gap
  std::optional<ObservableSpec> observable;
  // oracle_grid / oracle_point / edge_profile
  std::string oracle;  // rho10, rho01, rho2, predicted, log_variance
  GridSpec grid;
  double x = 0.0;       // oracle_point abscissa
  double imag = 0.0;    // vertical offset for rho01 / predicted / log_variance
  double delta = 0.1;   // pair separation for rho2
  double stencil = 0.0; // Laplacian step for predicted (0 = library default)
  double rel_tol = 1e-9;
  // optional Monte Carlo overlay for oracle_grid rho10
  uint64_t mc_trials = 0;
  double mc_bandwidth = 0.5;
};

struct Config {
  SchemeSpec scheme;
  AtomSpec atom;                 // default gaussian_real when omitted
  std::optional<AtomSpec> atom_b;
  uint64_t trials = 0;           // required >= 1 for sampling statistics
  uint64_t master_seed = 0;
  uint32_t threads = 0;          // excluded from the digest
  double solver_rel_tol = 1e-10;
  uint32_t solver_max_iters = 400;
  StatisticSpec statistic;
  std::optional<Expect> expect;
  std::string out_dir;           // excluded from the digest

  nlohmann::json canonical;      // effective config, defaults materialized
  std::string digest;            // 16 hex digits, FNV-1a over canonical dump
};

// Parses and validates; throws ConfigError naming the offending field.
Config parse_config(const nlohmann::json& j);
nlohmann::json load_config_json(const std::string& path);
Config load_config_file(const std::string& path);

// True when the statistic draws samples (and therefore requires trials).
bool statistic_needs_trials(const std::string& kind);

uint64_t fnv1a64(const std::string& bytes);

}  // namespace cli
