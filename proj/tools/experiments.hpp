// SPDX-License-Identifier: MIT
// Statistic execution over the public C API plus the reproduction registry
// of canned experiments with published seeds.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace cli {

// Library failure during evaluation (maps to exit code 3).
struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOutput {
  std::vector<Row> rows;      // labeled scalar results
  std::vector<GridRow> grid;  // curve results (oracle_grid / edge_profile)
  bool pass = true;           // verdict against the declared expectation
  std::string verdict;        // human-readable expectation outcome
};

RunOutput run_config(const Config& cfg);

// One draw from the configured ensemble (trial index 0 of master_seed).
struct SampleOutput {
  std::vector<rpz_complex> coeffs;  // n+1 stored coefficients, a_0 first
  double log_scale = 0.0;           // f = exp(log_scale) * sum coeffs[i] z^i
};
SampleOutput draw_sample(const Config& cfg);

// Draw + solve + (for real atoms) real/complex classification.
struct RootsOutput {
  std::vector<ScatterPoint> points;  // finite roots, on_axis = real zero
  size_t real_count = 0;
  size_t upper_count = 0;            // strictly-complex conjugate pairs
  uint32_t infinity_count = 0;
  double residual = 0.0;             // scale-free backward error bound
  bool classified = false;
};
RootsOutput solve_roots(const Config& cfg);

struct ReproLine {
  std::string claim;
  std::string measured;
  std::string tolerance;
  bool pass = true;
};

struct ReproReport {
  std::string id;
  std::vector<ReproLine> lines;
  std::vector<Row> rows;  // CSV rows for the record
  std::string digest;     // digest of the canned configuration bundle
  bool pass = true;
};

struct RegistryEntry {
  const char* id;
  const char* summary;
};

std::vector<RegistryEntry> registry_entries();
// Throws ConfigError (field "id") when the id is unknown.
ReproReport reproduce(const std::string& id);

}  // namespace cli
