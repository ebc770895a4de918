// SPDX-License-Identifier: MIT
// Command-line front end. Every command reads a JSON experiment config,
// writes CSV results plus an append-only run record into --out, and exits
// 0 on success, 1 on a failed statistical expectation, 2 on usage or
// configuration errors, 3 on compute errors.
#include <sys/stat.h>
#include <sys/types.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "json.hpp"
#include "report.hpp"
#include "rpz/rpz.h"

namespace {

using cli::Config;
using cli::ConfigError;
using cli::ComputeError;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 0;
  uint64_t trials = 0;
  uint32_t threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--seed", o.seed, "override master_seed");
  cmd->add_option("--trials", o.trials, "override trials");
  cmd->add_option("--threads", o.threads,
                  "worker threads (results are thread-count invariant)");
  cmd->add_option("--out", o.out_dir, "output directory (default .)");
}

Config load_effective(const CLI::App* cmd, const CommonOpts& o) {
  nlohmann::json j = cli::load_config_json(o.config_path);
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  if (cmd->count("--seed")) j["master_seed"] = o.seed;
  if (cmd->count("--trials")) j["trials"] = o.trials;
  if (cmd->count("--threads")) j["threads"] = o.threads;
  Config cfg = cli::parse_config(j);
  if (cmd->count("--out") || cfg.out_dir.empty()) cfg.out_dir = o.out_dir;
  return cfg;
}

void ensure_dir(const std::string& dir) {
  if (dir.empty() || dir == ".") return;
  std::string partial;
  for (size_t i = 0; i <= dir.size(); ++i) {
    if (i < dir.size() && dir[i] != '/') continue;
    partial = dir.substr(0, i);
    if (partial.empty() || partial == ".") continue;
    if (mkdir(partial.c_str(), 0775) != 0 && errno != EEXIST)
      throw ConfigError("out", "cannot create directory " + partial);
  }
}

void require_kind(const Config& cfg, const char* cmd,
                  std::initializer_list<const char*> kinds) {
  std::string list;
  for (const char* k : kinds) {
    if (cfg.statistic.kind == k) return;
    list += list.empty() ? "" : ", ";
    list += k;
  }
  throw ConfigError("statistic.kind", "\"" + cfg.statistic.kind +
                                          "\" is not runnable by `" +
                                          std::string(cmd) +
                                          "`; expected one of: " + list);
}

void print_rows(const std::vector<cli::Row>& rows) {
  for (const auto& r : rows) {
    std::printf("  %s = %.10g", r.label.c_str(), r.value);
    if (!std::isnan(r.std_error)) std::printf(" +- %.4g", r.std_error);
    if (r.trials > 0) std::printf("  (%llu trials)", (unsigned long long)r.trials);
    std::printf("\n");
  }
}

// Shared body of counts / intensity / correlate / compare / concentration.
int run_statistic_command(const char* name, const CLI::App* cmd,
                          const CommonOpts& o,
                          std::initializer_list<const char*> kinds) {
  Config cfg = load_effective(cmd, o);
  require_kind(cfg, name, kinds);
  cli::RunOutput out = cli::run_config(cfg);
  ensure_dir(cfg.out_dir);
  std::string csv = cfg.out_dir + "/" + name + ".csv";
  if (!out.grid.empty())
    cli::write_grid_csv(csv, out.grid, cfg.digest);
  else
    cli::write_rows_csv(csv, out.rows, cfg.digest);
  cli::append_record(cfg.out_dir, name, cfg.digest, out.pass, out.rows,
                     out.grid);
  std::printf("config digest: %s\n", cfg.digest.c_str());
  print_rows(out.rows);
  if (!out.grid.empty())
    std::printf("  %zu grid points\n", out.grid.size());
  std::printf("verdict: %s\nwrote %s\n", out.verdict.c_str(), csv.c_str());
  return out.pass ? 0 : 1;
}

int cmd_sample(const CLI::App* cmd, const CommonOpts& o) {
  Config cfg = load_effective(cmd, o);
  cli::SampleOutput s = cli::draw_sample(cfg);
  ensure_dir(cfg.out_dir);
  std::string csv = cfg.out_dir + "/sample.csv";
  {
    std::FILE* f = std::fopen(csv.c_str(), "w");
    if (!f) throw ConfigError("out", "cannot write " + csv);
    std::fprintf(f, "index,re,im,config_digest\n");
    for (size_t i = 0; i < s.coeffs.size(); ++i)
      std::fprintf(f, "%zu,%s,%s,%s\n", i, cli::fmt17(s.coeffs[i].re).c_str(),
                   cli::fmt17(s.coeffs[i].im).c_str(),
                   i == 0 ? cfg.digest.c_str() : "");
    std::fclose(f);
  }
  std::vector<cli::Row> rows{{"log_scale", s.log_scale, std::nan(""), 0}};
  cli::append_record(cfg.out_dir, "sample", cfg.digest, true, rows, {});
  std::printf(
      "config digest: %s\ndegree bound n = %zu, log_scale = %.10g\n"
      "wrote %s (%zu coefficients)\n",
      cfg.digest.c_str(), s.coeffs.size() - 1, s.log_scale, csv.c_str(),
      s.coeffs.size());
  return 0;
}

int cmd_roots(const CLI::App* cmd, const CommonOpts& o) {
  Config cfg = load_effective(cmd, o);
  cli::RootsOutput r = cli::solve_roots(cfg);
  ensure_dir(cfg.out_dir);
  std::string csv = cfg.out_dir + "/roots.csv";
  {
    std::FILE* f = std::fopen(csv.c_str(), "w");
    if (!f) throw ConfigError("out", "cannot write " + csv);
    std::fprintf(f, "re,im,is_real,config_digest\n");
    for (size_t i = 0; i < r.points.size(); ++i)
      std::fprintf(f, "%s,%s,%d,%s\n", cli::fmt17(r.points[i].re).c_str(),
                   cli::fmt17(r.points[i].im).c_str(),
                   r.points[i].on_axis ? 1 : 0,
                   i == 0 ? cfg.digest.c_str() : "");
    std::fclose(f);
  }
  std::vector<cli::Row> rows{
      {"finite_roots", double(r.points.size()), std::nan(""), 0},
      {"real_roots", double(r.real_count), std::nan(""), 0},
      {"roots_at_infinity", double(r.infinity_count), std::nan(""), 0},
      {"residual_bound", r.residual, std::nan(""), 0}};
  cli::append_record(cfg.out_dir, "roots", cfg.digest, true, rows, {});
  std::printf("config digest: %s\nfinite roots: %zu", cfg.digest.c_str(),
              r.points.size());
  if (r.classified)
    std::printf(" (real %zu, conjugate pairs %zu)", r.real_count,
                r.upper_count);
  std::printf(", at infinity: %u\nresidual bound: %.3g\nwrote %s\n",
              r.infinity_count, r.residual, csv.c_str());
  return 0;
}

int cmd_reproduce(const std::string& id, bool list_only,
                  const std::string& out_dir) {
  if (list_only) {
    for (const auto& e : cli::registry_entries())
      std::printf("%-22s %s\n", e.id, e.summary);
    return 0;
  }
  if (id.empty()) {
    std::string known;
    for (const auto& e : cli::registry_entries())
      known += std::string("\n  ") + e.id;
    throw ConfigError("id", "missing experiment id; available ids:" + known);
  }
  cli::ReproReport rep = cli::reproduce(id);
  std::printf("reproduce %s (bundle digest %s)\n", rep.id.c_str(),
              rep.digest.c_str());
  for (const auto& l : rep.lines) {
    std::printf("[%s] %s\n", l.pass ? "PASS" : "FAIL", l.claim.c_str());
    std::printf("       measured : %s\n", l.measured.c_str());
    std::printf("       accepted : %s\n", l.tolerance.c_str());
  }
  size_t passed = 0;
  for (const auto& l : rep.lines) passed += l.pass ? 1 : 0;
  std::printf("result: %s (%zu/%zu checks)\n", rep.pass ? "PASS" : "FAIL",
              passed, rep.lines.size());
  ensure_dir(out_dir);
  std::string csv = out_dir + "/reproduce_" + rep.id + ".csv";
  cli::write_rows_csv(csv, rep.rows, rep.digest);
  cli::append_record(out_dir, "reproduce " + rep.id, rep.digest, rep.pass,
                     rep.rows, {});
  std::printf("wrote %s\n", csv.c_str());
  return rep.pass ? 0 : 1;
}

struct PlotOpts {
  std::string csv_path;
  std::string kind;
  std::string out_path;
  std::string title;
  double radius = 0.0;
};

size_t column_of(const cli::CsvTable& t, const std::string& name) {
  for (size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  return size_t(-1);
}

int cmd_plot(const PlotOpts& p) {
  cli::CsvTable t;
  try {
    t = cli::read_csv(p.csv_path);
  } catch (const std::exception& e) {
    throw ConfigError("csv", e.what());
  }
  if (t.data.empty())
    throw ConfigError("csv", "no data rows in " + p.csv_path);
  std::string out = p.out_path.empty() ? p.kind + ".svg" : p.out_path;
  if (p.kind == "roots") {
    size_t re = column_of(t, "re"), im = column_of(t, "im");
    size_t is_real = column_of(t, "is_real");
    if (re == size_t(-1) || im == size_t(-1))
      throw ConfigError("csv", p.csv_path +
                                   " does not look like a root table "
                                   "(expected columns re, im)");
    std::vector<cli::ScatterPoint> pts;
    for (const auto& row : t.data) {
      if (row.size() <= std::max(re, im)) continue;
      bool axis = is_real != size_t(-1) && is_real < row.size() &&
                  row[is_real] == 1.0;
      pts.push_back({row[re], row[im], axis});
    }
    cli::emit_roots_svg(out, pts, p.radius,
                        p.title.empty() ? "zeros in the complex plane"
                                        : p.title);
    std::printf("wrote %s (%zu roots)\n", out.c_str(), pts.size());
    return 0;
  }
  // intensity / edge: a curve table with optional Monte Carlo overlay.
  size_t x = column_of(t, p.kind == "edge" ? "a" : "x");
  if (x == size_t(-1)) x = column_of(t, "x");
  size_t val = column_of(t, "value");
  if (x == size_t(-1) || val == size_t(-1))
    throw ConfigError("csv", p.csv_path +
                                 " does not look like a curve table "
                                 "(expected columns x, value)");
  size_t mc = column_of(t, "mc"), mc_se = column_of(t, "mc_se");
  std::vector<cli::GridRow> pts;
  for (const auto& row : t.data) {
    if (row.size() <= std::max(x, val)) continue;
    cli::GridRow g{row[x], row[val], std::nan(""), std::nan("")};
    if (mc != size_t(-1) && mc < row.size()) g.mc = row[mc];
    if (mc_se != size_t(-1) && mc_se < row.size()) g.mc_se = row[mc_se];
    pts.push_back(g);
  }
  if (p.kind == "edge")
    cli::emit_curve_svg(out, pts, "a", "F(a)",
                        p.title.empty() ? "scaled intensity at the unit circle"
                                        : p.title);
  else
    cli::emit_curve_svg(out, pts, "x", "intensity",
                        p.title.empty() ? "real-zero intensity" : p.title);
  std::printf("wrote %s (%zu points)\n", out.c_str(), pts.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero statistics of random polynomials: sampling, solving, "
               "exact gaussian intensities, and canned reproductions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rpz_version()));

  CommonOpts sample_o, roots_o, counts_o, intensity_o, correlate_o, compare_o,
      concentration_o;
  auto* c_sample =
      app.add_subcommand("sample", "draw one coefficient vector");
  add_common(c_sample, sample_o);
  auto* c_roots =
      app.add_subcommand("roots", "draw one polynomial and solve for zeros");
  add_common(c_roots, roots_o);
  auto* c_counts = app.add_subcommand(
      "counts", "Monte Carlo zero counts in an interval or disk");
  add_common(c_counts, counts_o);
  auto* c_intensity = app.add_subcommand(
      "intensity", "exact gaussian intensities, masses, and profiles");
  add_common(c_intensity, intensity_o);
  auto* c_correlate = app.add_subcommand(
      "correlate", "Monte Carlo correlation statistics of zeros");
  add_common(c_correlate, correlate_o);
  auto* c_compare = app.add_subcommand(
      "compare", "same observable under two coefficient atoms");
  add_common(c_compare, compare_o);
  auto* c_concentration = app.add_subcommand(
      "concentration", "deviation of log|f| from (1/2) log V");
  add_common(c_concentration, concentration_o);

  std::string repro_id, repro_out = ".";
  bool repro_list = false;
  auto* c_repro = app.add_subcommand(
      "reproduce", "run a canned experiment from the registry");
  c_repro->add_option("id", repro_id, "registry id (see --list)");
  c_repro->add_flag("--list", repro_list, "list registry ids and exit");
  c_repro->add_option("--out", repro_out, "output directory (default .)");

  PlotOpts plot_o;
  auto* c_plot =
      app.add_subcommand("plot", "render a result CSV as a standalone SVG");
  c_plot->add_option("--csv", plot_o.csv_path, "input CSV")->required();
  c_plot->add_option("--kind", plot_o.kind, "intensity, roots, or edge")
      ->required()
      ->check(CLI::IsMember({"intensity", "roots", "edge"}));
  c_plot->add_option("--out", plot_o.out_path, "output SVG path");
  c_plot->add_option("--radius", plot_o.radius,
                     "reference circle radius for --kind roots");
  c_plot->add_option("--title", plot_o.title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_sample) return cmd_sample(c_sample, sample_o);
    if (*c_roots) return cmd_roots(c_roots, roots_o);
    if (*c_counts)
      return run_statistic_command("counts", c_counts, counts_o,
                                   {"counts_interval", "counts_disk"});
    if (*c_intensity)
      return run_statistic_command(
          "intensity", c_intensity, intensity_o,
          {"oracle_point", "oracle_grid", "oracle_integral_real_intensity",
           "edge_profile"});
    if (*c_correlate)
      return run_statistic_command("correlate", c_correlate, correlate_o,
                                   {"correlation", "mixed_correlation"});
    if (*c_compare)
      return run_statistic_command("compare", c_compare, compare_o, {"gap"});
    if (*c_concentration)
      return run_statistic_command("concentration", c_concentration,
                                   concentration_o, {"concentration"});
    if (*c_repro) return cmd_reproduce(repro_id, repro_list, repro_out);
    if (*c_plot) return cmd_plot(plot_o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ComputeError& e) {
    std::fprintf(stderr, "compute error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
