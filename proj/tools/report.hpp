// SPDX-License-Identifier: MIT
// Result persistence and rendering: CSV tables (bitwise stable across
// replays), an append-only run-record stream, and self-contained SVG plots.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cli {

// One labeled scalar result. std_error = NaN and trials = 0 mean
// "not applicable" and serialize as empty CSV cells.
struct Row {
  std::string label;
  double value = 0.0;
  double std_error = 0.0;
  uint64_t trials = 0;
};

// One point of a sampled curve; mc / mc_se = NaN when no overlay exists.
struct GridRow {
  double x = 0.0;
  double value = 0.0;
  double mc = 0.0;
  double mc_se = 0.0;
};

std::string fmt17(double v);  // shortest round-trip decimal, replay-stable

void write_rows_csv(const std::string& path, const std::vector<Row>& rows,
                    const std::string& digest);
void write_grid_csv(const std::string& path, const std::vector<GridRow>& rows,
                    const std::string& digest);

// Appends one JSON line to run_records.jsonl in dir.
void append_record(const std::string& dir, const std::string& command,
                   const std::string& digest, bool pass,
                   const std::vector<Row>& rows,
                   const std::vector<GridRow>& grid);

// Parsed CSV: header cells plus data cells (empty cell -> NaN).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> data;
};
CsvTable read_csv(const std::string& path);

// Curve with optional points-and-error-bars overlay (mc columns of GridRow).
void emit_curve_svg(const std::string& path, const std::vector<GridRow>& pts,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::string& title);

struct ScatterPoint {
  double re = 0.0, im = 0.0;
  bool on_axis = false;
};
// Root scatter on the plane; radius > 0 draws the reference circle.
void emit_roots_svg(const std::string& path,
                    const std::vector<ScatterPoint>& pts, double radius,
                    const std::string& title);

}  // namespace cli
