// SPDX-License-Identifier: MIT
#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rpz/rpz.h"

namespace cli {

namespace {

std::ofstream open_out(const std::string& path, std::ios_base::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string cell(double v) { return std::isnan(v) ? "" : fmt17(v); }

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json finite_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (v == HUGE_VAL) return "inf";
  if (v == -HUGE_VAL) return "-inf";
  return v;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_rows_csv(const std::string& path, const std::vector<Row>& rows,
                    const std::string& digest) {
  auto out = open_out(path, std::ios_base::trunc);
  out << "label,value,std_error,trials,config_digest\n";
  for (const auto& r : rows) {
    out << r.label << ',' << cell(r.value) << ',' << cell(r.std_error) << ',';
    if (r.trials > 0) out << r.trials;
    out << ',' << digest << '\n';
  }
}

void write_grid_csv(const std::string& path, const std::vector<GridRow>& rows,
                    const std::string& digest) {
  auto out = open_out(path, std::ios_base::trunc);
  out << "x,value,mc,mc_se,config_digest\n";
  for (const auto& r : rows)
    out << cell(r.x) << ',' << cell(r.value) << ',' << cell(r.mc) << ','
        << cell(r.mc_se) << ',' << digest << '\n';
}

void append_record(const std::string& dir, const std::string& command,
                   const std::string& digest, bool pass,
                   const std::vector<Row>& rows,
                   const std::vector<GridRow>& grid) {
  nlohmann::json rec{{"command", command},
                     {"config_digest", digest},
                     {"timestamp", timestamp_utc()},
                     {"tool_version", rpz_version()},
                     {"pass", pass}};
  nlohmann::json out_rows = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json jr{{"label", r.label}, {"value", finite_or_null(r.value)}};
    if (!std::isnan(r.std_error)) jr["std_error"] = r.std_error;
    if (r.trials > 0) jr["trials"] = r.trials;
    out_rows.push_back(jr);
  }
  for (const auto& g : grid) {
    nlohmann::json jr{{"x", g.x}, {"value", finite_or_null(g.value)}};
    if (!std::isnan(g.mc)) {
      jr["mc"] = g.mc;
      jr["mc_se"] = g.mc_se;
    }
    out_rows.push_back(jr);
  }
  rec["rows"] = out_rows;
  auto out = open_out(dir + "/run_records.jsonl", std::ios_base::app);
  out << rec.dump() << '\n';
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (line.back() == ',') cells.push_back("");
    if (first) {
      t.header = cells;
      first = false;
      continue;
    }
    std::vector<double> vals;
    for (const auto& s : cells) {
      if (s.empty()) {
        vals.push_back(std::nan(""));
        continue;
      }
      try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        vals.push_back(pos == s.size() ? v : std::nan(""));
      } catch (...) {
        vals.push_back(std::nan(""));
      }
    }
    t.data.push_back(vals);
  }
  return t;
}

namespace {

// Minimal plotting scaffold shared by both SVG emitters.
struct Frame {
  double x0, x1, y0, y1;          // data range
  double px0, px1, py0, py1;      // pixel range (py0 is the bottom)
  double sx(double x) const {
    return px0 + (x - x0) / (x1 - x0) * (px1 - px0);
  }
  double sy(double y) const {
    return py0 - (y - y0) / (y1 - y0) * (py0 - py1);
  }
};

std::string fnum(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fpix(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    double c = lo;
    lo = c - 1.0;
    hi = c + 1.0;
    return;
  }
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

void svg_header(std::ostream& out, int w, int h, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2
      << "\" y=\"18\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"13\">"
      << title << "</text>\n";
}

void axes(std::ostream& out, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
  out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n"
      << "<path d=\"M" << fpix(f.px0) << ' ' << fpix(f.py1) << " L"
      << fpix(f.px0) << ' ' << fpix(f.py0) << " L" << fpix(f.px1) << ' '
      << fpix(f.py0) << "\"/>\n</g>\n";
  out << "<g font-family=\"monospace\" font-size=\"11\" fill=\"#222\">\n";
  for (int i = 0; i <= 5; ++i) {
    double tx = f.x0 + (f.x1 - f.x0) * i / 5.0;
    double ty = f.y0 + (f.y1 - f.y0) * i / 5.0;
    double px = f.sx(tx), py = f.sy(ty);
    out << "<line x1=\"" << fpix(px) << "\" y1=\"" << fpix(f.py0)
        << "\" x2=\"" << fpix(px) << "\" y2=\"" << fpix(f.py0 + 4)
        << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fpix(px) << "\" y=\"" << fpix(f.py0 + 16)
        << "\" text-anchor=\"middle\">" << fnum(tx) << "</text>\n";
    out << "<line x1=\"" << fpix(f.px0 - 4) << "\" y1=\"" << fpix(py)
        << "\" x2=\"" << fpix(f.px0) << "\" y2=\"" << fpix(py)
        << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fpix(f.px0 - 7) << "\" y=\"" << fpix(py + 4)
        << "\" text-anchor=\"end\">" << fnum(ty) << "</text>\n";
  }
  double cx = (f.px0 + f.px1) / 2.0;
  out << "<text x=\"" << fpix(cx) << "\" y=\"" << fpix(f.py0 + 34)
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"14\" y=\"" << fpix((f.py0 + f.py1) / 2.0)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fpix((f.py0 + f.py1) / 2.0) << ")\">" << ylabel << "</text>\n</g>\n";
}

}  // namespace

void emit_curve_svg(const std::string& path, const std::vector<GridRow>& pts,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::string& title) {
  if (pts.empty()) throw std::runtime_error("no points to plot");
  double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.value);
    y1 = std::max(y1, p.value);
    if (!std::isnan(p.mc)) {
      double se = std::isnan(p.mc_se) ? 0.0 : p.mc_se;
      y0 = std::min(y0, p.mc - se);
      y1 = std::max(y1, p.mc + se);
    }
  }
  y0 = std::min(y0, 0.0);  // keep the zero level in frame
  pad_range(x0, x1);
  pad_range(y0, y1);

  const int W = 640, H = 420;
  Frame f{x0, x1, y0, y1, 70.0, W - 20.0, H - 50.0, 30.0};
  auto out = open_out(path, std::ios_base::trunc);
  svg_header(out, W, H, title);
  axes(out, f, xlabel, ylabel);

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  for (const auto& p : pts) out << fpix(f.sx(p.x)) << ',' << fpix(f.sy(p.value)) << ' ';
  out << "\"/>\n";

  for (const auto& p : pts) {
    if (std::isnan(p.mc)) continue;
    double px = f.sx(p.x), py = f.sy(p.mc);
    if (!std::isnan(p.mc_se) && p.mc_se > 0.0) {
      double lo = f.sy(p.mc - p.mc_se), hi = f.sy(p.mc + p.mc_se);
      out << "<line x1=\"" << fpix(px) << "\" y1=\"" << fpix(lo) << "\" x2=\""
          << fpix(px) << "\" y2=\"" << fpix(hi)
          << "\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
    }
    out << "<circle cx=\"" << fpix(px) << "\" cy=\"" << fpix(py)
        << "\" r=\"3\" fill=\"#d62728\"/>\n";
  }
  out << "</svg>\n";
}

void emit_roots_svg(const std::string& path,
                    const std::vector<ScatterPoint>& pts, double radius,
                    const std::string& title) {
  if (pts.empty()) throw std::runtime_error("no points to plot");
  double m = radius;
  for (const auto& p : pts) m = std::max({m, std::abs(p.re), std::abs(p.im)});
  if (!(m > 0.0)) m = 1.0;
  m *= 1.08;

  const int W = 520, H = 540;
  Frame f{-m, m, -m, m, 50.0, W - 20.0, H - 40.0, 50.0};
  auto out = open_out(path, std::ios_base::trunc);
  svg_header(out, W, H, title);
  axes(out, f, "Re", "Im");
  out << "<line x1=\"" << fpix(f.sx(-m)) << "\" y1=\"" << fpix(f.sy(0))
      << "\" x2=\"" << fpix(f.sx(m)) << "\" y2=\"" << fpix(f.sy(0))
      << "\" stroke=\"#ccc\" stroke-width=\"0.7\"/>\n";
  out << "<line x1=\"" << fpix(f.sx(0)) << "\" y1=\"" << fpix(f.sy(-m))
      << "\" x2=\"" << fpix(f.sx(0)) << "\" y2=\"" << fpix(f.sy(m))
      << "\" stroke=\"#ccc\" stroke-width=\"0.7\"/>\n";
  if (radius > 0.0) {
    double r_px = f.sx(radius) - f.sx(0.0);
    out << "<circle cx=\"" << fpix(f.sx(0)) << "\" cy=\"" << fpix(f.sy(0))
        << "\" r=\"" << fpix(r_px)
        << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"5 4\"/>\n";
  }
  for (const auto& p : pts)
    out << "<circle cx=\"" << fpix(f.sx(p.re)) << "\" cy=\""
        << fpix(f.sy(p.im)) << "\" r=\"2\" fill=\""
        << (p.on_axis ? "#d62728" : "#1f77b4") << "\" fill-opacity=\"0.8\"/>\n";
  out << "</svg>\n";
}

}  // namespace cli
