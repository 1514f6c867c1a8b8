#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellkit/attack.hpp"
#include "bellkit/chsh.hpp"
#include "bellkit/convergence.hpp"
#include "bellkit/correlation.hpp"
#include "bellkit/report.hpp"

namespace bellkit {

using nlohmann::json;

inline std::string format_double(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline json to_json(const MeasurementSetting& s) {
  return {{"angle", s.angle},
          {"convention",
           s.convention == AngleConvention::HalfAngle ? "half" : "observable"}};
}

inline json to_json(const MeasurementCounts& c) {
  json settings = json::array();
  for (const auto& s : c.settings) settings.push_back(to_json(s));
  json counts = json::object();
  for (const auto& [outcome, n] : c.counts) counts[outcome] = n;
  return {{"settings", settings}, {"shots", c.shots}, {"counts", counts}, {"seed", c.seed}};
}

inline json to_json(const CorrelationEstimate& e) {
  json j = {{"value", e.value}, {"std_error", e.std_error}};
  if (e.is_exact())
    j["shots"] = "exact";
  else
    j["shots"] = e.shots;
  return j;
}

inline json to_json(const ChshResult& r) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back(to_json(t));
  return {{"s_value", r.s_value},
          {"terms", terms},
          {"std_error", r.std_error},
          {"classification", to_string(r.classification)}};
}

inline json to_json(const ConvergencePoint& p) {
  return {{"theta0", p.theta0},
          {"qm_value", p.qm_value},
          {"hvt_value", p.hvt_value},
          {"residual", p.residual}};
}

inline json to_json(const ConvergenceRegion& r) {
  json j = {{"lo", r.lo}, {"hi", r.hi}, {"max_gap", r.max_gap}};
  if (r.origin == ConvergenceRegion::Origin::HupVicinity) {
    j["origin"] = "HupVicinity";
    j["delta_j"] = r.origin_param;
  } else {
    j["origin"] = "ToleranceScan";
    j["epsilon"] = r.origin_param;
  }
  return j;
}

inline json to_json(const TableRowReport& row) {
  json computed = json::array();
  for (const auto& c : row.computed)
    computed.push_back({{"reading", c.reading}, {"s_value", c.s_value}});
  json j = {{"label", row.label}, {"table", to_string(row.table)}, {"computed", computed}};
  if (row.reported_theoretical_s) {
    j["reported_theoretical_s"] = *row.reported_theoretical_s;
    j["best_reading"] = row.best_reading;
    j["best_delta"] = row.best_delta;
    j["reproduced"] = row.reproduced;
    j["exceeds_tsirelson"] = row.exceeds_tsirelson;
  }
  if (row.reported_observed_s) j["reported_observed_s"] = *row.reported_observed_s;
  return j;
}

inline json to_json(const NoiseFitReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"label", r.label},
                    {"s_theoretical", r.s_theoretical},
                    {"s_observed", r.s_observed},
                    {"factor", r.factor},
                    {"clamped", r.clamped},
                    {"extreme", r.extreme},
                    {"p_only", r.p_only},
                    {"eps_only", r.eps_only}});
  return {{"rows", rows},
          {"factor_min", report.factor_min},
          {"factor_max", report.factor_max},
          {"factor_mean", report.factor_mean}};
}

inline json to_json(const DetectionStats& d) {
  return {{"probability", d.probability},
          {"wilson_lo", d.wilson_lo},
          {"wilson_hi", d.wilson_hi},
          {"successes", d.successes},
          {"trials", d.trials}};
}

inline json to_json(const SessionResult& r) {
  return {{"s_estimate", to_json(r.s_estimate)},
          {"verdict", to_string(r.verdict)},
          {"detection_threshold", r.detection_threshold},
          {"sigma_margin", r.sigma_margin},
          {"rounds_per_pair", r.rounds_per_pair},
          {"statistic", r.statistic}};
}

// Sweep table CSV, header fixed by the attack module contract.
inline std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "delta,s_quantum,s_lhv,sigma_q,sigma_lhv,z\n";
  for (const auto& r : rows)
    out << format_double(r.delta) << ',' << format_double(r.s_quantum) << ','
        << format_double(r.s_lhv) << ',' << format_double(r.sigma_q) << ','
        << format_double(r.sigma_lhv) << ',' << format_double(r.z) << '\n';
  return out.str();
}

// Two-column region CSV for plot shading.
inline std::string regions_csv(const std::vector<ConvergenceRegion>& regions) {
  std::ostringstream out;
  out << "theta_lo,theta_hi\n";
  for (const auto& r : regions)
    out << format_double(r.lo) << ',' << format_double(r.hi) << '\n';
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

struct SvgSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<std::pair<double, double>> points;
};

// Minimal polyline plot; no external renderer.
inline std::string render_svg_plot(const std::vector<SvgSeries>& series,
                                   const std::string& title, int width = 800,
                                   int height = 480) {
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        first = false;
      }
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;
  const double margin = 50;
  const auto px = [&](double x) {
    return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
  };
  const auto py = [&](double y) {
    return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<line x1=\"" << format_double(margin) << "\" y1=\"" << format_double(py(y_lo))
      << "\" x2=\"" << format_double(width - margin) << "\" y2=\"" << format_double(py(y_lo))
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << format_double(px(x_lo)) << "\" y1=\"" << format_double(margin)
      << "\" x2=\"" << format_double(px(x_lo)) << "\" y2=\""
      << format_double(height - margin) << "\" stroke=\"black\"/>\n";
  int legend_y = 44;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points)
      out << format_double(px(x), 8) << ',' << format_double(py(y), 8) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << width - margin - 140 << "\" y=\"" << legend_y << "\" fill=\""
        << s.color << "\" font-size=\"13\">" << s.label << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace bellkit
