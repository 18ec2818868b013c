// Copyright 2026 The ngramlog Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "ngramlog/errors.h"
#include "ngramlog/report.h"

namespace ngramlog {
namespace {

constexpr double kWidth = 1200, kHeight = 520;
constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` ticks.
double NiceStep(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string TickLabel(double v) {
  char buf[32];
  if (std::fabs(v - std::round(v)) < 1e-9) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%g", v);
  }
  return buf;
}

}  // namespace

void EmitPlot(std::ostream& out, std::span<const ScoreRecord> records,
              const PlotSpec& spec) {
  const bool log_occ = spec.metric == PlotMetric::kOccurrenceLog;
  std::vector<double> values(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    values[i] = log_occ ? LogScaledOccurrence(records[i].occurrence)
                        : records[i].probability;
  }

  double y_max = 1.0;
  if (log_occ) {
    for (double v : values) y_max = std::max(y_max, v);
    y_max = std::ceil(y_max);
  }
  const double x_min = records.empty() ? 1.0 : static_cast<double>(records.front().position);
  const double x_max = records.empty() ? 2.0
                                       : std::max(x_min + 1.0,
                                                  static_cast<double>(records.back().position));
  const auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * kPlotW; };
  const auto sy = [&](double y) { return kTop + kPlotH - y / y_max * kPlotH; };

  const std::string y_label =
      log_occ ? "occurrence count, log10(count + 1)" : "probability";

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes, grid and ticks.
  out << "<g stroke=\"#888\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + kPlotH << "\" x2=\""
      << kLeft + kPlotW << "\" y2=\"" << kTop + kPlotH << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + kPlotH << "\"/>\n</g>\n";

  out << "<g fill=\"#333\">\n";
  const double y_step = NiceStep(y_max, 5);
  for (double y = 0.0; y <= y_max + 1e-9; y += y_step) {
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << Num(sy(y)) << "\" x2=\""
        << kLeft + kPlotW << "\" y2=\"" << Num(sy(y))
        << "\" stroke=\"#eee\"/>\n<text x=\"" << kLeft - 8 << "\" y=\""
        << Num(sy(y) + 4) << "\" text-anchor=\"end\">" << TickLabel(y) << "</text>\n";
  }
  const double x_step = NiceStep(x_max - x_min, 8);
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9; x += x_step) {
    out << "<text x=\"" << Num(sx(x)) << "\" y=\"" << kTop + kPlotH + 18
        << "\" text-anchor=\"middle\">" << TickLabel(x) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">event position</text>\n"
      << "<text transform=\"translate(20," << kTop + kPlotH / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << y_label << "</text>\n</g>\n";

  if (spec.raw && !values.empty()) {
    out << "<g fill=\"#1f77b4\" fill-opacity=\"0.5\">\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << "<circle cx=\"" << Num(sx(static_cast<double>(records[i].position)))
          << "\" cy=\"" << Num(sy(values[i])) << "\" r=\"1.5\"/>\n";
    }
    out << "</g>\n";
  }

  const auto polyline = [&](std::size_t window, const char* color) {
    if (values.empty()) return;
    const auto ma = MovingAverage(values, window);
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ma.size(); ++i) {
      if (i) out << ' ';
      out << Num(sx(static_cast<double>(records[i].position))) << ',' << Num(sy(ma[i]));
    }
    out << "\"/>\n";
  };
  if (spec.ma100) polyline(100, "#ff7f0e");
  if (spec.ma1000) polyline(1000, "#d62728");

  // Legend.
  double ly = kTop - 22;
  double lx = kLeft + 10;
  const auto legend = [&](const char* color, const char* text) {
    out << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
        << color << "\"/><text x=\"" << lx + 16 << "\" y=\"" << ly + 10 << "\">" << text
        << "</text>\n";
    lx += 150;
  };
  if (spec.raw) legend("#1f77b4", "per-event score");
  if (spec.ma100) legend("#ff7f0e", "moving average 100");
  if (spec.ma1000) legend("#d62728", "moving average 1000");

  out << "</svg>\n";
  if (!out) throw IoError("plot write failed");
}

void EmitPlot(std::span<const ScoreRecord> records, const PlotSpec& spec) {
  std::ofstream out(spec.output, std::ios::binary);
  if (!out) throw IoError("cannot write " + spec.output.string());
  EmitPlot(out, records, spec);
}

}  // namespace ngramlog
