// Copyright 2026 The Carryover Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svg_plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "carryover/error.h"

namespace carryover::cli {

Histogram histogram(std::span<const double> values, std::size_t bins, double max_value) {
  if (bins == 0 || !(max_value > 0.0)) throw RangeError("histogram needs bins > 0 and max > 0");
  Histogram h{max_value, std::vector<std::size_t>(bins, 0)};
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::max(0.0, v) / max_value * static_cast<double>(bins));
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string gap_histogram_svg(const std::string& title, std::span<const double> carryover,
                              std::span<const double> no_carryover, std::size_t bins,
                              double max_gap) {
  const Histogram pos = histogram(carryover, bins, max_gap);
  const Histogram neg = histogram(no_carryover, bins, max_gap);
  std::size_t top = 1;
  for (std::size_t b = 0; b < bins; ++b) top = std::max({top, pos.counts[b], neg.counts[b]});

  const double width = 720, height = 360, left = 60, right = 20, upper = 40, lower = 50;
  const double plot_w = width - left - right, plot_h = height - upper - lower;
  const double slot = plot_w / static_cast<double>(bins);
  const double bar = slot * 0.45;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  for (std::size_t b = 0; b < bins; ++b) {
    const double x = left + slot * static_cast<double>(b);
    const double hp = plot_h * static_cast<double>(pos.counts[b]) / static_cast<double>(top);
    const double hn = plot_h * static_cast<double>(neg.counts[b]) / static_cast<double>(top);
    svg << "<rect x=\"" << num(x + slot * 0.05) << "\" y=\"" << num(upper + plot_h - hp)
        << "\" width=\"" << num(bar) << "\" height=\"" << num(hp) << "\" fill=\"#1f77b4\"/>\n";
    svg << "<rect x=\"" << num(x + slot * 0.5) << "\" y=\"" << num(upper + plot_h - hn)
        << "\" width=\"" << num(bar) << "\" height=\"" << num(hn) << "\" fill=\"#ff7f0e\"/>\n";
  }
  // Axes with five ticks each.
  svg << "<line x1=\"" << left << "\" y1=\"" << upper + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << upper + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << upper << "\" x2=\"" << left << "\" y2=\""
      << upper + plot_h << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = left + plot_w * i / 4.0;
    const double fy = upper + plot_h - plot_h * i / 4.0;
    svg << "<text x=\"" << num(fx) << "\" y=\"" << upper + plot_h + 15
        << "\" text-anchor=\"middle\">" << num(max_gap * i / 4.0) << (i == 4 ? "+" : "")
        << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << num(fy + 4) << "\" text-anchor=\"end\">"
        << std::lround(static_cast<double>(top) * i / 4.0) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">temporal distance (s)</text>\n";
  svg << "<text x=\"14\" y=\"" << upper + plot_h / 2 << "\" transform=\"rotate(-90 14 "
      << upper + plot_h / 2 << ")\" text-anchor=\"middle\">candidates</text>\n";
  svg << "<rect x=\"" << width - 190 << "\" y=\"34\" width=\"10\" height=\"10\" fill=\"#1f77b4\"/>"
      << "<text x=\"" << width - 175 << "\" y=\"43\">carryover (" << carryover.size()
      << ")</text>\n";
  svg << "<rect x=\"" << width - 190 << "\" y=\"50\" width=\"10\" height=\"10\" fill=\"#ff7f0e\"/>"
      << "<text x=\"" << width - 175 << "\" y=\"59\">no carryover (" << no_carryover.size()
      << ")</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace carryover::cli
