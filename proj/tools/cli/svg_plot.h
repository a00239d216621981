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

#ifndef CARRYOVER_TOOLS_CLI_SVG_PLOT_H_
#define CARRYOVER_TOOLS_CLI_SVG_PLOT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace carryover::cli {

struct Histogram {
  double max_value = 0.0;
  std::vector<std::size_t> counts;  // last bin also holds values >= max_value
};

Histogram histogram(std::span<const double> values, std::size_t bins, double max_value);

// Side-by-side bars for carryover and non-carryover gaps.
std::string gap_histogram_svg(const std::string& title, std::span<const double> carryover,
                              std::span<const double> no_carryover, std::size_t bins,
                              double max_gap);

}  // namespace carryover::cli

#endif  // CARRYOVER_TOOLS_CLI_SVG_PLOT_H_
