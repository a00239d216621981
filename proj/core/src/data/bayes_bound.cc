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

#include "carryover/data/bayes_bound.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "carryover/error.h"

namespace carryover {

double best_expected_f1(std::span<const double> score, std::span<const double> q) {
  if (score.size() != q.size()) throw DimensionError("score and probability lengths differ");
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  const double positives = std::accumulate(q.begin(), q.end(), 0.0);
  double best = 0.0, tp = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    tp += q[order[i]];
    const bool boundary = i + 1 == order.size() || score[order[i + 1]] != score[order[i]];
    if (!boundary) continue;
    const double denom = static_cast<double>(i + 1) + positives;
    if (denom > 0.0) best = std::max(best, 2.0 * tp / denom);
  }
  return best;
}

nlohmann::json BayesBounds::to_json() const {
  return {{"domain_gap", domain_gap},       {"offset_only", offset_only},
          {"gap_only", gap_only},           {"domain_offset", domain_offset},
          {"positive_rate", positive_rate}, {"samples", samples}};
}

namespace {

template <typename Key, typename KeyFn>
std::vector<double> group_mean(const std::vector<SyntheticDraw>& draws, KeyFn key) {
  std::map<Key, std::pair<double, std::size_t>> acc;
  for (const auto& d : draws) {
    auto& a = acc[key(d)];
    a.first += d.probability;
    ++a.second;
  }
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& d : draws) {
    const auto& a = acc[key(d)];
    out.push_back(a.first / static_cast<double>(a.second));
  }
  return out;
}

}  // namespace

BayesBounds bayes_f1(const SyntheticSpec& spec, std::size_t samples) {
  if (samples == 0) throw RangeError("bayes_f1 needs at least one sample");
  SyntheticSpec sim = spec;
  sim.dialogues = 2000;
  std::vector<SyntheticDraw> draws;
  for (std::uint64_t batch = 0; draws.size() < samples; ++batch) {
    sim.seed = spec.seed * 1000003ULL + 0x5bd1e995ULL + batch;
    generate_synthetic(sim, &draws);
  }
  draws.resize(samples);

  std::vector<double> q;
  q.reserve(draws.size());
  for (const auto& d : draws) q.push_back(d.probability);

  BayesBounds out;
  out.samples = samples;
  out.positive_rate = std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(samples);
  out.domain_gap = best_expected_f1(q, q);
  out.offset_only =
      best_expected_f1(group_mean<int>(draws, [](const auto& d) { return d.distance_offset; }), q);
  out.domain_offset = best_expected_f1(
      group_mean<std::pair<std::size_t, int>>(
          draws, [](const auto& d) { return std::make_pair(d.domain, d.distance_offset); }),
      q);
  // Fine bins over log1p(gap) stand in for the gap-only posterior.
  out.gap_only = best_expected_f1(
      group_mean<long>(draws,
                       [](const auto& d) {
                         if (d.temporal_distance <= 0.0) return -1L;
                         return std::lround(std::log1p(d.temporal_distance) * 40.0);
                       }),
      q);
  return out;
}

}  // namespace carryover
