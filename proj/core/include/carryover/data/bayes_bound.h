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

#ifndef CARRYOVER_DATA_BAYES_BOUND_H_
#define CARRYOVER_DATA_BAYES_BOUND_H_

#include <cstddef>
#include <span>

#include <nlohmann/json.hpp>

#include "carryover/data/synthetic.h"

namespace carryover {

// Best expected F1 of a thresholded `score` when candidate i is positive with
// probability q[i]. Expected true positives are used in place of sampled
// ones; the threshold ranges over the distinct scores.
double best_expected_f1(std::span<const double> score, std::span<const double> q);

struct BayesBounds {
  double domain_gap = 0.0;     // rule sees (domain, gap): the exact posterior
  double offset_only = 0.0;    // rule sees only the distance offset
  double gap_only = 0.0;       // rule sees only the gap (binned)
  double domain_offset = 0.0;  // rule sees (domain, offset)
  double positive_rate = 0.0;
  std::size_t samples = 0;

  nlohmann::json to_json() const;
};

// Monte Carlo over candidates drawn from the generator. Uses a seed stream
// derived from, but distinct from, spec.seed.
BayesBounds bayes_f1(const SyntheticSpec& spec, std::size_t samples = 100000);

}  // namespace carryover

#endif  // CARRYOVER_DATA_BAYES_BOUND_H_
