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

#ifndef CARRYOVER_TEMPORAL_TDA_H_
#define CARRYOVER_TEMPORAL_TDA_H_

#include <span>
#include <string>

#include "carryover/numeric/tape.h"

namespace carryover {

// Time-decay attention over context turns: w_j proportional to
// exp(-lambda * gap_j), lambda = softplus(raw) >= 0.
struct TdaParams {
  const numeric::Parameter* decay_raw = nullptr;  // shape {1}
};

TdaParams add_tda_params(numeric::ParameterSet& params, const std::string& prefix,
                         double initial_raw = 0.0);

double effective_decay(const TdaParams& params);

// Normalized decay weights, one per gap. Throws DimensionError on empty
// input and RangeError on negative gaps.
numeric::Var tda_weights(numeric::Tape& tape, std::span<const double> gaps,
                         const TdaParams& params);

}  // namespace carryover

#endif  // CARRYOVER_TEMPORAL_TDA_H_
