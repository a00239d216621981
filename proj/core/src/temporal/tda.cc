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

#include "carryover/temporal/tda.h"

#include <cmath>

#include "carryover/error.h"

namespace carryover {

using numeric::Tape;
using numeric::Tensor;
using numeric::Var;

TdaParams add_tda_params(numeric::ParameterSet& params, const std::string& prefix,
                         double initial_raw) {
  return {&params.add(prefix + ".decay_raw", Tensor::scalar(initial_raw))};
}

double effective_decay(const TdaParams& params) {
  const double x = params.decay_raw->value[0];
  return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
}

Var tda_weights(Tape& tape, std::span<const double> gaps, const TdaParams& params) {
  if (gaps.empty()) throw DimensionError("tda_weights: no context turns");
  std::vector<double> neg(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (!std::isfinite(gaps[i]) || gaps[i] < 0) {
      throw RangeError("tda_weights: gaps must be nonnegative");
    }
    neg[i] = -gaps[i];
  }
  Var rate = numeric::softplus(tape.param(*params.decay_raw));
  Var logits = numeric::matvec(tape.constant(Tensor({gaps.size(), 1}, std::move(neg))), rate);
  return numeric::softmax(logits);
}

}  // namespace carryover
