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

#ifndef CARRYOVER_NUMERIC_GRADCHECK_H_
#define CARRYOVER_NUMERIC_GRADCHECK_H_

#include <functional>
#include <span>
#include <string>

#include "carryover/numeric/tape.h"

namespace carryover::numeric {

// Builds a scalar from the current parameter values on the given tape.
using ScalarFunction = std::function<Var(Tape&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares reverse-mode gradients against central differences for every
// coordinate of every parameter. Error per coordinate is
// |analytic - numeric| / max(1, |analytic|). Parameter values are restored.
// Requires eps in [1e-7, 1e-4].
GradCheckResult finite_diff_check_detailed(const ScalarFunction& f,
                                           std::span<Parameter* const> params, double eps);

double finite_diff_check(const ScalarFunction& f, std::span<Parameter* const> params,
                         double eps = 1e-6);

}  // namespace carryover::numeric

#endif  // CARRYOVER_NUMERIC_GRADCHECK_H_
