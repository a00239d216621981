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

#include "carryover/numeric/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "carryover/error.h"

namespace carryover::numeric {
namespace {

double evaluate(const ScalarFunction& f) {
  Tape tape;
  Var out = f(tape);
  const double v = out.item();
  if (!std::isfinite(v)) throw NumericError("finite_diff_check: non-finite function value");
  return v;
}

}  // namespace

GradCheckResult finite_diff_check_detailed(const ScalarFunction& f,
                                           std::span<Parameter* const> params, double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-4)) {
    throw RangeError("finite_diff_check: eps must lie in [1e-7, 1e-4]");
  }

  Gradients analytic;
  {
    Tape tape;
    Var out = f(tape);
    if (!std::isfinite(out.item())) {
      throw NumericError("finite_diff_check: non-finite function value");
    }
    tape.backward(out, &analytic);
  }

  GradCheckResult result;
  for (Parameter* p : params) {
    const std::vector<double>* g = analytic.find(*p);
    auto values = p->value.data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double original = values[i];
      values[i] = original + eps;
      const double up = evaluate(f);
      values[i] = original - eps;
      const double down = evaluate(f);
      values[i] = original;

      const double numeric = (up - down) / (2.0 * eps);
      const double a = g ? (*g)[i] : 0.0;
      const double err = std::abs(a - numeric) / std::max(1.0, std::abs(a));
      if (!std::isfinite(err)) throw NumericError("finite_diff_check: non-finite difference");
      if (result.worst_parameter.empty() || err > result.max_relative_error) {
        result = {err, p->name, i, a, numeric};
      }
    }
  }
  return result;
}

double finite_diff_check(const ScalarFunction& f, std::span<Parameter* const> params,
                         double eps) {
  return finite_diff_check_detailed(f, params, eps).max_relative_error;
}

}  // namespace carryover::numeric
