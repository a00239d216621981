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

#include "carryover/training/optimizer.h"

#include <cmath>

#include "carryover/error.h"

namespace carryover {

Adam::Adam(numeric::ParameterSet& params, AdamConfig config) : params_(&params), config_(config) {
  if (!(config.learning_rate > 0.0)) throw RangeError("learning rate must be positive");
  m_.resize(params.size());
  v_.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i].assign(params[i].value.size(), 0.0);
    v_[i].assign(params[i].value.size(), 0.0);
  }
}

void Adam::step(const numeric::Gradients& grads) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params_->size(); ++i) {
    auto& p = (*params_)[i];
    const std::vector<double>* g = grads.find(p);
    auto values = p.value.data();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double gk = g ? (*g)[k] : 0.0;
      m[k] = config_.beta1 * m[k] + (1.0 - config_.beta1) * gk;
      v[k] = config_.beta2 * v[k] + (1.0 - config_.beta2) * gk * gk;
      values[k] -= config_.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + config_.epsilon);
    }
  }
}

double gradient_norm(const numeric::Gradients& grads, const numeric::ParameterSet& params) {
  double sq = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (const auto* g = grads.find(params[i])) {
      for (double x : *g) sq += x * x;
    }
  }
  return std::sqrt(sq);
}

double clip_gradients(numeric::Gradients& grads, const numeric::ParameterSet& params,
                      double max_norm) {
  if (!(max_norm > 0.0)) throw RangeError("clip norm must be positive");
  const double norm = gradient_norm(grads, params);
  if (!std::isfinite(norm)) throw NumericError("non-finite gradient norm");
  if (norm > max_norm) grads.scale(max_norm / norm);
  return norm;
}

}  // namespace carryover
