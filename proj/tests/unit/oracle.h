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

#ifndef CARRYOVER_TESTS_UNIT_ORACLE_H_
#define CARRYOVER_TESTS_UNIT_ORACLE_H_

// Plain-double reference implementations used as test oracles. They share no
// code with the library's tape.

#include <cmath>
#include <cstddef>
#include <vector>

#include "carryover/numeric/tensor.h"

namespace carryover::oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline Mat to_mat(const numeric::Tensor& t) {
  Mat m(t.rows(), Vec(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) m[r][c] = t.at(r, c);
  }
  return m;
}

inline Vec to_vec(const numeric::Tensor& t) { return t.values(); }

inline Vec mv(const Mat& w, const Vec& x) {
  Vec y(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += w[i][j] * x[j];
  }
  return y;
}

inline Vec plus(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec times(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return a;
}

inline Vec sig(Vec a) {
  for (double& v : a) v = 1.0 / (1.0 + std::exp(-v));
  return a;
}

inline Vec th(Vec a) {
  for (double& v : a) v = std::tanh(v);
  return a;
}

inline Vec join(std::initializer_list<Vec> parts) {
  Vec out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline Vec softmax(const Vec& s) {
  double m = s[0];
  for (double v : s) m = std::max(m, v);
  Vec e(s.size());
  double z = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) z += (e[i] = std::exp(s[i] - m));
  for (double& v : e) v /= z;
  return e;
}

struct Lstm {
  Mat w[4], u[4];
  Vec b[4];
  Vec attention;
};

// Standard LSTM from zero state, gates (input, forget, output, candidate),
// then dot-product attention pooling over the hidden states.
inline Vec lstm_attention(const Lstm& p, const std::vector<Vec>& inputs, Vec* weights = nullptr) {
  const std::size_t H = p.b[0].size();
  Vec h(H, 0.0), c(H, 0.0);
  std::vector<Vec> states;
  for (const auto& x : inputs) {
    Vec pre[4];
    for (int g = 0; g < 4; ++g) pre[g] = plus(plus(mv(p.w[g], x), mv(p.u[g], h)), p.b[g]);
    const Vec i = sig(pre[0]), f = sig(pre[1]), o = sig(pre[2]), g = th(pre[3]);
    c = plus(times(f, c), times(i, g));
    h = times(o, th(c));
    states.push_back(h);
  }
  Vec scores;
  for (const auto& s : states) {
    double d = 0.0;
    for (std::size_t k = 0; k < H; ++k) d += s[k] * p.attention[k];
    scores.push_back(d);
  }
  const Vec a = softmax(scores);
  if (weights) *weights = a;
  Vec out(H, 0.0);
  for (std::size_t t = 0; t < states.size(); ++t) {
    for (std::size_t k = 0; k < H; ++k) out[k] += a[t] * states[t][k];
  }
  return out;
}

}  // namespace carryover::oracle

#endif  // CARRYOVER_TESTS_UNIT_ORACLE_H_
