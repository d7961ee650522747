// Copyright 2026 The mcdenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar reference kernels. These define the semantics the SIMD variants are
// tested against.

#include <cmath>
#include <cstddef>

#include "mcdenoise/kernels.hpp"

namespace mcdenoise::kernels {
namespace {

void matvec_bias_scalar(const float* w, const float* x, const float* bias, float* y,
                        std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const float* row = w + r * cols;
    float acc = 0.0f;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc + bias[r];
  }
}

void matvec_transpose_scalar(const float* w, const float* x, float* y, std::size_t rows,
                             std::size_t cols) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0f;
  for (std::size_t r = 0; r < rows; ++r) {
    const float* row = w + r * cols;
    const float xr = x[r];
    for (std::size_t c = 0; c < cols; ++c) y[c] += xr * row[c];
  }
}

void rank1_update_scalar(float* g, const float* d, const float* a, std::size_t rows,
                         std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    float* row = g + r * cols;
    const float dr = d[r];
    for (std::size_t c = 0; c < cols; ++c) row[c] += dr * a[c];
  }
}

void axpy_scalar(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(float alpha, float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void relu_scalar(float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void mul_inplace_scalar(float* x, const float* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= m[i];
}

void adam_update_scalar(float* p, const float* g, float* m, float* v, std::size_t n,
                        float lr, float beta1, float beta2, float eps, float inv_bc1,
                        float inv_bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
    const float m_hat = m[i] * inv_bc1;
    const float v_hat = v[i] * inv_bc2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",
      matvec_bias_scalar,
      matvec_transpose_scalar,
      rank1_update_scalar,
      axpy_scalar,
      scale_scalar,
      relu_scalar,
      mul_inplace_scalar,
      adam_update_scalar,
  };
  return ops;
}

}  // namespace mcdenoise::kernels
