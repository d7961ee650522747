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

#pragma once

#include <cstddef>

namespace mcdenoise::kernels {

/// Table of f32 inner-loop kernels. One scalar reference implementation plus
/// SIMD variants (AVX2 on x86-64, NEON on aarch64) selected once at runtime.
/// The SIMD variants are equivalence-tested against the scalar reference;
/// they may reassociate floating-point sums, so results agree to rounding,
/// not bit-for-bit. Within one process the selected table never changes,
/// which keeps rerun-with-same-seed outputs bit-identical.
struct Ops {
  const char* name;

  // y = W*x + b. W is row-major [rows x cols], x has cols elements.
  void (*matvec_bias)(const float* w, const float* x, const float* bias, float* y,
                      std::size_t rows, std::size_t cols);

  // y = W^T * x. W is row-major [rows x cols], x has rows elements, y gets cols.
  void (*matvec_transpose)(const float* w, const float* x, float* y, std::size_t rows,
                           std::size_t cols);

  // G += d * a^T (rank-1 accumulate). G row-major [rows x cols].
  void (*rank1_update)(float* g, const float* d, const float* a, std::size_t rows,
                       std::size_t cols);

  // y += alpha * x.
  void (*axpy)(float alpha, const float* x, float* y, std::size_t n);

  // x *= alpha.
  void (*scale)(float alpha, float* x, std::size_t n);

  // x = max(x, 0) in place.
  void (*relu)(float* x, std::size_t n);

  // x *= m elementwise (dropout mask application).
  void (*mul_inplace)(float* x, const float* m, std::size_t n);

  // One Adam step over n parameters. inv_bc1/inv_bc2 are the precomputed
  // 1/(1-beta^t) bias corrections.
  void (*adam_update)(float* p, const float* g, float* m, float* v, std::size_t n,
                      float lr, float beta1, float beta2, float eps, float inv_bc1,
                      float inv_bc2);
};

/// Scalar reference kernels. Always available.
const Ops& scalar_ops();

/// AVX2+FMA kernels, or nullptr when unsupported by the build or the CPU.
const Ops* avx2_ops();

/// NEON kernels, or nullptr when unsupported by the build.
const Ops* neon_ops();

/// The table selected for this machine (best SIMD variant, else scalar).
const Ops& active_ops();

/// Overrides the active table (tests, --no-simd). Pass nullptr to restore
/// automatic selection.
void set_active_ops(const Ops* ops);

}  // namespace mcdenoise::kernels
