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

// AVX2+FMA kernel variants, compiled with -mavx2 -mfma. Processes 8 floats
// per register; matvec walks 4 rows at a time to reuse the x loads.

#include "mcdenoise/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace mcdenoise::kernels {
namespace {

inline float hsum256(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, sums);
  sums = _mm_add_ss(sums, shuf);
  return _mm_cvtss_f32(sums);
}

void matvec_bias_avx2(const float* w, const float* x, const float* bias, float* y,
                      std::size_t rows, std::size_t cols) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const float* w0 = w + (r + 0) * cols;
    const float* w1 = w + (r + 1) * cols;
    const float* w2 = w + (r + 2) * cols;
    const float* w3 = w + (r + 3) * cols;
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    __m256 acc2 = _mm256_setzero_ps();
    __m256 acc3 = _mm256_setzero_ps();
    std::size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      const __m256 xv = _mm256_loadu_ps(x + c);
      acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(w0 + c), xv, acc0);
      acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(w1 + c), xv, acc1);
      acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(w2 + c), xv, acc2);
      acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(w3 + c), xv, acc3);
    }
    float t0 = hsum256(acc0);
    float t1 = hsum256(acc1);
    float t2 = hsum256(acc2);
    float t3 = hsum256(acc3);
    for (; c < cols; ++c) {
      const float xc = x[c];
      t0 += w0[c] * xc;
      t1 += w1[c] * xc;
      t2 += w2[c] * xc;
      t3 += w3[c] * xc;
    }
    y[r + 0] = t0 + bias[r + 0];
    y[r + 1] = t1 + bias[r + 1];
    y[r + 2] = t2 + bias[r + 2];
    y[r + 3] = t3 + bias[r + 3];
  }
  for (; r < rows; ++r) {
    const float* row = w + r * cols;
    __m256 acc = _mm256_setzero_ps();
    std::size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      acc = _mm256_fmadd_ps(_mm256_loadu_ps(row + c), _mm256_loadu_ps(x + c), acc);
    }
    float t = hsum256(acc);
    for (; c < cols; ++c) t += row[c] * x[c];
    y[r] = t + bias[r];
  }
}

void matvec_transpose_avx2(const float* w, const float* x, float* y, std::size_t rows,
                           std::size_t cols) {
  std::size_t c = 0;
  const __m256 zero = _mm256_setzero_ps();
  for (; c + 8 <= cols; c += 8) _mm256_storeu_ps(y + c, zero);
  for (; c < cols; ++c) y[c] = 0.0f;

  for (std::size_t r = 0; r < rows; ++r) {
    const float* row = w + r * cols;
    const float xr = x[r];
    if (xr == 0.0f) continue;
    const __m256 xv = _mm256_set1_ps(xr);
    std::size_t j = 0;
    for (; j + 8 <= cols; j += 8) {
      __m256 acc = _mm256_loadu_ps(y + j);
      acc = _mm256_fmadd_ps(xv, _mm256_loadu_ps(row + j), acc);
      _mm256_storeu_ps(y + j, acc);
    }
    for (; j < cols; ++j) y[j] += xr * row[j];
  }
}

void rank1_update_avx2(float* g, const float* d, const float* a, std::size_t rows,
                       std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    float* row = g + r * cols;
    const float dr = d[r];
    if (dr == 0.0f) continue;
    const __m256 dv = _mm256_set1_ps(dr);
    std::size_t c = 0;
    for (; c + 8 <= cols; c += 8) {
      __m256 acc = _mm256_loadu_ps(row + c);
      acc = _mm256_fmadd_ps(dv, _mm256_loadu_ps(a + c), acc);
      _mm256_storeu_ps(row + c, acc);
    }
    for (; c < cols; ++c) row[c] += dr * a[c];
  }
}

void axpy_avx2(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 av = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 acc = _mm256_loadu_ps(y + i);
    acc = _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), acc);
    _mm256_storeu_ps(y + i, acc);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(float alpha, float* x, std::size_t n) {
  const __m256 av = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(av, _mm256_loadu_ps(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

void relu_avx2(float* x, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void mul_inplace_avx2(float* x, const float* m, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(m + i)));
  }
  for (; i < n; ++i) x[i] *= m[i];
}

void adam_update_avx2(float* p, const float* g, float* m, float* v, std::size_t n,
                      float lr, float beta1, float beta2, float eps, float inv_bc1,
                      float inv_bc2) {
  const __m256 b1 = _mm256_set1_ps(beta1);
  const __m256 b2 = _mm256_set1_ps(beta2);
  const __m256 one_minus_b1 = _mm256_set1_ps(1.0f - beta1);
  const __m256 one_minus_b2 = _mm256_set1_ps(1.0f - beta2);
  const __m256 lrv = _mm256_set1_ps(lr);
  const __m256 epsv = _mm256_set1_ps(eps);
  const __m256 bc1 = _mm256_set1_ps(inv_bc1);
  const __m256 bc2 = _mm256_set1_ps(inv_bc2);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 gv = _mm256_loadu_ps(g + i);
    __m256 mv = _mm256_loadu_ps(m + i);
    __m256 vv = _mm256_loadu_ps(v + i);
    mv = _mm256_fmadd_ps(b1, mv, _mm256_mul_ps(one_minus_b1, gv));
    vv = _mm256_fmadd_ps(b2, vv, _mm256_mul_ps(one_minus_b2, _mm256_mul_ps(gv, gv)));
    _mm256_storeu_ps(m + i, mv);
    _mm256_storeu_ps(v + i, vv);
    const __m256 m_hat = _mm256_mul_ps(mv, bc1);
    const __m256 v_hat = _mm256_mul_ps(vv, bc2);
    const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(v_hat), epsv);
    const __m256 step = _mm256_div_ps(_mm256_mul_ps(lrv, m_hat), denom);
    _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
    const float m_hat = m[i] * inv_bc1;
    const float v_hat = v[i] * inv_bc2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace

const Ops* avx2_ops_table() {
  static const Ops ops = {
      "avx2",
      matvec_bias_avx2,
      matvec_transpose_avx2,
      rank1_update_avx2,
      axpy_avx2,
      scale_avx2,
      relu_avx2,
      mul_inplace_avx2,
      adam_update_avx2,
  };
  return &ops;
}

}  // namespace mcdenoise::kernels

#else

namespace mcdenoise::kernels {
const Ops* avx2_ops_table() { return nullptr; }
}  // namespace mcdenoise::kernels

#endif  // __AVX2__ && __FMA__
