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

// Equivalence tests: every SIMD kernel variant against the scalar reference
// and against independent double-precision implementations. SIMD lanes
// reassociate sums, so comparisons are tolerance-based, scaled by the
// problem size.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <mutex>
#include <vector>

#include "mcdenoise/kernels.hpp"
#include "mcdenoise/parallel.hpp"
#include "mcdenoise/rng.hpp"

using namespace mcdenoise;

namespace {

std::vector<float> random_vec(std::size_t n, Rng& rng, float lo = -1.0f, float hi = 1.0f) {
  std::vector<float> v(n);
  for (float& x : v) x = static_cast<float>(rng.next_range(lo, hi));
  return v;
}

// Independent double-precision references.
std::vector<double> matvec_bias_ref(const std::vector<float>& w, const std::vector<float>& x,
                                    const std::vector<float>& b, std::size_t rows,
                                    std::size_t cols) {
  std::vector<double> y(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    for (std::size_t c = 0; c < cols; ++c) {
      acc += static_cast<double>(w[r * cols + c]) * static_cast<double>(x[c]);
    }
    y[r] = acc;
  }
  return y;
}

std::vector<double> matvec_transpose_ref(const std::vector<float>& w,
                                         const std::vector<float>& x, std::size_t rows,
                                         std::size_t cols) {
  std::vector<double> y(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      y[c] += static_cast<double>(w[r * cols + c]) * static_cast<double>(x[r]);
    }
  }
  return y;
}

void check_close(const std::vector<float>& got, const std::vector<double>& want,
                 double tol) {
  REQUIRE(got.size() == want.size());
  double scale = 1.0;
  for (double w : want) scale = std::max(scale, std::abs(w));
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(std::abs(static_cast<double>(got[i]) - want[i]) <= tol * scale);
  }
}

std::vector<const kernels::Ops*> available_tables() {
  std::vector<const kernels::Ops*> tables = {&kernels::scalar_ops()};
  if (const kernels::Ops* avx2 = kernels::avx2_ops()) tables.push_back(avx2);
  if (const kernels::Ops* neon = kernels::neon_ops()) tables.push_back(neon);
  return tables;
}

const std::size_t kSizes[] = {1, 2, 3, 7, 8, 9, 15, 16, 17, 31, 64, 100, 257};

}  // namespace

TEST_CASE("matvec_bias matches double reference on all tables") {
  Rng rng(42);
  for (const kernels::Ops* ops : available_tables()) {
    CAPTURE(ops->name);
    for (std::size_t rows : kSizes) {
      for (std::size_t cols : {std::size_t(1), std::size_t(8), std::size_t(13),
                               std::size_t(64), std::size_t(257)}) {
        const auto w = random_vec(rows * cols, rng);
        const auto x = random_vec(cols, rng);
        const auto b = random_vec(rows, rng);
        std::vector<float> y(rows, -777.0f);
        ops->matvec_bias(w.data(), x.data(), b.data(), y.data(), rows, cols);
        check_close(y, matvec_bias_ref(w, x, b, rows, cols),
                    1e-6 * std::sqrt(static_cast<double>(cols)));
      }
    }
  }
}

TEST_CASE("matvec_transpose matches double reference on all tables") {
  Rng rng(43);
  for (const kernels::Ops* ops : available_tables()) {
    CAPTURE(ops->name);
    for (std::size_t rows : kSizes) {
      for (std::size_t cols : {std::size_t(1), std::size_t(9), std::size_t(32)}) {
        const auto w = random_vec(rows * cols, rng);
        const auto x = random_vec(rows, rng);
        std::vector<float> y(cols, -777.0f);
        ops->matvec_transpose(w.data(), x.data(), y.data(), rows, cols);
        check_close(y, matvec_transpose_ref(w, x, rows, cols),
                    1e-6 * std::sqrt(static_cast<double>(rows)));
      }
    }
  }
}

TEST_CASE("rank1_update accumulates the outer product on all tables") {
  Rng rng(44);
  for (const kernels::Ops* ops : available_tables()) {
    CAPTURE(ops->name);
    const std::size_t rows = 23;
    const std::size_t cols = 41;
    const auto g0 = random_vec(rows * cols, rng);
    const auto d = random_vec(rows, rng);
    const auto a = random_vec(cols, rng);
    auto g = g0;
    ops->rank1_update(g.data(), d.data(), a.data(), rows, cols);
    std::vector<double> want(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        want[r * cols + c] = static_cast<double>(g0[r * cols + c]) +
                             static_cast<double>(d[r]) * static_cast<double>(a[c]);
      }
    }
    check_close(g, want, 1e-6);
  }
}

TEST_CASE("axpy, scale, relu, mul_inplace match the reference on all tables") {
  Rng rng(45);
  for (const kernels::Ops* ops : available_tables()) {
    CAPTURE(ops->name);
    for (std::size_t n : kSizes) {
      const auto x = random_vec(n, rng);
      const auto m = random_vec(n, rng, 0.0f, 2.0f);
      auto y = random_vec(n, rng);
      const auto y0 = y;
      const float alpha = static_cast<float>(rng.next_range(-2.0, 2.0));

      ops->axpy(alpha, x.data(), y.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(y[i] == doctest::Approx(y0[i] + alpha * x[i]).epsilon(1e-5));
      }

      auto s = x;
      ops->scale(alpha, s.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(s[i] == doctest::Approx(alpha * x[i]).epsilon(1e-6));
      }

      auto r = y0;
      ops->relu(r.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(r[i] == (y0[i] > 0.0f ? y0[i] : 0.0f));  // exact
      }

      auto mm = y0;
      ops->mul_inplace(mm.data(), m.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(mm[i] == y0[i] * m[i]);  // exact: single multiply per lane
      }
    }
  }
}

TEST_CASE("adam_update agrees across tables") {
  Rng rng(46);
  const kernels::Ops& ref = kernels::scalar_ops();
  for (const kernels::Ops* ops : available_tables()) {
    CAPTURE(ops->name);
    for (std::size_t n : {std::size_t(5), std::size_t(8), std::size_t(100)}) {
      const auto g = random_vec(n, rng);
      auto p1 = random_vec(n, rng);
      auto p2 = p1;
      auto m1 = random_vec(n, rng, 0.0f, 0.1f);
      auto m2 = m1;
      auto v1 = random_vec(n, rng, 0.0f, 0.1f);
      auto v2 = v1;
      ref.adam_update(p1.data(), g.data(), m1.data(), v1.data(), n, 1e-3f, 0.9f, 0.999f,
                      1e-8f, 1.5f, 1.2f);
      ops->adam_update(p2.data(), g.data(), m2.data(), v2.data(), n, 1e-3f, 0.9f, 0.999f,
                       1e-8f, 1.5f, 1.2f);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(p2[i] == doctest::Approx(p1[i]).epsilon(1e-6));
        CHECK(m2[i] == doctest::Approx(m1[i]).epsilon(1e-6));
        CHECK(v2[i] == doctest::Approx(v1[i]).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("parallel_chunks partitions the range exactly once") {
  for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(7), std::size_t(100)}) {
    for (unsigned threads : {1u, 2u, 4u, 9u}) {
      std::vector<int> hits(n, 0);
      std::mutex guard;
      std::vector<unsigned> chunks;
      parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned chunk) {
        std::lock_guard<std::mutex> lock(guard);
        chunks.push_back(chunk);
        for (std::size_t i = begin; i < end; ++i) hits[i]++;
      });
      for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
      for (std::size_t a = 0; a < chunks.size(); ++a) {
        for (std::size_t b = a + 1; b < chunks.size(); ++b) {
          CHECK(chunks[a] != chunks[b]);
        }
      }
    }
  }
  CHECK(resolve_threads(1) == 1);
  CHECK(resolve_threads(6) == 6);
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("runtime dispatch selects a usable table") {
  const kernels::Ops& active = kernels::active_ops();
  CHECK(active.matvec_bias != nullptr);
  MESSAGE("active kernel table: ", active.name);
  // Forcing scalar and restoring must round-trip.
  kernels::set_active_ops(&kernels::scalar_ops());
  CHECK(std::string(kernels::active_ops().name) == "scalar");
  kernels::set_active_ops(nullptr);
  CHECK(std::string(kernels::active_ops().name) == std::string(active.name));
}
