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

#include "mcdenoise/kernels.hpp"

#include <atomic>

namespace mcdenoise::kernels {

// Defined in the per-ISA translation units; return nullptr when compiled out.
const Ops* avx2_ops_table();
const Ops* neon_ops_table();

namespace {

bool cpu_has_avx2_fma() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* detect_best() {
  if (const Ops* avx2 = avx2_ops_table(); avx2 != nullptr && cpu_has_avx2_fma()) {
    return avx2;
  }
  if (const Ops* neon = neon_ops_table(); neon != nullptr) {
    return neon;
  }
  return &scalar_ops();
}

std::atomic<const Ops*> g_override{nullptr};

}  // namespace

const Ops* avx2_ops() {
  const Ops* table = avx2_ops_table();
  return (table != nullptr && cpu_has_avx2_fma()) ? table : nullptr;
}

const Ops* neon_ops() { return neon_ops_table(); }

const Ops& active_ops() {
  if (const Ops* forced = g_override.load(std::memory_order_acquire)) return *forced;
  static const Ops* best = detect_best();
  return *best;
}

void set_active_ops(const Ops* ops) { g_override.store(ops, std::memory_order_release); }

}  // namespace mcdenoise::kernels
