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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mcdenoise/mc_dropout.hpp"
#include "mcdenoise/mlp.hpp"
#include "mcdenoise/stft.hpp"

namespace mcdenoise {

struct BankEntry {
  std::string id;
  MlpModel model;
};

/// A set of noise-specific models sharing one architecture.
struct ModelBank {
  std::vector<BankEntry> models;

  std::size_t size() const { return models.size(); }
  /// Throws unless the bank is non-empty and all models share the arch.
  void validate() const;
};

/// Outcome of minimum-uncertainty selection for one frame.
struct FrameSelection {
  std::size_t frame_index = 0;
  std::size_t chosen_index = 0;  // bank position (ties break to the lowest)
  std::string chosen_model_id;
  std::vector<double> var_traces;   // one per bank model
  std::vector<double> chosen_mean;  // the winner's predictive mean
};

/// Index of the smallest value; ties break to the lowest index. The
/// selection rule select_frame applies to the per-model variance traces.
std::size_t argmin_lowest_index(std::span<const double> values);

/// Runs mc_forward for every bank model on the same frame and picks the one
/// with the minimum variance trace. All models consume the same mask
/// substreams (common random numbers), so identical models produce identical
/// traces and the tie-break is exercised rather than decided by mask luck.
FrameSelection select_frame(const ModelBank& bank, std::span<const float> x,
                            const McConfig& cfg);

struct MultiEnhanceResult {
  Waveform enhanced;
  std::vector<FrameSelection> selections;  // one per frame
};

/// Multi-model enhancement: per-frame minimum-variance selection, then
/// overlap-add reconstruction with the noisy phase. Per-frame seeds follow
/// the same fan-out as enhance_waveform, so a one-model bank reproduces the
/// single-model path exactly.
MultiEnhanceResult enhance_multi(const ModelBank& bank, const Waveform& noisy,
                                 const StftConfig& stft_cfg, const McConfig& mc_cfg,
                                 unsigned threads = 1);

/// Selection log: documented header line, then one CSV row per frame:
/// frame_idx, chosen_model_id, var_0, ..., var_{M-1}.
void write_selection_log(std::ostream& out, std::span<const FrameSelection> selections,
                         std::size_t n_models);

}  // namespace mcdenoise
