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
#include <cstdint>
#include <span>
#include <vector>

#include "mcdenoise/mlp.hpp"
#include "mcdenoise/stft.hpp"

namespace mcdenoise {

/// Monte-Carlo dropout inference parameters. tau_inv is the inverse model
/// precision added uniformly to every bin's variance; in the Gaussian-process
/// reading of dropout, tau = l^2 * p_keep / (2 * N * lambda) with prior
/// length scale l, keep probability p_keep, training-set size N and weight
/// decay lambda. With the default lambda = 0 the correction vanishes, so
/// tau_inv defaults to 0 and only this scalar ever enters the computation.
struct McConfig {
  std::size_t t_passes = 50;
  std::uint64_t seed = 0;
  double tau_inv = 0.0;
};

/// Predictive mean and variance summary for one frame.
struct McEstimate {
  std::vector<double> mean;         // empirical mean of the T stochastic outputs
  std::vector<double> per_bin_var;  // population variance per bin, plus tau_inv
  double var_trace = 0.0;           // sum of per_bin_var = covariance trace
};

/// Runs t_passes stochastic forward passes (pass t's dropout mask is drawn
/// from the (seed, t) substream) and reduces them to the predictive mean and
/// the diagonal of the predictive covariance, population form (divide by T).
/// With dropout_rate == 0 every pass is identical: the mean equals the
/// deterministic forward pass and the variance is exactly tau_inv per bin.
/// Throws std::invalid_argument when t_passes == 0 or tau_inv < 0.
McEstimate mc_forward(const MlpModel& model, std::span<const float> x,
                      const McConfig& cfg);

struct EnhanceResult {
  Waveform enhanced;
  std::vector<double> frame_var_trace;  // one uncertainty value per frame
};

/// Single-model enhancement: per frame, the predictive mean is the enhanced
/// magnitude spectrum; the waveform is rebuilt with the noisy phase by
/// overlap-add. Each frame uses an independent seed substream derived from
/// (cfg.seed, frame index). Output length equals the input length.
EnhanceResult enhance_waveform(const MlpModel& model, const Waveform& noisy,
                               const StftConfig& stft_cfg, const McConfig& mc_cfg,
                               unsigned threads = 1);

namespace detail {
/// mc_forward without per-call model validation (hot loop; callers validate
/// the model and input once).
McEstimate mc_forward_unchecked(const MlpModel& model, std::span<const float> x,
                                const McConfig& cfg);
/// The per-frame seed fan-out shared by enhance_waveform, select_frame
/// consumers and cmd_correlate.
std::uint64_t frame_seed(std::uint64_t base_seed, std::size_t frame_index);
}  // namespace detail

}  // namespace mcdenoise
