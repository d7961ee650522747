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

#include "mcdenoise/mc_dropout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcdenoise/parallel.hpp"
#include "mcdenoise/rng.hpp"

namespace mcdenoise {
namespace {

constexpr std::uint64_t kStreamFrame = 0x11;

void check_config(const McConfig& cfg) {
  if (cfg.t_passes == 0) {
    throw std::invalid_argument("mc_forward: t_passes must be >= 1");
  }
  if (!(cfg.tau_inv >= 0.0)) {
    throw std::invalid_argument("mc_forward: tau_inv must be >= 0");
  }
}

}  // namespace

namespace detail {

std::uint64_t frame_seed(std::uint64_t base_seed, std::size_t frame_index) {
  return derive_seed(base_seed, kStreamFrame, frame_index);
}

McEstimate mc_forward_unchecked(const MlpModel& model, std::span<const float> x,
                                const McConfig& cfg) {
  const std::size_t dim = model.output_dim();
  McEstimate est;
  est.mean.resize(dim);
  est.per_bin_var.resize(dim);

  std::vector<std::vector<float>> acts;
  if (model.dropout_rate == 0.0) {
    // Every pass is identical; one deterministic pass carries the mean and
    // the variance reduces to the tau_inv correction.
    forward_into(model, x, nullptr, acts);
    const std::vector<float>& y = acts.back();
    double trace = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      est.mean[k] = static_cast<double>(y[k]);
      est.per_bin_var[k] = cfg.tau_inv;
      trace += cfg.tau_inv;
    }
    est.var_trace = trace;
    return est;
  }

  const std::size_t t_total = cfg.t_passes;
  std::vector<float> samples(t_total * dim);
  for (std::size_t t = 0; t < t_total; ++t) {
    const DropoutMask mask = make_dropout_mask(model, cfg.seed, t);
    forward_into(model, x, &mask, acts);
    const std::vector<float>& y = acts.back();
    std::copy(y.begin(), y.end(), samples.begin() + t * dim);
  }

  const double inv_t = 1.0 / static_cast<double>(t_total);
  for (std::size_t k = 0; k < dim; ++k) {
    double acc = 0.0;
    for (std::size_t t = 0; t < t_total; ++t) {
      acc += static_cast<double>(samples[t * dim + k]);
    }
    est.mean[k] = acc * inv_t;
  }
  double trace = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    // Centered second moment; algebraically equal to the
    // (1/T) sum S_t^2 - mean^2 estimator but never negative.
    double acc = 0.0;
    for (std::size_t t = 0; t < t_total; ++t) {
      const double d = static_cast<double>(samples[t * dim + k]) - est.mean[k];
      acc += d * d;
    }
    double v = acc * inv_t + cfg.tau_inv;
    if (v < 0.0) v = 0.0;
    est.per_bin_var[k] = v;
    trace += v;
  }
  est.var_trace = trace;
  return est;
}

}  // namespace detail

McEstimate mc_forward(const MlpModel& model, std::span<const float> x,
                      const McConfig& cfg) {
  check_config(cfg);
  model.validate();
  if (x.size() != model.input_dim()) {
    throw std::invalid_argument("mc_forward: input dimension mismatch");
  }
  for (float v : x) {
    if (!(v >= 0.0f) || !std::isfinite(v)) {
      throw std::invalid_argument("mc_forward: input must be finite and nonnegative");
    }
  }
  return detail::mc_forward_unchecked(model, x, cfg);
}

EnhanceResult enhance_waveform(const MlpModel& model, const Waveform& noisy,
                               const StftConfig& stft_cfg, const McConfig& mc_cfg,
                               unsigned threads) {
  check_config(mc_cfg);
  model.validate();
  if (model.input_dim() != stft_cfg.n_bins || model.output_dim() != stft_cfg.n_bins) {
    throw std::invalid_argument("enhance: model input/output width must equal n_bins");
  }

  const auto [noisy_mag, noisy_phase] = stft(noisy, stft_cfg);
  const std::size_t n_frames = noisy_mag.frame_count();

  MagnitudeSpectrogram enhanced_mag;
  enhanced_mag.n_bins = stft_cfg.n_bins;
  enhanced_mag.frames.resize(n_frames);
  std::vector<double> var_trace(n_frames, 0.0);

  parallel_chunks(n_frames, threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t f = begin; f < end; ++f) {
      McConfig frame_cfg = mc_cfg;
      frame_cfg.seed = detail::frame_seed(mc_cfg.seed, f);
      const McEstimate est =
          detail::mc_forward_unchecked(model, noisy_mag.frames[f], frame_cfg);
      auto& out = enhanced_mag.frames[f];
      out.resize(stft_cfg.n_bins);
      for (std::size_t k = 0; k < stft_cfg.n_bins; ++k) {
        out[k] = static_cast<float>(est.mean[k]);
      }
      var_trace[f] = est.var_trace;
    }
  });

  EnhanceResult result;
  result.enhanced = istft(enhanced_mag, noisy_phase, stft_cfg, noisy.size());
  result.frame_var_trace = std::move(var_trace);
  return result;
}

}  // namespace mcdenoise
