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

#include "mcdenoise/selector.hpp"

#include <cmath>
#include <stdexcept>

#include "mcdenoise/parallel.hpp"

namespace mcdenoise {
namespace {

FrameSelection select_frame_unchecked(const ModelBank& bank, std::span<const float> x,
                                      const McConfig& cfg, std::size_t frame_index) {
  FrameSelection sel;
  sel.frame_index = frame_index;
  sel.var_traces.resize(bank.size());

  std::vector<McEstimate> estimates(bank.size());
  for (std::size_t i = 0; i < bank.size(); ++i) {
    estimates[i] = detail::mc_forward_unchecked(bank.models[i].model, x, cfg);
    sel.var_traces[i] = estimates[i].var_trace;
  }
  const std::size_t best = argmin_lowest_index(sel.var_traces);
  sel.chosen_index = best;
  sel.chosen_model_id = bank.models[best].id;
  sel.chosen_mean = std::move(estimates[best].mean);
  return sel;
}

}  // namespace

std::size_t argmin_lowest_index(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("argmin: empty value list");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    // Strict less-than keeps the lowest index on ties.
    if (values[i] < values[best]) best = i;
  }
  return best;
}

void ModelBank::validate() const {
  if (models.empty()) {
    throw std::invalid_argument("model bank: need at least one model");
  }
  const std::vector<std::size_t> arch = models.front().model.arch();
  for (const BankEntry& entry : models) {
    entry.model.validate();
    if (entry.model.arch() != arch) {
      throw std::invalid_argument("model bank: model '" + entry.id +
                                  "' does not share the bank architecture");
    }
  }
}

FrameSelection select_frame(const ModelBank& bank, std::span<const float> x,
                            const McConfig& cfg) {
  bank.validate();
  if (cfg.t_passes == 0) {
    throw std::invalid_argument("select_frame: t_passes must be >= 1");
  }
  if (x.size() != bank.models.front().model.input_dim()) {
    throw std::invalid_argument("select_frame: input dimension mismatch");
  }
  for (float v : x) {
    if (!(v >= 0.0f) || !std::isfinite(v)) {
      throw std::invalid_argument("select_frame: input must be finite and nonnegative");
    }
  }
  return select_frame_unchecked(bank, x, cfg, 0);
}

MultiEnhanceResult enhance_multi(const ModelBank& bank, const Waveform& noisy,
                                 const StftConfig& stft_cfg, const McConfig& mc_cfg,
                                 unsigned threads) {
  bank.validate();
  if (mc_cfg.t_passes == 0) {
    throw std::invalid_argument("enhance_multi: t_passes must be >= 1");
  }
  const MlpModel& first = bank.models.front().model;
  if (first.input_dim() != stft_cfg.n_bins || first.output_dim() != stft_cfg.n_bins) {
    throw std::invalid_argument("enhance_multi: bank width must equal n_bins");
  }

  const auto [noisy_mag, noisy_phase] = stft(noisy, stft_cfg);
  const std::size_t n_frames = noisy_mag.frame_count();

  MagnitudeSpectrogram enhanced_mag;
  enhanced_mag.n_bins = stft_cfg.n_bins;
  enhanced_mag.frames.resize(n_frames);
  std::vector<FrameSelection> selections(n_frames);

  parallel_chunks(n_frames, threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t f = begin; f < end; ++f) {
      McConfig frame_cfg = mc_cfg;
      frame_cfg.seed = detail::frame_seed(mc_cfg.seed, f);
      FrameSelection sel = select_frame_unchecked(bank, noisy_mag.frames[f], frame_cfg, f);
      auto& out = enhanced_mag.frames[f];
      out.resize(stft_cfg.n_bins);
      for (std::size_t k = 0; k < stft_cfg.n_bins; ++k) {
        out[k] = static_cast<float>(sel.chosen_mean[k]);
      }
      selections[f] = std::move(sel);
    }
  });

  MultiEnhanceResult result;
  result.enhanced = istft(enhanced_mag, noisy_phase, stft_cfg, noisy.size());
  result.selections = std::move(selections);
  return result;
}

void write_selection_log(std::ostream& out, std::span<const FrameSelection> selections,
                         std::size_t n_models) {
  out << "# frame_idx,chosen_model_id";
  for (std::size_t i = 0; i < n_models; ++i) out << ",var_" << i;
  out << "\n";
  out.precision(17);
  for (const FrameSelection& sel : selections) {
    out << sel.frame_index << ',' << sel.chosen_model_id;
    for (double v : sel.var_traces) out << ',' << v;
    out << "\n";
  }
}

}  // namespace mcdenoise
