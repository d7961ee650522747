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
#include <string>
#include <vector>

#include "mcdenoise/mixer.hpp"
#include "mcdenoise/stft.hpp"

namespace mcdenoise {

/// One fully connected layer, float32 parameters, row-major weights.
struct Layer {
  std::size_t out_dim = 0;
  std::size_t in_dim = 0;
  std::vector<float> weights;  // out_dim x in_dim
  std::vector<float> bias;     // out_dim
};

/// Fully connected network with ReLU on every layer, including the output
/// (spectral magnitudes are nonnegative). Dropout, when enabled, applies to
/// the activations of each hidden layer in inverted form: kept units are
/// scaled by 1/(1-p) so no rescaling is needed at inference.
struct MlpModel {
  std::vector<Layer> layers;
  double dropout_rate = 0.0;  // p, probability of a unit being dropped

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }
  std::size_t hidden_layer_count() const { return layers.empty() ? 0 : layers.size() - 1; }
  std::vector<std::size_t> arch() const;
  std::size_t parameter_count() const;

  /// Throws std::invalid_argument unless layer dimensions chain, all
  /// parameters are finite and dropout_rate is in [0, 1).
  void validate() const;
};

/// Builds a model with seeded He-style uniform fan-in init
/// (U(-sqrt(6/fan_in), sqrt(6/fan_in))) and zero biases.
MlpModel make_model(const std::vector<std::size_t>& arch, double dropout_rate,
                    std::uint64_t seed);

/// Per-hidden-layer multiplier vectors: 0 for dropped units, 1/(1-p) for kept
/// units. An empty mask means "no dropout" (deterministic forward).
struct DropoutMask {
  std::vector<std::vector<float>> hidden_scale;

  bool empty() const { return hidden_scale.empty(); }
};

/// Draws the mask for one stochastic pass. Fully determined by
/// (model architecture, dropout rate, seed, pass_index).
DropoutMask make_dropout_mask(const MlpModel& model, std::uint64_t seed,
                              std::uint64_t pass_index);

/// Forward pass. mask == nullptr (or empty) disables dropout. Validates the
/// input dimension and nonnegativity; output is always nonnegative (final
/// ReLU).
std::vector<float> forward(const MlpModel& model, std::span<const float> x,
                           const DropoutMask* mask = nullptr);

namespace detail {
/// Forward pass without per-call validation, recording every layer output:
/// acts[0] is the input, acts[l+1] the post-ReLU (and post-dropout, for
/// hidden layers) output of layer l. Callers validate model and input once
/// up front; this is the inference/training hot path.
void forward_into(const MlpModel& model, std::span<const float> x,
                  const DropoutMask* mask, std::vector<std::vector<float>>& acts);
}  // namespace detail

/// Mean square logarithmic error between nonnegative vectors:
/// (1/R) * sum_k (log(reference_k + 1) - log(estimate_k + 1))^2.
/// Throws on size mismatch or negative inputs.
double msle_loss(std::span<const float> estimate, std::span<const float> reference);

/// Parameter gradients, same shapes as the model layers.
struct Gradients {
  std::vector<Layer> layers;
  double mean_loss = 0.0;

  void accumulate(const Gradients& other);
  void scale(float s);
};

Gradients zero_gradients(const MlpModel& model);

struct TrainSample {
  std::vector<float> input;
  std::vector<float> target;
};

/// Gradients of the mean batch MSLE w.r.t. every weight and bias.
/// masks must be empty (no dropout) or hold one independent mask per sample.
Gradients backward(const MlpModel& model, std::span<const TrainSample> batch,
                   std::span<const DropoutMask> masks, unsigned threads = 1);

struct TrainConfig {
  double learning_rate = 1e-4;
  std::size_t batch_size = 128;
  std::size_t epochs = 10;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // lambda; 0 by default, so tau^-1 = 0 downstream
  std::uint64_t seed = 0;
  bool use_sgd = false;  // plain SGD behind a switch; Adam is the default
  unsigned threads = 1;
  std::vector<std::size_t> arch = {257, 2048, 2048, 2048, 257};
  double dropout_rate = 0.2;
};

/// First and second moment estimates plus the step counter.
struct AdamState {
  std::vector<Layer> m;
  std::vector<Layer> v;
  std::uint64_t t = 0;
};

AdamState make_adam_state(const MlpModel& model);

/// Standard Adam update with bias correction. weight_decay > 0 adds
/// lambda * theta to the gradient before the moment updates.
void adam_step(MlpModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& cfg);

/// Plain SGD update: theta -= lr * (g + lambda * theta).
void sgd_step(MlpModel& model, const Gradients& grads, const TrainConfig& cfg);

/// Versioned little-endian binary model file:
/// magic "MCDN", u32 version, u32 arch length, u32 dims..., f64 dropout rate,
/// then per layer row-major f32 weights followed by f32 biases.
void save_model(const MlpModel& model, const std::string& path);

/// Throws std::runtime_error on bad magic, unsupported version, truncated
/// payload or arch/payload size mismatch. Round-trips bit-identically.
MlpModel load_model(const std::string& path);

struct TrainResult {
  MlpModel model;
  std::vector<double> epoch_loss;  // mean training loss per epoch
};

/// Trains on explicit (noisy frame, clean frame) pairs. Shuffles per epoch
/// (seeded); per-sample dropout masks are derived from (seed, epoch, sample
/// index), so a fixed seed reproduces the whole trajectory.
TrainResult train_on_samples(const std::vector<TrainSample>& samples,
                             const TrainConfig& cfg);

/// Mixes every manifest job at its target SNR (seeded noise offsets), pairs
/// each noisy frame with its aligned clean frame and trains on the pool.
/// Throws on an empty manifest.
TrainResult train(const DatasetManifest& manifest, const StftConfig& stft_cfg,
                  const TrainConfig& cfg);

}  // namespace mcdenoise
