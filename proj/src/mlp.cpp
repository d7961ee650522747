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

#include "mcdenoise/mlp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "mcdenoise/kernels.hpp"
#include "mcdenoise/parallel.hpp"
#include "mcdenoise/rng.hpp"
#include "mcdenoise/wav_io.hpp"

namespace mcdenoise {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

constexpr char kModelMagic[4] = {'M', 'C', 'D', 'N'};
constexpr std::uint32_t kModelVersion = 1;

// Substream ids for everything the trainer randomizes.
constexpr std::uint64_t kStreamInit = 0x01;
constexpr std::uint64_t kStreamShuffle = 0x02;
constexpr std::uint64_t kStreamMask = 0x03;
constexpr std::uint64_t kStreamOffset = 0x04;

void check_finite(const std::vector<float>& v, const char* what) {
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string("model: non-finite ") + what);
    }
  }
}

// Per-sample backward into the given accumulators; returns the sample loss.
double backward_one(const MlpModel& model, const TrainSample& sample,
                    const DropoutMask* mask, Gradients& grads,
                    std::vector<std::vector<float>>& acts, std::vector<float>& delta,
                    std::vector<float>& delta_prev) {
  const auto& ops = kernels::active_ops();
  detail::forward_into(model, sample.input, mask, acts);

  const std::vector<float>& y = acts.back();
  const std::size_t r_dim = y.size();
  if (sample.target.size() != r_dim) {
    throw std::invalid_argument("backward: target dimension mismatch");
  }

  double loss = 0.0;
  delta.resize(r_dim);
  const double inv_r = 1.0 / static_cast<double>(r_dim);
  for (std::size_t k = 0; k < r_dim; ++k) {
    const double log_ref = std::log(static_cast<double>(sample.target[k]) + 1.0);
    const double log_est = std::log(static_cast<double>(y[k]) + 1.0);
    const double diff = log_ref - log_est;
    loss += diff * diff;
    // d loss / d y_k, zeroed where the output ReLU is inactive.
    delta[k] = y[k] > 0.0f
                   ? static_cast<float>(-2.0 * inv_r * diff / (static_cast<double>(y[k]) + 1.0))
                   : 0.0f;
  }
  loss *= inv_r;

  for (std::size_t li = model.layers.size(); li-- > 0;) {
    const Layer& layer = model.layers[li];
    Layer& g = grads.layers[li];
    ops.rank1_update(g.weights.data(), delta.data(), acts[li].data(), layer.out_dim,
                     layer.in_dim);
    ops.axpy(1.0f, delta.data(), g.bias.data(), layer.out_dim);
    if (li == 0) break;

    delta_prev.resize(layer.in_dim);
    ops.matvec_transpose(layer.weights.data(), delta.data(), delta_prev.data(),
                         layer.out_dim, layer.in_dim);
    // Through the previous hidden layer's dropout and ReLU: the combined
    // factor is the mask scale where the unit fired, 0 elsewhere.
    const std::vector<float>& act = acts[li];
    const std::vector<float>* scale =
        (mask != nullptr && !mask->empty()) ? &mask->hidden_scale[li - 1] : nullptr;
    for (std::size_t i = 0; i < layer.in_dim; ++i) {
      const float factor = act[i] > 0.0f ? (scale ? (*scale)[i] : 1.0f) : 0.0f;
      delta_prev[i] *= factor;
    }
    std::swap(delta, delta_prev);
  }
  return loss;
}

void apply_weight_decay(const MlpModel& model, Gradients& scratch, const Gradients& grads,
                        double lambda) {
  const auto& ops = kernels::active_ops();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    scratch.layers[l].weights = grads.layers[l].weights;
    scratch.layers[l].bias = grads.layers[l].bias;
    ops.axpy(static_cast<float>(lambda), model.layers[l].weights.data(),
             scratch.layers[l].weights.data(), model.layers[l].weights.size());
    ops.axpy(static_cast<float>(lambda), model.layers[l].bias.data(),
             scratch.layers[l].bias.data(), model.layers[l].bias.size());
  }
}

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::ifstream& in, void* p, std::size_t n, const std::string& path) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("model: " + path + ": truncated file");
}

}  // namespace

namespace detail {

void forward_into(const MlpModel& model, std::span<const float> x,
                  const DropoutMask* mask, std::vector<std::vector<float>>& acts) {
  const auto& ops = kernels::active_ops();
  acts.resize(model.layers.size() + 1);
  acts[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const Layer& layer = model.layers[l];
    auto& out = acts[l + 1];
    out.resize(layer.out_dim);
    ops.matvec_bias(layer.weights.data(), acts[l].data(), layer.bias.data(), out.data(),
                    layer.out_dim, layer.in_dim);
    ops.relu(out.data(), out.size());
    const bool hidden = l + 1 < model.layers.size();
    if (hidden && mask != nullptr && !mask->empty()) {
      const auto& scale = mask->hidden_scale[l];
      if (scale.size() != layer.out_dim) {
        throw std::invalid_argument("dropout mask does not match layer width");
      }
      ops.mul_inplace(out.data(), scale.data(), out.size());
    }
  }
}

}  // namespace detail

std::vector<std::size_t> MlpModel::arch() const {
  std::vector<std::size_t> a;
  if (layers.empty()) return a;
  a.push_back(layers.front().in_dim);
  for (const Layer& l : layers) a.push_back(l.out_dim);
  return a;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

void MlpModel::validate() const {
  if (layers.empty()) throw std::invalid_argument("model: no layers");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("model: dropout rate must be in [0, 1)");
  }
  std::size_t prev = layers.front().in_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    if (layer.in_dim == 0 || layer.out_dim == 0) {
      throw std::invalid_argument("model: zero layer dimension");
    }
    if (layer.in_dim != prev) {
      throw std::invalid_argument("model: layer " + std::to_string(l) +
                                  " input does not chain with previous layer output");
    }
    if (layer.weights.size() != layer.out_dim * layer.in_dim ||
        layer.bias.size() != layer.out_dim) {
      throw std::invalid_argument("model: layer " + std::to_string(l) +
                                  " parameter buffer sizes do not match dimensions");
    }
    check_finite(layer.weights, "weight");
    check_finite(layer.bias, "bias");
    prev = layer.out_dim;
  }
}

MlpModel make_model(const std::vector<std::size_t>& arch, double dropout_rate,
                    std::uint64_t seed) {
  if (arch.size() < 2) {
    throw std::invalid_argument("model: architecture needs at least input and output dims");
  }
  MlpModel m;
  m.dropout_rate = dropout_rate;
  m.layers.resize(arch.size() - 1);
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    Layer& layer = m.layers[l];
    layer.in_dim = arch[l];
    layer.out_dim = arch[l + 1];
    layer.weights.resize(layer.out_dim * layer.in_dim);
    layer.bias.assign(layer.out_dim, 0.0f);
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.in_dim));
    Rng rng(derive_seed(seed, kStreamInit, l));
    for (float& w : layer.weights) {
      w = static_cast<float>(rng.next_range(-limit, limit));
    }
  }
  m.validate();
  return m;
}

DropoutMask make_dropout_mask(const MlpModel& model, std::uint64_t seed,
                              std::uint64_t pass_index) {
  DropoutMask mask;
  const double p = model.dropout_rate;
  const float keep_scale = p > 0.0 ? static_cast<float>(1.0 / (1.0 - p)) : 1.0f;
  mask.hidden_scale.resize(model.hidden_layer_count());
  for (std::size_t l = 0; l < mask.hidden_scale.size(); ++l) {
    Rng rng(derive_seed(seed, pass_index, l));
    auto& scale = mask.hidden_scale[l];
    scale.resize(model.layers[l].out_dim);
    for (float& s : scale) {
      s = rng.next_double() >= p ? keep_scale : 0.0f;
    }
  }
  return mask;
}

std::vector<float> forward(const MlpModel& model, std::span<const float> x,
                           const DropoutMask* mask) {
  model.validate();
  if (x.size() != model.input_dim()) {
    throw std::invalid_argument("forward: input has " + std::to_string(x.size()) +
                                " values, model expects " +
                                std::to_string(model.input_dim()));
  }
  for (float v : x) {
    if (!(v >= 0.0f) || !std::isfinite(v)) {
      throw std::invalid_argument("forward: input must be finite and nonnegative");
    }
  }
  if (mask != nullptr && !mask->empty() &&
      mask->hidden_scale.size() != model.hidden_layer_count()) {
    throw std::invalid_argument("forward: mask layer count mismatch");
  }
  std::vector<std::vector<float>> acts;
  detail::forward_into(model, x, mask, acts);
  return std::move(acts.back());
}

double msle_loss(std::span<const float> estimate, std::span<const float> reference) {
  if (estimate.size() != reference.size() || estimate.empty()) {
    throw std::invalid_argument("msle: vectors must be non-empty and equally sized");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < estimate.size(); ++k) {
    if (estimate[k] < 0.0f || reference[k] < 0.0f) {
      throw std::invalid_argument("msle: inputs must be nonnegative");
    }
    const double diff = std::log(static_cast<double>(reference[k]) + 1.0) -
                        std::log(static_cast<double>(estimate[k]) + 1.0);
    acc += diff * diff;
  }
  return acc / static_cast<double>(estimate.size());
}

void Gradients::accumulate(const Gradients& other) {
  const auto& ops = kernels::active_ops();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    ops.axpy(1.0f, other.layers[l].weights.data(), layers[l].weights.data(),
             layers[l].weights.size());
    ops.axpy(1.0f, other.layers[l].bias.data(), layers[l].bias.data(),
             layers[l].bias.size());
  }
  mean_loss += other.mean_loss;
}

void Gradients::scale(float s) {
  const auto& ops = kernels::active_ops();
  for (Layer& l : layers) {
    ops.scale(s, l.weights.data(), l.weights.size());
    ops.scale(s, l.bias.data(), l.bias.size());
  }
}

Gradients zero_gradients(const MlpModel& model) {
  Gradients g;
  g.layers.resize(model.layers.size());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    g.layers[l].in_dim = model.layers[l].in_dim;
    g.layers[l].out_dim = model.layers[l].out_dim;
    g.layers[l].weights.assign(model.layers[l].weights.size(), 0.0f);
    g.layers[l].bias.assign(model.layers[l].bias.size(), 0.0f);
  }
  return g;
}

Gradients backward(const MlpModel& model, std::span<const TrainSample> batch,
                   std::span<const DropoutMask> masks, unsigned threads) {
  if (batch.empty()) throw std::invalid_argument("backward: empty batch");
  if (!masks.empty() && masks.size() != batch.size()) {
    throw std::invalid_argument("backward: need one mask per sample (or none)");
  }
  for (const TrainSample& s : batch) {
    if (s.input.size() != model.input_dim()) {
      throw std::invalid_argument("backward: sample input dimension mismatch");
    }
  }

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), batch.size()));
  std::vector<Gradients> partial(workers);
  std::vector<double> partial_loss(workers, 0.0);
  for (auto& p : partial) p = zero_gradients(model);

  parallel_chunks(batch.size(), workers,
                  [&](std::size_t begin, std::size_t end, unsigned chunk) {
                    std::vector<std::vector<float>> acts;
                    std::vector<float> delta, delta_prev;
                    double loss = 0.0;
                    for (std::size_t i = begin; i < end; ++i) {
                      const DropoutMask* mask = masks.empty() ? nullptr : &masks[i];
                      loss += backward_one(model, batch[i], mask, partial[chunk], acts,
                                           delta, delta_prev);
                    }
                    partial_loss[chunk] = loss;
                  });

  // Fixed chunk-order reduction keeps results reproducible for a given
  // thread count.
  Gradients total = std::move(partial[0]);
  double loss = partial_loss[0];
  for (unsigned c = 1; c < workers; ++c) {
    total.accumulate(partial[c]);
    loss += partial_loss[c];
  }
  const float inv_batch = 1.0f / static_cast<float>(batch.size());
  total.scale(inv_batch);
  total.mean_loss = loss / static_cast<double>(batch.size());
  return total;
}

AdamState make_adam_state(const MlpModel& model) {
  AdamState s;
  Gradients z = zero_gradients(model);
  s.m = z.layers;
  s.v = std::move(z.layers);
  s.t = 0;
  return s;
}

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& cfg) {
  const auto& ops = kernels::active_ops();
  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  const float inv_bc1 = static_cast<float>(1.0 / bc1);
  const float inv_bc2 = static_cast<float>(1.0 / bc2);

  const Gradients* effective = &grads;
  Gradients decayed;
  if (cfg.weight_decay > 0.0) {
    decayed = zero_gradients(model);
    apply_weight_decay(model, decayed, grads, cfg.weight_decay);
    effective = &decayed;
  }

  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Layer& layer = model.layers[l];
    ops.adam_update(layer.weights.data(), effective->layers[l].weights.data(),
                    state.m[l].weights.data(), state.v[l].weights.data(),
                    layer.weights.size(), static_cast<float>(cfg.learning_rate),
                    static_cast<float>(cfg.beta1), static_cast<float>(cfg.beta2),
                    static_cast<float>(cfg.epsilon), inv_bc1, inv_bc2);
    ops.adam_update(layer.bias.data(), effective->layers[l].bias.data(),
                    state.m[l].bias.data(), state.v[l].bias.data(), layer.bias.size(),
                    static_cast<float>(cfg.learning_rate), static_cast<float>(cfg.beta1),
                    static_cast<float>(cfg.beta2), static_cast<float>(cfg.epsilon),
                    inv_bc1, inv_bc2);
  }
}

void sgd_step(MlpModel& model, const Gradients& grads, const TrainConfig& cfg) {
  const auto& ops = kernels::active_ops();
  const float neg_lr = static_cast<float>(-cfg.learning_rate);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Layer& layer = model.layers[l];
    ops.axpy(neg_lr, grads.layers[l].weights.data(), layer.weights.data(),
             layer.weights.size());
    ops.axpy(neg_lr, grads.layers[l].bias.data(), layer.bias.data(), layer.bias.size());
    if (cfg.weight_decay > 0.0) {
      const float decay = static_cast<float>(-cfg.learning_rate * cfg.weight_decay);
      ops.axpy(decay, layer.weights.data(), layer.weights.data(), layer.weights.size());
      ops.axpy(decay, layer.bias.data(), layer.bias.data(), layer.bias.size());
    }
  }
}

void save_model(const MlpModel& model, const std::string& path) {
  model.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("model: cannot open " + path + " for writing");

  write_bytes(out, kModelMagic, 4);
  write_bytes(out, &kModelVersion, 4);
  const std::vector<std::size_t> arch = model.arch();
  const std::uint32_t arch_len = static_cast<std::uint32_t>(arch.size());
  write_bytes(out, &arch_len, 4);
  for (std::size_t d : arch) {
    const std::uint32_t dim = static_cast<std::uint32_t>(d);
    write_bytes(out, &dim, 4);
  }
  write_bytes(out, &model.dropout_rate, 8);
  for (const Layer& l : model.layers) {
    write_bytes(out, l.weights.data(), l.weights.size() * sizeof(float));
    write_bytes(out, l.bias.data(), l.bias.size() * sizeof(float));
  }
  if (!out) throw std::runtime_error("model: write to " + path + " failed");
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("model: cannot open " + path);

  char magic[4];
  read_bytes(in, magic, 4, path);
  if (std::memcmp(magic, kModelMagic, 4) != 0) {
    throw std::runtime_error("model: " + path + ": not a model file (bad magic)");
  }
  std::uint32_t version = 0;
  read_bytes(in, &version, 4, path);
  if (version != kModelVersion) {
    throw std::runtime_error("model: " + path + ": unsupported format version " +
                             std::to_string(version));
  }
  std::uint32_t arch_len = 0;
  read_bytes(in, &arch_len, 4, path);
  if (arch_len < 2 || arch_len > 64) {
    throw std::runtime_error("model: " + path + ": implausible architecture length");
  }
  std::vector<std::size_t> arch(arch_len);
  for (auto& d : arch) {
    std::uint32_t dim = 0;
    read_bytes(in, &dim, 4, path);
    if (dim == 0) throw std::runtime_error("model: " + path + ": zero layer dimension");
    d = dim;
  }
  MlpModel m;
  read_bytes(in, &m.dropout_rate, 8, path);
  m.layers.resize(arch_len - 1);
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    Layer& layer = m.layers[l];
    layer.in_dim = arch[l];
    layer.out_dim = arch[l + 1];
    layer.weights.resize(layer.out_dim * layer.in_dim);
    layer.bias.resize(layer.out_dim);
    read_bytes(in, layer.weights.data(), layer.weights.size() * sizeof(float), path);
    read_bytes(in, layer.bias.data(), layer.bias.size() * sizeof(float), path);
  }
  // The payload must end exactly where the arch metadata says it does.
  in.peek();
  if (!in.eof()) {
    throw std::runtime_error("model: " + path +
                             ": payload size does not match architecture metadata");
  }
  m.validate();
  return m;
}

TrainResult train_on_samples(const std::vector<TrainSample>& samples,
                             const TrainConfig& cfg) {
  if (samples.empty()) throw std::invalid_argument("train: empty training set");
  if (cfg.arch.size() < 2) throw std::invalid_argument("train: bad architecture");
  for (const TrainSample& s : samples) {
    if (s.input.size() != cfg.arch.front() || s.target.size() != cfg.arch.back()) {
      throw std::invalid_argument("train: sample dimensions do not match architecture");
    }
  }
  if (cfg.batch_size == 0) throw std::invalid_argument("train: batch_size must be > 0");

  TrainResult result;
  result.model = make_model(cfg.arch, cfg.dropout_rate, derive_seed(cfg.seed, kStreamInit));
  AdamState adam = make_adam_state(result.model);

  const std::size_t n = samples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<TrainSample> batch;
  std::vector<DropoutMask> masks;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(cfg.seed, kStreamShuffle, epoch));
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(shuffle_rng.next_below(i));
      std::swap(order[i - 1], order[j]);
    }

    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      batch.clear();
      masks.clear();
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t idx = order[i];
        batch.push_back(samples[idx]);
        if (cfg.dropout_rate > 0.0) {
          masks.push_back(make_dropout_mask(result.model,
                                            derive_seed(cfg.seed, kStreamMask, epoch), idx));
        }
      }
      Gradients g = backward(result.model, batch, masks, cfg.threads);
      if (cfg.use_sgd) {
        sgd_step(result.model, g, cfg);
      } else {
        adam_step(result.model, g, adam, cfg);
      }
      epoch_loss += g.mean_loss * static_cast<double>(batch.size());
      seen += batch.size();
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(seen));
  }
  return result;
}

TrainResult train(const DatasetManifest& manifest, const StftConfig& stft_cfg,
                  const TrainConfig& cfg) {
  stft_cfg.validate();
  const std::vector<MixJob> jobs = manifest.jobs();
  if (jobs.empty()) throw std::invalid_argument("train: empty training set");
  if (cfg.arch.front() != stft_cfg.n_bins || cfg.arch.back() != stft_cfg.n_bins) {
    throw std::invalid_argument("train: architecture input/output must match n_bins");
  }

  std::vector<TrainSample> samples;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const MixJob& job = jobs[j];
    const Waveform clean = read_wav(job.clean_path);
    const Waveform noise = read_wav(job.noise_path);
    const std::size_t offset =
        pick_noise_offset(noise.size(), clean.size(), derive_seed(cfg.seed, kStreamOffset, j));
    const MixResult mixed = mix_at_snr(clean, noise, job.snr_db, offset);

    const auto [noisy_mag, noisy_phase] = stft(mixed.noisy, stft_cfg);
    const auto [clean_mag, clean_phase] = stft(clean, stft_cfg);
    (void)noisy_phase;
    (void)clean_phase;
    for (std::size_t f = 0; f < noisy_mag.frame_count(); ++f) {
      samples.push_back({noisy_mag.frames[f], clean_mag.frames[f]});
    }
  }
  return train_on_samples(samples, cfg);
}

}  // namespace mcdenoise
