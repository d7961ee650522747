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
#include <utility>
#include <vector>

namespace mcdenoise {

/// Mono time-domain signal, full-scale samples in [-1, 1] by convention
/// (values outside are legal in memory and only clamped at WAV export).
struct Waveform {
  std::vector<double> samples;
  std::uint32_t sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
};

/// Analysis/synthesis parameters. Defaults: 32 ms frames, 10 ms hop,
/// 512-point FFT, 257 retained bins at 16 kHz.
struct StftConfig {
  std::uint32_t sample_rate = 16000;
  std::size_t frame_len = 512;
  std::size_t hop = 160;
  std::size_t fft_size = 512;
  std::size_t n_bins = 257;

  /// Throws std::invalid_argument unless n_bins == fft_size/2 + 1,
  /// hop <= frame_len <= fft_size, and fft_size is a power of two.
  void validate() const;

  /// floor((len - frame_len)/hop) + 1, or 0 when len < frame_len.
  std::size_t frame_count(std::size_t len) const;
};

/// Per-frame nonnegative magnitudes, n_bins values per frame.
struct MagnitudeSpectrogram {
  std::size_t n_bins = 0;
  std::vector<std::vector<float>> frames;

  std::size_t frame_count() const { return frames.size(); }
};

/// Per-frame phases in (-pi, pi], paired with a MagnitudeSpectrogram.
struct PhaseSpectrogram {
  std::size_t n_bins = 0;
  std::vector<std::vector<float>> frames;

  std::size_t frame_count() const { return frames.size(); }
};

/// Periodic Hamming window, 0.54 - 0.46*cos(2*pi*n/N).
std::vector<double> hamming_window(std::size_t n);

/// Forward STFT: Hamming-windowed frames, fft_size-point FFT, bins
/// 0..n_bins-1 retained. Tail samples that do not fill a complete frame are
/// dropped. Throws std::invalid_argument ("input too short") when the signal
/// is shorter than one frame.
std::pair<MagnitudeSpectrogram, PhaseSpectrogram> stft(const Waveform& w,
                                                       const StftConfig& cfg);

/// Inverse STFT by weighted overlap-add: each frame's inverse FFT is
/// multiplied by the analysis window and accumulated; every output sample is
/// normalized by the accumulated squared window. Positions whose normalizer
/// is below 1e-8 (and positions beyond the frames' coverage) are 0.
/// Throws std::invalid_argument on magnitude/phase shape mismatch.
Waveform istft(const MagnitudeSpectrogram& mag, const PhaseSpectrogram& phase,
               const StftConfig& cfg, std::size_t out_len);

}  // namespace mcdenoise
