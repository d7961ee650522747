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

#include "mcdenoise/stft.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace mcdenoise {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kOlaNormalizerFloor = 1e-8;

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT. sign = -1 forward, +1 inverse (inverse is
// unscaled; callers divide by n).
void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

void StftConfig::validate() const {
  if (frame_len == 0 || hop == 0 || fft_size == 0) {
    throw std::invalid_argument("stft config: frame_len, hop and fft_size must be positive");
  }
  if (n_bins != fft_size / 2 + 1) {
    throw std::invalid_argument("stft config: n_bins must equal fft_size/2 + 1");
  }
  if (hop > frame_len) {
    throw std::invalid_argument("stft config: hop must not exceed frame_len");
  }
  if (frame_len > fft_size) {
    throw std::invalid_argument("stft config: frame_len must not exceed fft_size");
  }
  if (!is_power_of_two(fft_size)) {
    throw std::invalid_argument("stft config: fft_size must be a power of two");
  }
}

std::size_t StftConfig::frame_count(std::size_t len) const {
  if (len < frame_len) return 0;
  return (len - frame_len) / hop + 1;
}

std::vector<double> hamming_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

std::pair<MagnitudeSpectrogram, PhaseSpectrogram> stft(const Waveform& w,
                                                       const StftConfig& cfg) {
  cfg.validate();
  if (w.size() < cfg.frame_len) {
    throw std::invalid_argument("stft: input too short (" + std::to_string(w.size()) +
                                " samples, need " + std::to_string(cfg.frame_len) + ")");
  }
  const std::size_t n_frames = cfg.frame_count(w.size());
  const std::vector<double> window = hamming_window(cfg.frame_len);

  MagnitudeSpectrogram mag;
  PhaseSpectrogram phase;
  mag.n_bins = cfg.n_bins;
  phase.n_bins = cfg.n_bins;
  mag.frames.resize(n_frames);
  phase.frames.resize(n_frames);

  std::vector<std::complex<double>> buf(cfg.fft_size);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t start = f * cfg.hop;
    for (std::size_t i = 0; i < cfg.frame_len; ++i) {
      buf[i] = std::complex<double>(w.samples[start + i] * window[i], 0.0);
    }
    for (std::size_t i = cfg.frame_len; i < cfg.fft_size; ++i) buf[i] = {0.0, 0.0};
    fft_radix2(buf, -1);

    auto& mf = mag.frames[f];
    auto& pf = phase.frames[f];
    mf.resize(cfg.n_bins);
    pf.resize(cfg.n_bins);
    for (std::size_t k = 0; k < cfg.n_bins; ++k) {
      mf[k] = static_cast<float>(std::abs(buf[k]));
      pf[k] = static_cast<float>(std::atan2(buf[k].imag(), buf[k].real()));
    }
  }
  return {std::move(mag), std::move(phase)};
}

Waveform istft(const MagnitudeSpectrogram& mag, const PhaseSpectrogram& phase,
               const StftConfig& cfg, std::size_t out_len) {
  cfg.validate();
  if (mag.frame_count() != phase.frame_count()) {
    throw std::invalid_argument("istft: magnitude/phase frame count mismatch (" +
                                std::to_string(mag.frame_count()) + " vs " +
                                std::to_string(phase.frame_count()) + ")");
  }
  const std::size_t n_frames = mag.frame_count();
  for (std::size_t f = 0; f < n_frames; ++f) {
    if (mag.frames[f].size() != cfg.n_bins || phase.frames[f].size() != cfg.n_bins) {
      throw std::invalid_argument("istft: frame " + std::to_string(f) +
                                  " does not have n_bins values");
    }
  }

  const std::vector<double> window = hamming_window(cfg.frame_len);
  std::vector<double> acc(out_len, 0.0);
  std::vector<double> norm(out_len, 0.0);

  std::vector<std::complex<double>> buf(cfg.fft_size);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const auto& mf = mag.frames[f];
    const auto& pf = phase.frames[f];
    for (std::size_t k = 0; k < cfg.n_bins; ++k) {
      const double m = static_cast<double>(mf[k]);
      const double p = static_cast<double>(pf[k]);
      buf[k] = std::complex<double>(m * std::cos(p), m * std::sin(p));
    }
    // Conjugate symmetry for the upper half of the spectrum.
    for (std::size_t k = cfg.n_bins; k < cfg.fft_size; ++k) {
      buf[k] = std::conj(buf[cfg.fft_size - k]);
    }
    fft_radix2(buf, +1);

    const std::size_t start = f * cfg.hop;
    const double inv_n = 1.0 / static_cast<double>(cfg.fft_size);
    for (std::size_t i = 0; i < cfg.frame_len; ++i) {
      const std::size_t pos = start + i;
      if (pos >= out_len) break;
      const double sample = buf[i].real() * inv_n;
      acc[pos] += window[i] * sample;
      norm[pos] += window[i] * window[i];
    }
  }

  Waveform out;
  out.sample_rate = cfg.sample_rate;
  out.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    out.samples[i] = norm[i] < kOlaNormalizerFloor ? 0.0 : acc[i] / norm[i];
  }
  return out;
}

}  // namespace mcdenoise
