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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mcdenoise/stft.hpp"
#include "support/test_signals.hpp"

using namespace mcdenoise;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent O(n^2) DFT oracle over one windowed frame.
std::vector<std::complex<double>> naive_dft(const std::vector<double>& x, std::size_t n) {
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(i) /
                         static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

double reconstruction_snr_db(const Waveform& original, const Waveform& rebuilt,
                             std::size_t skip) {
  double sig = 0.0;
  double err = 0.0;
  for (std::size_t i = skip; i + skip < original.size(); ++i) {
    const double s = original.samples[i];
    const double d = s - rebuilt.samples[i];
    sig += s * s;
    err += d * d;
  }
  if (err == 0.0) return 1e9;
  return 10.0 * std::log10(sig / err);
}

}  // namespace

TEST_CASE("frame count formula") {
  StftConfig cfg;
  Waveform w = testsig::uniform_noise(16000, 1);
  const auto [mag, phase] = stft(w, cfg);
  CHECK(mag.frame_count() == 97);  // floor((16000 - 512)/160) + 1
  CHECK(phase.frame_count() == 97);
  CHECK(mag.frames[0].size() == 257);

  CHECK(cfg.frame_count(512) == 1);
  CHECK(cfg.frame_count(511) == 0);
  CHECK(cfg.frame_count(512 + 160) == 2);
  CHECK(cfg.frame_count(512 + 159) == 1);
}

TEST_CASE("input shorter than one frame is rejected") {
  StftConfig cfg;
  Waveform w = testsig::uniform_noise(511, 2);
  CHECK_THROWS_WITH_AS(stft(w, cfg), doctest::Contains("input too short"),
                       std::invalid_argument);
}

TEST_CASE("constant signal concentrates in the window's own spectrum") {
  StftConfig cfg;
  const double c = 0.25;
  Waveform w;
  w.samples.assign(2048, c);
  const auto [mag, phase] = stft(w, cfg);
  (void)phase;

  const std::vector<double> win = hamming_window(cfg.frame_len);
  double win_sum = 0.0;
  for (double v : win) win_sum += v;

  for (const auto& frame : mag.frames) {
    CHECK(frame[0] == doctest::Approx(c * win_sum).epsilon(1e-6));
    // The periodic Hamming window is 0.54 - 0.46 cos(2 pi n / N), so the DC
    // input also lands a component of 0.23*N*c in bin 1; every other
    // retained bin is numerically zero.
    CHECK(frame[1] == doctest::Approx(0.23 * static_cast<double>(cfg.fft_size) * c)
                          .epsilon(1e-6));
    for (std::size_t k = 2; k < frame.size(); ++k) {
      CHECK(std::abs(frame[k]) < 1e-6 * frame[0]);
    }
  }
}

TEST_CASE("random signal matches the direct-DFT oracle") {
  StftConfig cfg;
  Waveform w = testsig::uniform_noise(1200, 3);
  const auto [mag, phase] = stft(w, cfg);
  (void)phase;
  const std::vector<double> win = hamming_window(cfg.frame_len);

  for (std::size_t f = 0; f < mag.frame_count(); ++f) {
    std::vector<double> frame(cfg.fft_size, 0.0);
    for (std::size_t i = 0; i < cfg.frame_len; ++i) {
      frame[i] = w.samples[f * cfg.hop + i] * win[i];
    }
    const auto oracle = naive_dft(frame, cfg.fft_size);
    double max_mag = 0.0;
    for (std::size_t k = 0; k < cfg.n_bins; ++k) {
      max_mag = std::max(max_mag, std::abs(oracle[k]));
    }
    for (std::size_t k = 0; k < cfg.n_bins; ++k) {
      CHECK(std::abs(static_cast<double>(mag.frames[f][k]) - std::abs(oracle[k])) <=
            1e-6 * max_mag);
    }
  }
}

TEST_CASE("round trip reaches at least 60 dB on the interior") {
  StftConfig cfg;
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    Waveform w = testsig::uniform_noise(4 * cfg.frame_len + 37, seed);
    w.sample_rate = cfg.sample_rate;
    const auto [mag, phase] = stft(w, cfg);
    const Waveform rebuilt = istft(mag, phase, cfg, w.size());
    CHECK(reconstruction_snr_db(w, rebuilt, cfg.frame_len) >= 60.0);
  }
}

TEST_CASE("stft ignores tail samples shorter than one hop") {
  StftConfig cfg;
  // Exactly 7 frames with no leftover tail; the next frame would need a
  // full extra hop.
  Waveform w = testsig::uniform_noise(6 * cfg.hop + cfg.frame_len, 20);
  const auto [mag0, phase0] = stft(w, cfg);
  (void)phase0;
  for (std::size_t extra : {std::size_t(1), cfg.hop - 1}) {
    Waveform longer = w;
    for (std::size_t i = 0; i < extra; ++i) longer.samples.push_back(0.123);
    const auto [mag1, phase1] = stft(longer, cfg);
    (void)phase1;
    REQUIRE(mag1.frame_count() == mag0.frame_count());
    for (std::size_t f = 0; f < mag0.frame_count(); ++f) {
      CHECK(mag1.frames[f] == mag0.frames[f]);
    }
  }
}

TEST_CASE("Parseval identity on windowed frames") {
  StftConfig cfg;
  Waveform w = testsig::uniform_noise(900, 21);
  const auto [mag, phase] = stft(w, cfg);
  (void)phase;
  const std::vector<double> win = hamming_window(cfg.frame_len);

  for (std::size_t f = 0; f < mag.frame_count(); ++f) {
    double time_energy = 0.0;
    for (std::size_t i = 0; i < cfg.frame_len; ++i) {
      const double v = w.samples[f * cfg.hop + i] * win[i];
      time_energy += v * v;
    }
    // Mirror the retained half back to the full spectrum.
    const auto& m = mag.frames[f];
    double freq_energy = static_cast<double>(m[0]) * m[0] +
                         static_cast<double>(m[cfg.n_bins - 1]) * m[cfg.n_bins - 1];
    for (std::size_t k = 1; k + 1 < cfg.n_bins; ++k) {
      freq_energy += 2.0 * static_cast<double>(m[k]) * m[k];
    }
    CHECK(freq_energy == doctest::Approx(static_cast<double>(cfg.fft_size) * time_energy)
                             .epsilon(1e-6));
  }
}

TEST_CASE("istft of zero magnitudes is the zero waveform") {
  StftConfig cfg;
  MagnitudeSpectrogram mag;
  PhaseSpectrogram phase;
  mag.n_bins = phase.n_bins = cfg.n_bins;
  mag.frames.assign(5, std::vector<float>(cfg.n_bins, 0.0f));
  phase.frames.assign(5, std::vector<float>(cfg.n_bins, 0.5f));
  const Waveform out = istft(mag, phase, cfg, 4 * cfg.hop + cfg.frame_len);
  for (double s : out.samples) CHECK(s == 0.0);
}

TEST_CASE("single frame with hop == frame_len restores the frame") {
  StftConfig cfg;
  cfg.hop = cfg.frame_len;
  Waveform w = testsig::uniform_noise(cfg.frame_len, 22);
  w.sample_rate = cfg.sample_rate;
  const auto [mag, phase] = stft(w, cfg);
  REQUIRE(mag.frame_count() == 1);
  const Waveform rebuilt = istft(mag, phase, cfg, cfg.frame_len);
  // Weighted OLA divides the windowed frame by the squared window, so the
  // original samples come back wherever the normalizer clears the floor
  // (the periodic Hamming window never gets near it).
  for (std::size_t i = 0; i < cfg.frame_len; ++i) {
    CHECK(rebuilt.samples[i] == doctest::Approx(w.samples[i]).epsilon(1e-5));
  }
}

TEST_CASE("istft rejects mismatched magnitude/phase shapes") {
  StftConfig cfg;
  Waveform w = testsig::uniform_noise(2000, 23);
  auto [mag, phase] = stft(w, cfg);
  phase.frames.pop_back();
  CHECK_THROWS_WITH_AS(istft(mag, phase, cfg, w.size()),
                       doctest::Contains("frame count mismatch"), std::invalid_argument);
}

TEST_CASE("config invariants are enforced") {
  StftConfig cfg;
  cfg.n_bins = 256;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = StftConfig{};
  cfg.hop = cfg.frame_len + 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = StftConfig{};
  cfg.frame_len = cfg.fft_size + 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = StftConfig{};
  cfg.fft_size = 500;
  cfg.n_bins = 251;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
