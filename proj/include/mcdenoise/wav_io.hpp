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
#include <string>

#include "mcdenoise/stft.hpp"

namespace mcdenoise {

enum class WavFormat { pcm16, float32 };

struct WavInfo {
  WavFormat format = WavFormat::pcm16;
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::size_t n_samples = 0;
};

/// Parses the header only. Throws std::runtime_error on malformed files or
/// unsupported encodings (anything but mono PCM16 / mono IEEE float32).
WavInfo wav_info(const std::string& path);

/// Reads a mono PCM16 or float32 WAV into full-scale [-1, 1] doubles.
Waveform read_wav(const std::string& path);

/// Writes a mono WAV. Samples outside [-1, 1] are clamped; the number of
/// clamped samples is returned so callers can warn.
std::size_t write_wav(const std::string& path, const Waveform& w,
                      WavFormat format = WavFormat::float32);

}  // namespace mcdenoise
