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
#include <vector>

#include "mcdenoise/stft.hpp"

namespace mcdenoise {

/// One (clean, noise, SNR) synthesis job.
struct MixJob {
  std::string clean_path;
  std::string noise_path;
  double snr_db = 0.0;
};

struct ManifestEntry {
  std::string clean_path;
  std::string noise_path;
  std::vector<double> snrs_db;
};

/// Line-oriented dataset description: `<clean.wav>\t<noise.wav>\t<snr,snr,...>`
/// per entry, `#` comments, optional `@split train|test` directive.
struct DatasetManifest {
  std::string split = "train";
  std::vector<ManifestEntry> entries;

  /// Expands entries into the cartesian (entry x snr) job list.
  std::vector<MixJob> jobs() const;
};

struct MixResult {
  Waveform noisy;
  double gain = 0.0;         // scale applied to the noise segment
  double achieved_snr_db = 0.0;
  std::size_t offset = 0;    // noise segment start actually used
};

/// Mean square power over all samples.
double mean_square_power(const Waveform& w);

/// Adds a noise segment (starting at `offset`, wrapping around when the
/// noise runs out) to the speech, scaled so that
/// 10*log10(P_speech / P_scaled_noise) == snr_db, with powers taken as mean
/// squares over the full overlapping extent. Throws std::invalid_argument on
/// empty inputs, zero-power speech or noise ("degenerate power"), non-finite
/// snr, or sample-rate mismatch.
MixResult mix_at_snr(const Waveform& speech, const Waveform& noise, double snr_db,
                     std::size_t offset);

/// Picks the seeded noise offset for a job: uniform over the placements that
/// avoid wrap-around when the noise is longer than the speech, 0 otherwise.
std::size_t pick_noise_offset(std::size_t noise_len, std::size_t speech_len,
                              std::uint64_t seed);

/// Parses and validates a manifest. Every referenced file must exist, be a
/// supported WAV, and have the given sample rate (no resampling is done).
/// Parse errors carry the line number; missing files are reported by path.
DatasetManifest load_manifest(const std::string& path,
                              std::uint32_t required_sample_rate = 16000);

}  // namespace mcdenoise
