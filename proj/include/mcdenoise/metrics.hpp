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
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "mcdenoise/stft.hpp"

namespace mcdenoise {

/// Sum over frames and bins of squared magnitude differences.
/// Throws on shape mismatch.
double sse(const MagnitudeSpectrogram& estimate, const MagnitudeSpectrogram& reference);

/// Per-frame sum over bins of squared magnitude differences; sse() is the
/// total of this sequence.
std::vector<double> per_frame_squared_error(const MagnitudeSpectrogram& estimate,
                                            const MagnitudeSpectrogram& reference);

/// Frame-level SSNR parameters; the clamp range and the silence gate are the
/// conventional choices and stay configurable.
struct SsnrConfig {
  std::size_t frame_len = 512;
  std::size_t hop = 160;
  double min_db = -10.0;
  double max_db = 35.0;
  double silence_gate_db = 40.0;  // frames below (max frame energy - this) are skipped
};

/// Segmental SNR: per frame 10*log10(sum s^2 / sum (s - s_hat)^2), clamped to
/// [min_db, max_db], averaged over frames whose clean energy exceeds the
/// silence gate. Throws on empty input, length mismatch, or when no frame
/// passes the gate.
double ssnr(const Waveform& clean, const Waveform& estimate,
            const SsnrConfig& cfg = SsnrConfig{});

struct PearsonResult {
  double r = 0.0;
  bool defined = false;
};

/// Pearson correlation coefficient; undefined (flagged, not NaN) when either
/// series is constant. Requires at least two points.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

/// Evaluation summary: totals plus the per-frame (squared_error, var_trace)
/// pairs used for the uncertainty/error correlation study.
struct EvalReport {
  double sse = 0.0;
  double ssnr_db = 0.0;
  std::size_t n_frames = 0;
  std::vector<std::pair<double, double>> per_frame;  // (squared_error, var_trace)
  PearsonResult pearson_r;
};

/// Labeled-field text form of the report.
void write_report(std::ostream& out, const EvalReport& report);

/// CSV: header then one `frame_idx,squared_error,var_trace` row per frame.
void write_per_frame_csv(std::ostream& out,
                         std::span<const std::pair<double, double>> per_frame);

}  // namespace mcdenoise
