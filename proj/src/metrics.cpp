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

#include "mcdenoise/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcdenoise {
namespace {

void check_shapes(const MagnitudeSpectrogram& a, const MagnitudeSpectrogram& b) {
  if (a.frame_count() != b.frame_count()) {
    throw std::invalid_argument("metrics: frame count mismatch (" +
                                std::to_string(a.frame_count()) + " vs " +
                                std::to_string(b.frame_count()) + ")");
  }
  for (std::size_t f = 0; f < a.frame_count(); ++f) {
    if (a.frames[f].size() != b.frames[f].size()) {
      throw std::invalid_argument("metrics: bin count mismatch at frame " +
                                  std::to_string(f));
    }
  }
}

}  // namespace

std::vector<double> per_frame_squared_error(const MagnitudeSpectrogram& estimate,
                                            const MagnitudeSpectrogram& reference) {
  check_shapes(estimate, reference);
  std::vector<double> out(estimate.frame_count(), 0.0);
  for (std::size_t f = 0; f < estimate.frame_count(); ++f) {
    const auto& ef = estimate.frames[f];
    const auto& rf = reference.frames[f];
    double acc = 0.0;
    for (std::size_t k = 0; k < ef.size(); ++k) {
      const double d = static_cast<double>(ef[k]) - static_cast<double>(rf[k]);
      acc += d * d;
    }
    out[f] = acc;
  }
  return out;
}

double sse(const MagnitudeSpectrogram& estimate, const MagnitudeSpectrogram& reference) {
  double total = 0.0;
  for (double v : per_frame_squared_error(estimate, reference)) total += v;
  return total;
}

double ssnr(const Waveform& clean, const Waveform& estimate, const SsnrConfig& cfg) {
  if (clean.samples.empty() || estimate.samples.empty()) {
    throw std::invalid_argument("ssnr: empty input");
  }
  if (clean.size() != estimate.size()) {
    throw std::invalid_argument("ssnr: length mismatch (" + std::to_string(clean.size()) +
                                " vs " + std::to_string(estimate.size()) + ")");
  }
  if (clean.size() < cfg.frame_len) {
    throw std::invalid_argument("ssnr: input shorter than one frame");
  }

  const std::size_t n_frames = (clean.size() - cfg.frame_len) / cfg.hop + 1;
  std::vector<double> energy(n_frames, 0.0);
  std::vector<double> error(n_frames, 0.0);
  double max_energy = 0.0;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t start = f * cfg.hop;
    double e = 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < cfg.frame_len; ++i) {
      const double s = clean.samples[start + i];
      const double diff = s - estimate.samples[start + i];
      e += s * s;
      d += diff * diff;
    }
    energy[f] = e;
    error[f] = d;
    max_energy = std::max(max_energy, e);
  }

  const double gate = max_energy * std::pow(10.0, -cfg.silence_gate_db / 10.0);
  double acc = 0.0;
  std::size_t voiced = 0;
  for (std::size_t f = 0; f < n_frames; ++f) {
    if (!(energy[f] > gate)) continue;
    double snr_db;
    if (error[f] <= 0.0) {
      snr_db = cfg.max_db;
    } else {
      snr_db = 10.0 * std::log10(energy[f] / error[f]);
      snr_db = std::clamp(snr_db, cfg.min_db, cfg.max_db);
    }
    acc += snr_db;
    ++voiced;
  }
  if (voiced == 0) {
    throw std::invalid_argument("ssnr: no frames above the silence gate");
  }
  return acc / static_cast<double>(voiced);
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: series length mismatch");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("pearson: need at least 2 points");
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*xmin == *xmax || *ymin == *ymax) {
    return {0.0, false};  // constant series: correlation undefined
  }

  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return {0.0, false};
  return {sxy / std::sqrt(sxx * syy), true};
}

void write_report(std::ostream& out, const EvalReport& report) {
  out.precision(17);
  out << "sse " << report.sse << "\n";
  out << "ssnr_db " << report.ssnr_db << "\n";
  out << "n_frames " << report.n_frames << "\n";
  if (report.pearson_r.defined) {
    out << "pearson_r " << report.pearson_r.r << "\n";
  } else {
    out << "pearson_r undefined\n";
  }
}

void write_per_frame_csv(std::ostream& out,
                         std::span<const std::pair<double, double>> per_frame) {
  out << "frame_idx,squared_error,var_trace\n";
  out.precision(17);
  for (std::size_t f = 0; f < per_frame.size(); ++f) {
    out << f << ',' << per_frame[f].first << ',' << per_frame[f].second << "\n";
  }
}

}  // namespace mcdenoise
