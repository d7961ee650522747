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

#include "mcdenoise/mixer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mcdenoise/rng.hpp"
#include "mcdenoise/wav_io.hpp"

namespace mcdenoise {
namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error("manifest: " + path + ":" + std::to_string(line_no) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<MixJob> DatasetManifest::jobs() const {
  std::vector<MixJob> out;
  for (const auto& e : entries) {
    for (double snr : e.snrs_db) {
      out.push_back({e.clean_path, e.noise_path, snr});
    }
  }
  return out;
}

double mean_square_power(const Waveform& w) {
  if (w.samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : w.samples) acc += s * s;
  return acc / static_cast<double>(w.samples.size());
}

MixResult mix_at_snr(const Waveform& speech, const Waveform& noise, double snr_db,
                     std::size_t offset) {
  if (speech.samples.empty() || noise.samples.empty()) {
    throw std::invalid_argument("mix: empty speech or noise signal");
  }
  if (speech.sample_rate != noise.sample_rate) {
    throw std::invalid_argument("mix: sample rate mismatch (" +
                                std::to_string(speech.sample_rate) + " vs " +
                                std::to_string(noise.sample_rate) + ")");
  }
  if (!std::isfinite(snr_db)) {
    throw std::invalid_argument("mix: snr_db must be finite");
  }

  const std::size_t n = speech.size();
  const std::size_t noise_len = noise.size();

  // Segment extraction with wrap-around tiling.
  std::vector<double> segment(n);
  for (std::size_t i = 0; i < n; ++i) {
    segment[i] = noise.samples[(offset + i) % noise_len];
  }

  double p_speech = 0.0;
  double p_noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p_speech += speech.samples[i] * speech.samples[i];
    p_noise += segment[i] * segment[i];
  }
  p_speech /= static_cast<double>(n);
  p_noise /= static_cast<double>(n);
  if (p_speech <= 0.0 || p_noise <= 0.0) {
    throw std::invalid_argument("mix: degenerate power (speech or noise segment is silent)");
  }

  const double gain = std::sqrt(p_speech / (p_noise * std::pow(10.0, snr_db / 10.0)));

  MixResult r;
  r.gain = gain;
  r.offset = offset;
  r.achieved_snr_db = 10.0 * std::log10(p_speech / (gain * gain * p_noise));
  r.noisy.sample_rate = speech.sample_rate;
  r.noisy.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.noisy.samples[i] = speech.samples[i] + gain * segment[i];
  }
  return r;
}

std::size_t pick_noise_offset(std::size_t noise_len, std::size_t speech_len,
                              std::uint64_t seed) {
  if (noise_len <= speech_len) return 0;
  Rng rng(derive_seed(seed, 0x6f66667365ULL));  // "offse"
  return static_cast<std::size_t>(rng.next_below(noise_len - speech_len + 1));
}

DatasetManifest load_manifest(const std::string& path, std::uint32_t required_sample_rate) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("manifest: cannot open " + path);
  }
  DatasetManifest m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (text[0] == '@') {
      std::istringstream ss(text);
      std::string directive, value;
      ss >> directive >> value;
      if (directive == "@split" && (value == "train" || value == "test")) {
        m.split = value;
      } else {
        parse_fail(path, line_no, "unknown directive '" + text + "'");
      }
      continue;
    }

    // <clean>\t<noise>\t<snr,snr,...>
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = text.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(trim(text.substr(start)));
        break;
      }
      fields.push_back(trim(text.substr(start, tab - start)));
      start = tab + 1;
    }
    if (fields.size() != 3) {
      parse_fail(path, line_no, "expected 3 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }

    ManifestEntry entry;
    entry.clean_path = fields[0];
    entry.noise_path = fields[1];
    std::istringstream snrs(fields[2]);
    std::string tok;
    while (std::getline(snrs, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        entry.snrs_db.push_back(v);
      } catch (const std::exception&) {
        parse_fail(path, line_no, "bad SNR value '" + tok + "'");
      }
    }
    if (entry.snrs_db.empty()) {
      parse_fail(path, line_no, "no SNR values");
    }

    for (const std::string& p : {entry.clean_path, entry.noise_path}) {
      if (!std::filesystem::exists(p)) {
        parse_fail(path, line_no, "referenced file does not exist: " + p);
      }
      const WavInfo info = wav_info(p);
      if (required_sample_rate != 0 && info.sample_rate != required_sample_rate) {
        parse_fail(path, line_no,
                   p + " has sample rate " + std::to_string(info.sample_rate) +
                       ", require " + std::to_string(required_sample_rate) +
                       " (resampling is not performed)");
      }
    }
    m.entries.push_back(std::move(entry));
  }
  return m;
}

}  // namespace mcdenoise
