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

#include "mcdenoise/wav_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mcdenoise {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little,
              "wav_io assumes a little-endian host");

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("wav: " + path + ": " + what);
}

struct ChunkHeader {
  char id[4];
  std::uint32_t size;
};

bool read_chunk_header(std::ifstream& in, ChunkHeader& h) {
  in.read(h.id, 4);
  if (!in) return false;
  in.read(reinterpret_cast<char*>(&h.size), 4);
  return static_cast<bool>(in);
}

struct FmtChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

// Walks the RIFF chunks, fills fmt and positions the stream at the start of
// the data payload. Returns the data chunk size in bytes.
std::uint32_t parse_header(std::ifstream& in, const std::string& path, FmtChunk& fmt) {
  char riff[4];
  std::uint32_t riff_size = 0;
  char wave[4];
  in.read(riff, 4);
  in.read(reinterpret_cast<char*>(&riff_size), 4);
  in.read(wave, 4);
  if (!in || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0) {
    fail(path, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  ChunkHeader h;
  while (read_chunk_header(in, h)) {
    if (std::memcmp(h.id, "fmt ", 4) == 0) {
      if (h.size < 16) fail(path, "fmt chunk too small");
      std::vector<char> raw(h.size);
      in.read(raw.data(), static_cast<std::streamsize>(h.size));
      if (!in) fail(path, "truncated fmt chunk");
      std::memcpy(&fmt.format_tag, raw.data() + 0, 2);
      std::memcpy(&fmt.channels, raw.data() + 2, 2);
      std::memcpy(&fmt.sample_rate, raw.data() + 4, 4);
      std::memcpy(&fmt.bits_per_sample, raw.data() + 14, 2);
      if (fmt.format_tag == kFormatExtensible && h.size >= 40) {
        // First two bytes of the sub-format GUID carry the real tag.
        std::memcpy(&fmt.format_tag, raw.data() + 24, 2);
      }
      if (h.size % 2 == 1) in.seekg(1, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(h.id, "data", 4) == 0) {
      if (!have_fmt) fail(path, "data chunk before fmt chunk");
      return h.size;
    } else {
      in.seekg(h.size + (h.size % 2), std::ios::cur);
      if (!in) fail(path, "truncated chunk list");
    }
  }
  fail(path, "no data chunk found");
}

void check_supported(const std::string& path, const FmtChunk& fmt) {
  if (fmt.channels != 1) {
    fail(path, "unsupported channel count " + std::to_string(fmt.channels) +
                   " (only mono is supported)");
  }
  const bool pcm16 = fmt.format_tag == kFormatPcm && fmt.bits_per_sample == 16;
  const bool f32 = fmt.format_tag == kFormatIeeeFloat && fmt.bits_per_sample == 32;
  if (!pcm16 && !f32) {
    fail(path, "unsupported encoding (format tag " + std::to_string(fmt.format_tag) +
                   ", " + std::to_string(fmt.bits_per_sample) +
                   " bits; only PCM16 and float32 are supported)");
  }
}

void write_u16(std::ofstream& out, std::uint16_t v) {
  out.write(reinterpret_cast<const char*>(&v), 2);
}
void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

}  // namespace

WavInfo wav_info(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  FmtChunk fmt;
  const std::uint32_t data_size = parse_header(in, path, fmt);
  check_supported(path, fmt);
  WavInfo info;
  info.format = fmt.format_tag == kFormatPcm ? WavFormat::pcm16 : WavFormat::float32;
  info.sample_rate = fmt.sample_rate;
  info.channels = fmt.channels;
  info.n_samples = data_size / (fmt.bits_per_sample / 8);
  return info;
}

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  FmtChunk fmt;
  const std::uint32_t data_size = parse_header(in, path, fmt);
  check_supported(path, fmt);

  Waveform w;
  w.sample_rate = fmt.sample_rate;
  if (fmt.format_tag == kFormatPcm) {
    const std::size_t n = data_size / 2;
    std::vector<std::int16_t> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * 2));
    if (!in) fail(path, "truncated sample data");
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.samples[i] = raw[i] / 32768.0;
  } else {
    const std::size_t n = data_size / 4;
    std::vector<float> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * 4));
    if (!in) fail(path, "truncated sample data");
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(raw[i])) fail(path, "non-finite sample value");
      w.samples[i] = static_cast<double>(raw[i]);
    }
  }
  return w;
}

std::size_t write_wav(const std::string& path, const Waveform& w, WavFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open file for writing");

  const std::uint16_t bits = format == WavFormat::pcm16 ? 16 : 32;
  const std::uint16_t bytes_per_sample = bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(w.size() * bytes_per_sample);

  out.write("RIFF", 4);
  write_u32(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, format == WavFormat::pcm16 ? kFormatPcm : kFormatIeeeFloat);
  write_u16(out, 1);  // mono
  write_u32(out, w.sample_rate);
  write_u32(out, w.sample_rate * bytes_per_sample);
  write_u16(out, bytes_per_sample);
  write_u16(out, bits);
  out.write("data", 4);
  write_u32(out, data_size);

  std::size_t clamped = 0;
  if (format == WavFormat::pcm16) {
    std::vector<std::int16_t> raw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      double v = w.samples[i];
      if (v > 1.0 || v < -1.0) {
        v = std::clamp(v, -1.0, 1.0);
        ++clamped;
      }
      raw[i] = static_cast<std::int16_t>(std::lrint(std::clamp(v * 32767.0, -32768.0, 32767.0)));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * 2));
  } else {
    std::vector<float> raw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      double v = w.samples[i];
      if (v > 1.0 || v < -1.0) {
        v = std::clamp(v, -1.0, 1.0);
        ++clamped;
      }
      raw[i] = static_cast<float>(v);
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * 4));
  }
  if (!out) fail(path, "write failed");
  return clamped;
}

}  // namespace mcdenoise
