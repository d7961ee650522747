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
#include <sstream>
#include <vector>

#include "mcdenoise/metrics.hpp"
#include "mcdenoise/rng.hpp"
#include "support/test_signals.hpp"

using namespace mcdenoise;

namespace {

MagnitudeSpectrogram make_spec(std::size_t frames, std::size_t bins, float value) {
  MagnitudeSpectrogram s;
  s.n_bins = bins;
  s.frames.assign(frames, std::vector<float>(bins, value));
  return s;
}

}  // namespace

TEST_CASE("sse basics") {
  const MagnitudeSpectrogram a = make_spec(4, 257, 1.0f);
  CHECK(sse(a, a) == 0.0);

  MagnitudeSpectrogram b = make_spec(1, 257, 1.0f);
  MagnitudeSpectrogram c = make_spec(1, 257, 2.0f);
  CHECK(sse(c, b) == doctest::Approx(257.0).epsilon(1e-12));

  const std::vector<double> pf = per_frame_squared_error(c, b);
  REQUIRE(pf.size() == 1);
  CHECK(pf[0] == doctest::Approx(257.0).epsilon(1e-12));

  MagnitudeSpectrogram d = make_spec(2, 257, 1.0f);
  CHECK_THROWS_AS(sse(a, d), std::invalid_argument);
}

TEST_CASE("sse is positive unless spectrograms are equal") {
  Rng rng(5);
  MagnitudeSpectrogram a = make_spec(3, 9, 0.0f);
  MagnitudeSpectrogram b = make_spec(3, 9, 0.0f);
  for (auto& f : a.frames) {
    for (auto& v : f) v = static_cast<float>(rng.next_double());
  }
  b.frames = a.frames;
  CHECK(sse(a, b) == 0.0);
  b.frames[1][4] += 0.5f;
  CHECK(sse(a, b) > 0.0);
}

TEST_CASE("ssnr clamps, gates and scales") {
  const Waveform clean = testsig::speech_like(16000, 1);

  SUBCASE("perfect estimate clamps every frame to the ceiling") {
    CHECK(ssnr(clean, clean) == doctest::Approx(35.0));
  }

  SUBCASE("zero estimate gives 0 dB on every voiced frame") {
    Waveform zero = clean;
    for (double& s : zero.samples) s = 0.0;
    CHECK(ssnr(clean, zero) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("scaling clean and estimate together changes nothing") {
    Waveform estimate = testsig::speech_like(16000, 2);
    const double a = ssnr(clean, estimate);
    Waveform clean_scaled = clean;
    Waveform estimate_scaled = estimate;
    for (double& s : clean_scaled.samples) s *= 7.5;
    for (double& s : estimate_scaled.samples) s *= 7.5;
    CHECK(ssnr(clean_scaled, estimate_scaled) == doctest::Approx(a).epsilon(1e-12));
  }

  SUBCASE("silent frames are excluded by the -40 dB gate") {
    // Loud burst then near-silence. With the estimate wrong only in the
    // silent region, the gated average must stay at the ceiling.
    Waveform ref;
    ref.samples.assign(2048, 0.0);
    for (std::size_t i = 0; i < 512; ++i) ref.samples[i] = 0.5;
    for (std::size_t i = 512; i < 2048; ++i) ref.samples[i] = 1e-6;
    Waveform est = ref;
    for (std::size_t i = 1024; i < 2048; ++i) est.samples[i] = -1e-6;
    const SsnrConfig cfg{.frame_len = 512, .hop = 512};
    CHECK(ssnr(ref, est, cfg) == doctest::Approx(35.0));
  }

  SUBCASE("errors") {
    Waveform empty;
    CHECK_THROWS_AS(ssnr(empty, empty), std::invalid_argument);
    Waveform shorter = clean;
    shorter.samples.pop_back();
    CHECK_THROWS_AS(ssnr(clean, shorter), std::invalid_argument);
  }
}

TEST_CASE("pearson closed forms, oracle and invariances") {
  SUBCASE("y == x gives r = 1") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    CHECK(pearson(x, x).defined);
    CHECK(pearson(x, x).r == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("y = -x + c gives r = -1") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(-v + 10.0);
    CHECK(pearson(x, y).r == doctest::Approx(-1.0).epsilon(1e-12));
  }

  SUBCASE("random pairs match the textbook oracle") {
    Rng rng(9);
    std::vector<double> x(200), y(200);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.next_gaussian();
      y[i] = 0.4 * x[i] + rng.next_gaussian();
    }
    // Oracle via the raw-moment identity in long double.
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const long double n = static_cast<long double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += static_cast<long double>(x[i]) * x[i];
      syy += static_cast<long double>(y[i]) * y[i];
      sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double want =
        (n * sxy - sx * sy) / (std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy));
    const PearsonResult got = pearson(x, y);
    REQUIRE(got.defined);
    CHECK(got.r == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
  }

  SUBCASE("constant series are undefined, not NaN") {
    std::vector<double> x = {2, 2, 2, 2};
    std::vector<double> y = {1, 2, 3, 4};
    CHECK_FALSE(pearson(x, y).defined);
    CHECK_FALSE(pearson(y, x).defined);
    CHECK(pearson(x, y).r == 0.0);
  }

  SUBCASE("positive affine transforms leave r unchanged") {
    Rng rng(10);
    std::vector<double> x(64), y(64), xt(64);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.next_double();
      y[i] = rng.next_double();
      xt[i] = 2.5 * x[i] + 7.0;
    }
    CHECK(pearson(xt, y).r == doctest::Approx(pearson(x, y).r).epsilon(1e-12));
  }

  SUBCASE("fewer than two points is an error") {
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(pearson(one, one), std::invalid_argument);
  }
}

TEST_CASE("report and per-frame csv writers") {
  EvalReport report;
  report.sse = 12.5;
  report.ssnr_db = 3.25;
  report.n_frames = 2;
  report.per_frame = {{1.0, 0.5}, {2.0, 0.25}};
  report.pearson_r = {-1.0, true};

  std::ostringstream rep;
  write_report(rep, report);
  CHECK(rep.str() == "sse 12.5\nssnr_db 3.25\nn_frames 2\npearson_r -1\n");

  report.pearson_r = {0.0, false};
  std::ostringstream rep2;
  write_report(rep2, report);
  CHECK(rep2.str().find("pearson_r undefined") != std::string::npos);

  std::ostringstream csv;
  write_per_frame_csv(csv, report.per_frame);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "frame_idx,squared_error,var_trace");
  std::getline(in, line);
  CHECK(line == "0,1,0.5");
  std::getline(in, line);
  CHECK(line == "1,2,0.25");
}
